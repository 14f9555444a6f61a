/*
 * lvseg : left-ventricle segmentation and volume estimation toolkit
 *
 * Copyright 2026 lvseg contributors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef LVSEG_POSTPROC_FILTER_HPP
#define LVSEG_POSTPROC_FILTER_HPP

#include <cmath>
#include <vector>

#include "lvseg/postproc/components.hpp"

namespace lvseg {

/// Extra-contour removal, size rule: keep only the component with the most
/// pixels. Ties resolve to the smaller component id (first in raster order).
inline contour_mask keep_largest(const contour_mask& mask, int connectivity = 8) {
    labeled_components lc = components(mask, connectivity);
    if (lc.count() <= 1) return mask;

    int best = 0;
    for (int i = 1; i < lc.count(); ++i)
        if (lc.counts[i] > lc.counts[best]) best = i;

    contour_mask out(mask.rows(), mask.cols(), mask.source);
    for (int r = 0; r < mask.rows(); ++r)
        for (int c = 0; c < mask.cols(); ++c)
            out.data(r, c) = lc.labels(r, c) == best + 1 ? 1 : 0;
    return out;
}

struct lv_center_options {
    double concentration_quantile = 0.9; // keep pixels >= quantile * max of heatmap
};

/// Patient-level LV center: sum all predicted masks into a heatmap, then
/// take the centroid of the pixels near its maximum. Blank predictions
/// everywhere mean there is no signal to locate.
inline std::pair<double, double> lv_center(const std::vector<contour_mask>& pred_masks,
                                           const lv_center_options& opt = {}) {
    require(!pred_masks.empty(), errc::invalid_argument, "need at least one mask");
    const int rows = pred_masks.front().rows(), cols = pred_masks.front().cols();

    image<int> heat(rows, cols, 0);
    for (const auto& m : pred_masks) {
        require(m.rows() == rows && m.cols() == cols, errc::shape_mismatch,
                "masks must share dims");
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c) heat(r, c) += m.data(r, c) ? 1 : 0;
    }

    int max_v = 0;
    for (int v : heat.raw()) max_v = std::max(max_v, v);
    require(max_v > 0, errc::no_signal, "all predictions are blank");

    double cutoff = opt.concentration_quantile * max_v;
    double sum_r = 0, sum_c = 0;
    size_t n = 0;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            if (heat(r, c) >= cutoff) {
                sum_r += r;
                sum_c += c;
                ++n;
            }
    return {sum_r / static_cast<double>(n), sum_c / static_cast<double>(n)};
}

/// Extra-contour removal, center rule: keep the component containing the LV
/// center (rounded half-up to the pixel grid). A center in background blanks
/// the whole mask.
inline contour_mask filter_by_center(const contour_mask& mask,
                                     std::pair<double, double> center,
                                     int connectivity = 8) {
    int cr = static_cast<int>(std::floor(center.first + 0.5));
    int cc = static_cast<int>(std::floor(center.second + 0.5));
    require(cr >= 0 && cr < mask.rows() && cc >= 0 && cc < mask.cols(),
            errc::invalid_argument, "center out of bounds");

    labeled_components lc = components(mask, connectivity);
    int id = lc.labels(cr, cc);
    contour_mask out(mask.rows(), mask.cols(), mask.source);
    if (id == 0) return out; // blank: no contour encompasses the center
    for (int r = 0; r < mask.rows(); ++r)
        for (int c = 0; c < mask.cols(); ++c) out.data(r, c) = lc.labels(r, c) == id ? 1 : 0;
    return out;
}

} // namespace lvseg

#endif
