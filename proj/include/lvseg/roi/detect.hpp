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
#ifndef LVSEG_ROI_DETECT_HPP
#define LVSEG_ROI_DETECT_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "lvseg/roi/harmonic.hpp"
#include "lvseg/roi/hough.hpp"
#include "lvseg/roi/kmeans.hpp"

namespace lvseg {

/// Half-open pixel rectangle: rows [row_min, row_max), cols [col_min, col_max).
struct roi_rect {
    int row_min = 0;
    int row_max = 0;
    int col_min = 0;
    int col_max = 0;

    int height() const { return row_max - row_min; }
    int width() const { return col_max - col_min; }

    void validate(int rows, int cols) const {
        require(row_min >= 0 && col_min >= 0 && row_min < row_max && col_min < col_max &&
                    row_max <= rows && col_max <= cols,
                errc::rect_out_of_bounds, "ROI rectangle out of bounds or empty");
    }
};

/// Bounding rectangle of the circles' extents, each side expanded by
/// `expand_frac` of the rectangle's own dimension, clamped to the image.
inline roi_rect roi_rectangle(const std::vector<circle>& circles, double expand_frac,
                              int rows, int cols) {
    require(!circles.empty(), errc::no_circles, "no circles to build an ROI from");

    int rmin = circles[0].row - circles[0].radius;
    int rmax = circles[0].row + circles[0].radius;
    int cmin = circles[0].col - circles[0].radius;
    int cmax = circles[0].col + circles[0].radius;
    for (const circle& c : circles) {
        rmin = std::min(rmin, c.row - c.radius);
        rmax = std::max(rmax, c.row + c.radius);
        cmin = std::min(cmin, c.col - c.radius);
        cmax = std::max(cmax, c.col + c.radius);
    }

    int dr = static_cast<int>(std::lround(expand_frac * (rmax - rmin)));
    int dc = static_cast<int>(std::lround(expand_frac * (cmax - cmin)));
    roi_rect rect;
    rect.row_min = std::max(0, rmin - dr);
    rect.row_max = std::min(rows, rmax + dr);
    rect.col_min = std::max(0, cmin - dc);
    rect.col_max = std::min(cols, cmax + dc);
    rect.validate(rows, cols);
    return rect;
}

/// Zero everything outside the rectangle; dims unchanged.
template <typename T>
image<T> apply_roi(const image<T>& img, const roi_rect& rect) {
    rect.validate(img.rows(), img.cols());
    image<T> out(img.rows(), img.cols(), T{});
    for (int r = rect.row_min; r < rect.row_max; ++r)
        for (int c = rect.col_min; c < rect.col_max; ++c) out(r, c) = img(r, c);
    return out;
}

struct roi_options {
    hough_params hough;
    double expand_frac = 0.10;
};

/// Motion-driven ROI: harmonic sum over slices, k=2 binarization, circle
/// Hough, expanded bounding rectangle. A motionless stack (degenerate
/// harmonic map) or one with no detectable circles has no ROI.
inline roi_rect detect_roi(const std::vector<std::vector<image_d>>& slices,
                           const roi_options& opt = {}) {
    image_d sum = harmonic_sum(slices);
    image<uint8_t> binary;
    try {
        binary = binarize_kmeans2(sum);
    } catch (const error& e) {
        if (e.code() == errc::degenerate_map)
            raise(errc::roi_not_found, "harmonic map is constant (no motion)");
        throw;
    }
    auto circles = hough_circles(binary, opt.hough);
    if (circles.empty()) raise(errc::roi_not_found, "no circles detected");
    return roi_rectangle(circles, opt.expand_frac, sum.rows(), sum.cols());
}

} // namespace lvseg

#endif
