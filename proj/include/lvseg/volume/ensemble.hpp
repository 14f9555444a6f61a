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
#ifndef LVSEG_VOLUME_ENSEMBLE_HPP
#define LVSEG_VOLUME_ENSEMBLE_HPP

#include <vector>

#include "lvseg/core/error.hpp"
#include "lvseg/core/image.hpp"

namespace lvseg {

/// Majority vote over k binarized predictions: a pixel is set iff strictly
/// more than k/2 models voted for it (a k=2 tie stays background).
inline contour_mask ensemble_majority(const std::vector<contour_mask>& masks) {
    require(!masks.empty(), errc::empty_input, "ensemble needs at least one mask");
    const int rows = masks.front().rows(), cols = masks.front().cols();
    const size_t k = masks.size();

    contour_mask out(rows, cols, contour_mask::origin::predicted);
    for (const auto& m : masks)
        require(m.rows() == rows && m.cols() == cols, errc::shape_mismatch,
                "ensemble masks must share dims");
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            size_t votes = 0;
            for (const auto& m : masks) votes += m.data(r, c) ? 1 : 0;
            out.data(r, c) = 2 * votes > k ? 1 : 0;
        }
    return out;
}

/// Average k probability maps, then binarize at 0.5 (strict).
inline contour_mask ensemble_average(const std::vector<image_d>& probs,
                                     double threshold = 0.5) {
    require(!probs.empty(), errc::empty_input, "ensemble needs at least one map");
    const int rows = probs.front().rows(), cols = probs.front().cols();
    for (const auto& p : probs)
        require(p.rows() == rows && p.cols() == cols, errc::shape_mismatch,
                "ensemble maps must share dims");

    contour_mask out(rows, cols, contour_mask::origin::predicted);
    const double k = static_cast<double>(probs.size());
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            double sum = 0;
            for (const auto& p : probs) sum += p(r, c);
            out.data(r, c) = (sum / k) > threshold ? 1 : 0;
        }
    return out;
}

} // namespace lvseg

#endif
