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
#ifndef LVSEG_ROI_HARMONIC_HPP
#define LVSEG_ROI_HARMONIC_HPP

#include <cmath>
#include <numbers>
#include <vector>

#include "lvseg/core/error.hpp"
#include "lvseg/core/image.hpp"

namespace lvseg {

/// Magnitude of DFT bin 1 of each pixel's length-T time series. Motion at
/// the cardiac fundamental lights up; static anatomy (DC) drops out.
inline image_d first_harmonic_map(const std::vector<image_d>& series) {
    require(series.size() >= 2, errc::too_few_frames,
            "first harmonic needs at least 2 frames");
    const int rows = series.front().rows(), cols = series.front().cols();
    for (const auto& f : series)
        require(f.rows() == rows && f.cols() == cols, errc::shape_mismatch,
                "frames must share dims");

    const size_t T = series.size();
    std::vector<double> cs(T), sn(T);
    for (size_t t = 0; t < T; ++t) {
        double ang = 2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(T);
        cs[t] = std::cos(ang);
        sn[t] = std::sin(ang);
    }

    image_d map(rows, cols, 0.0);
    for (size_t t = 0; t < T; ++t) {
        const auto& f = series[t];
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c) {
                // accumulate re into map, im into a scratch plane below
                map(r, c) += f(r, c) * cs[t];
            }
    }
    image_d im(rows, cols, 0.0);
    for (size_t t = 0; t < T; ++t) {
        const auto& f = series[t];
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c) im(r, c) += f(r, c) * sn[t];
    }
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            map(r, c) = std::hypot(map(r, c), im(r, c));
    return map;
}

/// Sum of per-slice first-harmonic maps; motion magnitude adds up across
/// slices where the LV sits.
inline image_d harmonic_sum(const std::vector<std::vector<image_d>>& slices) {
    require(!slices.empty(), errc::too_few_frames, "no slices");
    image_d total;
    for (const auto& frames : slices) {
        image_d m = first_harmonic_map(frames);
        if (total.empty()) {
            total = std::move(m);
        } else {
            require(total.same_shape(m), errc::shape_mismatch,
                    "slices must share dims after preprocessing");
            for (size_t i = 0; i < total.size(); ++i) total.raw()[i] += m.raw()[i];
        }
    }
    return total;
}

} // namespace lvseg

#endif
