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
#ifndef LVSEG_IMGPROC_NORMALIZE_HPP
#define LVSEG_IMGPROC_NORMALIZE_HPP

#include <algorithm>
#include <cmath>

#include "lvseg/core/image.hpp"

namespace lvseg {

enum class norm_mode : uint8_t { minmax, zscore, none };

struct normalize_result {
    image_d img;
    bool degenerate = false; // constant input: all-zero output, flagged
};

/// MinMax: (x - min)/(max - min) into [0, 1]. ZScore: (x - mean)/std with
/// population std. Constant input cannot satisfy either precondition and
/// yields an all-zero image with the degenerate flag set.
inline normalize_result normalize_intensity(const image_d& img, norm_mode mode) {
    normalize_result res{img, false};
    if (mode == norm_mode::none || img.empty()) return res;

    const auto& v = img.raw();
    if (mode == norm_mode::minmax) {
        auto [mn_it, mx_it] = std::minmax_element(v.begin(), v.end());
        double mn = *mn_it, mx = *mx_it;
        if (mx <= mn) {
            res.img.fill(0.0);
            res.degenerate = true;
            return res;
        }
        double inv = 1.0 / (mx - mn);
        for (double& x : res.img.raw()) x = (x - mn) * inv;
        return res;
    }

    double mean = 0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double var = 0;
    for (double x : v) var += (x - mean) * (x - mean);
    var /= static_cast<double>(v.size());
    double sd = std::sqrt(var);
    if (sd <= 0) {
        res.img.fill(0.0);
        res.degenerate = true;
        return res;
    }
    double inv = 1.0 / sd;
    for (double& x : res.img.raw()) x = (x - mean) * inv;
    return res;
}

} // namespace lvseg

#endif
