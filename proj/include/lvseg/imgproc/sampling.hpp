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
#ifndef LVSEG_IMGPROC_SAMPLING_HPP
#define LVSEG_IMGPROC_SAMPLING_HPP

#include <cmath>

#include "lvseg/core/image.hpp"

namespace lvseg {

/// Bilinear sample at (row=y, col=x) with border clamping.
inline double sample_bilinear(const image_d& img, double y, double x) {
    int y0 = static_cast<int>(std::floor(y));
    int x0 = static_cast<int>(std::floor(x));
    double fy = y - y0, fx = x - x0;

    auto at = [&](int r, int c) {
        r = std::clamp(r, 0, img.rows() - 1);
        c = std::clamp(c, 0, img.cols() - 1);
        return img(r, c);
    };
    double v00 = at(y0, x0), v01 = at(y0, x0 + 1);
    double v10 = at(y0 + 1, x0), v11 = at(y0 + 1, x0 + 1);
    return (1 - fy) * ((1 - fx) * v00 + fx * v01) + fy * ((1 - fx) * v10 + fx * v11);
}

/// Bilinear sample with zero fill outside the image (for rotations).
inline double sample_bilinear_zero(const image_d& img, double y, double x) {
    int y0 = static_cast<int>(std::floor(y));
    int x0 = static_cast<int>(std::floor(x));
    double fy = y - y0, fx = x - x0;

    auto at = [&](int r, int c) -> double {
        if (r < 0 || r >= img.rows() || c < 0 || c >= img.cols()) return 0.0;
        return img(r, c);
    };
    double v00 = at(y0, x0), v01 = at(y0, x0 + 1);
    double v10 = at(y0 + 1, x0), v11 = at(y0 + 1, x0 + 1);
    return (1 - fy) * ((1 - fx) * v00 + fx * v01) + fy * ((1 - fx) * v10 + fx * v11);
}

/// Nearest-neighbor sample; zero outside. Keeps masks binary.
template <typename T>
T sample_nearest_zero(const image<T>& img, double y, double x) {
    int r = static_cast<int>(std::floor(y + 0.5));
    int c = static_cast<int>(std::floor(x + 0.5));
    if (r < 0 || r >= img.rows() || c < 0 || c >= img.cols()) return T{};
    return img(r, c);
}

template <typename T>
T sample_nearest_clamp(const image<T>& img, double y, double x) {
    int r = std::clamp(static_cast<int>(std::floor(y + 0.5)), 0, img.rows() - 1);
    int c = std::clamp(static_cast<int>(std::floor(x + 0.5)), 0, img.cols() - 1);
    return img(r, c);
}

} // namespace lvseg

#endif
