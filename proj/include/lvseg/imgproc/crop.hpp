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
#ifndef LVSEG_IMGPROC_CROP_HPP
#define LVSEG_IMGPROC_CROP_HPP

#include "lvseg/core/error.hpp"
#include "lvseg/core/image.hpp"

namespace lvseg {

/// Center crop (or zero-pad) to size x size. Cropping removes
/// floor((dim - size)/2) leading pixels; padding puts the extra pixel on the
/// trailing edge when the total pad is odd.
template <typename T>
image<T> center_crop_pad(const image<T>& img, int size) {
    require(size > 0, errc::invalid_argument, "crop size must be positive");

    image<T> out(size, size, T{});
    // leading offset in source (crop) or destination (pad), per axis
    auto split = [&](int dim) {
        int lead = dim >= size ? (dim - size) / 2 : (size - dim) / 2;
        return lead;
    };
    int lr = split(img.rows()), lc = split(img.cols());

    for (int r = 0; r < size; ++r) {
        int sr = img.rows() >= size ? r + lr : r - lr;
        if (sr < 0 || sr >= img.rows()) continue;
        for (int c = 0; c < size; ++c) {
            int sc = img.cols() >= size ? c + lc : c - lc;
            if (sc < 0 || sc >= img.cols()) continue;
            out(r, c) = img(sr, sc);
        }
    }
    return out;
}

inline contour_mask center_crop_pad(const contour_mask& mask, int size) {
    return contour_mask(center_crop_pad(mask.data, size), mask.source);
}

} // namespace lvseg

#endif
