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
#ifndef LVSEG_IMGPROC_ORIENT_HPP
#define LVSEG_IMGPROC_ORIENT_HPP

#include <array>
#include <cmath>

#include "lvseg/core/error.hpp"
#include "lvseg/core/meta.hpp"
#include "lvseg/imgproc/sampling.hpp"

namespace lvseg {

template <typename T>
image<T> transpose(const image<T>& img) {
    image<T> out(img.cols(), img.rows());
    for (int r = 0; r < img.rows(); ++r)
        for (int c = 0; c < img.cols(); ++c) out(c, r) = img(r, c);
    return out;
}

/// Column-phase-encoded images get their axes transposed so the whole
/// corpus reads as "Row" oriented; Row and Unknown pass through.
template <typename T>
image<T> orient_row_major(const image<T>& img, phase_encoding phase) {
    return phase == phase_encoding::col ? transpose(img) : img;
}

inline contour_mask orient_row_major(const contour_mask& mask, phase_encoding phase) {
    return contour_mask(orient_row_major(mask.data, phase), mask.source);
}

/// In-plane rotation about the image center; output keeps the input dims,
/// out-of-frame samples are zero. Positive theta samples the input along
/// directions rotated by +theta, i.e. content turns by -theta.
inline image_d rotate_about_center(const image_d& img, double theta) {
    image_d out(img.rows(), img.cols());
    double cy = (img.rows() - 1) / 2.0, cx = (img.cols() - 1) / 2.0;
    double ct = std::cos(theta), st = std::sin(theta);
    for (int r = 0; r < out.rows(); ++r) {
        double dy = r - cy;
        for (int c = 0; c < out.cols(); ++c) {
            double dx = c - cx;
            double sx = ct * dx - st * dy + cx;
            double sy = st * dx + ct * dy + cy;
            out(r, c) = sample_bilinear_zero(img, sy, sx);
        }
    }
    return out;
}

inline contour_mask rotate_mask_about_center(const contour_mask& mask, double theta) {
    contour_mask out(mask.rows(), mask.cols(), mask.source);
    double cy = (mask.rows() - 1) / 2.0, cx = (mask.cols() - 1) / 2.0;
    double ct = std::cos(theta), st = std::sin(theta);
    for (int r = 0; r < out.rows(); ++r) {
        double dy = r - cy;
        for (int c = 0; c < out.cols(); ++c) {
            double dx = c - cx;
            double sx = ct * dx - st * dy + cx;
            double sy = st * dx + ct * dy + cy;
            out.data(r, c) = sample_nearest_zero(mask.data, sy, sx);
        }
    }
    return out;
}

inline double common_vector_angle(const std::array<double, 6>& iop) {
    double nr = std::sqrt(iop[0] * iop[0] + iop[1] * iop[1] + iop[2] * iop[2]);
    double nc = std::sqrt(iop[3] * iop[3] + iop[4] * iop[4] + iop[5] * iop[5]);
    require(std::abs(nr - 1.0) <= image_meta::iop_norm_tol &&
                std::abs(nc - 1.0) <= image_meta::iop_norm_tol,
            errc::invalid_iop, "IOP direction cosines are not unit vectors");
    return std::atan2(iop[1], iop[0]);
}

/// Rotate so the row direction cosine lines up with the reference +x axis.
inline image_d orient_common_vector(const image_d& img, const std::array<double, 6>& iop) {
    return rotate_about_center(img, common_vector_angle(iop));
}

inline contour_mask orient_common_vector(const contour_mask& mask,
                                         const std::array<double, 6>& iop) {
    return rotate_mask_about_center(mask, common_vector_angle(iop));
}

/// (r, c) -> (R-1-r, C-1-c); converts the RAH-oriented studies to LPH.
template <typename T>
image<T> rotate180(const image<T>& img) {
    image<T> out(img.rows(), img.cols());
    for (int r = 0; r < img.rows(); ++r)
        for (int c = 0; c < img.cols(); ++c)
            out(img.rows() - 1 - r, img.cols() - 1 - c) = img(r, c);
    return out;
}

inline contour_mask rotate180(const contour_mask& mask) {
    return contour_mask(rotate180(mask.data), mask.source);
}

} // namespace lvseg

#endif
