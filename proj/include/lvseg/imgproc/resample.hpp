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
#ifndef LVSEG_IMGPROC_RESAMPLE_HPP
#define LVSEG_IMGPROC_RESAMPLE_HPP

#include <cmath>

#include "lvseg/core/error.hpp"
#include "lvseg/imgproc/sampling.hpp"

namespace lvseg {

inline int resampled_dim(int dim, double spacing, double target) {
    int out = static_cast<int>(std::lround(dim * spacing / target));
    return out < 1 ? 1 : out;
}

namespace detail {

// Half-pixel-center mapping: output center (i + 0.5) * step - 0.5 in input
// coordinates, so constant images stay constant and linear ramps are exact
// away from the clamped border.
inline double src_coord(int out_idx, int in_dim, int out_dim) {
    double step = static_cast<double>(in_dim) / out_dim;
    return (out_idx + 0.5) * step - 0.5;
}

} // namespace detail

/// Rescale so the output pixel pitch equals `target_spacing` (1 mm default),
/// bilinear interpolation. Scale factor per axis is spacing/target.
inline image_d resample(const image_d& img, double spacing_row, double spacing_col,
                        double target_spacing = 1.0) {
    require(spacing_row > 0 && spacing_col > 0 && target_spacing > 0,
            errc::non_positive_spacing, "spacings must be positive");

    int out_rows = resampled_dim(img.rows(), spacing_row, target_spacing);
    int out_cols = resampled_dim(img.cols(), spacing_col, target_spacing);
    image_d out(out_rows, out_cols);
    for (int r = 0; r < out_rows; ++r) {
        double sy = detail::src_coord(r, img.rows(), out_rows);
        for (int c = 0; c < out_cols; ++c) {
            double sx = detail::src_coord(c, img.cols(), out_cols);
            out(r, c) = sample_bilinear(img, sy, sx);
        }
    }
    return out;
}

/// Mask variant: identical geometry, nearest-neighbor so values stay binary.
inline contour_mask resample_mask(const contour_mask& mask, double spacing_row,
                                  double spacing_col, double target_spacing = 1.0) {
    require(spacing_row > 0 && spacing_col > 0 && target_spacing > 0,
            errc::non_positive_spacing, "spacings must be positive");

    int out_rows = resampled_dim(mask.rows(), spacing_row, target_spacing);
    int out_cols = resampled_dim(mask.cols(), spacing_col, target_spacing);
    contour_mask out(out_rows, out_cols, mask.source);
    for (int r = 0; r < out_rows; ++r) {
        double sy = detail::src_coord(r, mask.rows(), out_rows);
        for (int c = 0; c < out_cols; ++c) {
            double sx = detail::src_coord(c, mask.cols(), out_cols);
            out.data(r, c) = sample_nearest_clamp(mask.data, sy, sx);
        }
    }
    return out;
}

} // namespace lvseg

#endif
