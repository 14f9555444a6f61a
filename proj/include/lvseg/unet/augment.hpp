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
#ifndef LVSEG_UNET_AUGMENT_HPP
#define LVSEG_UNET_AUGMENT_HPP

#include <cmath>
#include <numbers>
#include <vector>

#include "lvseg/core/image.hpp"
#include "lvseg/imgproc/sampling.hpp"
#include "lvseg/unet/rng.hpp"

namespace lvseg {

struct training_pair {
    image_d image;
    contour_mask mask;
};

struct augment_config {
    bool rotate = true; // U(0, 90) degrees
    bool shift = true; // U(0, 5%) of height/width, per axis
    bool zoom = true; // U(0.95, 1.05)
    bool flip = false; // horizontal, coin flip
    double max_rotate_deg = 90.0;
    double max_shift_frac = 0.05;
    double zoom_lo = 0.95;
    double zoom_hi = 1.05;
};

struct affine_sample {
    double angle_rad = 0;
    double shift_rows = 0;
    double shift_cols = 0;
    double zoom = 1.0;
    bool hflip = false;
};

inline affine_sample draw_affine(const augment_config& cfg, int rows, int cols, rng& r) {
    affine_sample s;
    if (cfg.rotate)
        s.angle_rad = r.uniform(0.0, cfg.max_rotate_deg) * std::numbers::pi / 180.0;
    if (cfg.shift) {
        s.shift_rows = r.uniform(0.0, cfg.max_shift_frac) * rows;
        s.shift_cols = r.uniform(0.0, cfg.max_shift_frac) * cols;
    }
    if (cfg.zoom) s.zoom = r.uniform(cfg.zoom_lo, cfg.zoom_hi);
    if (cfg.flip) s.hflip = r.coin();
    return s;
}

namespace detail {

// Inverse-map an output pixel through shift, zoom and rotation about the
// image center, then the optional horizontal flip.
template <typename Sampler>
auto warp(int rows, int cols, const affine_sample& s, Sampler&& sample) {
    const double cy = (rows - 1) / 2.0, cx = (cols - 1) / 2.0;
    const double ct = std::cos(s.angle_rad), st = std::sin(s.angle_rad);
    return [=, sample = std::forward<Sampler>(sample)](int r, int c) {
        double dy = (r - s.shift_rows) - cy;
        double dx = (c - s.shift_cols) - cx;
        dy /= s.zoom;
        dx /= s.zoom;
        double sy = st * dx + ct * dy + cy;
        double sx = ct * dx - st * dy + cx;
        if (s.hflip) sx = (cols - 1) - sx;
        return sample(sy, sx);
    };
}

} // namespace detail

inline training_pair apply_affine(const training_pair& in, const affine_sample& s) {
    const int rows = in.image.rows(), cols = in.image.cols();
    training_pair out;
    out.image = image_d(rows, cols);
    out.mask = contour_mask(rows, cols, in.mask.source);

    auto img_v = detail::warp(rows, cols, s, [&](double y, double x) {
        return sample_bilinear_zero(in.image, y, x);
    });
    auto mask_v = detail::warp(rows, cols, s, [&](double y, double x) {
        return sample_nearest_zero(in.mask.data, y, x);
    });
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            out.image(r, c) = img_v(r, c);
            out.mask.data(r, c) = mask_v(r, c);
        }
    return out;
}

/// Expand the training set: each original pair stays and gains `factor`
/// independently transformed copies (masks warped identically with
/// nearest-neighbour sampling, so they stay binary).
inline std::vector<training_pair> augment(const std::vector<training_pair>& pairs,
                                          const augment_config& cfg, int factor,
                                          uint64_t seed) {
    require(factor >= 0, errc::invalid_argument, "factor must be non-negative");
    std::vector<training_pair> out;
    out.reserve(pairs.size() * (1 + static_cast<size_t>(factor)));
    rng r(seed);
    for (const auto& p : pairs) {
        out.push_back(p);
        for (int i = 0; i < factor; ++i) {
            affine_sample s = draw_affine(cfg, p.image.rows(), p.image.cols(), r);
            out.push_back(apply_affine(p, s));
        }
    }
    return out;
}

} // namespace lvseg

#endif
