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
#ifndef LVSEG_IMGPROC_CLAHE_HPP
#define LVSEG_IMGPROC_CLAHE_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "lvseg/core/error.hpp"
#include "lvseg/core/image.hpp"

namespace lvseg {

struct clahe_options {
    int bins = 4096;
    double range_min = 0.0;
    double range_max = 65535.0; // 16-bit input; output spans the same range
};

namespace detail {

// Per-tile clip-limited equalization mapping, one output value per bin.
// clip <= 0 disables clipping (plain adaptive equalization). A tile whose
// histogram occupies a single bin maps to the identity so constant regions
// stay constant.
inline std::vector<double> clahe_tile_map(const std::vector<int>& hist, size_t tile_pixels,
                                          double clip, const clahe_options& opt) {
    const int bins = static_cast<int>(hist.size());
    std::vector<double> clipped(hist.begin(), hist.end());

    if (clip > 0) {
        double limit = std::max(1.0, clip * static_cast<double>(tile_pixels) / bins);
        double excess = 0;
        for (double& h : clipped)
            if (h > limit) {
                excess += h - limit;
                h = limit;
            }
        double bonus = excess / bins;
        for (double& h : clipped) h += bonus;
    }

    double total = 0;
    for (double h : clipped) total += h;

    int occupied = 0;
    for (int b = 0; b < bins; ++b) occupied += hist[b] > 0;

    std::vector<double> map(bins);
    double span = opt.range_max - opt.range_min;
    double bin_width = span / bins;
    if (occupied <= 1) {
        for (int b = 0; b < bins; ++b) map[b] = opt.range_min + b * bin_width;
        return map;
    }

    double cdf = 0, cdf_min = -1;
    std::vector<double> cdfs(bins);
    for (int b = 0; b < bins; ++b) {
        cdf += clipped[b];
        cdfs[b] = cdf;
        if (cdf_min < 0 && cdf > 0) cdf_min = cdf;
    }
    double denom = total - cdf_min;
    for (int b = 0; b < bins; ++b) {
        double v = denom > 0 ? (cdfs[b] - cdf_min) / denom : 0.0;
        map[b] = opt.range_min + std::clamp(v, 0.0, 1.0) * span;
    }
    return map;
}

} // namespace detail

/// Contrast-limited adaptive histogram equalization. The image is split
/// into grid_y x grid_x tiles; each pixel is remapped by bilinear blending
/// of the neighbouring tiles' clip-limited equalization maps. A (1,1) grid
/// means one tile spanning the whole image (global clip-limited
/// equalization). `clip` is relative to the uniform histogram bin height.
inline image_d clahe(const image_d& img, double clip, int grid_y, int grid_x,
                     const clahe_options& opt = {}) {
    require(clip >= 0, errc::invalid_argument, "clahe clip must be non-negative");
    require(grid_y >= 1 && grid_x >= 1, errc::invalid_argument, "clahe grid must be >= (1,1)");
    require(opt.bins >= 2 && opt.range_max > opt.range_min, errc::invalid_argument,
            "bad clahe options");

    const int rows = img.rows(), cols = img.cols();
    grid_y = std::min(grid_y, rows);
    grid_x = std::min(grid_x, cols);

    const double scale = opt.bins / (opt.range_max - opt.range_min);
    auto bin_of = [&](double v) {
        int b = static_cast<int>((v - opt.range_min) * scale);
        return std::clamp(b, 0, opt.bins - 1);
    };

    auto tile_lo = [](int idx, int dim, int n) { return idx * dim / n; };
    auto tile_hi = [](int idx, int dim, int n) { return (idx + 1) * dim / n; };

    // one equalization map per tile
    std::vector<std::vector<double>> maps(static_cast<size_t>(grid_y) * grid_x);
    std::vector<double> centers_y(grid_y), centers_x(grid_x);
    for (int ty = 0; ty < grid_y; ++ty) {
        int r0 = tile_lo(ty, rows, grid_y), r1 = tile_hi(ty, rows, grid_y);
        centers_y[ty] = (r0 + r1 - 1) / 2.0;
        for (int tx = 0; tx < grid_x; ++tx) {
            int c0 = tile_lo(tx, cols, grid_x), c1 = tile_hi(tx, cols, grid_x);
            centers_x[tx] = (c0 + c1 - 1) / 2.0;
            std::vector<int> hist(opt.bins, 0);
            for (int r = r0; r < r1; ++r)
                for (int c = c0; c < c1; ++c) ++hist[bin_of(img(r, c))];
            maps[static_cast<size_t>(ty) * grid_x + tx] = detail::clahe_tile_map(
                hist, static_cast<size_t>(r1 - r0) * (c1 - c0), clip, opt);
        }
    }

    auto bracket = [](const std::vector<double>& centers, double v, int& i0, int& i1,
                      double& w) {
        int n = static_cast<int>(centers.size());
        if (n == 1 || v <= centers.front()) {
            i0 = i1 = v <= centers.front() ? 0 : n - 1;
            w = 0;
            return;
        }
        if (v >= centers.back()) {
            i0 = i1 = n - 1;
            w = 0;
            return;
        }
        int hi = 1;
        while (centers[hi] < v) ++hi;
        i0 = hi - 1;
        i1 = hi;
        w = (v - centers[i0]) / (centers[i1] - centers[i0]);
    };

    image_d out(rows, cols);
    for (int r = 0; r < rows; ++r) {
        int ty0, ty1;
        double wy;
        bracket(centers_y, r, ty0, ty1, wy);
        for (int c = 0; c < cols; ++c) {
            int tx0, tx1;
            double wx;
            bracket(centers_x, c, tx0, tx1, wx);
            int b = bin_of(img(r, c));
            double m00 = maps[static_cast<size_t>(ty0) * grid_x + tx0][b];
            double m01 = maps[static_cast<size_t>(ty0) * grid_x + tx1][b];
            double m10 = maps[static_cast<size_t>(ty1) * grid_x + tx0][b];
            double m11 = maps[static_cast<size_t>(ty1) * grid_x + tx1][b];
            out(r, c) = (1 - wy) * ((1 - wx) * m00 + wx * m01) +
                        wy * ((1 - wx) * m10 + wx * m11);
        }
    }
    return out;
}

} // namespace lvseg

#endif
