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
#ifndef LVSEG_ROI_HOUGH_HPP
#define LVSEG_ROI_HOUGH_HPP

#include <algorithm>
#include <vector>

#include "lvseg/core/error.hpp"
#include "lvseg/core/image.hpp"

namespace lvseg {

struct circle {
    int row = 0;
    int col = 0;
    int radius = 0;
    int accumulator_score = 0;
};

struct hough_params {
    int r_min = 15;
    int r_max = 64;
    int keep = 30;
    int nms_min_distance = 0; // 0: defaults to r_min
};

namespace detail {

// Integer circle offsets (midpoint algorithm), deduplicated.
inline std::vector<std::pair<int, int>> circle_offsets(int radius) {
    std::vector<std::pair<int, int>> pts;
    int x = radius, y = 0, err = 1 - radius;
    while (x >= y) {
        pts.emplace_back(y, x);
        pts.emplace_back(x, y);
        pts.emplace_back(y, -x);
        pts.emplace_back(x, -y);
        pts.emplace_back(-y, x);
        pts.emplace_back(-x, y);
        pts.emplace_back(-y, -x);
        pts.emplace_back(-x, -y);
        ++y;
        if (err < 0) {
            err += 2 * y + 1;
        } else {
            --x;
            err += 2 * (y - x) + 1;
        }
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

inline bool is_edge(const image<uint8_t>& bin, int r, int c) {
    if (!bin(r, c)) return false;
    if (r == 0 || c == 0 || r == bin.rows() - 1 || c == bin.cols() - 1) return true;
    return !bin(r - 1, c) || !bin(r + 1, c) || !bin(r, c - 1) || !bin(r, c + 1);
}

} // namespace detail

/// Circle Hough transform over the binary image. Edge pixels (foreground
/// with a 4-neighbour background) vote for every center at distance r,
/// accumulator quantized at 1 px in center and radius. Peaks are returned
/// in descending vote order after greedy non-maximum suppression by center
/// distance; an empty image yields an empty list.
inline std::vector<circle> hough_circles(const image<uint8_t>& binary,
                                         const hough_params& params = {}) {
    require(params.r_min > 0 && params.r_max >= params.r_min, errc::invalid_argument,
            "bad radius range");
    require(params.keep >= 1, errc::invalid_argument, "keep must be >= 1");

    const int rows = binary.rows(), cols = binary.cols();
    const int n_radii = params.r_max - params.r_min + 1;

    std::vector<std::pair<int, int>> edges;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            if (detail::is_edge(binary, r, c)) edges.emplace_back(r, c);
    if (edges.empty()) return {};

    std::vector<int> accum(static_cast<size_t>(n_radii) * rows * cols, 0);
    for (int ri = 0; ri < n_radii; ++ri) {
        auto offsets = detail::circle_offsets(params.r_min + ri);
        int* plane = accum.data() + static_cast<size_t>(ri) * rows * cols;
        for (auto [er, ec] : edges)
            for (auto [dy, dx] : offsets) {
                int cr = er + dy, cc = ec + dx;
                if (cr >= 0 && cr < rows && cc >= 0 && cc < cols)
                    ++plane[static_cast<size_t>(cr) * cols + cc];
            }
    }

    // Best radius per center, then greedy NMS over centers.
    std::vector<circle> candidates;
    candidates.reserve(static_cast<size_t>(rows) * cols / 8);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            int best_score = 0, best_radius = 0;
            for (int ri = 0; ri < n_radii; ++ri) {
                int s = accum[(static_cast<size_t>(ri) * rows + r) * cols + c];
                if (s > best_score) {
                    best_score = s;
                    best_radius = params.r_min + ri;
                }
            }
            if (best_score > 0) candidates.push_back({r, c, best_radius, best_score});
        }

    std::sort(candidates.begin(), candidates.end(), [](const circle& a, const circle& b) {
        if (a.accumulator_score != b.accumulator_score)
            return a.accumulator_score > b.accumulator_score;
        if (a.row != b.row) return a.row < b.row;
        if (a.col != b.col) return a.col < b.col;
        return a.radius < b.radius;
    });

    const int min_dist = params.nms_min_distance > 0 ? params.nms_min_distance : params.r_min;
    const int min_dist2 = min_dist * min_dist;
    std::vector<circle> kept;
    for (const circle& cand : candidates) {
        bool suppressed = false;
        for (const circle& k : kept) {
            int dr = cand.row - k.row, dc = cand.col - k.col;
            if (dr * dr + dc * dc < min_dist2) {
                suppressed = true;
                break;
            }
        }
        if (!suppressed) {
            kept.push_back(cand);
            if (static_cast<int>(kept.size()) >= params.keep) break;
        }
    }
    return kept;
}

} // namespace lvseg

#endif
