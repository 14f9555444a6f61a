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
#ifndef LVSEG_POSTPROC_COMPONENTS_HPP
#define LVSEG_POSTPROC_COMPONENTS_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "lvseg/core/error.hpp"
#include "lvseg/core/image.hpp"

namespace lvseg {

struct labeled_components {
    image<int> labels; // 0 = background; component ids contiguous from 1
    std::vector<size_t> counts; // counts[i] = pixels of component i+1
    std::vector<std::pair<double, double>> centroids; // (row, col) per component

    int count() const { return static_cast<int>(counts.size()); }
};

/// Connected-component labeling (BFS), connectivity 4 or 8. Ids are assigned
/// in raster order of each component's first pixel.
inline labeled_components components(const contour_mask& mask, int connectivity = 8) {
    require(connectivity == 4 || connectivity == 8, errc::invalid_argument,
            "connectivity must be 4 or 8");

    const int rows = mask.rows(), cols = mask.cols();
    labeled_components out;
    out.labels = image<int>(rows, cols, 0);

    static constexpr int dr8[] = {-1, -1, -1, 0, 0, 1, 1, 1};
    static constexpr int dc8[] = {-1, 0, 1, -1, 1, -1, 0, 1};
    static constexpr int dr4[] = {-1, 0, 0, 1};
    static constexpr int dc4[] = {0, -1, 1, 0};
    const int* drs = connectivity == 8 ? dr8 : dr4;
    const int* dcs = connectivity == 8 ? dc8 : dc4;
    const int nn = connectivity;

    std::vector<std::pair<int, int>> queue;
    int next_id = 0;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            if (!mask.data(r, c) || out.labels(r, c)) continue;
            ++next_id;
            size_t count = 0;
            double sum_r = 0, sum_c = 0;
            queue.clear();
            queue.emplace_back(r, c);
            out.labels(r, c) = next_id;
            while (!queue.empty()) {
                auto [qr, qc] = queue.back();
                queue.pop_back();
                ++count;
                sum_r += qr;
                sum_c += qc;
                for (int k = 0; k < nn; ++k) {
                    int nr = qr + drs[k], nc = qc + dcs[k];
                    if (nr < 0 || nr >= rows || nc < 0 || nc >= cols) continue;
                    if (!mask.data(nr, nc) || out.labels(nr, nc)) continue;
                    out.labels(nr, nc) = next_id;
                    queue.emplace_back(nr, nc);
                }
            }
            out.counts.push_back(count);
            out.centroids.emplace_back(sum_r / count, sum_c / count);
        }
    return out;
}

} // namespace lvseg

#endif
