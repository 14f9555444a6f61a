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
#ifndef LVSEG_ROI_KMEANS_HPP
#define LVSEG_ROI_KMEANS_HPP

#include <algorithm>

#include "lvseg/core/error.hpp"
#include "lvseg/core/image.hpp"

namespace lvseg {

/// 1-D k-means with k=2 over pixel values; pixels assigned to the higher
/// centroid become 1. Centroids start at the min and max value and Lloyd
/// iterations run until assignments are stable, so the result is
/// deterministic. Ties go to the high cluster.
inline image<uint8_t> binarize_kmeans2(const image_d& map) {
    const auto& v = map.raw();
    auto [mn_it, mx_it] = std::minmax_element(v.begin(), v.end());
    require(*mx_it > *mn_it, errc::degenerate_map, "k-means needs >= 2 distinct values");

    double lo = *mn_it, hi = *mx_it;
    double threshold = (lo + hi) / 2.0;
    for (int iter = 0; iter < 1000; ++iter) {
        double sum_lo = 0, sum_hi = 0;
        size_t n_lo = 0, n_hi = 0;
        for (double x : v) {
            // equidistant values join the high cluster
            if (x - lo < hi - x) {
                sum_lo += x;
                ++n_lo;
            } else {
                sum_hi += x;
                ++n_hi;
            }
        }
        double new_lo = n_lo ? sum_lo / n_lo : lo;
        double new_hi = n_hi ? sum_hi / n_hi : hi;
        double new_threshold = (new_lo + new_hi) / 2.0;
        bool stable = new_threshold == threshold;
        lo = new_lo;
        hi = new_hi;
        threshold = new_threshold;
        if (stable) break;
    }

    image<uint8_t> out(map.rows(), map.cols(), 0);
    for (size_t i = 0; i < v.size(); ++i)
        out.raw()[i] = (v[i] - lo) >= (hi - v[i]) ? 1 : 0;
    return out;
}

} // namespace lvseg

#endif
