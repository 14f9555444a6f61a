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
#ifndef LVSEG_INGEST_CONTOUR_HPP
#define LVSEG_INGEST_CONTOUR_HPP

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "lvseg/core/error.hpp"
#include "lvseg/core/image.hpp"

namespace lvseg {

struct contour_point {
    double x = 0; // column direction, pixels
    double y = 0; // row direction, pixels
};

/// Contour text files: one "x y" floating-point pair per line.
inline std::vector<contour_point> parse_contour_points(const std::string& text) {
    std::vector<contour_point> pts;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        std::istringstream ls(line);
        contour_point p;
        if (!(ls >> p.x >> p.y))
            raise(errc::invalid_argument, "malformed contour line: " + line);
        pts.push_back(p);
    }
    return pts;
}

namespace detail {

inline constexpr double raster_eps = 1e-9;

inline bool on_segment(double px, double py, const contour_point& a, const contour_point& b) {
    double dx = b.x - a.x, dy = b.y - a.y;
    double len2 = dx * dx + dy * dy;
    if (len2 == 0.0)
        return std::abs(px - a.x) <= raster_eps && std::abs(py - a.y) <= raster_eps;
    double t = ((px - a.x) * dx + (py - a.y) * dy) / len2;
    t = std::clamp(t, 0.0, 1.0);
    double cx = a.x + t * dx, cy = a.y + t * dy;
    double d2 = (px - cx) * (px - cx) + (py - cy) * (py - cy);
    return d2 <= raster_eps * raster_eps;
}

} // namespace detail

/// Fill a closed polygon into a binary mask. A pixel is set when its center
/// (x = col, y = row) is interior under the even-odd rule or lies on a
/// polygon edge, so boundary pixels are included. Scanline per row plus an
/// explicit on-edge pass keeps the result identical to a per-pixel
/// point-in-polygon decision.
inline contour_mask rasterize_contour(const std::vector<contour_point>& points, int rows,
                                      int cols) {
    require(points.size() >= 3, errc::degenerate_polygon,
            "polygon needs at least 3 points, got " + std::to_string(points.size()));

    contour_mask mask(rows, cols, contour_mask::origin::ground_truth);
    const size_t n = points.size();

    for (int r = 0; r < rows; ++r) {
        const double y = r;
        std::vector<double> xs;
        for (size_t i = 0; i < n; ++i) {
            const contour_point& a = points[i];
            const contour_point& b = points[(i + 1) % n];
            if ((a.y > y) != (b.y > y))
                xs.push_back(a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y));
        }
        std::sort(xs.begin(), xs.end());
        for (size_t i = 0; i + 1 < xs.size(); i += 2) {
            int c0 = static_cast<int>(std::ceil(xs[i] - detail::raster_eps));
            int c1 = static_cast<int>(std::floor(xs[i + 1] + detail::raster_eps));
            c0 = std::max(c0, 0);
            c1 = std::min(c1, cols - 1);
            for (int c = c0; c <= c1; ++c) mask.data(r, c) = 1;
        }
    }

    // Boundary pass: pixel centers lying exactly on an edge.
    for (size_t i = 0; i < n; ++i) {
        const contour_point& a = points[i];
        const contour_point& b = points[(i + 1) % n];
        int r0 = std::max(0, static_cast<int>(std::floor(std::min(a.y, b.y))));
        int r1 = std::min(rows - 1, static_cast<int>(std::ceil(std::max(a.y, b.y))));
        int c0 = std::max(0, static_cast<int>(std::floor(std::min(a.x, b.x))));
        int c1 = std::min(cols - 1, static_cast<int>(std::ceil(std::max(a.x, b.x))));
        for (int r = r0; r <= r1; ++r)
            for (int c = c0; c <= c1; ++c)
                if (!mask.data(r, c) && detail::on_segment(c, r, a, b)) mask.data(r, c) = 1;
    }
    return mask;
}

/// Reduce a multi-class label image to the binary inner-LV mask. A label
/// without the requested class yields an all-zero (blank contour) mask.
inline contour_mask simplify_acdc_label(const image_u16& label, uint16_t inner_lv_id) {
    contour_mask mask(label.rows(), label.cols(), contour_mask::origin::ground_truth);
    for (int r = 0; r < label.rows(); ++r)
        for (int c = 0; c < label.cols(); ++c)
            mask.data(r, c) = label(r, c) == inner_lv_id ? 1 : 0;
    return mask;
}

} // namespace lvseg

#endif
