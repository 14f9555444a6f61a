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
#ifndef LVSEG_TESTS_SUPPORT_ORACLES_HPP
#define LVSEG_TESTS_SUPPORT_ORACLES_HPP

// Independent reference implementations and crafted-file builders used as
// test oracles. Nothing here may call into the library paths it checks.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "lvseg/core/image.hpp"
#include "lvseg/ingest/contour.hpp"

namespace oracle {

// ---------------------------------------------------------------------------
// point-in-polygon reference: winding-free crossing count plus an explicit
// on-edge probe, evaluated independently per pixel center.
// ---------------------------------------------------------------------------

inline bool point_on_edge(double px, double py, const std::vector<lvseg::contour_point>& poly,
                          double eps = 1e-9) {
    const size_t n = poly.size();
    for (size_t i = 0; i < n; ++i) {
        double ax = poly[i].x, ay = poly[i].y;
        double bx = poly[(i + 1) % n].x, by = poly[(i + 1) % n].y;
        double dx = bx - ax, dy = by - ay;
        double len2 = dx * dx + dy * dy;
        double t = len2 > 0 ? ((px - ax) * dx + (py - ay) * dy) / len2 : 0.0;
        if (t < 0) t = 0;
        if (t > 1) t = 1;
        double cx = ax + t * dx, cy = ay + t * dy;
        if ((px - cx) * (px - cx) + (py - cy) * (py - cy) <= eps * eps) return true;
    }
    return false;
}

inline bool point_in_polygon(double px, double py,
                             const std::vector<lvseg::contour_point>& poly) {
    if (point_on_edge(px, py, poly)) return true;
    bool inside = false;
    const size_t n = poly.size();
    for (size_t i = 0, j = n - 1; i < n; j = i++) {
        double xi = poly[i].x, yi = poly[i].y;
        double xj = poly[j].x, yj = poly[j].y;
        if ((yi > py) != (yj > py)) {
            double xint = xi + (py - yi) * (xj - xi) / (yj - yi);
            if (px < xint) inside = !inside;
        }
    }
    return inside;
}

inline size_t polygon_pixel_count(const std::vector<lvseg::contour_point>& poly, int rows,
                                  int cols) {
    size_t count = 0;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            if (point_in_polygon(c, r, poly)) ++count;
    return count;
}

inline double polygon_area(const std::vector<lvseg::contour_point>& poly) {
    double a = 0;
    const size_t n = poly.size();
    for (size_t i = 0; i < n; ++i) {
        const auto& p = poly[i];
        const auto& q = poly[(i + 1) % n];
        a += p.x * q.y - q.x * p.y;
    }
    return std::abs(a) / 2.0;
}

inline double polygon_perimeter(const std::vector<lvseg::contour_point>& poly) {
    double per = 0;
    const size_t n = poly.size();
    for (size_t i = 0; i < n; ++i) {
        const auto& p = poly[i];
        const auto& q = poly[(i + 1) % n];
        per += std::hypot(q.x - p.x, q.y - p.y);
    }
    return per;
}

// ---------------------------------------------------------------------------
// crafted DICOM files (explicit VR little endian)
// ---------------------------------------------------------------------------

class dicom_builder {
public:
    dicom_builder& preamble() {
        bytes_.assign(128, 0);
        bytes_.push_back('D');
        bytes_.push_back('I');
        bytes_.push_back('C');
        bytes_.push_back('M');
        return *this;
    }

    dicom_builder& element(uint16_t group, uint16_t elem, const char* vr,
                           const std::vector<uint8_t>& value) {
        u16(group);
        u16(elem);
        bytes_.push_back(vr[0]);
        bytes_.push_back(vr[1]);
        std::string v(vr, 2);
        if (v == "OB" || v == "OW" || v == "OF" || v == "SQ" || v == "UT" || v == "UN") {
            u16(0);
            u32(static_cast<uint32_t>(value.size()));
        } else {
            u16(static_cast<uint16_t>(value.size()));
        }
        bytes_.insert(bytes_.end(), value.begin(), value.end());
        return *this;
    }

    dicom_builder& str_element(uint16_t group, uint16_t elem, const char* vr,
                               std::string value) {
        if (value.size() % 2) value.push_back(' ');
        return element(group, elem, vr, std::vector<uint8_t>(value.begin(), value.end()));
    }

    dicom_builder& us_element(uint16_t group, uint16_t elem, uint16_t value) {
        return element(group, elem, "US",
                       {static_cast<uint8_t>(value & 0xFF), static_cast<uint8_t>(value >> 8)});
    }

    dicom_builder& pixels(const std::vector<uint16_t>& px) {
        std::vector<uint8_t> raw;
        raw.reserve(px.size() * 2);
        for (uint16_t v : px) {
            raw.push_back(static_cast<uint8_t>(v & 0xFF));
            raw.push_back(static_cast<uint8_t>(v >> 8));
        }
        return element(0x7FE0, 0x0010, "OW", raw);
    }

    std::vector<uint8_t> build() const { return bytes_; }

private:
    void u16(uint16_t v) {
        bytes_.push_back(static_cast<uint8_t>(v & 0xFF));
        bytes_.push_back(static_cast<uint8_t>(v >> 8));
    }
    void u32(uint32_t v) {
        for (int i = 0; i < 4; ++i) bytes_.push_back(static_cast<uint8_t>((v >> (8 * i)) & 0xFF));
    }

    std::vector<uint8_t> bytes_;
};

/// A complete minimal single-frame file with all six required tags.
inline dicom_builder standard_dicom(int rows, int cols, const std::string& spacing = "1.5\\1.5",
                                    const std::string& ipp = "0\\0\\0",
                                    const std::string& iop = "1\\0\\0\\0\\1\\0") {
    dicom_builder b;
    b.preamble();
    b.str_element(0x0002, 0x0010, "UI", "1.2.840.10008.1.2.1");
    b.str_element(0x0020, 0x0032, "DS", ipp);
    b.str_element(0x0020, 0x0037, "DS", iop);
    b.us_element(0x0028, 0x0010, static_cast<uint16_t>(rows));
    b.us_element(0x0028, 0x0011, static_cast<uint16_t>(cols));
    b.str_element(0x0028, 0x0030, "DS", spacing);
    return b;
}

// ---------------------------------------------------------------------------
// crafted NIfTI-1 files
// ---------------------------------------------------------------------------

struct nifti_spec {
    int16_t dim0 = 4;
    int16_t nx = 8, ny = 8, nz = 3, nt = 20;
    int16_t datatype = 4; // int16
    float pixdim[4] = {1.f, 1.f, 1.f, 10.f};
    const char* magic = "n+1";
};

inline std::vector<uint8_t> make_nifti(const nifti_spec& spec,
                                       const std::vector<int16_t>& data) {
    std::vector<uint8_t> bytes(352, 0);
    auto put_i32 = [&](size_t off, int32_t v) { std::memcpy(bytes.data() + off, &v, 4); };
    auto put_i16 = [&](size_t off, int16_t v) { std::memcpy(bytes.data() + off, &v, 2); };
    auto put_f32 = [&](size_t off, float v) { std::memcpy(bytes.data() + off, &v, 4); };

    put_i32(0, 348);
    put_i16(40, spec.dim0);
    put_i16(42, spec.nx);
    put_i16(44, spec.ny);
    put_i16(46, spec.nz);
    put_i16(48, spec.dim0 == 4 ? spec.nt : 1);
    for (int i = 5; i < 8; ++i) put_i16(40 + 2 * i, 1);
    put_i16(70, spec.datatype);
    put_i16(72, spec.datatype == 2 ? 8 : 16);
    for (int i = 1; i <= 4; ++i) put_f32(76 + 4 * i, spec.pixdim[i - 1]);
    put_f32(108, 352.f); // vox_offset
    std::memcpy(bytes.data() + 344, spec.magic, std::strlen(spec.magic) + 1);

    for (int16_t v : data) {
        bytes.push_back(static_cast<uint8_t>(v & 0xFF));
        bytes.push_back(static_cast<uint8_t>(static_cast<uint16_t>(v) >> 8));
    }
    return bytes;
}

// ---------------------------------------------------------------------------
// synthetic shapes
// ---------------------------------------------------------------------------

inline void draw_disc(lvseg::image<uint8_t>& img, double cy, double cx, double radius,
                      uint8_t value = 1) {
    for (int r = 0; r < img.rows(); ++r)
        for (int c = 0; c < img.cols(); ++c)
            if ((r - cy) * (r - cy) + (c - cx) * (c - cx) <= radius * radius)
                img(r, c) = value;
}

inline void draw_ring(lvseg::image<uint8_t>& img, double cy, double cx, double radius,
                      double thickness = 1.0) {
    for (int r = 0; r < img.rows(); ++r)
        for (int c = 0; c < img.cols(); ++c) {
            double d = std::hypot(r - cy, c - cx);
            if (std::abs(d - radius) <= thickness / 2.0 + 0.5) img(r, c) = 1;
        }
}

// ---------------------------------------------------------------------------
// exhaustive 1-D 2-means: try every split of the sorted values, return the
// set bitmap of the higher cluster for the minimum within-cluster SSE.
// ---------------------------------------------------------------------------

inline std::vector<uint8_t> best_two_means_split(const std::vector<double>& values) {
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    const size_t n = sorted.size();

    double best_sse = std::numeric_limits<double>::infinity();
    double best_threshold = 0; // values >= threshold are "high"
    for (size_t k = 1; k < n; ++k) { // low cluster = sorted[0..k), high = sorted[k..n)
        if (sorted[k] == sorted[k - 1]) continue;
        double mean_lo = 0, mean_hi = 0;
        for (size_t i = 0; i < k; ++i) mean_lo += sorted[i];
        for (size_t i = k; i < n; ++i) mean_hi += sorted[i];
        mean_lo /= static_cast<double>(k);
        mean_hi /= static_cast<double>(n - k);
        double sse = 0;
        for (size_t i = 0; i < k; ++i) sse += (sorted[i] - mean_lo) * (sorted[i] - mean_lo);
        for (size_t i = k; i < n; ++i) sse += (sorted[i] - mean_hi) * (sorted[i] - mean_hi);
        if (sse < best_sse) {
            best_sse = sse;
            best_threshold = (sorted[k - 1] + sorted[k]) / 2.0;
        }
    }
    std::vector<uint8_t> high(n);
    for (size_t i = 0; i < n; ++i) high[i] = values[i] > best_threshold ? 1 : 0;
    return high;
}

// ---------------------------------------------------------------------------
// flood-fill component reference (iterative, explicit visited set)
// ---------------------------------------------------------------------------

inline lvseg::image<int> flood_fill_labels(const lvseg::image<uint8_t>& mask,
                                           int connectivity) {
    lvseg::image<int> labels(mask.rows(), mask.cols(), 0);
    int next = 0;
    std::vector<std::pair<int, int>> stack;
    for (int r = 0; r < mask.rows(); ++r)
        for (int c = 0; c < mask.cols(); ++c) {
            if (!mask(r, c) || labels(r, c)) continue;
            ++next;
            stack.push_back({r, c});
            labels(r, c) = next;
            while (!stack.empty()) {
                auto [y, x] = stack.back();
                stack.pop_back();
                for (int dy = -1; dy <= 1; ++dy)
                    for (int dx = -1; dx <= 1; ++dx) {
                        if (dy == 0 && dx == 0) continue;
                        if (connectivity == 4 && dy != 0 && dx != 0) continue;
                        int ny = y + dy, nx = x + dx;
                        if (ny < 0 || ny >= mask.rows() || nx < 0 || nx >= mask.cols())
                            continue;
                        if (!mask(ny, nx) || labels(ny, nx)) continue;
                        labels(ny, nx) = next;
                        stack.push_back({ny, nx});
                    }
            }
        }
    return labels;
}

// partitions equal up to label renaming
inline bool same_partition(const lvseg::image<int>& a, const lvseg::image<int>& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    std::vector<int> a2b, b2a;
    for (size_t i = 0; i < a.raw().size(); ++i) {
        int la = a.raw()[i], lb = b.raw()[i];
        if ((la == 0) != (lb == 0)) return false;
        if (la == 0) continue;
        if (static_cast<size_t>(la) >= a2b.size()) a2b.resize(la + 1, -1);
        if (static_cast<size_t>(lb) >= b2a.size()) b2a.resize(lb + 1, -1);
        if (a2b[la] == -1) a2b[la] = lb;
        if (b2a[lb] == -1) b2a[lb] = la;
        if (a2b[la] != lb || b2a[lb] != la) return false;
    }
    return true;
}

} // namespace oracle

#endif
