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
#ifndef LVSEG_UNET_TENSOR_HPP
#define LVSEG_UNET_TENSOR_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "lvseg/core/error.hpp"

namespace lvseg {

/// Float storage with a fixed 32-byte base alignment. Consistent alignment
/// keeps Eigen's vectorized kernels on identical code paths run after run,
/// which makes training bit-deterministic for a fixed seed.
using fvec = std::vector<float, Eigen::aligned_allocator<float>>;

/// Minimal NHWC float tensor for the segmentation engine.
struct tensor {
    int n = 0, h = 0, w = 0, c = 0;
    fvec v;

    tensor() = default;
    tensor(int n_, int h_, int w_, int c_, float fill = 0.f)
        : n(n_), h(h_), w(w_), c(c_),
          v(static_cast<size_t>(n_) * h_ * w_ * c_, fill) {}

    size_t size() const { return v.size(); }

    float& at(int in, int iy, int ix, int ic) {
        return v[((static_cast<size_t>(in) * h + iy) * w + ix) * c + ic];
    }
    float at(int in, int iy, int ix, int ic) const {
        return v[((static_cast<size_t>(in) * h + iy) * w + ix) * c + ic];
    }

    bool same_shape(const tensor& o) const {
        return n == o.n && h == o.h && w == o.w && c == o.c;
    }
};

namespace nn {

using matrix_map =
    Eigen::Map<Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
using const_matrix_map =
    Eigen::Map<const Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

/// Keras-style "same" padding for stride-1 convs: (k-1)/2 leading, extra
/// trailing for even kernels.
inline int pad_before(int k) { return (k - 1) / 2; }

/// x[n] -> column matrix [H*W, k*k*Cin] with zero padding.
inline void im2col(const tensor& x, int item, int k, fvec& col) {
    const int hw = x.h * x.w, patch = k * k * x.c;
    col.assign(static_cast<size_t>(hw) * patch, 0.f);
    const int pb = pad_before(k);
    const float* base = x.v.data() + static_cast<size_t>(item) * hw * x.c;
    for (int y = 0; y < x.h; ++y)
        for (int ky = 0; ky < k; ++ky) {
            int sy = y + ky - pb;
            if (sy < 0 || sy >= x.h) continue;
            for (int kx = 0; kx < k; ++kx) {
                // contiguous run over sx where 0 <= x + kx - pb < w
                int x0 = std::max(0, pb - kx);
                int x1 = std::min(x.w, x.w + pb - kx);
                if (x0 >= x1) continue;
                const float* src = base + (static_cast<size_t>(sy) * x.w + (x0 + kx - pb)) * x.c;
                float* dst = col.data() +
                             (static_cast<size_t>(y) * x.w + x0) * patch +
                             (static_cast<size_t>(ky) * k + kx) * x.c;
                for (int xi = x0; xi < x1; ++xi) {
                    for (int ci = 0; ci < x.c; ++ci) dst[ci] = src[ci];
                    src += x.c;
                    dst += patch;
                }
            }
        }
}

/// scatter-add of a column-matrix gradient back into image layout.
inline void col2im_add(const fvec& col, int k, tensor& dx, int item) {
    const int patch = k * k * dx.c;
    const int pb = pad_before(k);
    float* base = dx.v.data() + static_cast<size_t>(item) * dx.h * dx.w * dx.c;
    for (int y = 0; y < dx.h; ++y)
        for (int ky = 0; ky < k; ++ky) {
            int sy = y + ky - pb;
            if (sy < 0 || sy >= dx.h) continue;
            for (int kx = 0; kx < k; ++kx) {
                int x0 = std::max(0, pb - kx);
                int x1 = std::min(dx.w, dx.w + pb - kx);
                if (x0 >= x1) continue;
                float* dst = base + (static_cast<size_t>(sy) * dx.w + (x0 + kx - pb)) * dx.c;
                const float* src = col.data() +
                                   (static_cast<size_t>(y) * dx.w + x0) * patch +
                                   (static_cast<size_t>(ky) * k + kx) * dx.c;
                for (int xi = x0; xi < x1; ++xi) {
                    for (int ci = 0; ci < dx.c; ++ci) dst[ci] += src[ci];
                    dst += dx.c;
                    src += patch;
                }
            }
        }
}

/// y = conv(x, w) + b, stride 1, same padding. w is [k*k*cin, cout]
/// row-major (HWIO flattened), b is [cout].
inline tensor conv2d(const tensor& x, const fvec& w, const fvec& b,
                     int k, int cout) {
    const int patch = k * k * x.c;
    tensor y(x.n, x.h, x.w, cout);
    fvec col;
    for (int item = 0; item < x.n; ++item) {
        im2col(x, item, k, col);
        const_matrix_map xc(col.data(), x.h * x.w, patch);
        const_matrix_map wm(w.data(), patch, cout);
        matrix_map ym(y.v.data() + static_cast<size_t>(item) * x.h * x.w * cout, x.h * x.w,
                      cout);
        ym.noalias() = xc * wm;
        ym.rowwise() += const_matrix_map(b.data(), 1, cout).row(0);
    }
    return y;
}

/// Gradients for conv2d. Accumulates into dw/db, writes dx.
inline tensor conv2d_backward(const tensor& x, const fvec& w, int k, int cout,
                              const tensor& dy, fvec& dw,
                              fvec& db) {
    const int patch = k * k * x.c;
    tensor dx(x.n, x.h, x.w, x.c);
    fvec col, dcol(static_cast<size_t>(x.h) * x.w * patch);
    matrix_map dwm(dw.data(), patch, cout);
    for (int item = 0; item < x.n; ++item) {
        im2col(x, item, k, col);
        const_matrix_map xc(col.data(), x.h * x.w, patch);
        const_matrix_map dym(dy.v.data() + static_cast<size_t>(item) * x.h * x.w * cout,
                             x.h * x.w, cout);
        dwm.noalias() += xc.transpose() * dym;
        matrix_map dbm(db.data(), 1, cout);
        dbm.row(0) += dym.colwise().sum();

        matrix_map dcm(dcol.data(), x.h * x.w, patch);
        const_matrix_map wm(w.data(), patch, cout);
        dcm.noalias() = dym * wm.transpose();
        col2im_add(dcol, k, dx, item);
    }
    return dx;
}

inline tensor relu(const tensor& x) {
    tensor y = x;
    for (float& f : y.v) f = f > 0.f ? f : 0.f;
    return y;
}

inline tensor relu_backward(const tensor& y, const tensor& dy) {
    tensor dx = dy;
    for (size_t i = 0; i < dx.v.size(); ++i)
        if (y.v[i] <= 0.f) dx.v[i] = 0.f;
    return dx;
}

inline tensor sigmoid(const tensor& x) {
    tensor y = x;
    for (float& f : y.v) f = 1.f / (1.f + std::exp(-f));
    return y;
}

inline tensor sigmoid_backward(const tensor& y, const tensor& dy) {
    tensor dx = dy;
    for (size_t i = 0; i < dx.v.size(); ++i) dx.v[i] *= y.v[i] * (1.f - y.v[i]);
    return dx;
}

/// 2x2 max pool, stride 2. argmax stores the flat source offset per output.
inline tensor maxpool2(const tensor& x, std::vector<uint32_t>& argmax) {
    require(x.h % 2 == 0 && x.w % 2 == 0, errc::shape_mismatch,
            "maxpool2 needs even spatial dims");
    tensor y(x.n, x.h / 2, x.w / 2, x.c);
    argmax.resize(y.size());
    for (int in = 0; in < x.n; ++in)
        for (int oy = 0; oy < y.h; ++oy)
            for (int ox = 0; ox < y.w; ++ox)
                for (int ic = 0; ic < x.c; ++ic) {
                    float best = -std::numeric_limits<float>::infinity();
                    uint32_t best_idx = 0;
                    for (int dy2 = 0; dy2 < 2; ++dy2)
                        for (int dx2 = 0; dx2 < 2; ++dx2) {
                            size_t idx = ((static_cast<size_t>(in) * x.h + 2 * oy + dy2) * x.w +
                                          2 * ox + dx2) *
                                             x.c +
                                         ic;
                            if (x.v[idx] > best) {
                                best = x.v[idx];
                                best_idx = static_cast<uint32_t>(idx);
                            }
                        }
                    y.at(in, oy, ox, ic) = best;
                    argmax[((static_cast<size_t>(in) * y.h + oy) * y.w + ox) * y.c + ic] =
                        best_idx;
                }
    return y;
}

inline tensor maxpool2_backward(const tensor& x, const tensor& dy,
                                const std::vector<uint32_t>& argmax) {
    tensor dx(x.n, x.h, x.w, x.c);
    for (size_t i = 0; i < dy.v.size(); ++i) dx.v[argmax[i]] += dy.v[i];
    return dx;
}

/// 2x nearest-neighbour upsampling.
inline tensor upsample2(const tensor& x) {
    tensor y(x.n, x.h * 2, x.w * 2, x.c);
    for (int in = 0; in < x.n; ++in)
        for (int oy = 0; oy < y.h; ++oy)
            for (int ox = 0; ox < y.w; ++ox) {
                const float* src = &x.v[((static_cast<size_t>(in) * x.h + oy / 2) * x.w +
                                         ox / 2) *
                                        x.c];
                float* dst = &y.v[((static_cast<size_t>(in) * y.h + oy) * y.w + ox) * y.c];
                for (int ic = 0; ic < x.c; ++ic) dst[ic] = src[ic];
            }
    return y;
}

inline tensor upsample2_backward(const tensor& x, const tensor& dy) {
    tensor dx(x.n, x.h, x.w, x.c);
    for (int in = 0; in < dy.n; ++in)
        for (int oy = 0; oy < dy.h; ++oy)
            for (int ox = 0; ox < dy.w; ++ox) {
                const float* src = &dy.v[((static_cast<size_t>(in) * dy.h + oy) * dy.w + ox) *
                                         dy.c];
                float* dst = &dx.v[((static_cast<size_t>(in) * x.h + oy / 2) * x.w + ox / 2) *
                                   x.c];
                for (int ic = 0; ic < dy.c; ++ic) dst[ic] += src[ic];
            }
    return dx;
}

/// channel concatenation [a | b]
inline tensor concat(const tensor& a, const tensor& b) {
    require(a.n == b.n && a.h == b.h && a.w == b.w, errc::shape_mismatch,
            "concat needs matching spatial dims");
    tensor y(a.n, a.h, a.w, a.c + b.c);
    size_t cells = static_cast<size_t>(a.n) * a.h * a.w;
    for (size_t i = 0; i < cells; ++i) {
        float* dst = &y.v[i * y.c];
        const float* pa = &a.v[i * a.c];
        const float* pb = &b.v[i * b.c];
        for (int ic = 0; ic < a.c; ++ic) dst[ic] = pa[ic];
        for (int ic = 0; ic < b.c; ++ic) dst[a.c + ic] = pb[ic];
    }
    return y;
}

inline void concat_backward(const tensor& dy, tensor& da, tensor& db) {
    size_t cells = static_cast<size_t>(dy.n) * dy.h * dy.w;
    for (size_t i = 0; i < cells; ++i) {
        const float* src = &dy.v[i * dy.c];
        float* pa = &da.v[i * da.c];
        float* pb = &db.v[i * db.c];
        for (int ic = 0; ic < da.c; ++ic) pa[ic] = src[ic];
        for (int ic = 0; ic < db.c; ++ic) pb[ic] = src[da.c + ic];
    }
}

} // namespace nn

} // namespace lvseg

#endif
