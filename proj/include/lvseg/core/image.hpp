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
#ifndef LVSEG_CORE_IMAGE_HPP
#define LVSEG_CORE_IMAGE_HPP

#include <algorithm>
#include <cstdint>
#include <vector>

#include "lvseg/core/error.hpp"

namespace lvseg {

/// Dense 2-D image, row-major. (r, c) indexing with r the slow axis.
template <typename T>
class image {
public:
    image() = default;
    image(int rows, int cols, T fill = T{})
        : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, fill) {
        require(rows > 0 && cols > 0, errc::invalid_argument, "image dims must be positive");
    }
    image(int rows, int cols, std::vector<T> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        require(rows > 0 && cols > 0, errc::invalid_argument, "image dims must be positive");
        require(data_.size() == static_cast<size_t>(rows) * cols, errc::invalid_argument,
                "image data size does not match dims");
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    T& operator()(int r, int c) { return data_[static_cast<size_t>(r) * cols_ + c]; }
    const T& operator()(int r, int c) const { return data_[static_cast<size_t>(r) * cols_ + c]; }

    T* data() { return data_.data(); }
    const T* data() const { return data_.data(); }
    std::vector<T>& raw() { return data_; }
    const std::vector<T>& raw() const { return data_; }

    bool same_shape(const image& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

    void fill(T v) { std::fill(data_.begin(), data_.end(), v); }

    template <typename U>
    image<U> cast() const {
        image<U> out(rows_, cols_);
        for (size_t i = 0; i < data_.size(); ++i) out.raw()[i] = static_cast<U>(data_[i]);
        return out;
    }

    friend bool operator==(const image& a, const image& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<T> data_;
};

using image_u16 = image<uint16_t>;
using image_d = image<double>;

/// Binary mask aligned to an image; 1 = inside the LV endocardium.
struct contour_mask {
    enum class origin : uint8_t { ground_truth, predicted };

    image<uint8_t> data;
    origin source = origin::predicted;

    contour_mask() = default;
    explicit contour_mask(image<uint8_t> d, origin s = origin::predicted)
        : data(std::move(d)), source(s) {}
    contour_mask(int rows, int cols, origin s = origin::predicted)
        : data(rows, cols, 0), source(s) {}

    int rows() const { return data.rows(); }
    int cols() const { return data.cols(); }

    size_t count() const {
        size_t n = 0;
        for (uint8_t v : data.raw()) n += (v != 0);
        return n;
    }
    bool is_binary() const {
        for (uint8_t v : data.raw())
            if (v > 1) return false;
        return true;
    }
};

} // namespace lvseg

#endif
