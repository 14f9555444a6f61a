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
#ifndef LVSEG_CORE_STACK_HPP
#define LVSEG_CORE_STACK_HPP

#include <map>
#include <string>
#include <vector>

#include "lvseg/core/image.hpp"
#include "lvseg/core/meta.hpp"

namespace lvseg {

/// One patient record: slices (spatial) x frames (temporal), each frame a
/// 2-D intensity image plus its acquisition metadata. All frames within a
/// slice share dimensions; slices may differ from one another.
template <typename Pixel>
struct basic_stack {
    struct slice {
        std::vector<image<Pixel>> frames;
        std::vector<image_meta> meta; // one entry per frame
        // Ground-truth or predicted masks for a subset of frames.
        std::map<int, contour_mask> masks;

        int frame_count() const { return static_cast<int>(frames.size()); }
        int rows() const { return frames.empty() ? 0 : frames.front().rows(); }
        int cols() const { return frames.empty() ? 0 : frames.front().cols(); }
    };

    std::string patient_id;
    std::vector<slice> slices;

    int slice_count() const { return static_cast<int>(slices.size()); }

    void validate() const {
        require(!slices.empty(), errc::invalid_argument, "stack needs at least one slice");
        for (const auto& s : slices) {
            require(!s.frames.empty(), errc::invalid_argument, "slice needs at least one frame");
            require(s.meta.size() == s.frames.size(), errc::invalid_argument,
                    "one meta entry per frame required");
            for (const auto& f : s.frames)
                require(f.rows() == s.rows() && f.cols() == s.cols(), errc::invalid_argument,
                        "frames within a slice must share dims");
        }
    }
};

using image_stack = basic_stack<uint16_t>;
using float_stack = basic_stack<float>;

} // namespace lvseg

#endif
