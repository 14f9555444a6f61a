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
#ifndef LVSEG_CORE_META_HPP
#define LVSEG_CORE_META_HPP

#include <array>
#include <cmath>
#include <optional>

#include "lvseg/core/error.hpp"

namespace lvseg {

enum class phase_encoding : uint8_t { row, col, unknown };
enum class patient_sex : uint8_t { male, female, unknown };

/// Per-image acquisition metadata. Spacing in mm/pixel, patient
/// coordinates in mm. The IOP vector stores the row direction cosine
/// in [0..3) and the column direction cosine in [3..6).
struct image_meta {
    double pixel_spacing_row = 0.0;
    double pixel_spacing_col = 0.0;
    int rows = 0;
    int cols = 0;
    std::array<double, 3> ipp{0, 0, 0};
    std::array<double, 6> iop{1, 0, 0, 0, 1, 0};
    phase_encoding phase = phase_encoding::unknown;
    std::optional<double> slice_location_raw; // untrusted; never used for volume
    int acquisition_index = 0;
    std::optional<int> patient_age_years;
    patient_sex sex = patient_sex::unknown;

    static constexpr double iop_norm_tol = 1e-3;

    bool iop_valid() const {
        double nr = std::sqrt(iop[0] * iop[0] + iop[1] * iop[1] + iop[2] * iop[2]);
        double nc = std::sqrt(iop[3] * iop[3] + iop[4] * iop[4] + iop[5] * iop[5]);
        return std::abs(nr - 1.0) <= iop_norm_tol && std::abs(nc - 1.0) <= iop_norm_tol;
    }

    void validate() const {
        require(pixel_spacing_row > 0 && pixel_spacing_col > 0, errc::non_positive_spacing,
                "pixel spacing must be positive");
        require(rows > 0 && cols > 0, errc::invalid_argument, "image dims must be positive");
    }
};

} // namespace lvseg

#endif
