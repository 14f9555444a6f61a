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
#ifndef LVSEG_VOLUME_FALLBACK_HPP
#define LVSEG_VOLUME_FALLBACK_HPP

#include <optional>

#include "lvseg/volume/volume.hpp"

namespace lvseg {

struct linear_volumes {
    double esv_ml = 0;
    double edv_ml = 0;
};

/// Age/sex regression for ESV and EDV (ml), used when segmentation-based
/// volumes are unusable. Under 16 the volumes grow linearly in age; from 16
/// on they are constants.
inline linear_volumes linear_model(double age_years, patient_sex sex) {
    require(age_years >= 0, errc::invalid_argument, "age must be non-negative");
    require(sex == patient_sex::male || sex == patient_sex::female, errc::unknown_sex,
            "linear model needs a known sex");

    if (age_years < 16.0) {
        if (sex == patient_sex::male) return {4.69 * age_years, 10.8 * age_years + 9.0};
        return {2.41 * age_years + 15.0, 7.61 * age_years + 22.0};
    }
    if (sex == patient_sex::male) return {75.0, 181.0};
    return {53.6, 144.0};
}

inline constexpr int few_slices_threshold = 5;
inline constexpr double low_esv_threshold_ml = 2.3;
inline constexpr double low_edv_threshold_ml = 5.0;

struct demographics {
    std::optional<double> age_years;
    patient_sex sex = patient_sex::unknown;
};

/// Edge-case overrides: fewer than 5 slices replaces both volumes with the
/// linear model; otherwise an implausibly low ESV (< 2.3 ml) or EDV (< 5 ml)
/// replaces that volume alone. EF is recomputed after any replacement.
inline volume_result apply_fallbacks(volume_result res, int n_slices,
                                     const demographics& demo) {
    auto model = [&]() {
        require(demo.age_years.has_value(), errc::unknown_sex,
                "fallback triggered without patient age");
        return linear_model(*demo.age_years, demo.sex);
    };

    if (n_slices < few_slices_threshold) {
        linear_volumes lv = model();
        res.esv_ml = lv.esv_ml;
        res.edv_ml = lv.edv_ml;
        res.flags |= flag_fallback_few_slices;
    } else {
        if (res.esv_ml < low_esv_threshold_ml) {
            res.esv_ml = model().esv_ml;
            res.flags |= flag_fallback_low_esv;
        }
        if (res.edv_ml < low_edv_threshold_ml) {
            res.edv_ml = model().edv_ml;
            res.flags |= flag_fallback_low_edv;
        }
    }

    if (res.flags & (flag_fallback_few_slices | flag_fallback_low_esv | flag_fallback_low_edv)) {
        require(res.edv_ml > 0, errc::non_positive_edv, "fallback produced EDV <= 0");
        res.ef = (res.edv_ml - res.esv_ml) / res.edv_ml;
    }
    return res;
}

} // namespace lvseg

#endif
