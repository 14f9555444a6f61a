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
#ifndef LVSEG_UNET_SPLIT_HPP
#define LVSEG_UNET_SPLIT_HPP

#include <algorithm>
#include <string>
#include <vector>

#include "lvseg/core/error.hpp"
#include "lvseg/unet/rng.hpp"

namespace lvseg {

struct patient_split {
    std::vector<std::string> train;
    std::vector<std::string> val;
    std::vector<std::string> test;
};

/// Patient-level split: 10% test, remainder 80:20 train:val. Rounding is
/// test = floor(0.1 N) (min 1), val = floor(0.2 (N - test)) (min 1). The
/// result depends only on the id set and the seed: ids are sorted before
/// the seeded shuffle, so input order is irrelevant.
inline patient_split split_patients(std::vector<std::string> patient_ids, uint64_t seed) {
    require(patient_ids.size() >= 3, errc::too_few_patients,
            "patient split needs at least 3 patients");

    std::sort(patient_ids.begin(), patient_ids.end());
    patient_ids.erase(std::unique(patient_ids.begin(), patient_ids.end()), patient_ids.end());
    require(patient_ids.size() >= 3, errc::too_few_patients,
            "patient split needs at least 3 distinct patients");

    rng r(seed);
    r.shuffle(patient_ids);

    const size_t n = patient_ids.size();
    size_t n_test = std::max<size_t>(1, n / 10);
    size_t n_val = std::max<size_t>(1, (n - n_test) / 5);

    patient_split out;
    out.test.assign(patient_ids.begin(), patient_ids.begin() + n_test);
    out.val.assign(patient_ids.begin() + n_test, patient_ids.begin() + n_test + n_val);
    out.train.assign(patient_ids.begin() + n_test + n_val, patient_ids.end());
    return out;
}

} // namespace lvseg

#endif
