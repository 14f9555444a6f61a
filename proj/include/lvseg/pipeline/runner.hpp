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
#ifndef LVSEG_PIPELINE_RUNNER_HPP
#define LVSEG_PIPELINE_RUNNER_HPP

#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

#include "lvseg/ingest/study.hpp"
#include "lvseg/pipeline/config.hpp"
#include "lvseg/postproc/filter.hpp"
#include "lvseg/volume/ensemble.hpp"
#include "lvseg/volume/fallback.hpp"
#include "lvseg/volume/volume.hpp"

namespace lvseg {

/// Run `fn(i)` for i in [0, count) across `jobs` workers. Workers pull from
/// an atomic counter; result slots are pre-indexed so aggregation order
/// never depends on scheduling.
inline void parallel_for(size_t count, int jobs, const std::function<void(size_t)>& fn) {
    jobs = std::max(1, jobs);
    if (jobs == 1 || count <= 1) {
        for (size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto worker = [&] {
        while (true) {
            size_t i = next.fetch_add(1);
            if (i >= count || failed.load()) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                failed.store(true);
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    for (int t = 0; t < std::min<size_t>(jobs, count); ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

/// Preprocess every frame (and mask) of a study with one recipe.
inline float_stack preprocess_stack(const image_stack& stack, const preprocess_recipe& recipe) {
    float_stack out;
    out.patient_id = stack.patient_id;
    for (const auto& sl : stack.slices) {
        float_stack::slice osl;
        for (int f = 0; f < sl.frame_count(); ++f) {
            const contour_mask* mask = nullptr;
            auto it = sl.masks.find(f);
            if (it != sl.masks.end()) mask = &it->second;
            auto res = preprocess(sl.frames[f], sl.meta[f], recipe, mask);
            image<float> img(res.image.rows(), res.image.cols());
            for (size_t i = 0; i < img.size(); ++i)
                img.raw()[i] = static_cast<float>(res.image.raw()[i]);
            osl.frames.push_back(std::move(img));
            osl.meta.push_back(res.meta);
            if (res.mask) osl.masks[f] = *res.mask;
        }
        out.slices.push_back(std::move(osl));
    }
    return out;
}

/// Predicted-mask study -> per-phase records for the volume stage.
inline patient_record record_from_masks(const float_stack& stack) {
    patient_record rec;
    for (const auto& sl : stack.slices) {
        patient_record::slice rs;
        require(!sl.meta.empty(), errc::empty_input, "slice without metadata");
        rs.meta = sl.meta.front();
        for (int f = 0; f < sl.frame_count(); ++f) {
            auto it = sl.masks.find(f);
            require(it != sl.masks.end(), errc::missing_file,
                    "prediction study lacks a mask for a frame");
            rs.frame_masks.push_back(it->second);
        }
        rec.slices.push_back(std::move(rs));
    }
    return rec;
}

inline demographics stack_demographics(const float_stack& stack) {
    demographics d;
    for (const auto& sl : stack.slices)
        for (const auto& m : sl.meta) {
            if (m.patient_age_years && !d.age_years)
                d.age_years = static_cast<double>(*m.patient_age_years);
            if (m.sex != patient_sex::unknown && d.sex == patient_sex::unknown) d.sex = m.sex;
        }
    return d;
}

} // namespace lvseg

#endif
