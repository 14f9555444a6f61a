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
#ifndef LVSEG_VOLUME_VOLUME_HPP
#define LVSEG_VOLUME_VOLUME_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "lvseg/core/error.hpp"
#include "lvseg/core/image.hpp"
#include "lvseg/core/meta.hpp"

namespace lvseg {

enum class integration_mode : uint8_t { arithmetic_mean, truncated_cone };

// VolumeResult provenance flags.
enum volume_flags : unsigned {
    flag_fallback_few_slices = 1u << 0,
    flag_fallback_low_esv = 1u << 1,
    flag_fallback_low_edv = 1u << 2,
    flag_edge_trimmed = 1u << 3,
    flag_zero_slice_removed = 1u << 4,
    flag_retake_deduped = 1u << 5,
};

inline std::string volume_flags_str(unsigned flags) {
    std::string out;
    auto add = [&](unsigned f, const char* name) {
        if (flags & f) {
            if (!out.empty()) out += '|';
            out += name;
        }
    };
    add(flag_fallback_few_slices, "fallback_few_slices");
    add(flag_fallback_low_esv, "fallback_low_esv");
    add(flag_fallback_low_edv, "fallback_low_edv");
    add(flag_edge_trimmed, "edge_trimmed");
    add(flag_zero_slice_removed, "zero_slice_removed");
    add(flag_retake_deduped, "retake_deduped");
    return out;
}

struct volume_result {
    double esv_ml = 0;
    double edv_ml = 0;
    double ef = 0; // (EDV - ESV)/EDV
    unsigned flags = 0;
};

struct slice_record {
    int slice_id = 0;
    double location_mm = 0;
    std::vector<double> frame_areas_mm2;
    int acquisition_index = 0;
};

/// Physical LV area of one binarized mask: pixel count times the squared
/// pixel pitch, algebraically identical to F*(p*I)^2 for I x I masks.
inline double slice_area(const contour_mask& mask, double pixel_spacing_mm) {
    require(pixel_spacing_mm > 0, errc::non_positive_spacing, "spacing must be positive");
    return static_cast<double>(mask.count()) * pixel_spacing_mm * pixel_spacing_mm;
}

/// The fraction form F*(p*I)^2; only defined for square masks.
inline double slice_area_fraction_form(const contour_mask& mask, double pixel_spacing_mm) {
    require(pixel_spacing_mm > 0, errc::non_positive_spacing, "spacing must be positive");
    require(mask.rows() == mask.cols(), errc::non_square_mask,
            "fraction form needs a square mask");
    double f = static_cast<double>(mask.count()) /
               (static_cast<double>(mask.rows()) * mask.cols());
    double pi = pixel_spacing_mm * mask.rows();
    return f * pi * pi;
}

/// Slice position along the stack axis: IPP projected onto the slice
/// normal (row cosine x column cosine). The DICOM Slice Location tag is
/// untrusted and never read here.
inline double slice_location(const std::array<double, 3>& ipp,
                             const std::array<double, 6>& iop) {
    double nr = std::sqrt(iop[0] * iop[0] + iop[1] * iop[1] + iop[2] * iop[2]);
    double nc = std::sqrt(iop[3] * iop[3] + iop[4] * iop[4] + iop[5] * iop[5]);
    require(std::abs(nr - 1.0) <= image_meta::iop_norm_tol &&
                std::abs(nc - 1.0) <= image_meta::iop_norm_tol,
            errc::invalid_iop, "IOP halves must be unit vectors");

    double nx = iop[1] * iop[5] - iop[2] * iop[4];
    double ny = iop[2] * iop[3] - iop[0] * iop[5];
    double nz = iop[0] * iop[4] - iop[1] * iop[3];
    return ipp[0] * nx + ipp[1] * ny + ipp[2] * nz;
}

/// argmin / argmax of per-frame area; ties resolve to the lowest index.
inline std::pair<int, int> select_es_ed_frames(const std::vector<double>& areas) {
    require(!areas.empty(), errc::empty_input, "need at least one frame");
    int esf = 0, edf = 0;
    for (int i = 1; i < static_cast<int>(areas.size()); ++i) {
        if (areas[i] < areas[esf]) esf = i;
        if (areas[i] > areas[edf]) edf = i;
    }
    return {esf, edf};
}

inline constexpr double retake_location_tol_mm = 1e-3;

/// Among slices sharing a location (|dL| < 1e-3 mm), keep only the one
/// acquired last (max acquisition index).
inline std::vector<slice_record> dedupe_retakes(std::vector<slice_record> slices,
                                                bool* any_removed = nullptr) {
    if (any_removed) *any_removed = false;
    std::stable_sort(slices.begin(), slices.end(),
                     [](const slice_record& a, const slice_record& b) {
                         return a.location_mm < b.location_mm;
                     });
    std::vector<slice_record> out;
    size_t i = 0;
    while (i < slices.size()) {
        size_t j = i;
        size_t best = i;
        while (j + 1 < slices.size() &&
               std::abs(slices[j + 1].location_mm - slices[i].location_mm) <
                   retake_location_tol_mm) {
            ++j;
            if (slices[j].acquisition_index > slices[best].acquisition_index) best = j;
        }
        if (j > i && any_removed) *any_removed = true;
        out.push_back(slices[best]);
        i = j + 1;
    }
    return out;
}

struct phase_sample {
    double location_mm = 0;
    double area_mm2 = 0;
};

/// Edge cleanup: the first slice should be smaller than the second and the
/// last smaller than the one before it; offending end slices are dropped,
/// once per end, first end first. Expects samples sorted by location.
inline std::vector<phase_sample> trim_edges(std::vector<phase_sample> samples,
                                            bool* any_trimmed = nullptr) {
    if (any_trimmed) *any_trimmed = false;
    if (samples.size() >= 2 && samples.front().area_mm2 > samples[1].area_mm2) {
        samples.erase(samples.begin());
        if (any_trimmed) *any_trimmed = true;
    }
    if (samples.size() >= 2 && samples.back().area_mm2 > samples[samples.size() - 2].area_mm2) {
        samples.pop_back();
        if (any_trimmed) *any_trimmed = true;
    }
    return samples;
}

/// Interior slices where every frame is predicted blank drop out; the
/// integration then spans the gap between their neighbours. End slices are
/// left for the edge-trim rule. Expects records sorted by location.
inline std::vector<slice_record> remove_zero_slices(std::vector<slice_record> slices,
                                                    bool* any_removed = nullptr) {
    if (any_removed) *any_removed = false;
    if (slices.size() < 3) return slices;
    std::vector<slice_record> out;
    for (size_t i = 0; i < slices.size(); ++i) {
        bool interior = i > 0 && i + 1 < slices.size();
        bool all_zero = std::all_of(slices[i].frame_areas_mm2.begin(),
                                    slices[i].frame_areas_mm2.end(),
                                    [](double a) { return a == 0.0; });
        if (interior && all_zero) {
            if (any_removed) *any_removed = true;
            continue;
        }
        out.push_back(std::move(slices[i]));
    }
    return out;
}

/// Stack the inter-slice volumes. Truncated cone:
/// sum (A_i + A_{i+1} + sqrt(A_i A_{i+1})) * |dL| / 3; arithmetic mean
/// replaces the bracket with (A_i + A_{i+1}) and /3 with /2. Inputs must
/// pair up and locations must be distinct.
inline double integrate(const std::vector<double>& areas_mm2,
                        const std::vector<double>& locations_mm, integration_mode mode) {
    require(areas_mm2.size() == locations_mm.size(), errc::length_mismatch,
            "areas and locations differ in length");
    require(areas_mm2.size() >= 2, errc::length_mismatch, "need at least two slices");

    std::vector<size_t> order(areas_mm2.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return locations_mm[a] < locations_mm[b]; });

    double total = 0;
    for (size_t k = 0; k + 1 < order.size(); ++k) {
        double l0 = locations_mm[order[k]], l1 = locations_mm[order[k + 1]];
        require(l1 != l0, errc::duplicate_location, "duplicate slice location");
        double a0 = areas_mm2[order[k]], a1 = areas_mm2[order[k + 1]];
        double h = l1 - l0;
        if (mode == integration_mode::truncated_cone)
            total += (a0 + a1 + std::sqrt(a0 * a1)) * h / 3.0;
        else
            total += (a0 + a1) * h / 2.0;
    }
    return total;
}

/// One phase's mask record for a patient: per slice, the acquisition meta
/// and the per-frame predicted masks.
struct patient_record {
    struct slice {
        image_meta meta;
        std::vector<contour_mask> frame_masks;
    };
    std::vector<slice> slices;
};

namespace detail {

inline std::vector<slice_record> build_slice_records(const patient_record& rec) {
    std::vector<slice_record> out;
    int id = 0;
    for (const auto& sl : rec.slices) {
        require(!sl.frame_masks.empty(), errc::empty_input, "slice has no frames");
        slice_record r;
        r.slice_id = id++;
        r.location_mm = slice_location(sl.meta.ipp, sl.meta.iop);
        r.acquisition_index = sl.meta.acquisition_index;
        double spacing = sl.meta.pixel_spacing_row;
        for (const auto& m : sl.frame_masks)
            r.frame_areas_mm2.push_back(slice_area(m, spacing));
        out.push_back(std::move(r));
    }
    return out;
}

// min (ES) or max (ED) frame area per slice, then zero-slice removal,
// edge trim, and integration over the surviving samples.
inline double phase_volume_ml(std::vector<slice_record> records, bool es_phase,
                              integration_mode mode, unsigned& flags) {
    bool zero_removed = false;
    records = remove_zero_slices(std::move(records), &zero_removed);
    if (zero_removed) flags |= flag_zero_slice_removed;

    std::vector<phase_sample> samples;
    for (const auto& r : records) {
        auto [esf, edf] = select_es_ed_frames(r.frame_areas_mm2);
        samples.push_back({r.location_mm, r.frame_areas_mm2[es_phase ? esf : edf]});
    }
    bool trimmed = false;
    samples = trim_edges(std::move(samples), &trimmed);
    if (trimmed) flags |= flag_edge_trimmed;

    require(samples.size() >= 2, errc::too_few_slices,
            "fewer than 2 usable slices remain for integration");
    std::vector<double> areas, locations;
    for (const auto& s : samples) {
        areas.push_back(s.area_mm2);
        locations.push_back(s.location_mm);
    }
    return integrate(areas, locations, mode) / 1000.0; // mm^3 -> ml
}

} // namespace detail

/// Full per-patient volume pipeline. ES and ED can come from predictions of
/// two different segmentation models; pass the same record twice when a
/// single model drives both phases.
inline volume_result patient_volumes(const patient_record& es_record,
                                     const patient_record& ed_record,
                                     integration_mode mode = integration_mode::arithmetic_mean) {
    volume_result res;

    bool deduped_es = false, deduped_ed = false;
    auto es_slices = dedupe_retakes(detail::build_slice_records(es_record), &deduped_es);
    auto ed_slices = dedupe_retakes(detail::build_slice_records(ed_record), &deduped_ed);
    if (deduped_es || deduped_ed) res.flags |= flag_retake_deduped;

    res.esv_ml = detail::phase_volume_ml(std::move(es_slices), true, mode, res.flags);
    res.edv_ml = detail::phase_volume_ml(std::move(ed_slices), false, mode, res.flags);

    // Location ordering flips sign with the stack direction; volumes are
    // magnitudes.
    res.esv_ml = std::abs(res.esv_ml);
    res.edv_ml = std::abs(res.edv_ml);

    require(res.edv_ml > 0, errc::non_positive_edv, "EDV is zero; EF undefined");
    res.ef = (res.edv_ml - res.esv_ml) / res.edv_ml;
    return res;
}

inline volume_result patient_volumes(const patient_record& record,
                                     integration_mode mode = integration_mode::arithmetic_mean) {
    return patient_volumes(record, record, mode);
}

/// Usable slice count (post-dedupe) that drives the few-slices fallback.
inline int usable_slice_count(const patient_record& rec) {
    auto records = dedupe_retakes(detail::build_slice_records(rec));
    return static_cast<int>(records.size());
}

} // namespace lvseg

#endif
