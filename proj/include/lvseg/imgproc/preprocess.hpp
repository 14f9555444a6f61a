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
#ifndef LVSEG_IMGPROC_PREPROCESS_HPP
#define LVSEG_IMGPROC_PREPROCESS_HPP

#include <optional>
#include <string>
#include <utility>

#include "lvseg/core/meta.hpp"
#include "lvseg/imgproc/clahe.hpp"
#include "lvseg/imgproc/crop.hpp"
#include "lvseg/imgproc/normalize.hpp"
#include "lvseg/imgproc/orient.hpp"
#include "lvseg/imgproc/resample.hpp"

namespace lvseg {

enum class preprocess_method : uint8_t { baseline, m1t0, m1t1, m1t2, m2t0, m2t1, m2t2 };

inline const char* preprocess_method_name(preprocess_method m) {
    switch (m) {
    case preprocess_method::baseline: return "baseline";
    case preprocess_method::m1t0: return "m1t0";
    case preprocess_method::m1t1: return "m1t1";
    case preprocess_method::m1t2: return "m1t2";
    case preprocess_method::m2t0: return "m2t0";
    case preprocess_method::m2t1: return "m2t1";
    case preprocess_method::m2t2: return "m2t2";
    }
    return "?";
}

inline preprocess_method preprocess_method_from(const std::string& s) {
    if (s == "baseline") return preprocess_method::baseline;
    if (s == "m1t0") return preprocess_method::m1t0;
    if (s == "m1t1") return preprocess_method::m1t1;
    if (s == "m1t2") return preprocess_method::m1t2;
    if (s == "m2t0") return preprocess_method::m2t0;
    if (s == "m2t1") return preprocess_method::m2t1;
    if (s == "m2t2") return preprocess_method::m2t2;
    raise(errc::invalid_config, "unknown preprocess method: " + s);
}

struct preprocess_recipe {
    preprocess_method method = preprocess_method::m1t2;
    int crop_size = 176; // 176 or 256
    double clahe_clip = 2.0;
    std::pair<int, int> clahe_grid{1, 1};
    norm_mode intensity_norm = norm_mode::minmax;

    void validate() const {
        require(crop_size > 0, errc::invalid_config, "crop size must be positive");
        require(clahe_clip >= 0, errc::invalid_config, "clahe clip must be non-negative");
        require(clahe_grid.first >= 1 && clahe_grid.second >= 1, errc::invalid_config,
                "clahe grid must be >= (1,1)");
    }
};

struct preprocess_output {
    image_d image;
    std::optional<contour_mask> mask;
    image_meta meta; // spacing / dims updated; ipp & iop keep acquisition values
    bool degenerate_norm = false;
};

/// Run one preprocessing recipe over an image and (optionally) its aligned
/// ground-truth mask. Geometric steps hit both; CLAHE and intensity
/// normalization hit the image only, and normalization always runs last.
/// Recipes:
///   baseline : resample 1mm, crop                       (no normalization)
///   m1t0     : row-orient, resample first-spacing, crop, CLAHE, norm
///   m1t1     : row-orient, resample 1mm, crop, CLAHE, norm
///   m1t2     : resample 1mm, crop, CLAHE, norm
///   m2t0     : common-vector orient, crop, norm
///   m2t1     : common-vector orient, resample 1mm, crop, norm
///   m2t2     : resample 1mm, crop, norm
inline preprocess_output preprocess(const image_d& input, const image_meta& meta,
                                    const preprocess_recipe& recipe,
                                    const contour_mask* gt_mask = nullptr) {
    recipe.validate();
    meta.validate();
    if (gt_mask)
        require(gt_mask->rows() == input.rows() && gt_mask->cols() == input.cols(),
                errc::shape_mismatch, "mask dims differ from image dims");

    preprocess_output out;
    out.meta = meta;
    image_d img = input;
    std::optional<contour_mask> mask;
    if (gt_mask) mask = *gt_mask;

    const auto method = recipe.method;
    const bool row_orient = method == preprocess_method::m1t0 || method == preprocess_method::m1t1;
    const bool common_vec = method == preprocess_method::m2t0 || method == preprocess_method::m2t1;
    const bool first_spacing = method == preprocess_method::m1t0;
    const bool do_resample = method != preprocess_method::m2t0;
    const bool do_clahe = method == preprocess_method::m1t0 ||
                          method == preprocess_method::m1t1 ||
                          method == preprocess_method::m1t2;
    const bool do_norm = method != preprocess_method::baseline;

    if (row_orient) {
        img = orient_row_major(img, meta.phase);
        if (mask) mask = orient_row_major(*mask, meta.phase);
        if (meta.phase == phase_encoding::col) {
            std::swap(out.meta.pixel_spacing_row, out.meta.pixel_spacing_col);
            std::swap(out.meta.rows, out.meta.cols);
            out.meta.phase = phase_encoding::row;
        }
    }
    if (common_vec) {
        img = orient_common_vector(img, meta.iop);
        if (mask) mask = orient_common_vector(*mask, meta.iop);
    }
    if (do_resample) {
        double sr = out.meta.pixel_spacing_row;
        double sc = first_spacing ? sr : out.meta.pixel_spacing_col;
        img = resample(img, sr, sc, 1.0);
        if (mask) mask = resample_mask(*mask, sr, sc, 1.0);
        out.meta.pixel_spacing_row = 1.0;
        out.meta.pixel_spacing_col = 1.0;
    }

    img = center_crop_pad(img, recipe.crop_size);
    if (mask) mask = center_crop_pad(*mask, recipe.crop_size);
    out.meta.rows = recipe.crop_size;
    out.meta.cols = recipe.crop_size;

    if (do_clahe)
        img = clahe(img, recipe.clahe_clip, recipe.clahe_grid.first, recipe.clahe_grid.second);

    if (do_norm) {
        auto norm = normalize_intensity(img, recipe.intensity_norm);
        img = std::move(norm.img);
        out.degenerate_norm = norm.degenerate;
    }

    out.image = std::move(img);
    out.mask = std::move(mask);
    return out;
}

inline preprocess_output preprocess(const image_u16& input, const image_meta& meta,
                                    const preprocess_recipe& recipe,
                                    const contour_mask* gt_mask = nullptr) {
    return preprocess(input.cast<double>(), meta, recipe, gt_mask);
}

} // namespace lvseg

#endif
