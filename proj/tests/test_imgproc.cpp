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
#include <catch2/catch_amalgamated.hpp>

#include "lvseg/imgproc/preprocess.hpp"
#include "lvseg/unet/rng.hpp"

using namespace lvseg;

namespace {

image_meta square_meta(int dim, double spacing = 1.0) {
    image_meta m;
    m.pixel_spacing_row = m.pixel_spacing_col = spacing;
    m.rows = m.cols = dim;
    return m;
}

image_d gaussian_bump(int dim, double sigma) {
    image_d img(dim, dim);
    double c = (dim - 1) / 2.0;
    for (int r = 0; r < dim; ++r)
        for (int col = 0; col < dim; ++col) {
            double d2 = (r - c) * (r - c) + (col - c) * (col - c);
            img(r, col) = 1000.0 * std::exp(-d2 / (2 * sigma * sigma));
        }
    return img;
}

} // namespace

// --- resample ---------------------------------------------------------------

TEST_CASE("constant images resample to constant images of scaled dims") {
    image_d img(10, 10, 42.0);
    auto out = resample(img, 2.0, 2.0, 1.0);
    REQUIRE(out.rows() == 20);
    REQUIRE(out.cols() == 20);
    for (double v : out.raw()) CHECK(v == 42.0);
}

TEST_CASE("10x10 at 2mm becomes 20x20 at 1mm") {
    image_d img(10, 10, 1.0);
    auto out = resample(img, 2.0, 2.0);
    CHECK(out.rows() == 20);
    CHECK(out.cols() == 20);
}

TEST_CASE("linear ramp doubles exactly in the interior") {
    // f(r, c) = 3 + 2 c in input coordinates
    image_d img(16, 16);
    for (int r = 0; r < 16; ++r)
        for (int c = 0; c < 16; ++c) img(r, c) = 3.0 + 2.0 * c;

    auto out = resample(img, 2.0, 2.0, 1.0);
    REQUIRE(out.cols() == 32);
    // output column c' maps to input coordinate (c' + 0.5)/2 - 0.5
    for (int r = 4; r < 28; ++r)
        for (int c = 4; c < 28; ++c) {
            double src = (c + 0.5) / 2.0 - 0.5;
            CHECK_THAT(out(r, c), Catch::Matchers::WithinAbs(3.0 + 2.0 * src, 1e-6));
        }
}

TEST_CASE("non-positive spacing is rejected") {
    image_d img(4, 4, 0.0);
    CHECK_THROWS_MATCHES(resample(img, 0.0, 1.0), error,
                         Catch::Matchers::Predicate<error>([](const error& e) {
                             return e.code() == errc::non_positive_spacing;
                         }));
}

TEST_CASE("mask resampling stays binary") {
    contour_mask mask(10, 10, contour_mask::origin::ground_truth);
    for (int r = 3; r < 7; ++r)
        for (int c = 3; c < 7; ++c) mask.data(r, c) = 1;
    auto out = resample_mask(mask, 1.7, 1.7);
    CHECK(out.is_binary());
    CHECK(out.count() > 0);
}

// --- center crop / pad -------------------------------------------------------

TEST_CASE("crop retains the centered index window") {
    image_d img(300, 300);
    for (int r = 0; r < 300; ++r)
        for (int c = 0; c < 300; ++c) img(r, c) = r * 1000.0 + c;
    auto out = center_crop_pad(img, 176);
    REQUIRE(out.rows() == 176);
    // rows/cols [62, 238) survive
    CHECK(out(0, 0) == 62 * 1000.0 + 62);
    CHECK(out(175, 175) == 237 * 1000.0 + 237);
}

TEST_CASE("padding splits 13/13 for 150 -> 176") {
    image_d img(150, 150, 7.0);
    auto out = center_crop_pad(img, 176);
    CHECK(out(12, 88) == 0.0);
    CHECK(out(13, 88) == 7.0);
    CHECK(out(162, 88) == 7.0);
    CHECK(out(163, 88) == 0.0);
}

TEST_CASE("crop at the same size is the identity") {
    rng r(5);
    image_d img(176, 176);
    for (auto& v : img.raw()) v = r.uniform();
    CHECK(center_crop_pad(img, 176) == img);
}

// --- clahe -------------------------------------------------------------------

TEST_CASE("clahe keeps constant images constant") {
    image_d img(32, 32, 1234.0);
    auto out = clahe(img, 2.0, 1, 1);
    double first = out(0, 0);
    for (double v : out.raw()) CHECK(v == first);
}

TEST_CASE("two-level image maps to the extremes of the bit range") {
    // direct histogram-equalization oracle on a 2-bin histogram: with the
    // cdf-min normalization the low level maps to range_min and the high
    // level to range_max, independent of the level populations.
    image_d img(16, 16, 0.0);
    for (int r = 0; r < 16; ++r)
        for (int c = 0; c < 8; ++c) img(r, c) = 4000.0;

    auto out = clahe(img, 1e9, 1, 1); // large clip: no limiting
    for (int r = 0; r < 16; ++r) {
        CHECK_THAT(out(r, 0), Catch::Matchers::WithinAbs(65535.0, 1e-9));
        CHECK_THAT(out(r, 12), Catch::Matchers::WithinAbs(0.0, 1e-9));
    }
}

TEST_CASE("clahe mapping is monotone in the input") {
    rng r(11);
    image_d img(40, 40);
    for (auto& v : img.raw()) v = r.uniform(0.0, 4000.0);
    auto out = clahe(img, 2.0, 1, 1);
    // single tile: pixel pairs must preserve ordering
    for (int i = 0; i < 500; ++i) {
        size_t a = r.integer(img.size()), b = r.integer(img.size());
        if (img.raw()[a] < img.raw()[b])
            CHECK(out.raw()[a] <= out.raw()[b]);
    }
}

TEST_CASE("per-tile equalization maps are monotone non-decreasing") {
    rng r(13);
    for (double clip : {0.0, 1.5, 4.0}) {
        std::vector<int> hist(4096, 0);
        for (int i = 0; i < 5000; ++i) ++hist[r.integer(4096)];
        auto map = lvseg::detail::clahe_tile_map(hist, 5000, clip, clahe_options{});
        for (size_t b = 1; b < map.size(); ++b) CHECK(map[b] >= map[b - 1]);
    }
}

// --- normalize ---------------------------------------------------------------

TEST_CASE("min-max maps {0, 2000, 4000} to {0, 0.5, 1}") {
    image_d img(1, 3);
    img(0, 0) = 0;
    img(0, 1) = 2000;
    img(0, 2) = 4000;
    auto res = normalize_intensity(img, norm_mode::minmax);
    CHECK(!res.degenerate);
    CHECK(res.img(0, 0) == 0.0);
    CHECK(res.img(0, 1) == 0.5);
    CHECK(res.img(0, 2) == 1.0);
}

TEST_CASE("constant image normalizes to zeros with the degenerate flag") {
    image_d img(4, 4, 9.0);
    for (auto mode : {norm_mode::minmax, norm_mode::zscore}) {
        auto res = normalize_intensity(img, mode);
        CHECK(res.degenerate);
        for (double v : res.img.raw()) CHECK(v == 0.0);
    }
}

TEST_CASE("z-score of {1,2,3} is {-sqrt(1.5), 0, sqrt(1.5)}") {
    image_d img(1, 3);
    img(0, 0) = 1;
    img(0, 1) = 2;
    img(0, 2) = 3;
    auto res = normalize_intensity(img, norm_mode::zscore);
    double s = std::sqrt(1.5);
    CHECK_THAT(res.img(0, 0), Catch::Matchers::WithinAbs(-s, 1e-12));
    CHECK_THAT(res.img(0, 1), Catch::Matchers::WithinAbs(0.0, 1e-12));
    CHECK_THAT(res.img(0, 2), Catch::Matchers::WithinAbs(s, 1e-12));
}

TEST_CASE("normalization output stats match the mode") {
    rng r(3);
    image_d img(20, 20);
    for (auto& v : img.raw()) v = r.uniform(0.0, 4000.0);

    auto mm = normalize_intensity(img, norm_mode::minmax);
    auto [lo, hi] = std::minmax_element(mm.img.raw().begin(), mm.img.raw().end());
    CHECK(*lo == 0.0);
    CHECK(*hi == 1.0);

    auto zs = normalize_intensity(img, norm_mode::zscore);
    double mean = 0;
    for (double v : zs.img.raw()) mean += v;
    mean /= static_cast<double>(zs.img.size());
    double var = 0;
    for (double v : zs.img.raw()) var += (v - mean) * (v - mean);
    var /= static_cast<double>(zs.img.size());
    CHECK_THAT(mean, Catch::Matchers::WithinAbs(0.0, 1e-6));
    CHECK_THAT(std::sqrt(var), Catch::Matchers::WithinAbs(1.0, 1e-6));
}

// --- orientation -------------------------------------------------------------

TEST_CASE("row-encoded images pass through, col-encoded transpose") {
    image_d img(2, 3);
    img(0, 0) = 1;
    img(0, 1) = 2;
    img(0, 2) = 3;
    img(1, 0) = 4;
    img(1, 1) = 5;
    img(1, 2) = 6;

    CHECK(orient_row_major(img, phase_encoding::row) == img);
    CHECK(orient_row_major(img, phase_encoding::unknown) == img);

    auto t = orient_row_major(img, phase_encoding::col);
    REQUIRE(t.rows() == 3);
    REQUIRE(t.cols() == 2);
    CHECK(t(0, 0) == 1);
    CHECK(t(2, 1) == 6);
    CHECK(orient_row_major(t, phase_encoding::col) == img); // involution
}

TEST_CASE("identity iop leaves the image alone") {
    auto img = gaussian_bump(24, 4.0);
    auto out = orient_common_vector(img, {1, 0, 0, 0, 1, 0});
    for (int r = 0; r < 24; ++r)
        for (int c = 0; c < 24; ++c)
            CHECK_THAT(out(r, c), Catch::Matchers::WithinAbs(img(r, c), 1e-9));
}

TEST_CASE("row cosine (0,1,0) is a quarter-turn of the content") {
    image_d img(9, 9, 0.0);
    img(2, 6) = 100.0; // off-center probe
    auto out = orient_common_vector(img, {0, 1, 0, 1, 0, 0});
    double cy = 4, cx = 4;
    int pr = 0, pc = 0;
    double best = -1;
    for (int r = 0; r < 9; ++r)
        for (int c = 0; c < 9; ++c)
            if (out(r, c) > best) {
                best = out(r, c);
                pr = r;
                pc = c;
            }
    // a quarter turn maps displacement (dy, dx) to (dx, -dy) or (-dx, dy)
    double dy = 2 - cy, dx = 6 - cx;
    bool quarter_turn = (pr - cy == dx && pc - cx == -dy) ||
                        (pr - cy == -dx && pc - cx == dy);
    CHECK(quarter_turn);
    CHECK(best > 50.0);
}

TEST_CASE("rotating by theta then -theta recovers smooth images within 2%") {
    auto img = gaussian_bump(48, 8.0);
    double theta = 0.6;
    auto twice = rotate_about_center(rotate_about_center(img, theta), -theta);
    double max_err = 0, range = 1000.0;
    for (int r = 0; r < 48; ++r)
        for (int c = 0; c < 48; ++c)
            max_err = std::max(max_err, std::abs(twice(r, c) - img(r, c)));
    CHECK(max_err < 0.02 * range);
}

TEST_CASE("invalid iop raises InvalidIop") {
    image_d img(4, 4, 0.0);
    CHECK_THROWS_MATCHES(orient_common_vector(img, {2, 0, 0, 0, 1, 0}), error,
                         Catch::Matchers::Predicate<error>(
                             [](const error& e) { return e.code() == errc::invalid_iop; }));
}

TEST_CASE("rotate180 on 2x2 reverses the element order") {
    image_d img(2, 2);
    img(0, 0) = 1;
    img(0, 1) = 2;
    img(1, 0) = 3;
    img(1, 1) = 4;
    auto out = rotate180(img);
    CHECK(out(0, 0) == 4);
    CHECK(out(0, 1) == 3);
    CHECK(out(1, 0) == 2);
    CHECK(out(1, 1) == 1);
    CHECK(rotate180(out) == img);

    image_d constant(5, 3, 2.5);
    CHECK(rotate180(constant) == constant);
}

// --- preprocess composition ---------------------------------------------------

TEST_CASE("baseline on a 1mm 176x176 image is the identity") {
    rng r(8);
    image_d img(176, 176);
    for (auto& v : img.raw()) v = r.uniform(0.0, 4000.0);

    preprocess_recipe recipe;
    recipe.method = preprocess_method::baseline;
    recipe.crop_size = 176;

    auto out = preprocess(img, square_meta(176), recipe);
    CHECK(out.image == img);
    CHECK(out.meta.pixel_spacing_row == 1.0);
}

TEST_CASE("m1t2 equals m1t1 on row-encoded images") {
    rng r(21);
    image_d img(64, 80);
    for (auto& v : img.raw()) v = r.uniform(0.0, 4000.0);
    image_meta meta;
    meta.pixel_spacing_row = 1.4;
    meta.pixel_spacing_col = 1.1;
    meta.rows = 64;
    meta.cols = 80;
    meta.phase = phase_encoding::row;

    preprocess_recipe r1;
    r1.method = preprocess_method::m1t1;
    r1.crop_size = 96;
    preprocess_recipe r2 = r1;
    r2.method = preprocess_method::m1t2;

    CHECK(preprocess(img, meta, r1).image == preprocess(img, meta, r2).image);
}

TEST_CASE("every recipe yields crop_size x crop_size") {
    rng r(31);
    image_d img(90, 110);
    for (auto& v : img.raw()) v = r.uniform(0.0, 4000.0);
    image_meta meta;
    meta.pixel_spacing_row = 1.3;
    meta.pixel_spacing_col = 0.8;
    meta.rows = 90;
    meta.cols = 110;
    meta.phase = phase_encoding::col;

    for (auto method : {preprocess_method::baseline, preprocess_method::m1t0,
                        preprocess_method::m1t1, preprocess_method::m1t2,
                        preprocess_method::m2t0, preprocess_method::m2t1,
                        preprocess_method::m2t2}) {
        preprocess_recipe recipe;
        recipe.method = method;
        recipe.crop_size = 112;
        auto out = preprocess(img, meta, recipe);
        INFO(preprocess_method_name(method));
        CHECK(out.image.rows() == 112);
        CHECK(out.image.cols() == 112);
        CHECK(out.meta.rows == 112);
    }
}

TEST_CASE("masks ride through the geometric steps and stay binary") {
    image_d img(60, 60, 100.0);
    img(30, 30) = 4000.0;
    contour_mask mask(60, 60, contour_mask::origin::ground_truth);
    for (int r = 25; r < 35; ++r)
        for (int c = 25; c < 35; ++c) mask.data(r, c) = 1;

    image_meta meta;
    meta.pixel_spacing_row = meta.pixel_spacing_col = 1.5;
    meta.rows = meta.cols = 60;
    meta.iop = {std::cos(0.3), std::sin(0.3), 0, -std::sin(0.3), std::cos(0.3), 0};

    preprocess_recipe recipe;
    recipe.method = preprocess_method::m2t1;
    recipe.crop_size = 80;

    auto out = preprocess(img, meta, recipe, &mask);
    REQUIRE(out.mask.has_value());
    CHECK(out.mask->rows() == 80);
    CHECK(out.mask->is_binary());
    // the 10x10 mm blob should stay about 15x15 px after 1.5x upsampling
    CHECK(out.mask->count() > 100);
    CHECK(out.mask->count() < 400);
}

TEST_CASE("m1t0 resamples both axes with the row spacing") {
    image_d img(40, 40, 3000.0);
    image_meta meta;
    meta.pixel_spacing_row = 2.0;
    meta.pixel_spacing_col = 1.0; // ignored by first-spacing mode
    meta.rows = meta.cols = 40;
    meta.phase = phase_encoding::row;

    preprocess_recipe recipe;
    recipe.method = preprocess_method::m1t0;
    recipe.crop_size = 100;
    recipe.intensity_norm = norm_mode::none;

    auto out = preprocess(img, meta, recipe);
    // 40 px at "2mm" upsample to 80 in both axes, then pad to 100: the
    // nonzero footprint is 80x80
    int nonzero_rows = 0;
    for (int r = 0; r < 100; ++r)
        if (out.image(r, 50) != 0.0) ++nonzero_rows;
    int nonzero_cols = 0;
    for (int c = 0; c < 100; ++c)
        if (out.image(50, c) != 0.0) ++nonzero_cols;
    CHECK(nonzero_rows == 80);
    CHECK(nonzero_cols == 80);
}
