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

#include "lvseg/ingest/contour.hpp"
#include "lvseg/unet/rng.hpp"
#include "support/oracles.hpp"

using namespace lvseg;

TEST_CASE("axis-aligned square fills 25 pixels with boundary included") {
    std::vector<contour_point> square{{2, 2}, {2, 6}, {6, 6}, {6, 2}};
    auto mask = rasterize_contour(square, 10, 10);
    CHECK(mask.count() == 25); // 5x5 lattice points, centers 2..6 on both axes
    for (int r = 2; r <= 6; ++r)
        for (int c = 2; c <= 6; ++c) CHECK(mask.data(r, c) == 1);
    CHECK(mask.is_binary());
}

TEST_CASE("two points are a degenerate polygon") {
    CHECK_THROWS_MATCHES(rasterize_contour({{0, 0}, {3, 3}}, 8, 8), error,
                         Catch::Matchers::Predicate<error>([](const error& e) {
                             return e.code() == errc::degenerate_polygon;
                         }));
}

TEST_CASE("triangle matches brute-force point-in-polygon count") {
    std::vector<contour_point> tri{{0, 0}, {3, 0}, {0, 3}};
    auto mask = rasterize_contour(tri, 4, 4);
    CHECK(mask.count() == oracle::polygon_pixel_count(tri, 4, 4));
}

TEST_CASE("mask equals the per-pixel oracle on random polygons") {
    rng r(2024);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<contour_point> poly;
        int n = 3 + static_cast<int>(r.integer(6));
        for (int i = 0; i < n; ++i)
            poly.push_back({r.uniform(1.0, 18.0), r.uniform(1.0, 18.0)});
        auto mask = rasterize_contour(poly, 20, 20);
        for (int row = 0; row < 20; ++row)
            for (int col = 0; col < 20; ++col) {
                bool expect = oracle::point_in_polygon(col, row, poly);
                INFO("trial " << trial << " pixel (" << row << "," << col << ")");
                REQUIRE(static_cast<bool>(mask.data(row, col)) == expect);
            }
    }
}

TEST_CASE("area is invariant under cyclic rotation of the point list") {
    rng r(99);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<contour_point> poly;
        int n = 3 + static_cast<int>(r.integer(7));
        for (int i = 0; i < n; ++i)
            poly.push_back({r.uniform(0.0, 30.0), r.uniform(0.0, 30.0)});
        auto base = rasterize_contour(poly, 32, 32);
        for (int shift = 1; shift < n; ++shift) {
            std::vector<contour_point> rotated(poly.begin() + shift, poly.end());
            rotated.insert(rotated.end(), poly.begin(), poly.begin() + shift);
            CHECK(rasterize_contour(rotated, 32, 32).count() == base.count());
        }
    }
}

TEST_CASE("convex polygons stay within analytic area +- perimeter") {
    rng r(7);
    for (int trial = 0; trial < 25; ++trial) {
        // convex polygon: random radii around a center, sorted by angle
        double cy = r.uniform(20.0, 28.0), cx = r.uniform(20.0, 28.0);
        double rad = r.uniform(4.0, 14.0);
        int n = 6 + static_cast<int>(r.integer(10));
        std::vector<contour_point> poly;
        for (int i = 0; i < n; ++i) {
            double ang = 2.0 * std::numbers::pi * i / n;
            poly.push_back({cx + rad * std::cos(ang), cy + rad * std::sin(ang)});
        }
        auto mask = rasterize_contour(poly, 48, 48);
        double area = oracle::polygon_area(poly);
        double perimeter = oracle::polygon_perimeter(poly);
        CHECK(std::abs(static_cast<double>(mask.count()) - area) <= perimeter);
    }
}

TEST_CASE("contour text files parse to x/y pairs") {
    auto pts = parse_contour_points("12.5 40.25\n13 41\n\n14.75 42\n");
    REQUIRE(pts.size() == 3);
    CHECK(pts[0].x == 12.5);
    CHECK(pts[0].y == 40.25);
    CHECK(pts[2].x == 14.75);
    CHECK_THROWS_AS(parse_contour_points("12.5\n"), error);
}

TEST_CASE("label simplification keeps only the inner-LV class") {
    image_u16 label(4, 4, 0);
    label(0, 0) = 1;
    label(1, 1) = 2;
    label(2, 2) = 3;
    label(3, 3) = 3;

    auto mask = simplify_acdc_label(label, 3);
    CHECK(mask.count() == 2);
    CHECK(mask.data(2, 2) == 1);
    CHECK(mask.data(3, 3) == 1);
    CHECK(mask.data(1, 1) == 0);

    // absent class: blank contour by design
    CHECK(simplify_acdc_label(label, 9).count() == 0);

    image_u16 all3(4, 4, 3);
    CHECK(simplify_acdc_label(all3, 3).count() == 16);
}
