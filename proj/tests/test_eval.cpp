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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "lvseg/eval/report.hpp"
#include "lvseg/unet/rng.hpp"

using namespace lvseg;
namespace fs = std::filesystem;

TEST_CASE("rmse basics") {
    CHECK(rmse({1, 2, 3}, {1, 2, 3}) == 0.0);
    CHECK_THAT(rmse({4, 5, 6}, {1, 2, 3}), Catch::Matchers::WithinRel(3.0, 1e-12));
    CHECK_THAT(rmse({1, 2}, {3, 2}), Catch::Matchers::WithinRel(std::sqrt(2.0), 1e-12));
}

TEST_CASE("rmse is invariant under a joint permutation") {
    rng r(5);
    std::vector<double> pred, actual;
    for (int i = 0; i < 20; ++i) {
        pred.push_back(r.uniform(0, 200));
        actual.push_back(r.uniform(0, 200));
    }
    double base = rmse(pred, actual);
    std::vector<size_t> order(pred.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    r.shuffle(order);
    std::vector<double> p2, a2;
    for (size_t i : order) {
        p2.push_back(pred[i]);
        a2.push_back(actual[i]);
    }
    CHECK_THAT(rmse(p2, a2), Catch::Matchers::WithinRel(base, 1e-12));
}

TEST_CASE("rmse rejects bad inputs") {
    CHECK_THROWS_MATCHES(rmse({1}, {1, 2}), error,
                         Catch::Matchers::Predicate<error>([](const error& e) {
                             return e.code() == errc::length_mismatch;
                         }));
    CHECK_THROWS_MATCHES(rmse({}, {}), error,
                         Catch::Matchers::Predicate<error>(
                             [](const error& e) { return e.code() == errc::empty_input; }));
}

TEST_CASE("ef classes are left-closed right-open, last closed") {
    auto bands = default_ef_bands();
    CHECK(ef_class(0.35, bands) == 0);
    CHECK(ef_class(0.40, bands) == 1);
    CHECK(ef_class(0.4999, bands) == 1);
    CHECK(ef_class(0.50, bands) == 2);
    CHECK(ef_class(1.0, bands) == 2);
    CHECK(ef_class(0.0, bands) == 0);
}

TEST_CASE("overlapping, gapped or uncovering bands are invalid") {
    CHECK_THROWS_MATCHES(ef_class(0.5, {{0.0, 0.5}, {0.4, 1.0}}), error,
                         Catch::Matchers::Predicate<error>(
                             [](const error& e) { return e.code() == errc::invalid_bands; }));
    CHECK_THROWS_AS(ef_class(0.5, {{0.0, 0.3}, {0.4, 1.0}}), error);
    CHECK_THROWS_AS(ef_class(0.5, {{0.0, 0.9}}), error);
    CHECK_THROWS_AS(ef_class(0.5, {{0.1, 1.0}}), error);
}

TEST_CASE("confusion counts land at [actual][predicted]") {
    auto m = confusion({0, 1, 2, 2}, {0, 1, 2, 1}, 3);
    CHECK(m.counts[0][0] == 1u);
    CHECK(m.counts[1][1] == 1u);
    CHECK(m.counts[2][2] == 1u);
    CHECK(m.counts[1][2] == 1u); // actual 1, predicted 2
    CHECK_THAT(m.accuracy, Catch::Matchers::WithinRel(0.75, 1e-12));
}

TEST_CASE("perfect predictions give a diagonal matrix with accuracy 1") {
    auto m = confusion({0, 1, 2, 1}, {0, 1, 2, 1}, 3);
    CHECK(m.accuracy == 1.0);
    for (int a = 0; a < 3; ++a)
        for (int p = 0; p < 3; ++p)
            if (a != p) CHECK(m.counts[a][p] == 0u);
}

TEST_CASE("10 items with 7 on the diagonal score 70%") {
    std::vector<int> actual{0, 0, 0, 1, 1, 1, 2, 2, 2, 2};
    std::vector<int> pred{0, 0, 0, 1, 1, 1, 2, 0, 1, 0};
    auto m = confusion(pred, actual, 3);
    size_t diag = m.counts[0][0] + m.counts[1][1] + m.counts[2][2];
    CHECK(diag == 7u);
    CHECK_THAT(m.accuracy, Catch::Matchers::WithinRel(0.7, 1e-12));
}

TEST_CASE("empty or out-of-range confusion inputs fail") {
    CHECK_THROWS_MATCHES(confusion({}, {}, 3), error,
                         Catch::Matchers::Predicate<error>(
                             [](const error& e) { return e.code() == errc::empty_input; }));
    CHECK_THROWS_MATCHES(confusion({3}, {0}, 3), error,
                         Catch::Matchers::Predicate<error>([](const error& e) {
                             return e.code() == errc::out_of_range_class;
                         }));
}

// --- report emission -----------------------------------------------------------

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.push_back("");
        rows.push_back(std::move(cells));
    }
    return rows;
}

eval_report sample_report(int n) {
    std::vector<eval_row> rows;
    rng r(2);
    for (int i = 0; i < n; ++i) {
        eval_row row;
        row.patient_id = "p" + std::to_string(100 + i);
        row.actual_esv_ml = r.uniform(20, 80);
        row.actual_edv_ml = *row.actual_esv_ml + r.uniform(40, 120);
        row.actual_ef = (*row.actual_edv_ml - *row.actual_esv_ml) / *row.actual_edv_ml;
        row.pred_esv_ml = *row.actual_esv_ml + r.uniform(-5, 5);
        row.pred_edv_ml = *row.actual_edv_ml + r.uniform(-8, 8);
        row.pred_ef = (row.pred_edv_ml - row.pred_esv_ml) / row.pred_edv_ml;
        rows.push_back(std::move(row));
    }
    return build_report(std::move(rows));
}

} // namespace

TEST_CASE("an empty report emits headers only") {
    auto dir = fs::temp_directory_path() / "lvseg_report_empty";
    fs::remove_all(dir);
    emit_report(build_report({}), dir);

    auto rows = parse_csv(slurp(dir / "volumes.csv"));
    REQUIRE(rows.size() == 1u);
    CHECK(rows[0][0] == "patient_id");
    CHECK(parse_csv(slurp(dir / "scatter_esv.csv")).size() == 1u);
    CHECK(parse_csv(slurp(dir / "residuals_ef.csv")).size() == 1u);
    fs::remove_all(dir);
}

TEST_CASE("N patients emit N data rows per file and parse back cleanly") {
    auto dir = fs::temp_directory_path() / "lvseg_report_n";
    fs::remove_all(dir);
    auto rep = sample_report(7);
    emit_report(rep, dir);

    for (const char* name : {"volumes.csv", "scatter_esv.csv", "scatter_edv.csv",
                             "scatter_ef.csv", "residuals_esv.csv", "residuals_edv.csv",
                             "residuals_ef.csv"}) {
        auto rows = parse_csv(slurp(dir / name));
        INFO(name);
        REQUIRE(rows.size() == 8u);
        for (size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].size() == rows[0].size());
    }

    // aggregates present and consistent
    auto summary = nlohmann::json::parse(slurp(dir / "summary.json"));
    CHECK(summary.at("patients").get<int>() == 7);
    CHECK(summary.contains("esv_rmse_ml"));
    CHECK(summary.at("ef_accuracy").get<double>() >= 0.0);
    fs::remove_all(dir);
}

TEST_CASE("re-emission is byte-identical") {
    auto dir1 = fs::temp_directory_path() / "lvseg_report_det1";
    auto dir2 = fs::temp_directory_path() / "lvseg_report_det2";
    fs::remove_all(dir1);
    fs::remove_all(dir2);
    auto rep = sample_report(5);
    emit_report(rep, dir1);
    emit_report(rep, dir2);
    for (const char* name : {"volumes.csv", "summary.json", "scatter_ef.csv",
                             "residuals_esv.csv"})
        CHECK(slurp(dir1 / name) == slurp(dir2 / name));
    fs::remove_all(dir1);
    fs::remove_all(dir2);
}

TEST_CASE("report rows sort by patient id and rmse matches a direct computation") {
    std::vector<eval_row> rows;
    for (const char* id : {"zed", "alpha", "mid"}) {
        eval_row r;
        r.patient_id = id;
        r.pred_esv_ml = 50;
        r.actual_esv_ml = 53;
        r.pred_edv_ml = 120;
        r.actual_edv_ml = 116;
        r.pred_ef = 0.58;
        r.actual_ef = 0.54;
        rows.push_back(r);
    }
    auto rep = build_report(std::move(rows));
    CHECK(rep.rows[0].patient_id == "alpha");
    CHECK(rep.rows[2].patient_id == "zed");
    REQUIRE(rep.esv_rmse_ml.has_value());
    CHECK_THAT(*rep.esv_rmse_ml, Catch::Matchers::WithinRel(3.0, 1e-12));
    CHECK_THAT(*rep.edv_rmse_ml, Catch::Matchers::WithinRel(4.0, 1e-12));
    REQUIRE(rep.ef_confusion.has_value());
    CHECK(rep.ef_confusion->accuracy == 1.0); // both EFs in the preserved band
}
