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

// Drives the built `lvseg` binary over its external surfaces: exit codes,
// study directories, CSV/JSON outputs. The binary path comes from the
// LVSEG_CLI environment variable (set by ctest).

#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lvseg/ingest/study.hpp"
#include "support/oracles.hpp"

namespace fs = std::filesystem;
using namespace lvseg;

namespace {

std::string cli_path() {
    const char* p = std::getenv("LVSEG_CLI");
    REQUIRE(p != nullptr);
    return p;
}

int run_cli(const std::string& args) {
    std::string cmd = cli_path() + " " + args + " >/dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& p, const std::vector<uint8_t>& bytes) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

// circular contour polygon in pixel coordinates
std::string circle_contour(double cy, double cx, double radius, int points = 48) {
    std::ostringstream out;
    for (int i = 0; i < points; ++i) {
        double ang = 2.0 * std::numbers::pi * i / points;
        out << cx + radius * std::cos(ang) << " " << cy + radius * std::sin(ang) << "\n";
    }
    return out.str();
}

// one patient: `slices` slice directories x 2 frames of 64x64 DICOM files,
// frame 0 = ED (big disc), frame 1 = ES (small disc), with contour files
void make_dicom_patient(const fs::path& root, int slices, double base_radius) {
    for (int s = 0; s < slices; ++s) {
        auto dir = root / ("slice_" + std::to_string(s));
        fs::create_directories(dir);
        double shrink = 1.0 - 0.12 * s; // taper towards the apex
        for (int f = 0; f < 2; ++f) {
            double radius = base_radius * shrink * (f == 0 ? 1.0 : 0.6);
            std::vector<uint16_t> px(64 * 64, 100);
            for (int r = 0; r < 64; ++r)
                for (int c = 0; c < 64; ++c)
                    if ((r - 32.0) * (r - 32.0) + (c - 32.0) * (c - 32.0) <= radius * radius)
                        px[r * 64 + c] = 3000;

            auto b = oracle::standard_dicom(64, 64, "1\\1",
                                            "0\\0\\" + std::to_string(10 * s),
                                            "1\\0\\0\\0\\1\\0");
            b.str_element(0x0010, 0x1010, "AS", "040Y");
            b.str_element(0x0010, 0x0040, "CS", "M");
            b.pixels(px);
            char name[32];
            std::snprintf(name, sizeof name, "frame_%02d.dcm", f);
            write_file(dir / name, b.build());

            std::ofstream contour(dir / ("frame_0" + std::to_string(f) + ".contour.txt"));
            contour << circle_contour(32, 32, radius);
        }
    }
}

struct csv_volumes {
    std::map<std::string, std::array<double, 3>> rows; // esv, edv, ef
};

csv_volumes parse_volumes(const fs::path& file) {
    csv_volumes out;
    std::istringstream in(slurp(file));
    std::string line;
    std::getline(in, line); // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string id, esv, edv, ef;
        std::getline(ls, id, ',');
        std::getline(ls, esv, ',');
        std::getline(ls, edv, ',');
        std::getline(ls, ef, ',');
        out.rows[id] = {std::stod(esv), std::stod(edv), std::stod(ef)};
    }
    return out;
}

} // namespace

TEST_CASE("full stage-by-stage run over crafted DICOM studies") {
    auto ws = fs::temp_directory_path() / "lvseg_cli_ws";
    fs::remove_all(ws);
    fs::create_directories(ws);

    make_dicom_patient(ws / "raw" / "patient_a", 6, 14);
    make_dicom_patient(ws / "raw" / "patient_b", 6, 11);

    // ingest both patients
    REQUIRE(run_cli("ingest --dicom-dir " + (ws / "raw" / "patient_a").string() +
                    " --patient patient_a --out " + (ws / "studies" / "patient_a").string()) ==
            0);
    REQUIRE(run_cli("ingest --dicom-dir " + (ws / "raw" / "patient_b").string() +
                    " --patient patient_b --out " + (ws / "studies" / "patient_b").string()) ==
            0);

    // canonical study round-trip sanity through the library surface
    auto stack = load_study(ws / "studies" / "patient_a");
    CHECK(stack.slice_count() == 6);
    CHECK(stack.slices[0].frame_count() == 2);
    CHECK(stack.slices[0].masks.size() == 2u);

    // preprocess: baseline at 64 px (1mm input: geometric identity)
    for (const char* p : {"patient_a", "patient_b"})
        REQUIRE(run_cli("preprocess --study " + (ws / "studies" / p).string() + " --out " +
                        (ws / "pre" / p).string() + " --method baseline --crop 64") == 0);

    // segment with oracle masks = the preprocessed ground truth
    for (const char* p : {"patient_a", "patient_b"})
        REQUIRE(run_cli("segment --study " + (ws / "pre" / p).string() + " --oracle-masks " +
                        (ws / "pre" / p).string() + " --out " + (ws / "seg" / p).string()) ==
                0);

    // postproc (center method)
    for (const char* p : {"patient_a", "patient_b"})
        REQUIRE(run_cli("postproc --study " + (ws / "seg" / p).string() + " --out " +
                        (ws / "post" / p).string() + " --method center") == 0);

    // volume over the patient set
    REQUIRE(run_cli("volume --data " + (ws / "post").string() + " --mode am --out " +
                    (ws / "volumes.csv").string()) == 0);
    auto vols = parse_volumes(ws / "volumes.csv");
    REQUIRE(vols.rows.count("patient_a") == 1u);
    REQUIRE(vols.rows.count("patient_b") == 1u);

    // independent re-computation: trapezoid over mask areas of the
    // post-processed study
    for (const char* p : {"patient_a", "patient_b"}) {
        auto masks = load_stack<float>(ws / "post" / p);
        std::vector<double> es_area, ed_area, locs;
        for (const auto& sl : masks.slices) {
            double a0 = static_cast<double>(sl.masks.at(0).count());
            double a1 = static_cast<double>(sl.masks.at(1).count());
            ed_area.push_back(std::max(a0, a1));
            es_area.push_back(std::min(a0, a1));
            locs.push_back(sl.meta[0].ipp[2]);
        }
        auto trapezoid = [&](const std::vector<double>& areas) {
            double v = 0;
            for (size_t i = 0; i + 1 < areas.size(); ++i)
                v += (areas[i] + areas[i + 1]) * (locs[i + 1] - locs[i]) / 2.0;
            return v / 1000.0;
        };
        // the taper is monotone so no trimming triggers
        CHECK_THAT(vols.rows[p][0], Catch::Matchers::WithinRel(trapezoid(es_area), 1e-9));
        CHECK_THAT(vols.rows[p][1], Catch::Matchers::WithinRel(trapezoid(ed_area), 1e-9));
    }

    // eval against an actual CSV (the predictions themselves, so RMSE 0)
    {
        std::ofstream actual(ws / "actual.csv");
        actual << "patient_id,esv_ml,edv_ml\n";
        for (const auto& [id, v] : vols.rows)
            actual << id << ',' << v[0] << ',' << v[1] << "\n";
    }
    REQUIRE(run_cli("eval --pred " + (ws / "volumes.csv").string() + " --actual " +
                    (ws / "actual.csv").string() + " --out " + (ws / "report").string() +
                    " --run-dir " + (ws / "report" / "run").string()) == 0);
    auto summary = nlohmann::json::parse(slurp(ws / "report" / "run" / "summary.json"));
    CHECK(summary.at("esv_rmse_ml").get<double>() < 1e-9);
    CHECK(summary.at("ef_accuracy").get<double>() == 1.0);
    CHECK(fs::exists(ws / "report" / "run" / "resolved_config.json"));
    CHECK(fs::exists(ws / "report" / "run" / "scatter_edv.csv"));

    fs::remove_all(ws);
}

TEST_CASE("pipeline subcommand chains the stages per patient") {
    auto ws = fs::temp_directory_path() / "lvseg_cli_pipe";
    fs::remove_all(ws);
    fs::create_directories(ws);

    make_dicom_patient(ws / "raw" / "p1", 6, 13);
    make_dicom_patient(ws / "raw" / "p2", 6, 10);
    for (const char* p : {"p1", "p2"}) {
        REQUIRE(run_cli("ingest --dicom-dir " + (ws / "raw" / p).string() + " --patient " + p +
                        " --out " + (ws / "studies" / p).string()) == 0);
        REQUIRE(run_cli("preprocess --study " + (ws / "studies" / p).string() + " --out " +
                        (ws / "oracle" / p).string() + " --method baseline --crop 64") == 0);
    }

    // /dev/null is not valid JSON: expect a clean validation failure
    CHECK(run_cli("pipeline --data " + (ws / "studies").string() + " --oracle-masks " +
                  (ws / "oracle").string() + " --out " + (ws / "out").string() +
                  " --config /dev/null") == 2);

    REQUIRE(run_cli("pipeline --data " + (ws / "studies").string() + " --oracle-masks " +
                    (ws / "oracle").string() + " --out " + (ws / "out").string() +
                    " --run-dir " + (ws / "out" / "run").string() + " --jobs 2") == 0);
    CHECK(fs::exists(ws / "out" / "run" / "volumes.csv"));
    CHECK(fs::exists(ws / "out" / "run" / "resolved_config.json"));
    auto vols = parse_volumes(ws / "out" / "run" / "volumes.csv");
    CHECK(vols.rows.size() == 2u);
    CHECK(vols.rows.begin()->first == "p1"); // sorted by patient id

    fs::remove_all(ws);
}

TEST_CASE("exit codes distinguish validation, data and success paths") {
    CHECK(run_cli("definitely-not-a-subcommand") == 2);
    CHECK(run_cli("ingest --out /tmp/lvseg_nothing") == 2); // neither dicom nor nifti given
    CHECK(run_cli("volume --study /nonexistent/path --out /tmp/lvseg_nothing.csv") == 3);
    CHECK(run_cli("--help") == 0);
}
