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
#ifndef LVSEG_PIPELINE_CONFIG_HPP
#define LVSEG_PIPELINE_CONFIG_HPP

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "lvseg/eval/metrics.hpp"
#include "lvseg/imgproc/preprocess.hpp"
#include "lvseg/postproc/filter.hpp"
#include "lvseg/roi/detect.hpp"
#include "lvseg/unet/train.hpp"
#include "lvseg/volume/volume.hpp"

namespace lvseg {

/// Resolved run configuration: config-file values overlaid with CLI
/// overrides. Every experiment run writes a copy of the resolved document
/// next to its outputs.
struct run_config {
    uint64_t seed = 1234;
    int jobs = 1;

    preprocess_recipe preprocess;
    roi_options roi;
    unet_config unet;
    train_hyper train;
    augment_config augment;
    struct {
        bool use_center_method = true; // center rule is the paper's final pick
        int connectivity = 8;
        double quantile = 0.9;
    } postproc;
    struct {
        integration_mode mode = integration_mode::arithmetic_mean;
        bool fallback = true;
    } volume;
    std::vector<ef_band> ef_bands = default_ef_bands();

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["seed"] = seed;
        j["jobs"] = jobs;
        j["preprocess"] = {{"method", preprocess_method_name(preprocess.method)},
                           {"crop", preprocess.crop_size},
                           {"clahe_clip", preprocess.clahe_clip},
                           {"clahe_grid", {preprocess.clahe_grid.first,
                                           preprocess.clahe_grid.second}},
                           {"norm", preprocess.intensity_norm == norm_mode::minmax ? "minmax"
                                    : preprocess.intensity_norm == norm_mode::zscore
                                        ? "zscore"
                                        : "none"}};
        j["roi"] = {{"r_min", roi.hough.r_min},
                    {"r_max", roi.hough.r_max},
                    {"keep", roi.hough.keep},
                    {"expand", roi.expand_frac}};
        j["unet"] = {{"input_size", unet.input_size},
                     {"base_filters", unet.base_filters},
                     {"conv_layers", unet.conv_layers},
                     {"dropout", unet.dropout_rate},
                     {"batch_norm", unet.batch_norm}};
        j["train"] = {{"loss", loss_name(train.loss)},
                      {"optimizer", optimizer_name(train.optimizer)},
                      {"learning_rate", train.learning_rate},
                      {"batch_size", train.batch_size},
                      {"epochs", train.epochs},
                      {"augment_factor", train.augment_factor},
                      {"threshold", train.threshold},
                      {"flip", augment.flip}};
        j["postproc"] = {{"method", postproc.use_center_method ? "center" : "largest"},
                         {"connectivity", postproc.connectivity},
                         {"quantile", postproc.quantile}};
        j["volume"] = {{"mode", volume.mode == integration_mode::arithmetic_mean ? "am" : "tc"},
                       {"fallback", volume.fallback}};
        nlohmann::json bands = nlohmann::json::array();
        for (const auto& b : ef_bands) bands.push_back({b.lo, b.hi});
        j["eval"] = {{"ef_bands", bands}};
        return j;
    }

    void merge_json(const nlohmann::json& j) {
        if (j.contains("seed")) seed = j.at("seed").get<uint64_t>();
        if (j.contains("jobs")) jobs = j.at("jobs").get<int>();
        if (auto it = j.find("preprocess"); it != j.end()) {
            const auto& p = *it;
            if (p.contains("method"))
                preprocess.method = preprocess_method_from(p.at("method").get<std::string>());
            if (p.contains("crop")) preprocess.crop_size = p.at("crop").get<int>();
            if (p.contains("clahe_clip"))
                preprocess.clahe_clip = p.at("clahe_clip").get<double>();
            if (p.contains("clahe_grid"))
                preprocess.clahe_grid = {p.at("clahe_grid").at(0).get<int>(),
                                         p.at("clahe_grid").at(1).get<int>()};
            if (p.contains("norm")) {
                std::string n = p.at("norm").get<std::string>();
                preprocess.intensity_norm = n == "minmax" ? norm_mode::minmax
                                            : n == "zscore" ? norm_mode::zscore
                                                            : norm_mode::none;
            }
        }
        if (auto it = j.find("roi"); it != j.end()) {
            const auto& p = *it;
            if (p.contains("r_min")) roi.hough.r_min = p.at("r_min").get<int>();
            if (p.contains("r_max")) roi.hough.r_max = p.at("r_max").get<int>();
            if (p.contains("keep")) roi.hough.keep = p.at("keep").get<int>();
            if (p.contains("expand")) roi.expand_frac = p.at("expand").get<double>();
        }
        if (auto it = j.find("unet"); it != j.end()) {
            const auto& p = *it;
            if (p.contains("input_size")) unet.input_size = p.at("input_size").get<int>();
            if (p.contains("base_filters")) unet.base_filters = p.at("base_filters").get<int>();
            if (p.contains("conv_layers")) unet.conv_layers = p.at("conv_layers").get<int>();
            if (p.contains("dropout")) unet.dropout_rate = p.at("dropout").get<double>();
            if (p.contains("batch_norm")) unet.batch_norm = p.at("batch_norm").get<bool>();
        }
        if (auto it = j.find("train"); it != j.end()) {
            const auto& p = *it;
            if (p.contains("loss")) train.loss = loss_from(p.at("loss").get<std::string>());
            if (p.contains("optimizer"))
                train.optimizer = optimizer_from(p.at("optimizer").get<std::string>());
            if (p.contains("learning_rate"))
                train.learning_rate = p.at("learning_rate").get<double>();
            if (p.contains("batch_size")) train.batch_size = p.at("batch_size").get<int>();
            if (p.contains("epochs")) train.epochs = p.at("epochs").get<int>();
            if (p.contains("augment_factor"))
                train.augment_factor = p.at("augment_factor").get<int>();
            if (p.contains("threshold")) train.threshold = p.at("threshold").get<double>();
            if (p.contains("flip")) augment.flip = p.at("flip").get<bool>();
        }
        if (auto it = j.find("postproc"); it != j.end()) {
            const auto& p = *it;
            if (p.contains("method"))
                postproc.use_center_method = p.at("method").get<std::string>() == "center";
            if (p.contains("connectivity"))
                postproc.connectivity = p.at("connectivity").get<int>();
            if (p.contains("quantile")) postproc.quantile = p.at("quantile").get<double>();
        }
        if (auto it = j.find("volume"); it != j.end()) {
            const auto& p = *it;
            if (p.contains("mode"))
                volume.mode = p.at("mode").get<std::string>() == "tc"
                                  ? integration_mode::truncated_cone
                                  : integration_mode::arithmetic_mean;
            if (p.contains("fallback")) volume.fallback = p.at("fallback").get<bool>();
        }
        if (auto it = j.find("eval"); it != j.end() && it->contains("ef_bands")) {
            ef_bands.clear();
            for (const auto& b : it->at("ef_bands"))
                ef_bands.push_back({b.at(0).get<double>(), b.at(1).get<double>()});
            validate_bands(ef_bands);
        }
    }

    void load_file(const std::filesystem::path& path) {
        std::ifstream in(path);
        require(in.good(), errc::missing_file, "cannot open config " + path.string());
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            raise(errc::invalid_config, "config parse failure: " + std::string(e.what()));
        }
        merge_json(j);
    }
};

/// FNV-1a over the resolved config document; names the run directory.
inline std::string config_hash(const run_config& cfg) {
    std::string s = cfg.to_json().dump();
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%08x", static_cast<uint32_t>(h ^ (h >> 32)));
    return buf;
}

inline std::string utc_stamp() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d%02d%02d-%02d%02d%02d", tm.tm_year + 1900,
                  tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec);
    return buf;
}

/// Experiment outputs land under <out>/<timestamp>-<confighash>/ unless an
/// explicit run dir overrides the naming. A resolved-config copy is written
/// inside for reproducibility.
inline std::filesystem::path make_run_dir(const std::filesystem::path& out_base,
                                          const std::filesystem::path& run_dir_override,
                                          const run_config& cfg) {
    std::filesystem::path dir = !run_dir_override.empty()
                                    ? run_dir_override
                                    : out_base / (utc_stamp() + "-" + config_hash(cfg));
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    require(std::filesystem::is_directory(dir), errc::io_error,
            "cannot create run directory " + dir.string());
    std::ofstream out(dir / "resolved_config.json", std::ios::trunc);
    require(out.good(), errc::io_error, "cannot write resolved config");
    out << cfg.to_json().dump(2) << '\n';
    return dir;
}

} // namespace lvseg

#endif
