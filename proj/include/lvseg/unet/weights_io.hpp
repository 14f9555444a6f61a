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
#ifndef LVSEG_UNET_WEIGHTS_IO_HPP
#define LVSEG_UNET_WEIGHTS_IO_HPP

#include <cstring>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "lvseg/unet/model.hpp"

namespace lvseg {

// Weight container: "LVWT" magic, format version, a config echo, then per
// array: name, shape, little-endian float32 data. Loading into a model
// whose config differs from the echo is a ConfigMismatch.

namespace detail {

inline constexpr char weights_magic[4] = {'L', 'V', 'W', 'T'};
inline constexpr uint32_t weights_version = 1;

inline void put_u32(std::ofstream& out, uint32_t v) {
    uint8_t b[4] = {static_cast<uint8_t>(v & 0xFF), static_cast<uint8_t>((v >> 8) & 0xFF),
                    static_cast<uint8_t>((v >> 16) & 0xFF), static_cast<uint8_t>(v >> 24)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

inline uint32_t take_u32(std::ifstream& in) {
    uint8_t b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    require(in.good(), errc::io_error, "weight file truncated");
    return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
           (static_cast<uint32_t>(b[2]) << 16) | (static_cast<uint32_t>(b[3]) << 24);
}

inline nlohmann::json config_json(const unet_config& cfg) {
    return {{"input_size", cfg.input_size}, {"base_filters", cfg.base_filters},
            {"conv_layers", cfg.conv_layers}, {"dropout_rate", cfg.dropout_rate},
            {"batch_norm", cfg.batch_norm}, {"seed", cfg.seed}};
}

inline unet_config config_from_json(const nlohmann::json& j) {
    unet_config cfg;
    cfg.input_size = j.at("input_size").get<int>();
    cfg.base_filters = j.at("base_filters").get<int>();
    cfg.conv_layers = j.at("conv_layers").get<int>();
    cfg.dropout_rate = j.at("dropout_rate").get<double>();
    cfg.batch_norm = j.at("batch_norm").get<bool>();
    cfg.seed = j.at("seed").get<uint64_t>();
    return cfg;
}

} // namespace detail

inline void save_weights(const unet_model& model, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    require(out.good(), errc::io_error, "cannot write " + path.string());

    out.write(detail::weights_magic, 4);
    detail::put_u32(out, detail::weights_version);
    std::string cfg = detail::config_json(model.config()).dump();
    detail::put_u32(out, static_cast<uint32_t>(cfg.size()));
    out.write(cfg.data(), static_cast<std::streamsize>(cfg.size()));

    detail::put_u32(out, static_cast<uint32_t>(model.params().size()));
    for (const auto& p : model.params()) {
        detail::put_u32(out, static_cast<uint32_t>(p.name.size()));
        out.write(p.name.data(), static_cast<std::streamsize>(p.name.size()));
        detail::put_u32(out, static_cast<uint32_t>(p.shape.size()));
        for (int d : p.shape) detail::put_u32(out, static_cast<uint32_t>(d));
        static_assert(sizeof(float) == 4);
        out.write(reinterpret_cast<const char*>(p.value.data()),
                  static_cast<std::streamsize>(p.value.size() * 4));
    }
    out.close();
    require(out.good(), errc::io_error, "write failed for " + path.string());
}

/// Read the config echo without touching the arrays.
inline unet_config peek_weights_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), errc::io_error, "cannot open " + path.string());
    char magic[4];
    in.read(magic, 4);
    require(in.good() && std::memcmp(magic, detail::weights_magic, 4) == 0, errc::io_error,
            path.string() + " is not a weight container");
    uint32_t version = detail::take_u32(in);
    require(version == detail::weights_version, errc::io_error,
            "unsupported weight container version " + std::to_string(version));
    uint32_t cfg_len = detail::take_u32(in);
    std::string cfg(cfg_len, '\0');
    in.read(cfg.data(), cfg_len);
    require(in.good(), errc::io_error, "weight file truncated");
    try {
        return detail::config_from_json(nlohmann::json::parse(cfg));
    } catch (const nlohmann::json::exception& e) {
        raise(errc::io_error, std::string("corrupt config echo: ") + e.what());
    }
}

/// Load saved arrays into an existing model. The target's config must
/// match the file's config echo exactly.
inline void load_weights(unet_model& model, const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), errc::io_error, "cannot open " + path.string());
    char magic[4];
    in.read(magic, 4);
    require(in.good() && std::memcmp(magic, detail::weights_magic, 4) == 0, errc::io_error,
            path.string() + " is not a weight container");
    uint32_t version = detail::take_u32(in);
    require(version == detail::weights_version, errc::io_error,
            "unsupported weight container version " + std::to_string(version));

    uint32_t cfg_len = detail::take_u32(in);
    std::string cfg_str(cfg_len, '\0');
    in.read(cfg_str.data(), cfg_len);
    require(in.good(), errc::io_error, "weight file truncated");
    unet_config file_cfg;
    try {
        file_cfg = detail::config_from_json(nlohmann::json::parse(cfg_str));
    } catch (const nlohmann::json::exception& e) {
        raise(errc::io_error, std::string("corrupt config echo: ") + e.what());
    }
    require(file_cfg == model.config(), errc::config_mismatch,
            "weight file was written for a different model configuration");

    uint32_t n_arrays = detail::take_u32(in);
    require(n_arrays == model.params().size(), errc::config_mismatch,
            "array count mismatch in weight container");
    for (auto& p : model.params()) {
        uint32_t name_len = detail::take_u32(in);
        std::string name(name_len, '\0');
        in.read(name.data(), name_len);
        require(in.good() && name == p.name, errc::config_mismatch,
                "array name mismatch: expected " + p.name);
        uint32_t ndim = detail::take_u32(in);
        require(ndim == p.shape.size(), errc::config_mismatch,
                "array rank mismatch for " + p.name);
        for (int d : p.shape)
            require(detail::take_u32(in) == static_cast<uint32_t>(d), errc::config_mismatch,
                    "array shape mismatch for " + p.name);
        in.read(reinterpret_cast<char*>(p.value.data()),
                static_cast<std::streamsize>(p.value.size() * 4));
        require(in.good(), errc::io_error, "weight file truncated in " + p.name);
    }
}

/// Convenience: construct the model a weight file describes, then load it.
inline unet_model load_model(const std::filesystem::path& path) {
    unet_model model(peek_weights_config(path));
    load_weights(model, path);
    return model;
}

} // namespace lvseg

#endif
