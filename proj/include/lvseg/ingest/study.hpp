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
#ifndef LVSEG_INGEST_STUDY_HPP
#define LVSEG_INGEST_STUDY_HPP

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lvseg/core/error.hpp"
#include "lvseg/core/stack.hpp"

namespace lvseg {

// Canonical on-disk study format: a manifest.json next to one .raw pixel
// file per slice (all frames concatenated, row-major) and an optional .raw
// mask file per slice. Byte layout is documented in docs/study_format.md.

struct study_manifest {
    struct slice_entry {
        std::string file;
        int frames = 0;
        int rows = 0;
        int cols = 0;
        std::vector<image_meta> meta;
        std::optional<std::string> mask_file;
        std::vector<int> mask_frames;
        contour_mask::origin mask_source = contour_mask::origin::ground_truth;
    };

    std::string patient_id;
    std::string pixel_dtype = "u16le"; // or "f32le" for preprocessed stages
    std::vector<slice_entry> slices;
};

namespace detail {

inline const char* sex_str(patient_sex s) {
    switch (s) {
    case patient_sex::male: return "m";
    case patient_sex::female: return "f";
    default: return "unknown";
    }
}
inline patient_sex sex_from(const std::string& s) {
    if (s == "m") return patient_sex::male;
    if (s == "f") return patient_sex::female;
    return patient_sex::unknown;
}
inline const char* phase_str(phase_encoding p) {
    switch (p) {
    case phase_encoding::row: return "row";
    case phase_encoding::col: return "col";
    default: return "unknown";
    }
}
inline phase_encoding phase_from(const std::string& s) {
    if (s == "row") return phase_encoding::row;
    if (s == "col") return phase_encoding::col;
    return phase_encoding::unknown;
}

inline nlohmann::json meta_to_json(const image_meta& m) {
    nlohmann::json j;
    j["pixel_spacing"] = {m.pixel_spacing_row, m.pixel_spacing_col};
    j["rows"] = m.rows;
    j["cols"] = m.cols;
    j["ipp"] = m.ipp;
    j["iop"] = m.iop;
    j["phase_encoding"] = phase_str(m.phase);
    if (m.slice_location_raw) j["slice_location_raw"] = *m.slice_location_raw;
    j["acquisition_index"] = m.acquisition_index;
    if (m.patient_age_years) j["patient_age"] = *m.patient_age_years;
    j["patient_sex"] = sex_str(m.sex);
    return j;
}

inline image_meta meta_from_json(const nlohmann::json& j) {
    image_meta m;
    m.pixel_spacing_row = j.at("pixel_spacing").at(0).get<double>();
    m.pixel_spacing_col = j.at("pixel_spacing").at(1).get<double>();
    m.rows = j.at("rows").get<int>();
    m.cols = j.at("cols").get<int>();
    for (int i = 0; i < 3; ++i) m.ipp[i] = j.at("ipp").at(i).get<double>();
    for (int i = 0; i < 6; ++i) m.iop[i] = j.at("iop").at(i).get<double>();
    m.phase = phase_from(j.at("phase_encoding").get<std::string>());
    if (j.contains("slice_location_raw"))
        m.slice_location_raw = j.at("slice_location_raw").get<double>();
    m.acquisition_index = j.at("acquisition_index").get<int>();
    if (j.contains("patient_age")) m.patient_age_years = j.at("patient_age").get<int>();
    m.sex = sex_from(j.at("patient_sex").get<std::string>());
    return m;
}

template <typename Pixel>
constexpr const char* dtype_name() {
    if constexpr (std::is_same_v<Pixel, uint16_t>) return "u16le";
    else return "f32le";
}

template <typename Pixel>
void write_pixels(std::ofstream& out, const image<Pixel>& img) {
    for (Pixel v : img.raw()) {
        if constexpr (std::is_same_v<Pixel, uint16_t>) {
            uint8_t b[2] = {static_cast<uint8_t>(v & 0xFF), static_cast<uint8_t>(v >> 8)};
            out.write(reinterpret_cast<const char*>(b), 2);
        } else {
            static_assert(sizeof(Pixel) == 4);
            uint32_t bits;
            std::memcpy(&bits, &v, 4);
            uint8_t b[4] = {static_cast<uint8_t>(bits & 0xFF),
                            static_cast<uint8_t>((bits >> 8) & 0xFF),
                            static_cast<uint8_t>((bits >> 16) & 0xFF),
                            static_cast<uint8_t>(bits >> 24)};
            out.write(reinterpret_cast<const char*>(b), 4);
        }
    }
}

template <typename Pixel>
image<Pixel> read_pixels(const std::vector<uint8_t>& buf, size_t offset, int rows, int cols) {
    image<Pixel> img(rows, cols);
    const uint8_t* p = buf.data() + offset;
    for (size_t i = 0; i < img.size(); ++i) {
        if constexpr (std::is_same_v<Pixel, uint16_t>) {
            img.raw()[i] = static_cast<uint16_t>(p[2 * i] | (p[2 * i + 1] << 8));
        } else {
            uint32_t bits = static_cast<uint32_t>(p[4 * i]) |
                            (static_cast<uint32_t>(p[4 * i + 1]) << 8) |
                            (static_cast<uint32_t>(p[4 * i + 2]) << 16) |
                            (static_cast<uint32_t>(p[4 * i + 3]) << 24);
            std::memcpy(&img.raw()[i], &bits, 4);
        }
    }
    return img;
}

inline std::vector<uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), errc::missing_file, "cannot open " + path.string());
    std::vector<uint8_t> buf((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
    return buf;
}

} // namespace detail

template <typename Pixel>
study_manifest store_stack(const basic_stack<Pixel>& stack, const std::filesystem::path& dir) {
    stack.validate();
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    require(!ec && std::filesystem::is_directory(dir), errc::io_error,
            "cannot create study directory " + dir.string());

    study_manifest man;
    man.patient_id = stack.patient_id;
    man.pixel_dtype = detail::dtype_name<Pixel>();

    nlohmann::json jslices = nlohmann::json::array();
    for (int s = 0; s < stack.slice_count(); ++s) {
        const auto& sl = stack.slices[s];
        char name[32];
        std::snprintf(name, sizeof name, "slice_%03d.raw", s);

        std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
        require(out.good(), errc::io_error, "cannot write " + (dir / name).string());
        for (const auto& f : sl.frames) detail::write_pixels<Pixel>(out, f);
        out.close();
        require(out.good(), errc::io_error, "write failed for " + (dir / name).string());

        study_manifest::slice_entry entry;
        entry.file = name;
        entry.frames = sl.frame_count();
        entry.rows = sl.rows();
        entry.cols = sl.cols();
        entry.meta = sl.meta;

        if (!sl.masks.empty()) {
            char mname[40];
            std::snprintf(mname, sizeof mname, "slice_%03d_mask.raw", s);
            std::ofstream mout(dir / mname, std::ios::binary | std::ios::trunc);
            require(mout.good(), errc::io_error, "cannot write " + (dir / mname).string());
            for (const auto& [frame, mask] : sl.masks) {
                require(mask.rows() == sl.rows() && mask.cols() == sl.cols(),
                        errc::shape_mismatch, "mask dims differ from slice dims");
                entry.mask_frames.push_back(frame);
                mout.write(reinterpret_cast<const char*>(mask.data.data()),
                           static_cast<std::streamsize>(mask.data.size()));
            }
            mout.close();
            require(mout.good(), errc::io_error, "write failed for " + (dir / mname).string());
            entry.mask_file = mname;
            entry.mask_source = sl.masks.begin()->second.source;
        }

        nlohmann::json js;
        js["file"] = entry.file;
        js["frames"] = entry.frames;
        js["rows"] = entry.rows;
        js["cols"] = entry.cols;
        nlohmann::json jmeta = nlohmann::json::array();
        for (const auto& m : entry.meta) jmeta.push_back(detail::meta_to_json(m));
        js["meta"] = jmeta;
        if (entry.mask_file) {
            js["mask_file"] = *entry.mask_file;
            js["mask_frames"] = entry.mask_frames;
            js["mask_source"] = entry.mask_source == contour_mask::origin::ground_truth
                                    ? "ground_truth"
                                    : "predicted";
        }
        jslices.push_back(std::move(js));
        man.slices.push_back(std::move(entry));
    }

    nlohmann::json root;
    root["format"] = "lvseg-study";
    root["version"] = 1;
    root["patient_id"] = man.patient_id;
    root["pixel_encoding"] = {{"dtype", man.pixel_dtype}, {"order", "row-major"}};
    root["mask_encoding"] = {{"dtype", "u8"}, {"order", "row-major"}};
    root["slices"] = std::move(jslices);

    std::ofstream mf(dir / "manifest.json", std::ios::trunc);
    require(mf.good(), errc::io_error, "cannot write manifest in " + dir.string());
    mf << root.dump(2) << '\n';
    mf.close();
    require(mf.good(), errc::io_error, "manifest write failed in " + dir.string());
    return man;
}

template <typename Pixel>
basic_stack<Pixel> load_stack(const std::filesystem::path& dir) {
    auto manifest_path = dir / "manifest.json";
    require(std::filesystem::exists(manifest_path), errc::missing_file,
            "no manifest.json in " + dir.string());

    nlohmann::json root;
    try {
        std::ifstream in(manifest_path);
        in >> root;
    } catch (const std::exception& e) {
        raise(errc::manifest_mismatch, std::string("manifest parse failure: ") + e.what());
    }

    require(root.value("format", "") == "lvseg-study", errc::manifest_mismatch,
            "not a study manifest");
    std::string dtype = root.at("pixel_encoding").at("dtype").get<std::string>();
    require(dtype == detail::dtype_name<Pixel>(), errc::manifest_mismatch,
            "manifest pixel dtype " + dtype + " does not match requested " +
                detail::dtype_name<Pixel>());

    basic_stack<Pixel> stack;
    stack.patient_id = root.at("patient_id").get<std::string>();

    for (const auto& js : root.at("slices")) {
        typename basic_stack<Pixel>::slice sl;
        int frames = js.at("frames").get<int>();
        int rows = js.at("rows").get<int>();
        int cols = js.at("cols").get<int>();
        require(frames > 0 && rows > 0 && cols > 0, errc::manifest_mismatch,
                "non-positive slice dims in manifest");

        auto buf = detail::read_file(dir / js.at("file").get<std::string>());
        size_t frame_bytes = static_cast<size_t>(rows) * cols * sizeof(Pixel);
        require(buf.size() == frame_bytes * frames, errc::manifest_mismatch,
                "pixel file " + js.at("file").get<std::string>() + " holds " +
                    std::to_string(buf.size()) + " bytes, manifest implies " +
                    std::to_string(frame_bytes * frames));
        for (int f = 0; f < frames; ++f)
            sl.frames.push_back(detail::read_pixels<Pixel>(buf, f * frame_bytes, rows, cols));

        for (const auto& jm : js.at("meta")) sl.meta.push_back(detail::meta_from_json(jm));
        require(static_cast<int>(sl.meta.size()) == frames, errc::manifest_mismatch,
                "meta entry count differs from frame count");

        if (js.contains("mask_file")) {
            auto mbuf = detail::read_file(dir / js.at("mask_file").get<std::string>());
            std::vector<int> mask_frames = js.at("mask_frames").get<std::vector<int>>();
            size_t mask_bytes = static_cast<size_t>(rows) * cols;
            require(mbuf.size() == mask_bytes * mask_frames.size(), errc::manifest_mismatch,
                    "mask file length does not match manifest");
            auto source = js.value("mask_source", "ground_truth") == std::string("predicted")
                              ? contour_mask::origin::predicted
                              : contour_mask::origin::ground_truth;
            for (size_t i = 0; i < mask_frames.size(); ++i) {
                contour_mask mask(rows, cols, source);
                std::memcpy(mask.data.data(), mbuf.data() + i * mask_bytes, mask_bytes);
                sl.masks[mask_frames[i]] = std::move(mask);
            }
        }
        stack.slices.push_back(std::move(sl));
    }
    stack.validate();
    return stack;
}

inline study_manifest store_study(const image_stack& stack, const std::filesystem::path& dir) {
    return store_stack<uint16_t>(stack, dir);
}
inline image_stack load_study(const std::filesystem::path& dir) {
    return load_stack<uint16_t>(dir);
}

} // namespace lvseg

#endif
