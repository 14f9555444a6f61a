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
#ifndef LVSEG_INGEST_DICOM_HPP
#define LVSEG_INGEST_DICOM_HPP

#include <cstdint>
#include <cstring>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lvseg/core/error.hpp"
#include "lvseg/core/image.hpp"
#include "lvseg/core/meta.hpp"

namespace lvseg::dicom {

// Deliberate subset reader: explicit VR little endian, uncompressed,
// single-frame, 16-bit grayscale. The pipeline needs six tags, not a
// conformance suite; everything outside the subset is a hard error.

struct tag {
    uint16_t group = 0;
    uint16_t element = 0;

    friend auto operator<=>(const tag&, const tag&) = default;

    std::string str() const {
        char buf[16];
        std::snprintf(buf, sizeof buf, "(%04X,%04X)", group, element);
        return buf;
    }
};

inline constexpr tag tag_rows{0x0028, 0x0010};
inline constexpr tag tag_cols{0x0028, 0x0011};
inline constexpr tag tag_pixel_spacing{0x0028, 0x0030};
inline constexpr tag tag_ipp{0x0020, 0x0032};
inline constexpr tag tag_iop{0x0020, 0x0037};
inline constexpr tag tag_pixel_data{0x7FE0, 0x0010};
inline constexpr tag tag_phase_encoding{0x0018, 0x1312};
inline constexpr tag tag_slice_location{0x0020, 0x1041};
inline constexpr tag tag_patient_age{0x0010, 0x1010};
inline constexpr tag tag_patient_sex{0x0010, 0x0040};
inline constexpr tag tag_acquisition_number{0x0020, 0x0012};
inline constexpr tag tag_transfer_syntax{0x0002, 0x0010};
inline constexpr tag tag_bits_allocated{0x0028, 0x0100};

inline constexpr const char* explicit_vr_le_uid = "1.2.840.10008.1.2.1";

struct element {
    tag t;
    std::string vr;
    std::vector<uint8_t> value;
};

struct dicom_image {
    image_meta meta;
    image_u16 pixels;
};

namespace detail {

class cursor {
public:
    cursor(const uint8_t* p, size_t n) : p_(p), n_(n) {}

    size_t pos() const { return i_; }
    size_t remaining() const { return n_ - i_; }
    bool done() const { return i_ >= n_; }

    uint16_t u16() {
        need(2);
        uint16_t v = static_cast<uint16_t>(p_[i_]) | (static_cast<uint16_t>(p_[i_ + 1]) << 8);
        i_ += 2;
        return v;
    }
    uint32_t u32() {
        need(4);
        uint32_t v = 0;
        for (int k = 3; k >= 0; --k) v = (v << 8) | p_[i_ + k];
        i_ += 4;
        return v;
    }
    std::vector<uint8_t> bytes(size_t n) {
        need(n);
        std::vector<uint8_t> out(p_ + i_, p_ + i_ + n);
        i_ += n;
        return out;
    }
    void skip(size_t n) {
        need(n);
        i_ += n;
    }

private:
    void need(size_t n) const {
        require(i_ + n <= n_, errc::io_error, "unexpected end of DICOM stream");
    }

    const uint8_t* p_;
    size_t n_;
    size_t i_ = 0;
};

inline bool vr_has_long_length(const std::string& vr) {
    return vr == "OB" || vr == "OW" || vr == "OF" || vr == "SQ" || vr == "UT" || vr == "UN";
}

inline std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \0", 0, 2);
    if (a == std::string::npos) return {};
    size_t b = s.find_last_not_of(" \0", std::string::npos, 2);
    return s.substr(a, b - a + 1);
}

inline std::vector<double> parse_ds(const std::string& raw, const tag& t, size_t expect) {
    std::vector<double> out;
    size_t start = 0;
    while (start <= raw.size()) {
        size_t end = raw.find('\\', start);
        std::string piece = raw.substr(start, end == std::string::npos ? std::string::npos
                                                                       : end - start);
        piece = trim(piece);
        if (!piece.empty()) {
            try {
                size_t used = 0;
                double v = std::stod(piece, &used);
                require(used == piece.size(), errc::invalid_argument,
                        t.str() + " has a malformed decimal string");
                out.push_back(v);
            } catch (const std::exception&) {
                raise(errc::invalid_argument, t.str() + " has a malformed decimal string");
            }
        }
        if (end == std::string::npos) break;
        start = end + 1;
    }
    require(out.size() == expect, errc::invalid_argument,
            t.str() + " expected " + std::to_string(expect) + " values");
    return out;
}

} // namespace detail

/// Walk every element of an explicit-VR little-endian stream. The optional
/// 128-byte preamble + "DICM" marker is detected and skipped; the file meta
/// group, when present, must declare explicit VR little endian.
inline std::map<tag, element> read_elements(const uint8_t* data, size_t size) {
    detail::cursor cur(data, size);
    if (size >= 132 && std::memcmp(data + 128, "DICM", 4) == 0) cur.skip(132);

    std::map<tag, element> out;
    while (!cur.done()) {
        element el;
        el.t.group = cur.u16();
        el.t.element = cur.u16();
        auto vr_bytes = cur.bytes(2);
        el.vr = std::string(vr_bytes.begin(), vr_bytes.end());
        bool vr_ok = std::isupper(static_cast<unsigned char>(el.vr[0])) &&
                     std::isupper(static_cast<unsigned char>(el.vr[1]));
        require(vr_ok, errc::unsupported_transfer_syntax,
                "element " + el.t.str() + " is not explicit VR little endian");
        require(el.vr != "SQ", errc::unsupported_transfer_syntax,
                "sequences are outside the supported DICOM subset");

        uint32_t len = 0;
        if (detail::vr_has_long_length(el.vr)) {
            cur.skip(2);
            len = cur.u32();
        } else {
            len = cur.u16();
        }
        require(len != 0xFFFFFFFFu, errc::unsupported_transfer_syntax,
                "undefined-length values are outside the supported DICOM subset");
        if (el.t == tag_pixel_data && len > cur.remaining())
            raise(errc::truncated_pixel_data, "PixelData extends past end of file");
        el.value = cur.bytes(len);
        out[el.t] = std::move(el);
    }

    if (auto it = out.find(tag_transfer_syntax); it != out.end()) {
        std::string uid(it->second.value.begin(), it->second.value.end());
        while (!uid.empty() && (uid.back() == '\0' || uid.back() == ' ')) uid.pop_back();
        require(uid == explicit_vr_le_uid, errc::unsupported_transfer_syntax,
                "transfer syntax " + uid + " is not supported");
    }
    return out;
}

/// Parse one single-frame DICOM file into metadata plus a row-major pixel
/// array. The first pixel of PixelData maps to (row 0, col 0); bytes within
/// a row are never reordered.
inline dicom_image parse_dicom(const uint8_t* data, size_t size) {
    auto elements = read_elements(data, size);

    auto get = [&](tag t) -> const element& {
        auto it = elements.find(t);
        require(it != elements.end(), errc::missing_tag, "required tag " + t.str() + " is absent");
        return it->second;
    };
    auto get_opt = [&](tag t) -> const element* {
        auto it = elements.find(t);
        return it == elements.end() ? nullptr : &it->second;
    };
    auto as_string = [](const element& el) {
        std::string s(el.value.begin(), el.value.end());
        while (!s.empty() && (s.back() == '\0' || s.back() == ' ')) s.pop_back();
        return s;
    };
    auto as_u16 = [](const element& el) {
        require(el.value.size() >= 2, errc::invalid_argument,
                el.t.str() + " must hold an unsigned short");
        return static_cast<uint16_t>(el.value[0] | (el.value[1] << 8));
    };

    dicom_image out;
    image_meta& m = out.meta;

    m.rows = as_u16(get(tag_rows));
    m.cols = as_u16(get(tag_cols));
    require(m.rows > 0 && m.cols > 0, errc::invalid_argument, "Rows/Columns must be positive");

    auto spacing = detail::parse_ds(as_string(get(tag_pixel_spacing)), tag_pixel_spacing, 2);
    m.pixel_spacing_row = spacing[0];
    m.pixel_spacing_col = spacing[1];

    auto ipp = detail::parse_ds(as_string(get(tag_ipp)), tag_ipp, 3);
    std::copy(ipp.begin(), ipp.end(), m.ipp.begin());
    auto iop = detail::parse_ds(as_string(get(tag_iop)), tag_iop, 6);
    std::copy(iop.begin(), iop.end(), m.iop.begin());

    if (const element* el = get_opt(tag_bits_allocated))
        require(as_u16(*el) == 16, errc::unsupported_transfer_syntax,
                "only 16-bit PixelData is supported");

    if (const element* el = get_opt(tag_phase_encoding)) {
        std::string v = as_string(*el);
        if (v == "ROW")
            m.phase = phase_encoding::row;
        else if (v == "COL")
            m.phase = phase_encoding::col;
        else
            m.phase = phase_encoding::unknown;
    }
    if (const element* el = get_opt(tag_slice_location)) {
        auto v = detail::parse_ds(as_string(*el), tag_slice_location, 1);
        m.slice_location_raw = v[0];
    }
    if (const element* el = get_opt(tag_patient_age)) {
        std::string v = as_string(*el);
        require(!v.empty(), errc::invalid_argument, "PatientAge is empty");
        char unit = v.back();
        require(unit == 'Y', errc::invalid_argument,
                "PatientAge unit '" + std::string(1, unit) + "' not supported (years only)");
        try {
            m.patient_age_years = std::stoi(v.substr(0, v.size() - 1));
        } catch (const std::exception&) {
            raise(errc::invalid_argument, "PatientAge is malformed: " + v);
        }
    }
    if (const element* el = get_opt(tag_patient_sex)) {
        std::string v = as_string(*el);
        m.sex = v == "M" ? patient_sex::male
                         : (v == "F" ? patient_sex::female : patient_sex::unknown);
    }
    if (const element* el = get_opt(tag_acquisition_number)) {
        std::string v = detail::trim(as_string(*el));
        if (!v.empty()) {
            try {
                m.acquisition_index = std::stoi(v);
            } catch (const std::exception&) {
                raise(errc::invalid_argument, "AcquisitionNumber is malformed: " + v);
            }
        }
    }

    const element& px = get(tag_pixel_data);
    size_t expected = static_cast<size_t>(m.rows) * m.cols * 2;
    require(px.value.size() == expected, errc::truncated_pixel_data,
            "PixelData holds " + std::to_string(px.value.size()) + " bytes, expected " +
                std::to_string(expected));

    out.pixels = image_u16(m.rows, m.cols);
    for (size_t i = 0; i < out.pixels.size(); ++i)
        out.pixels.raw()[i] =
            static_cast<uint16_t>(px.value[2 * i] | (px.value[2 * i + 1] << 8));
    return out;
}

inline dicom_image parse_dicom(const std::vector<uint8_t>& bytes) {
    return parse_dicom(bytes.data(), bytes.size());
}

} // namespace lvseg::dicom

#endif
