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
#ifndef LVSEG_INGEST_NIFTI_HPP
#define LVSEG_INGEST_NIFTI_HPP

#include <cstdint>
#include <cstring>
#include <vector>

#include "lvseg/core/error.hpp"
#include "lvseg/core/image.hpp"

namespace lvseg::nifti {

// NIfTI-1 single-file subset: little-endian 348-byte header, datatypes
// uint8 / int16 / uint16, dim[0] in {3,4}. Axis order maps the header's
// (x, y, z, t) onto [slice=z][frame=t][row=y][col=x].

inline constexpr int16_t dt_uint8 = 2;
inline constexpr int16_t dt_int16 = 4;
inline constexpr int16_t dt_uint16 = 512;

struct header {
    int32_t sizeof_hdr = 0;
    int16_t dim[8] = {0};
    int16_t datatype = 0;
    int16_t bitpix = 0;
    float pixdim[8] = {0};
    float vox_offset = 0;
    char magic[4] = {0};
};

struct nifti_volume {
    // data[slice][frame], each frame rows x cols
    std::vector<std::vector<image_u16>> data;
    double spacing_col = 1.0; // pixdim[1] (x)
    double spacing_row = 1.0; // pixdim[2] (y)
    double spacing_slice = 1.0; // pixdim[3] (z)

    int slice_count() const { return static_cast<int>(data.size()); }
    int frame_count() const { return data.empty() ? 0 : static_cast<int>(data.front().size()); }
};

namespace detail {

template <typename T>
T read_le(const uint8_t* p) {
    T v;
    std::memcpy(&v, p, sizeof(T));
    return v; // host is little-endian on every supported target
}

} // namespace detail

inline header parse_header(const uint8_t* data, size_t size) {
    require(size >= 348, errc::io_error, "NIfTI input shorter than the 348-byte header");

    header h;
    h.sizeof_hdr = detail::read_le<int32_t>(data + 0);
    for (int i = 0; i < 8; ++i) h.dim[i] = detail::read_le<int16_t>(data + 40 + 2 * i);
    h.datatype = detail::read_le<int16_t>(data + 70);
    h.bitpix = detail::read_le<int16_t>(data + 72);
    for (int i = 0; i < 8; ++i) h.pixdim[i] = detail::read_le<float>(data + 76 + 4 * i);
    h.vox_offset = detail::read_le<float>(data + 108);
    std::memcpy(h.magic, data + 344, 4);

    bool magic_ok = std::memcmp(h.magic, "n+1", 4) == 0 || std::memcmp(h.magic, "ni1", 4) == 0;
    require(magic_ok, errc::bad_magic, "NIfTI magic bytes are invalid");
    require(h.sizeof_hdr == 348, errc::header_dim_mismatch,
            "sizeof_hdr != 348 (byte-swapped headers are not supported)");
    require(h.dim[0] == 3 || h.dim[0] == 4, errc::header_dim_mismatch,
            "dim[0] must be 3 or 4, got " + std::to_string(h.dim[0]));
    for (int i = 1; i <= h.dim[0]; ++i)
        require(h.dim[i] > 0, errc::header_dim_mismatch,
                "dim[" + std::to_string(i) + "] must be positive");
    return h;
}

/// Parse a single-file NIfTI-1 byte stream. For "ni1" header/data pairs the
/// caller is expected to concatenate the .hdr and .img bytes, with
/// vox_offset giving the data offset within the combined stream.
inline nifti_volume parse_nifti(const uint8_t* data, size_t size) {
    header h = parse_header(data, size);

    const int cols = h.dim[1];
    const int rows = h.dim[2];
    const int slices = h.dim[3];
    const int frames = h.dim[0] == 4 ? h.dim[4] : 1;

    size_t bytes_per = 0;
    switch (h.datatype) {
    case dt_uint8: bytes_per = 1; break;
    case dt_int16:
    case dt_uint16: bytes_per = 2; break;
    default:
        raise(errc::unsupported_datatype,
              "NIfTI datatype " + std::to_string(h.datatype) + " is not supported");
    }

    size_t offset = static_cast<size_t>(h.vox_offset);
    if (offset < 348) offset = 348;
    size_t voxels = static_cast<size_t>(cols) * rows * slices * frames;
    require(offset + voxels * bytes_per <= size, errc::header_dim_mismatch,
            "pixel data shorter than header dims require");

    const uint8_t* px = data + offset;
    auto voxel = [&](int x, int y, int z, int t) -> uint16_t {
        size_t idx = static_cast<size_t>(x) +
                     static_cast<size_t>(cols) *
                         (static_cast<size_t>(y) +
                          static_cast<size_t>(rows) *
                              (static_cast<size_t>(z) + static_cast<size_t>(slices) * t));
        if (bytes_per == 1) return px[idx];
        uint16_t raw = static_cast<uint16_t>(px[2 * idx] | (px[2 * idx + 1] << 8));
        if (h.datatype == dt_int16) {
            int16_t s;
            std::memcpy(&s, &raw, 2);
            return s < 0 ? 0 : static_cast<uint16_t>(s);
        }
        return raw;
    };

    nifti_volume out;
    out.spacing_col = h.pixdim[1];
    out.spacing_row = h.pixdim[2];
    out.spacing_slice = h.pixdim[3];
    out.data.resize(slices);
    for (int z = 0; z < slices; ++z) {
        out.data[z].reserve(frames);
        for (int t = 0; t < frames; ++t) {
            image_u16 img(rows, cols);
            for (int y = 0; y < rows; ++y)
                for (int x = 0; x < cols; ++x) img(y, x) = voxel(x, y, z, t);
            out.data[z].push_back(std::move(img));
        }
    }
    return out;
}

inline nifti_volume parse_nifti(const std::vector<uint8_t>& bytes) {
    return parse_nifti(bytes.data(), bytes.size());
}

} // namespace lvseg::nifti

#endif
