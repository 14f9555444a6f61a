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
#ifndef LVSEG_CORE_ERROR_HPP
#define LVSEG_CORE_ERROR_HPP

#include <stdexcept>
#include <string>

namespace lvseg {

enum class errc {
    // ingest
    missing_tag,
    unsupported_transfer_syntax,
    truncated_pixel_data,
    bad_magic,
    unsupported_datatype,
    header_dim_mismatch,
    degenerate_polygon,
    io_error,
    manifest_mismatch,
    missing_file,
    // imgproc
    non_positive_spacing,
    invalid_iop,
    // roi
    too_few_frames,
    shape_mismatch,
    degenerate_map,
    no_circles,
    roi_not_found,
    rect_out_of_bounds,
    // unet
    invalid_config,
    too_few_patients,
    diverged_loss,
    config_mismatch,
    // postproc
    no_signal,
    // volume
    non_square_mask,
    too_few_slices,
    length_mismatch,
    duplicate_location,
    non_positive_edv,
    unknown_sex,
    // eval
    invalid_bands,
    out_of_range_class,
    empty_input,
    // generic
    invalid_argument,
    internal,
};

inline const char* errc_name(errc c) {
    switch (c) {
    case errc::missing_tag: return "MissingTag";
    case errc::unsupported_transfer_syntax: return "UnsupportedTransferSyntax";
    case errc::truncated_pixel_data: return "TruncatedPixelData";
    case errc::bad_magic: return "BadMagic";
    case errc::unsupported_datatype: return "UnsupportedDatatype";
    case errc::header_dim_mismatch: return "HeaderDimMismatch";
    case errc::degenerate_polygon: return "DegeneratePolygon";
    case errc::io_error: return "IoError";
    case errc::manifest_mismatch: return "ManifestMismatch";
    case errc::missing_file: return "MissingFile";
    case errc::non_positive_spacing: return "NonPositiveSpacing";
    case errc::invalid_iop: return "InvalidIop";
    case errc::too_few_frames: return "TooFewFrames";
    case errc::shape_mismatch: return "ShapeMismatch";
    case errc::degenerate_map: return "DegenerateMap";
    case errc::no_circles: return "NoCircles";
    case errc::roi_not_found: return "RoiNotFound";
    case errc::rect_out_of_bounds: return "RectOutOfBounds";
    case errc::invalid_config: return "InvalidConfig";
    case errc::too_few_patients: return "TooFewPatients";
    case errc::diverged_loss: return "DivergedLoss";
    case errc::config_mismatch: return "ConfigMismatch";
    case errc::no_signal: return "NoSignal";
    case errc::non_square_mask: return "NonSquareMask";
    case errc::too_few_slices: return "TooFewSlices";
    case errc::length_mismatch: return "LengthMismatch";
    case errc::duplicate_location: return "DuplicateLocation";
    case errc::non_positive_edv: return "NonPositiveEDV";
    case errc::unknown_sex: return "UnknownSex";
    case errc::invalid_bands: return "InvalidBands";
    case errc::out_of_range_class: return "OutOfRangeClass";
    case errc::empty_input: return "Empty";
    case errc::invalid_argument: return "InvalidArgument";
    case errc::internal: return "Internal";
    }
    return "Unknown";
}

/// Process exit code the CLI maps an error class onto.
/// 2 = validation error (bad arguments, bad configuration),
/// 3 = data error (malformed or inconsistent input data),
/// 4 = internal error.
inline int errc_exit_code(errc c) {
    switch (c) {
    case errc::invalid_config:
    case errc::invalid_bands:
    case errc::invalid_argument:
    case errc::config_mismatch:
        return 2;
    case errc::internal:
    case errc::diverged_loss:
        return 4;
    default:
        return 3;
    }
}

class error : public std::runtime_error {
public:
    error(errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    errc code() const { return code_; }
    int exit_code() const { return errc_exit_code(code_); }

private:
    errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& what) { throw error(code, what); }

inline void require(bool cond, errc code, const std::string& what) {
    if (!cond) raise(code, what);
}

} // namespace lvseg

#endif
