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

// End-to-end command line for the LV analysis pipeline:
//   ingest -> preprocess -> (roi) -> train/segment -> postproc -> volume -> eval
// `pipeline` chains the per-patient stages across a worker pool.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lvseg/lvseg.hpp"
#include "lvseg/pipeline/config.hpp"
#include "lvseg/pipeline/runner.hpp"

namespace fs = std::filesystem;
using namespace lvseg;

namespace {

std::vector<uint8_t> read_binary(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), errc::missing_file, "cannot open " + path.string());
    return std::vector<uint8_t>((std::istreambuf_iterator<char>(in)),
                                std::istreambuf_iterator<char>());
}

std::vector<fs::path> sorted_entries(const fs::path& dir, bool dirs) {
    require(fs::is_directory(dir), errc::missing_file, dir.string() + " is not a directory");
    std::vector<fs::path> out;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (dirs && e.is_directory()) out.push_back(e.path());
        if (!dirs && e.is_regular_file()) out.push_back(e.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// ingest
// ---------------------------------------------------------------------------

// DICOM layout: one subdirectory per slice, one file per frame, optional
// "<frame-stem>.contour.txt" ground-truth polygons next to the frames.
image_stack ingest_dicom_tree(const fs::path& root, const std::string& patient_id) {
    image_stack stack;
    stack.patient_id = patient_id;
    for (const auto& slice_dir : sorted_entries(root, true)) {
        image_stack::slice sl;
        int frame_index = 0;
        for (const auto& file : sorted_entries(slice_dir, false)) {
            if (file.extension() == ".txt") continue;
            auto parsed = dicom::parse_dicom(read_binary(file));
            sl.frames.push_back(std::move(parsed.pixels));
            sl.meta.push_back(parsed.meta);

            fs::path contour = file;
            contour.replace_extension(".contour.txt");
            if (fs::exists(contour)) {
                std::ifstream in(contour);
                std::stringstream ss;
                ss << in.rdbuf();
                auto pts = parse_contour_points(ss.str());
                sl.masks[frame_index] =
                    rasterize_contour(pts, parsed.meta.rows, parsed.meta.cols);
            }
            ++frame_index;
        }
        require(!sl.frames.empty(), errc::missing_file,
                "no DICOM frames in " + slice_dir.string());
        stack.slices.push_back(std::move(sl));
    }
    require(!stack.slices.empty(), errc::missing_file,
            "no slice directories in " + root.string());
    return stack;
}

image_stack ingest_nifti_pair(const fs::path& image_file, const fs::path& label_file,
                              uint16_t inner_lv_id, bool rotate, double slice_gap_override,
                              const std::string& patient_id) {
    auto vol = nifti::parse_nifti(read_binary(image_file));
    std::optional<nifti::nifti_volume> labels;
    if (!label_file.empty()) {
        labels = nifti::parse_nifti(read_binary(label_file));
        require(labels->slice_count() == vol.slice_count(), errc::shape_mismatch,
                "label volume slice count differs from image volume");
    }

    double gap = slice_gap_override > 0 ? slice_gap_override : vol.spacing_slice;
    image_stack stack;
    stack.patient_id = patient_id;
    for (int z = 0; z < vol.slice_count(); ++z) {
        image_stack::slice sl;
        for (int t = 0; t < vol.frame_count(); ++t) {
            image_u16 img = vol.data[z][t];
            if (rotate) img = rotate180(img);
            image_meta m;
            m.pixel_spacing_row = vol.spacing_row;
            m.pixel_spacing_col = vol.spacing_col;
            m.rows = img.rows();
            m.cols = img.cols();
            m.ipp = {0, 0, gap * z};
            m.iop = {1, 0, 0, 0, 1, 0};
            sl.meta.push_back(m);
            sl.frames.push_back(std::move(img));
        }
        if (labels) {
            int lt = std::min(labels->frame_count(), vol.frame_count());
            for (int t = 0; t < lt; ++t) {
                auto mask = simplify_acdc_label(labels->data[z][t], inner_lv_id);
                if (rotate) mask = rotate180(mask);
                sl.masks[t] = std::move(mask);
            }
        }
        stack.slices.push_back(std::move(sl));
    }
    return stack;
}

// ---------------------------------------------------------------------------
// shared stage helpers
// ---------------------------------------------------------------------------

std::vector<image_d> stack_images(const float_stack& stack) {
    std::vector<image_d> out;
    for (const auto& sl : stack.slices)
        for (const auto& f : sl.frames) out.push_back(f.cast<double>());
    return out;
}

float_stack segment_stack(const float_stack& stack, unet_model& model, double threshold) {
    float_stack out = stack;
    auto probs = predict(model, stack_images(stack));
    size_t idx = 0;
    for (auto& sl : out.slices) {
        sl.masks.clear();
        for (int f = 0; f < sl.frame_count(); ++f) sl.masks[f] = binarize(probs[idx++], threshold);
    }
    return out;
}

float_stack segment_with_oracle(const float_stack& stack, const fs::path& oracle_dir) {
    auto oracle = load_stack<float>(oracle_dir);
    require(oracle.slice_count() == stack.slice_count(), errc::shape_mismatch,
            "oracle study slice count differs from input study");
    float_stack out = stack;
    for (int s = 0; s < out.slice_count(); ++s) {
        out.slices[s].masks.clear();
        for (int f = 0; f < out.slices[s].frame_count(); ++f) {
            auto it = oracle.slices[s].masks.find(f);
            contour_mask mask = it != oracle.slices[s].masks.end()
                                    ? it->second
                                    : contour_mask(out.slices[s].rows(),
                                                   out.slices[s].cols());
            mask.source = contour_mask::origin::predicted;
            out.slices[s].masks[f] = std::move(mask);
        }
    }
    return out;
}

float_stack postproc_stack(const float_stack& stack, const run_config& cfg) {
    float_stack out = stack;
    if (cfg.postproc.use_center_method) {
        std::vector<contour_mask> all;
        for (const auto& sl : out.slices)
            for (const auto& [f, m] : sl.masks) all.push_back(m);
        require(!all.empty(), errc::empty_input, "no predicted masks to post-process");
        std::pair<double, double> center;
        try {
            center = lv_center(all, lv_center_options{cfg.postproc.quantile});
        } catch (const error& e) {
            if (e.code() != errc::no_signal) throw;
            return out; // nothing predicted anywhere: leave the blanks alone
        }
        for (auto& sl : out.slices)
            for (auto& [f, m] : sl.masks)
                m = filter_by_center(m, center, cfg.postproc.connectivity);
    } else {
        for (auto& sl : out.slices)
            for (auto& [f, m] : sl.masks) m = keep_largest(m, cfg.postproc.connectivity);
    }
    return out;
}

volume_result stack_volume(const float_stack& es_stack, const float_stack& ed_stack,
                           const run_config& cfg) {
    auto es = record_from_masks(es_stack);
    auto ed = record_from_masks(ed_stack);
    auto res = patient_volumes(es, ed, cfg.volume.mode);
    if (cfg.volume.fallback)
        res = apply_fallbacks(res, usable_slice_count(es), stack_demographics(es_stack));
    return res;
}

void write_volumes_csv(const fs::path& path,
                       const std::vector<std::pair<std::string, volume_result>>& rows) {
    std::ofstream out(path, std::ios::trunc);
    require(out.good(), errc::io_error, "cannot write " + path.string());
    out << "patient_id,esv_ml,edv_ml,ef,flags\n";
    for (const auto& [id, r] : rows) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%s,%.9g,%.9g,%.9g,", id.c_str(), r.esv_ml, r.edv_ml,
                      r.ef);
        out << buf << volume_flags_str(r.flags) << '\n';
    }
}

struct volume_row {
    double esv = 0, edv = 0, ef = 0;
    std::string flags;
};

std::map<std::string, volume_row> read_volumes_csv(const fs::path& path, bool with_ef) {
    std::ifstream in(path);
    require(in.good(), errc::missing_file, "cannot open " + path.string());
    std::map<std::string, volume_row> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (first && !cells.empty() && cells[0] == "patient_id") {
            first = false;
            continue;
        }
        first = false;
        require(cells.size() >= 3, errc::invalid_argument,
                "volume CSV needs patient_id,esv_ml,edv_ml[,ef]: " + line);
        volume_row r;
        r.esv = std::stod(cells[1]);
        r.edv = std::stod(cells[2]);
        r.ef = cells.size() > 3 && !cells[3].empty() ? std::stod(cells[3])
               : r.edv > 0 ? (r.edv - r.esv) / r.edv
                           : 0.0;
        if (cells.size() > 4) r.flags = cells[4];
        (void)with_ef;
        rows[cells[0]] = r;
    }
    return rows;
}

// ---------------------------------------------------------------------------
// train data collection
// ---------------------------------------------------------------------------

struct labeled_frames {
    std::string patient_id;
    std::vector<training_pair> pairs;
};

labeled_frames collect_pairs(const fs::path& study_dir) {
    auto stack = load_stack<float>(study_dir);
    labeled_frames out;
    out.patient_id = stack.patient_id;
    for (const auto& sl : stack.slices)
        for (const auto& [frame, mask] : sl.masks) {
            training_pair p;
            p.image = sl.frames[frame].cast<double>();
            p.mask = mask;
            out.pairs.push_back(std::move(p));
        }
    return out;
}

void write_history_csv(const fs::path& path, const std::vector<epoch_stats>& history) {
    std::ofstream out(path, std::ios::trunc);
    require(out.good(), errc::io_error, "cannot write " + path.string());
    out << "epoch,loss,val_dsc,val_jsc,val_precision,val_recall,val_f1\n";
    for (const auto& s : history) {
        char buf[200];
        std::snprintf(buf, sizeof buf, "%d,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g\n", s.epoch,
                      s.train_loss, s.val_dsc, s.val_jsc, s.val_precision, s.val_recall,
                      s.val_f1);
        out << buf;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"left-ventricle segmentation and volume estimation pipeline"};
    app.require_subcommand(1);

    std::string config_file, run_dir;
    uint64_t seed_override = 0;
    bool seed_set = false;
    int jobs_override = 0;
    app.add_option("--config", config_file, "JSON config file")->envname("LVSEG_CONFIG");
    app.add_option_function<uint64_t>(
           "--seed", [&](uint64_t v) { seed_override = v; seed_set = true; }, "global RNG seed");
    app.add_option("--jobs", jobs_override, "worker pool size for patient-level stages");
    app.add_option("--run-dir", run_dir, "exact run directory (overrides timestamp naming)");

    // --- ingest ---
    auto* cmd_ingest = app.add_subcommand("ingest", "parse DICOM/NIfTI into a canonical study");
    std::string in_dicom, in_nifti, in_label, in_out, in_patient = "patient";
    int inner_lv_id = 3;
    bool rotate_acdc = false;
    double slice_gap = 0;
    cmd_ingest->add_option("--dicom-dir", in_dicom,
                           "directory of per-slice subdirectories of DICOM frames");
    cmd_ingest->add_option("--nifti", in_nifti, "4-D NIfTI-1 image file");
    cmd_ingest->add_option("--label", in_label, "NIfTI multi-class label volume");
    cmd_ingest->add_option("--inner-lv-id", inner_lv_id, "inner-LV class id in the labels");
    cmd_ingest->add_flag("--rotate180", rotate_acdc, "rotate 180 degrees (RAH -> LPH)");
    cmd_ingest->add_option("--slice-gap", slice_gap, "override slice gap in mm");
    cmd_ingest->add_option("--patient", in_patient, "patient id for the study");
    cmd_ingest->add_option("--out", in_out, "output study directory")->required();

    // --- preprocess ---
    auto* cmd_pre = app.add_subcommand("preprocess", "apply a preprocessing recipe to a study");
    std::string pre_study, pre_out, pre_method, pre_norm;
    int pre_crop = 0;
    double pre_clip = -1;
    std::vector<int> pre_grid;
    cmd_pre->add_option("--study", pre_study, "canonical study directory")->required();
    cmd_pre->add_option("--out", pre_out, "output study directory")->required();
    cmd_pre->add_option("--method", pre_method, "baseline|m1t0|m1t1|m1t2|m2t0|m2t1|m2t2");
    cmd_pre->add_option("--crop", pre_crop, "crop size (176 or 256)");
    cmd_pre->add_option("--clahe-clip", pre_clip, "CLAHE clip limit");
    cmd_pre->add_option("--clahe-grid", pre_grid, "CLAHE tile grid: rows cols")->expected(2);
    cmd_pre->add_option("--norm", pre_norm, "minmax|zscore|none");

    // --- roi ---
    auto* cmd_roi = app.add_subcommand("roi", "motion-driven region-of-interest detection");
    std::string roi_study, roi_out_study, roi_rect_file;
    int roi_rmin = 0, roi_rmax = 0, roi_keep = 0;
    double roi_expand = -1;
    cmd_roi->add_option("--study", roi_study, "preprocessed study directory")->required();
    cmd_roi->add_option("--r-min", roi_rmin, "minimum circle radius (px)");
    cmd_roi->add_option("--r-max", roi_rmax, "maximum circle radius (px)");
    cmd_roi->add_option("--keep", roi_keep, "circles to retain");
    cmd_roi->add_option("--expand", roi_expand, "rectangle expansion fraction per side");
    cmd_roi->add_option("--rect-out", roi_rect_file, "write the rectangle as JSON here");
    cmd_roi->add_option("--apply-out", roi_out_study,
                        "write the ROI-masked study to this directory");

    // --- train ---
    auto* cmd_train = app.add_subcommand("train", "train the segmentation network");
    std::string tr_data, tr_out;
    std::string tr_loss, tr_opt;
    double tr_lr = -1, tr_dropout = -1;
    int tr_batch = 0, tr_epochs = 0, tr_augment = -1, tr_base = 0, tr_layers = 0,
        tr_input = 0;
    bool tr_bn = false;
    cmd_train->add_option("--data", tr_data,
                          "directory of preprocessed per-patient study subdirectories")
        ->required();
    cmd_train->add_option("--out", tr_out, "output directory (weights + history)")->required();
    cmd_train->add_option("--loss", tr_loss, "bce|dice|log_dice|bce_plus_dice");
    cmd_train->add_option("--optimizer", tr_opt, "adam|rmsprop");
    cmd_train->add_option("--lr", tr_lr, "learning rate");
    cmd_train->add_option("--batch", tr_batch, "batch size");
    cmd_train->add_option("--epochs", tr_epochs, "training epochs");
    cmd_train->add_option("--augment", tr_augment, "augmentation factor (0|4|10)");
    cmd_train->add_option("--base-filters", tr_base, "filters at the first conv");
    cmd_train->add_option("--layers", tr_layers, "conv layers: 18|23|28");
    cmd_train->add_option("--input-size", tr_input, "network input size");
    cmd_train->add_option("--dropout", tr_dropout, "dropout rate (0 disables)");
    cmd_train->add_flag("--batch-norm", tr_bn, "insert batch normalization");

    // --- segment ---
    auto* cmd_seg = app.add_subcommand("segment", "predict LV masks for a study");
    std::string seg_study, seg_weights, seg_oracle, seg_out;
    cmd_seg->add_option("--study", seg_study, "preprocessed study directory")->required();
    cmd_seg->add_option("--weights", seg_weights, "trained weight container");
    cmd_seg->add_option("--oracle-masks", seg_oracle,
                        "bypass the network: take masks from this study directory");
    cmd_seg->add_option("--out", seg_out, "output study directory")->required();

    // --- postproc ---
    auto* cmd_post = app.add_subcommand("postproc", "remove extra predicted contours");
    std::string post_study, post_out, post_method;
    cmd_post->add_option("--study", post_study, "predicted-mask study directory")->required();
    cmd_post->add_option("--out", post_out, "output study directory")->required();
    cmd_post->add_option("--method", post_method, "largest|center");

    // --- volume ---
    auto* cmd_vol = app.add_subcommand("volume", "compute ESV/EDV/EF per patient");
    std::string vol_study, vol_es, vol_ed, vol_data, vol_out, vol_mode, vol_fallback;
    cmd_vol->add_option("--study", vol_study, "mask study (single model, both phases)");
    cmd_vol->add_option("--es-study", vol_es, "mask study for the ES path");
    cmd_vol->add_option("--ed-study", vol_ed, "mask study for the ED path");
    cmd_vol->add_option("--data", vol_data, "directory of per-patient mask studies");
    cmd_vol->add_option("--mode", vol_mode, "am|tc integration mode");
    cmd_vol->add_option("--fallback", vol_fallback, "on|off edge-case fallbacks");
    cmd_vol->add_option("--out", vol_out, "output CSV file")->required();

    // --- eval ---
    auto* cmd_eval = app.add_subcommand("eval", "evaluation report against actual volumes");
    std::string ev_pred, ev_actual, ev_out;
    cmd_eval->add_option("--pred", ev_pred, "predicted volumes CSV")->required();
    cmd_eval->add_option("--actual", ev_actual, "actual volumes CSV")->required();
    cmd_eval->add_option("--out", ev_out, "report output directory")->required();

    // --- pipeline ---
    auto* cmd_pipe = app.add_subcommand("pipeline", "run all stages per patient");
    std::string pipe_data, pipe_out, pipe_weights, pipe_oracle, pipe_actual;
    cmd_pipe->add_option("--data", pipe_data,
                         "directory of per-patient canonical study subdirectories")
        ->required();
    cmd_pipe->add_option("--weights", pipe_weights, "trained weight container");
    cmd_pipe->add_option("--oracle-masks", pipe_oracle,
                         "directory of per-patient oracle mask studies");
    cmd_pipe->add_option("--actual", pipe_actual, "actual volumes CSV for the eval stage");
    cmd_pipe->add_option("--out", pipe_out, "output base directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        run_config cfg;
        if (!config_file.empty()) cfg.load_file(config_file);
        if (seed_set) {
            cfg.seed = seed_override;
            cfg.unet.seed = seed_override;
        } else {
            cfg.unet.seed = cfg.seed;
        }
        if (jobs_override > 0) cfg.jobs = jobs_override;

        // CLI overrides on top of the config document
        if (!pre_method.empty()) cfg.preprocess.method = preprocess_method_from(pre_method);
        if (pre_crop > 0) cfg.preprocess.crop_size = pre_crop;
        if (pre_clip >= 0) cfg.preprocess.clahe_clip = pre_clip;
        if (pre_grid.size() == 2) cfg.preprocess.clahe_grid = {pre_grid[0], pre_grid[1]};
        if (!pre_norm.empty())
            cfg.preprocess.intensity_norm = pre_norm == "minmax" ? norm_mode::minmax
                                            : pre_norm == "zscore" ? norm_mode::zscore
                                                                   : norm_mode::none;
        if (roi_rmin > 0) cfg.roi.hough.r_min = roi_rmin;
        if (roi_rmax > 0) cfg.roi.hough.r_max = roi_rmax;
        if (roi_keep > 0) cfg.roi.hough.keep = roi_keep;
        if (roi_expand >= 0) cfg.roi.expand_frac = roi_expand;
        if (!tr_loss.empty()) cfg.train.loss = loss_from(tr_loss);
        if (!tr_opt.empty()) cfg.train.optimizer = optimizer_from(tr_opt);
        if (tr_lr > 0) cfg.train.learning_rate = tr_lr;
        if (tr_batch > 0) cfg.train.batch_size = tr_batch;
        if (tr_epochs > 0) cfg.train.epochs = tr_epochs;
        if (tr_augment >= 0) cfg.train.augment_factor = tr_augment;
        if (tr_base > 0) cfg.unet.base_filters = tr_base;
        if (tr_layers > 0) cfg.unet.conv_layers = tr_layers;
        if (tr_input > 0) cfg.unet.input_size = tr_input;
        if (tr_dropout >= 0) cfg.unet.dropout_rate = tr_dropout;
        if (tr_bn) cfg.unet.batch_norm = true;
        if (!post_method.empty()) cfg.postproc.use_center_method = post_method == "center";
        if (!vol_mode.empty())
            cfg.volume.mode = vol_mode == "tc" ? integration_mode::truncated_cone
                                               : integration_mode::arithmetic_mean;
        if (!vol_fallback.empty()) cfg.volume.fallback = vol_fallback != "off";

        if (*cmd_ingest) {
            require(in_dicom.empty() != in_nifti.empty(), errc::invalid_argument,
                    "ingest needs exactly one of --dicom-dir or --nifti");
            image_stack stack =
                !in_dicom.empty()
                    ? ingest_dicom_tree(in_dicom, in_patient)
                    : ingest_nifti_pair(in_nifti, in_label,
                                        static_cast<uint16_t>(inner_lv_id), rotate_acdc,
                                        slice_gap, in_patient);
            store_study(stack, in_out);
            std::cout << "ingested " << stack.slice_count() << " slices -> " << in_out
                      << "\n";
        } else if (*cmd_pre) {
            auto stack = load_study(pre_study);
            auto processed = preprocess_stack(stack, cfg.preprocess);
            store_stack<float>(processed, pre_out);
            std::cout << "preprocessed " << processed.slice_count() << " slices ("
                      << preprocess_method_name(cfg.preprocess.method) << ") -> " << pre_out
                      << "\n";
        } else if (*cmd_roi) {
            auto stack = load_stack<float>(roi_study);
            std::vector<std::vector<image_d>> slices;
            for (const auto& sl : stack.slices) {
                std::vector<image_d> frames;
                for (const auto& f : sl.frames) frames.push_back(f.cast<double>());
                slices.push_back(std::move(frames));
            }
            auto rect = detect_roi(slices, cfg.roi);
            nlohmann::json j = {{"row_min", rect.row_min},
                                {"row_max", rect.row_max},
                                {"col_min", rect.col_min},
                                {"col_max", rect.col_max}};
            std::cout << j.dump() << "\n";
            if (!roi_rect_file.empty()) {
                std::ofstream out(roi_rect_file, std::ios::trunc);
                require(out.good(), errc::io_error, "cannot write " + roi_rect_file);
                out << j.dump(2) << '\n';
            }
            if (!roi_out_study.empty()) {
                float_stack masked = stack;
                for (auto& sl : masked.slices)
                    for (auto& f : sl.frames) f = apply_roi(f, rect);
                store_stack<float>(masked, roi_out_study);
            }
        } else if (*cmd_train) {
            auto dir = make_run_dir(tr_out, run_dir, cfg);
            std::vector<labeled_frames> patients;
            for (const auto& study : sorted_entries(tr_data, true))
                patients.push_back(collect_pairs(study));
            require(patients.size() >= 3, errc::too_few_patients,
                    "training needs at least 3 patient studies");

            std::vector<std::string> ids;
            for (const auto& p : patients) ids.push_back(p.patient_id);
            auto split = split_patients(ids, cfg.seed);
            auto in = [](const std::vector<std::string>& set, const std::string& id) {
                return std::find(set.begin(), set.end(), id) != set.end();
            };
            std::vector<training_pair> train_set, val_set;
            for (const auto& p : patients) {
                if (in(split.train, p.patient_id))
                    train_set.insert(train_set.end(), p.pairs.begin(), p.pairs.end());
                else if (in(split.val, p.patient_id))
                    val_set.insert(val_set.end(), p.pairs.begin(), p.pairs.end());
            }
            require(!train_set.empty(), errc::empty_input, "no labeled training frames");
            if (cfg.train.augment_factor > 0)
                train_set =
                    augment(train_set, cfg.augment, cfg.train.augment_factor, cfg.seed);

            unet_model model(cfg.unet);
            train_options opts;
            opts.on_epoch = [](const epoch_stats& s) {
                std::cout << "epoch " << s.epoch << " loss " << s.train_loss << " val_dsc "
                          << s.val_dsc << "\n";
            };
            auto history = train(model, train_set, val_set, cfg.train, opts);
            save_weights(model, dir / "weights.lvwt");
            write_history_csv(dir / "history.csv", history);
            std::cout << "trained on " << train_set.size() << " images -> "
                      << (dir / "weights.lvwt").string() << "\n";
        } else if (*cmd_seg) {
            require(seg_weights.empty() != seg_oracle.empty(), errc::invalid_argument,
                    "segment needs exactly one of --weights or --oracle-masks");
            auto stack = load_stack<float>(seg_study);
            float_stack predicted;
            if (!seg_oracle.empty()) {
                predicted = segment_with_oracle(stack, seg_oracle);
            } else {
                unet_model model = load_model(seg_weights);
                predicted = segment_stack(stack, model, cfg.train.threshold);
            }
            store_stack<float>(predicted, seg_out);
            std::cout << "segmented " << predicted.slice_count() << " slices -> " << seg_out
                      << "\n";
        } else if (*cmd_post) {
            auto stack = load_stack<float>(post_study);
            auto filtered = postproc_stack(stack, cfg);
            store_stack<float>(filtered, post_out);
            std::cout << "post-processed -> " << post_out << "\n";
        } else if (*cmd_vol) {
            std::vector<std::pair<std::string, volume_result>> rows;
            if (!vol_data.empty()) {
                auto studies = sorted_entries(vol_data, true);
                rows.resize(studies.size());
                parallel_for(studies.size(), cfg.jobs, [&](size_t i) {
                    auto stack = load_stack<float>(studies[i]);
                    rows[i] = {stack.patient_id, stack_volume(stack, stack, cfg)};
                });
            } else if (!vol_es.empty() || !vol_ed.empty()) {
                require(!vol_es.empty() && !vol_ed.empty(), errc::invalid_argument,
                        "dual-model volume needs both --es-study and --ed-study");
                auto es = load_stack<float>(vol_es);
                auto ed = load_stack<float>(vol_ed);
                rows.push_back({es.patient_id, stack_volume(es, ed, cfg)});
            } else {
                require(!vol_study.empty(), errc::invalid_argument,
                        "volume needs --study, --es-study/--ed-study, or --data");
                auto stack = load_stack<float>(vol_study);
                rows.push_back({stack.patient_id, stack_volume(stack, stack, cfg)});
            }
            std::sort(rows.begin(), rows.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            write_volumes_csv(vol_out, rows);
            std::cout << "volumes for " << rows.size() << " patient(s) -> " << vol_out << "\n";
        } else if (*cmd_eval) {
            auto pred = read_volumes_csv(ev_pred, true);
            auto actual = read_volumes_csv(ev_actual, true);
            std::vector<eval_row> rows;
            for (const auto& [id, p] : pred) {
                eval_row r;
                r.patient_id = id;
                r.pred_esv_ml = p.esv;
                r.pred_edv_ml = p.edv;
                r.pred_ef = p.ef;
                if (auto it = actual.find(id); it != actual.end()) {
                    r.actual_esv_ml = it->second.esv;
                    r.actual_edv_ml = it->second.edv;
                    r.actual_ef = it->second.ef;
                }
                rows.push_back(std::move(r));
            }
            auto dir = make_run_dir(ev_out, run_dir, cfg);
            auto report = build_report(std::move(rows), cfg.ef_bands);
            emit_report(report, dir);
            std::cout << "report for " << report.rows.size() << " patient(s) -> "
                      << dir.string() << "\n";
            if (report.esv_rmse_ml)
                std::cout << "esv_rmse_ml " << *report.esv_rmse_ml << " edv_rmse_ml "
                          << *report.edv_rmse_ml << "\n";
        } else if (*cmd_pipe) {
            require(pipe_weights.empty() || pipe_oracle.empty(), errc::invalid_argument,
                    "pipeline takes --weights or --oracle-masks, not both");
            auto dir = make_run_dir(pipe_out, run_dir, cfg);
            auto studies = sorted_entries(pipe_data, true);
            require(!studies.empty(), errc::missing_file, "no patient studies under " +
                                                              pipe_data);

            std::optional<unet_model> model;
            if (!pipe_weights.empty()) model.emplace(load_model(pipe_weights));

            std::vector<std::pair<std::string, volume_result>> rows(studies.size());
            std::mutex model_mutex;
            parallel_for(studies.size(), cfg.jobs, [&](size_t i) {
                auto raw = load_study(studies[i]);
                auto processed = preprocess_stack(raw, cfg.preprocess);
                float_stack predicted;
                if (!pipe_oracle.empty()) {
                    predicted = segment_with_oracle(
                        processed, fs::path(pipe_oracle) / studies[i].filename());
                } else if (model) {
                    // single shared model: inference is read-only on the
                    // weights but the forward cache is per-instance state
                    std::lock_guard lock(model_mutex);
                    predicted = segment_stack(processed, *model, cfg.train.threshold);
                } else {
                    raise(errc::invalid_argument,
                          "pipeline needs --weights or --oracle-masks");
                }
                auto filtered = postproc_stack(predicted, cfg);
                store_stack<float>(filtered, dir / "masks" / studies[i].filename());
                rows[i] = {filtered.patient_id, stack_volume(filtered, filtered, cfg)};
            });
            std::sort(rows.begin(), rows.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            write_volumes_csv(dir / "volumes.csv", rows);

            if (!pipe_actual.empty()) {
                auto actual = read_volumes_csv(pipe_actual, true);
                std::vector<eval_row> erows;
                for (const auto& [id, p] : rows) {
                    eval_row r;
                    r.patient_id = id;
                    r.pred_esv_ml = p.esv_ml;
                    r.pred_edv_ml = p.edv_ml;
                    r.pred_ef = p.ef;
                    r.flags = p.flags;
                    if (auto it = actual.find(id); it != actual.end()) {
                        r.actual_esv_ml = it->second.esv;
                        r.actual_edv_ml = it->second.edv;
                        r.actual_ef = it->second.ef;
                    }
                    erows.push_back(std::move(r));
                }
                emit_report(build_report(std::move(erows), cfg.ef_bands), dir / "report");
            }
            std::cout << "pipeline finished for " << rows.size() << " patient(s) -> "
                      << dir.string() << "\n";
        }
        return 0;
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    }
}
