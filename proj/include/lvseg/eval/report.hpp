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
#ifndef LVSEG_EVAL_REPORT_HPP
#define LVSEG_EVAL_REPORT_HPP

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lvseg/eval/metrics.hpp"
#include "lvseg/volume/volume.hpp"

namespace lvseg {

struct eval_row {
    std::string patient_id;
    double pred_esv_ml = 0;
    double pred_edv_ml = 0;
    double pred_ef = 0;
    std::optional<double> actual_esv_ml;
    std::optional<double> actual_edv_ml;
    std::optional<double> actual_ef;
    unsigned flags = 0;
};

struct eval_report {
    std::vector<eval_row> rows; // sorted by patient id on construction
    std::optional<double> esv_rmse_ml;
    std::optional<double> edv_rmse_ml;
    std::optional<double> ef_rmse;
    std::optional<confusion_matrix> ef_confusion;
    std::vector<ef_band> bands = default_ef_bands();
};

/// Assemble the report: residual aggregates and the EF-class confusion
/// matrix are filled in only over rows that carry actual volumes.
inline eval_report build_report(std::vector<eval_row> rows,
                                std::vector<ef_band> bands = default_ef_bands()) {
    validate_bands(bands);
    std::sort(rows.begin(), rows.end(),
              [](const eval_row& a, const eval_row& b) { return a.patient_id < b.patient_id; });

    eval_report rep;
    rep.bands = bands;

    std::vector<double> pe, ae, pd, ad, pf, af;
    std::vector<int> pc, ac;
    for (const auto& r : rows) {
        if (r.actual_esv_ml && r.actual_edv_ml) {
            pe.push_back(r.pred_esv_ml);
            ae.push_back(*r.actual_esv_ml);
            pd.push_back(r.pred_edv_ml);
            ad.push_back(*r.actual_edv_ml);
            if (r.actual_ef) {
                pf.push_back(r.pred_ef);
                af.push_back(*r.actual_ef);
                pc.push_back(ef_class(std::clamp(r.pred_ef, 0.0, 1.0), bands));
                ac.push_back(ef_class(std::clamp(*r.actual_ef, 0.0, 1.0), bands));
            }
        }
    }
    if (!pe.empty()) {
        rep.esv_rmse_ml = rmse(pe, ae);
        rep.edv_rmse_ml = rmse(pd, ad);
    }
    if (!pf.empty()) {
        rep.ef_rmse = rmse(pf, af);
        rep.ef_confusion = confusion(pc, ac, static_cast<int>(bands.size()));
    }
    rep.rows = std::move(rows);
    return rep;
}

namespace detail {

inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

inline std::ofstream open_out(const std::filesystem::path& p) {
    std::ofstream out(p, std::ios::trunc);
    require(out.good(), errc::io_error, "cannot write " + p.string());
    return out;
}

inline void emit_pair_csv(const std::filesystem::path& path, const eval_report& rep,
                          double eval_row::* pred, std::optional<double> eval_row::* actual,
                          bool residual) {
    auto out = open_out(path);
    out << (residual ? "patient_id,residual\n" : "patient_id,actual,predicted\n");
    for (const auto& r : rep.rows) {
        if (!(r.*actual)) continue;
        if (residual)
            out << r.patient_id << ',' << fmt(r.*pred - *(r.*actual)) << '\n';
        else
            out << r.patient_id << ',' << fmt(*(r.*actual)) << ',' << fmt(r.*pred) << '\n';
    }
}

} // namespace detail

/// Write the plot-ready report files: volumes.csv, summary.json, and the
/// scatter_*/residuals_* CSV pairs for ESV, EDV and EF. Output is
/// deterministic for identical input.
inline void emit_report(const eval_report& rep, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    require(std::filesystem::is_directory(dir), errc::io_error,
            "cannot create report directory " + dir.string());

    {
        auto out = detail::open_out(dir / "volumes.csv");
        out << "patient_id,esv_ml,edv_ml,ef,actual_esv_ml,actual_edv_ml,actual_ef,flags\n";
        for (const auto& r : rep.rows) {
            out << r.patient_id << ',' << detail::fmt(r.pred_esv_ml) << ','
                << detail::fmt(r.pred_edv_ml) << ',' << detail::fmt(r.pred_ef) << ',';
            out << (r.actual_esv_ml ? detail::fmt(*r.actual_esv_ml) : "") << ',';
            out << (r.actual_edv_ml ? detail::fmt(*r.actual_edv_ml) : "") << ',';
            out << (r.actual_ef ? detail::fmt(*r.actual_ef) : "") << ',';
            out << volume_flags_str(r.flags) << '\n';
        }
    }

    {
        nlohmann::json j;
        j["patients"] = rep.rows.size();
        if (rep.esv_rmse_ml) j["esv_rmse_ml"] = *rep.esv_rmse_ml;
        if (rep.edv_rmse_ml) j["edv_rmse_ml"] = *rep.edv_rmse_ml;
        if (rep.ef_rmse) j["ef_rmse"] = *rep.ef_rmse;
        if (rep.ef_confusion) {
            j["ef_confusion"] = rep.ef_confusion->counts;
            j["ef_accuracy"] = rep.ef_confusion->accuracy;
        }
        nlohmann::json jb = nlohmann::json::array();
        for (const auto& b : rep.bands) jb.push_back({b.lo, b.hi});
        j["ef_bands"] = jb;
        auto out = detail::open_out(dir / "summary.json");
        out << j.dump(2) << '\n';
    }

    detail::emit_pair_csv(dir / "scatter_esv.csv", rep, &eval_row::pred_esv_ml,
                          &eval_row::actual_esv_ml, false);
    detail::emit_pair_csv(dir / "scatter_edv.csv", rep, &eval_row::pred_edv_ml,
                          &eval_row::actual_edv_ml, false);
    detail::emit_pair_csv(dir / "scatter_ef.csv", rep, &eval_row::pred_ef,
                          &eval_row::actual_ef, false);
    detail::emit_pair_csv(dir / "residuals_esv.csv", rep, &eval_row::pred_esv_ml,
                          &eval_row::actual_esv_ml, true);
    detail::emit_pair_csv(dir / "residuals_edv.csv", rep, &eval_row::pred_edv_ml,
                          &eval_row::actual_edv_ml, true);
    detail::emit_pair_csv(dir / "residuals_ef.csv", rep, &eval_row::pred_ef,
                          &eval_row::actual_ef, true);
}

} // namespace lvseg

#endif
