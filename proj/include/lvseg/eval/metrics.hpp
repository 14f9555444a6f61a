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
#ifndef LVSEG_EVAL_METRICS_HPP
#define LVSEG_EVAL_METRICS_HPP

#include <cmath>
#include <vector>

#include "lvseg/core/error.hpp"

namespace lvseg {

inline double rmse(const std::vector<double>& pred, const std::vector<double>& actual) {
    require(pred.size() == actual.size(), errc::length_mismatch,
            "pred/actual lengths differ");
    require(!pred.empty(), errc::empty_input, "rmse of empty lists");
    double acc = 0;
    for (size_t i = 0; i < pred.size(); ++i) {
        double d = pred[i] - actual[i];
        acc += d * d;
    }
    return std::sqrt(acc / static_cast<double>(pred.size()));
}

/// EF class bands: disjoint, ordered, covering [0, 1]. Each band is
/// left-closed right-open except the last, which is right-closed.
struct ef_band {
    double lo = 0;
    double hi = 0;
};

inline std::vector<ef_band> default_ef_bands() {
    // reduced / borderline / preserved EF at the 0.40 and 0.50 cut points
    return {{0.0, 0.40}, {0.40, 0.50}, {0.50, 1.0}};
}

inline void validate_bands(const std::vector<ef_band>& bands) {
    require(!bands.empty(), errc::invalid_bands, "no bands");
    require(bands.front().lo == 0.0, errc::invalid_bands, "bands must start at 0");
    for (size_t i = 0; i < bands.size(); ++i) {
        require(bands[i].lo < bands[i].hi, errc::invalid_bands, "band is empty or inverted");
        if (i + 1 < bands.size())
            require(bands[i].hi == bands[i + 1].lo, errc::invalid_bands,
                    "bands must tile [0,1] without gaps or overlaps");
    }
    require(bands.back().hi == 1.0, errc::invalid_bands, "bands must end at 1");
}

inline int ef_class(double ef, const std::vector<ef_band>& bands) {
    validate_bands(bands);
    require(ef >= 0.0 && ef <= 1.0, errc::invalid_argument, "ef outside [0,1]");
    for (size_t i = 0; i < bands.size(); ++i) {
        bool last = i + 1 == bands.size();
        if (ef >= bands[i].lo && (ef < bands[i].hi || (last && ef <= bands[i].hi)))
            return static_cast<int>(i);
    }
    raise(errc::internal, "ef fell through validated bands");
}

struct confusion_matrix {
    std::vector<std::vector<size_t>> counts; // counts[actual][predicted]
    double accuracy = 0;

    size_t total() const {
        size_t n = 0;
        for (const auto& row : counts)
            for (size_t v : row) n += v;
        return n;
    }
};

inline confusion_matrix confusion(const std::vector<int>& pred_classes,
                                  const std::vector<int>& actual_classes, int n_classes) {
    require(pred_classes.size() == actual_classes.size(), errc::length_mismatch,
            "pred/actual lengths differ");
    require(!pred_classes.empty(), errc::empty_input, "confusion of empty inputs");
    require(n_classes >= 1, errc::invalid_argument, "n_classes must be positive");

    confusion_matrix m;
    m.counts.assign(n_classes, std::vector<size_t>(n_classes, 0));
    for (size_t i = 0; i < pred_classes.size(); ++i) {
        int a = actual_classes[i], p = pred_classes[i];
        require(a >= 0 && a < n_classes && p >= 0 && p < n_classes, errc::out_of_range_class,
                "class id outside [0, n_classes)");
        ++m.counts[a][p];
    }
    size_t diag = 0;
    for (int i = 0; i < n_classes; ++i) diag += m.counts[i][i];
    m.accuracy = static_cast<double>(diag) / static_cast<double>(pred_classes.size());
    return m;
}

} // namespace lvseg

#endif
