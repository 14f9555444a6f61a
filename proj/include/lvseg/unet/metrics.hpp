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
#ifndef LVSEG_UNET_METRICS_HPP
#define LVSEG_UNET_METRICS_HPP

#include "lvseg/core/image.hpp"

namespace lvseg {

struct seg_metrics_result {
    double dsc = 0;
    double jsc = 0;
    double precision = 0;
    double recall = 0;
    double f1 = 0;
};

/// Overlap metrics of two binary masks. Conventions: both empty -> all 1;
/// exactly one empty -> DSC/JSC 0 and the undefined ratio 0. DSC equals F1
/// pixelwise by construction.
inline seg_metrics_result seg_metrics(const contour_mask& y_true, const contour_mask& y_pred) {
    require(y_true.rows() == y_pred.rows() && y_true.cols() == y_pred.cols(),
            errc::shape_mismatch, "mask shapes differ");

    size_t nt = 0, np = 0, inter = 0;
    for (size_t i = 0; i < y_true.data.size(); ++i) {
        bool t = y_true.data.raw()[i] != 0;
        bool p = y_pred.data.raw()[i] != 0;
        nt += t;
        np += p;
        inter += t && p;
    }

    seg_metrics_result m;
    if (nt == 0 && np == 0) {
        m.dsc = m.jsc = m.precision = m.recall = m.f1 = 1.0;
        return m;
    }
    size_t uni = nt + np - inter;
    m.dsc = 2.0 * static_cast<double>(inter) / static_cast<double>(nt + np);
    m.jsc = uni ? static_cast<double>(inter) / static_cast<double>(uni) : 0.0;
    m.precision = np ? static_cast<double>(inter) / static_cast<double>(np) : 0.0;
    m.recall = nt ? static_cast<double>(inter) / static_cast<double>(nt) : 0.0;
    m.f1 = (m.precision + m.recall) > 0
               ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
               : 0.0;
    return m;
}

} // namespace lvseg

#endif
