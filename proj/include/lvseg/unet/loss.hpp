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
#ifndef LVSEG_UNET_LOSS_HPP
#define LVSEG_UNET_LOSS_HPP

#include <cmath>
#include <string>

#include "lvseg/unet/tensor.hpp"

namespace lvseg {

enum class loss_kind : uint8_t { bce, dice, log_dice, bce_plus_dice };

inline const char* loss_name(loss_kind k) {
    switch (k) {
    case loss_kind::bce: return "bce";
    case loss_kind::dice: return "dice";
    case loss_kind::log_dice: return "log_dice";
    case loss_kind::bce_plus_dice: return "bce_plus_dice";
    }
    return "?";
}

inline loss_kind loss_from(const std::string& s) {
    if (s == "bce") return loss_kind::bce;
    if (s == "dice") return loss_kind::dice;
    if (s == "log_dice") return loss_kind::log_dice;
    if (s == "bce_plus_dice") return loss_kind::bce_plus_dice;
    raise(errc::invalid_config, "unknown loss: " + s);
}

/// Soft Dice over the whole batch:
///   DSC_s = (2 * sum(t*p) + eps) / (sum(t) + sum(p) + eps)
/// dice loss = 1 - DSC_s; log dice = -log(DSC_s); bce is the mean binary
/// cross-entropy with probability clamping; bce_plus_dice is their sum.
struct loss_options {
    double smooth_eps = 1.0; // dice smoothing constant
    double bce_clamp = 1e-7; // probability clamp for log stability
};

namespace detail {

struct dice_terms {
    double intersection = 0; // sum t*p
    double sum_t = 0;
    double sum_p = 0;
};

inline dice_terms dice_accumulate(const tensor& y_true, const tensor& y_pred) {
    require(y_true.same_shape(y_pred), errc::shape_mismatch, "loss shapes differ");
    require(y_true.size() > 0, errc::shape_mismatch, "loss of empty tensors");
    dice_terms t;
    for (size_t i = 0; i < y_true.v.size(); ++i) {
        t.intersection += static_cast<double>(y_true.v[i]) * y_pred.v[i];
        t.sum_t += y_true.v[i];
        t.sum_p += y_pred.v[i];
    }
    return t;
}

inline double soft_dsc(const dice_terms& t, double eps) {
    return (2.0 * t.intersection + eps) / (t.sum_t + t.sum_p + eps);
}

} // namespace detail

inline double loss_value(loss_kind kind, const tensor& y_true, const tensor& y_pred,
                         const loss_options& opt = {}) {
    auto terms = detail::dice_accumulate(y_true, y_pred);
    double dsc = detail::soft_dsc(terms, opt.smooth_eps);

    double bce = 0;
    if (kind == loss_kind::bce || kind == loss_kind::bce_plus_dice) {
        for (size_t i = 0; i < y_true.v.size(); ++i) {
            double p = std::clamp(static_cast<double>(y_pred.v[i]), opt.bce_clamp,
                                  1.0 - opt.bce_clamp);
            double t = y_true.v[i];
            bce -= t * std::log(p) + (1.0 - t) * std::log(1.0 - p);
        }
        bce /= static_cast<double>(y_true.v.size());
    }

    switch (kind) {
    case loss_kind::dice: return 1.0 - dsc;
    case loss_kind::log_dice: return -std::log(dsc);
    case loss_kind::bce: return bce;
    case loss_kind::bce_plus_dice: return bce + (1.0 - dsc);
    }
    raise(errc::internal, "unreachable loss kind");
}

/// dL/d(y_pred), written into a tensor shaped like y_pred.
inline tensor loss_gradient(loss_kind kind, const tensor& y_true, const tensor& y_pred,
                            const loss_options& opt = {}) {
    auto terms = detail::dice_accumulate(y_true, y_pred);
    const double eps = opt.smooth_eps;
    const double num = 2.0 * terms.intersection + eps;
    const double den = terms.sum_t + terms.sum_p + eps;
    const double dsc = num / den;
    const size_t n = y_true.v.size();

    tensor grad(y_pred.n, y_pred.h, y_pred.w, y_pred.c);
    for (size_t i = 0; i < n; ++i) {
        double t = y_true.v[i];
        // d(DSC)/dp_i by the quotient rule
        double ddsc = (2.0 * t * den - num) / (den * den);
        double g = 0;
        switch (kind) {
        case loss_kind::dice:
            g = -ddsc;
            break;
        case loss_kind::log_dice:
            g = -ddsc / dsc;
            break;
        case loss_kind::bce:
        case loss_kind::bce_plus_dice: {
            double p = std::clamp(static_cast<double>(y_pred.v[i]), opt.bce_clamp,
                                  1.0 - opt.bce_clamp);
            g = (-t / p + (1.0 - t) / (1.0 - p)) / static_cast<double>(n);
            if (kind == loss_kind::bce_plus_dice) g += -ddsc;
            break;
        }
        }
        grad.v[i] = static_cast<float>(g);
    }
    return grad;
}

} // namespace lvseg

#endif
