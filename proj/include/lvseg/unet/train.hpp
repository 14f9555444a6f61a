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
#ifndef LVSEG_UNET_TRAIN_HPP
#define LVSEG_UNET_TRAIN_HPP

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "lvseg/unet/augment.hpp"
#include "lvseg/unet/loss.hpp"
#include "lvseg/unet/metrics.hpp"
#include "lvseg/unet/model.hpp"

namespace lvseg {

enum class optimizer_kind : uint8_t { adam, rmsprop };

inline const char* optimizer_name(optimizer_kind k) {
    return k == optimizer_kind::adam ? "adam" : "rmsprop";
}
inline optimizer_kind optimizer_from(const std::string& s) {
    if (s == "adam") return optimizer_kind::adam;
    if (s == "rmsprop") return optimizer_kind::rmsprop;
    raise(errc::invalid_config, "unknown optimizer: " + s);
}

struct train_hyper {
    loss_kind loss = loss_kind::bce;
    optimizer_kind optimizer = optimizer_kind::adam;
    double learning_rate = 1e-4; // paper range 1e-5 .. 1e-4
    int batch_size = 4;
    int epochs = 20;
    int augment_factor = 0; // 0 | 4 | 10
    double threshold = 0.5;
    loss_options loss_opt;

    void validate() const {
        require(learning_rate >= 0, errc::invalid_config, "learning rate must be >= 0");
        require(batch_size >= 1, errc::invalid_config, "batch size must be >= 1");
        require(epochs >= 1, errc::invalid_config, "epochs must be >= 1");
        require(augment_factor >= 0, errc::invalid_config, "augment factor must be >= 0");
    }
};

struct epoch_stats {
    int epoch = 0; // 1-based
    double train_loss = 0;
    double val_dsc = 0, val_jsc = 0, val_precision = 0, val_recall = 0, val_f1 = 0;
};

struct train_options {
    double stop_at_val_dsc = -1.0; // early stop once reached; < 0 disables
    std::function<void(const epoch_stats&)> on_epoch;
};

namespace detail {

// Adam (beta1 0.9, beta2 0.999, eps 1e-7) and RMSProp (rho 0.9, eps 1e-7),
// matching the framework-era defaults the paper trained with.
class optimizer_state {
public:
    optimizer_state(optimizer_kind kind, double lr, std::vector<param_array>& params)
        : kind_(kind), lr_(lr) {
        m_.resize(params.size());
        v_.resize(params.size());
        for (size_t i = 0; i < params.size(); ++i) {
            if (!params[i].trainable) continue;
            m_[i].assign(params[i].count(), 0.f);
            if (kind_ == optimizer_kind::adam) v_[i].assign(params[i].count(), 0.f);
        }
    }

    void step(std::vector<param_array>& params) {
        ++t_;
        constexpr double beta1 = 0.9, beta2 = 0.999, eps = 1e-7, rho = 0.9;
        for (size_t i = 0; i < params.size(); ++i) {
            auto& p = params[i];
            if (!p.trainable) continue;
            if (kind_ == optimizer_kind::adam) {
                double bc1 = 1.0 - std::pow(beta1, t_);
                double bc2 = 1.0 - std::pow(beta2, t_);
                for (size_t j = 0; j < p.value.size(); ++j) {
                    double g = p.grad[j];
                    m_[i][j] = static_cast<float>(beta1 * m_[i][j] + (1 - beta1) * g);
                    v_[i][j] = static_cast<float>(beta2 * v_[i][j] + (1 - beta2) * g * g);
                    double mhat = m_[i][j] / bc1;
                    double vhat = v_[i][j] / bc2;
                    p.value[j] -= static_cast<float>(lr_ * mhat / (std::sqrt(vhat) + eps));
                }
            } else {
                for (size_t j = 0; j < p.value.size(); ++j) {
                    double g = p.grad[j];
                    m_[i][j] = static_cast<float>(rho * m_[i][j] + (1 - rho) * g * g);
                    p.value[j] -= static_cast<float>(lr_ * g / (std::sqrt(m_[i][j]) + eps));
                }
            }
        }
    }

private:
    optimizer_kind kind_;
    double lr_;
    long t_ = 0;
    std::vector<std::vector<float>> m_; // 1st moment / RMS accumulator
    std::vector<std::vector<float>> v_; // 2nd moment (adam)
};

inline tensor batch_tensor(const std::vector<training_pair>& set,
                           const std::vector<size_t>& indices, size_t start, size_t count,
                           bool masks) {
    const int size = set[indices[start]].image.rows();
    tensor out(static_cast<int>(count), size, size, 1);
    for (size_t i = 0; i < count; ++i) {
        const training_pair& p = set[indices[start + i]];
        for (int r = 0; r < size; ++r)
            for (int c = 0; c < size; ++c)
                out.at(static_cast<int>(i), r, c, 0) =
                    masks ? static_cast<float>(p.mask.data(r, c))
                          : static_cast<float>(p.image(r, c));
    }
    return out;
}

} // namespace detail

/// Validation metrics: predictions binarized at `threshold`, overlap
/// metrics averaged over the images.
inline epoch_stats evaluate(unet_model& model, const std::vector<training_pair>& val_set,
                            double threshold) {
    epoch_stats s;
    if (val_set.empty()) return s;
    std::vector<image_d> imgs;
    imgs.reserve(val_set.size());
    for (const auto& p : val_set) imgs.push_back(p.image);
    auto probs = predict(model, imgs);
    for (size_t i = 0; i < val_set.size(); ++i) {
        auto m = seg_metrics(val_set[i].mask, binarize(probs[i], threshold));
        s.val_dsc += m.dsc;
        s.val_jsc += m.jsc;
        s.val_precision += m.precision;
        s.val_recall += m.recall;
        s.val_f1 += m.f1;
    }
    double n = static_cast<double>(val_set.size());
    s.val_dsc /= n;
    s.val_jsc /= n;
    s.val_precision /= n;
    s.val_recall /= n;
    s.val_f1 /= n;
    return s;
}

/// Gradient-based training of the selected loss. Deterministic for a fixed
/// config seed on a single device; per-epoch history carries the train loss
/// plus validation overlap metrics. NaN loss aborts with DivergedLoss.
inline std::vector<epoch_stats> train(unet_model& model,
                                      const std::vector<training_pair>& train_set,
                                      const std::vector<training_pair>& val_set,
                                      const train_hyper& hyper,
                                      const train_options& opts = {}) {
    hyper.validate();
    require(!train_set.empty(), errc::invalid_argument, "empty training set");

    rng order_rng(model.config().seed ^ 0x9e3779b97f4a7c15ull);
    rng dropout_rng(model.config().seed ^ 0x7f4a7c159e3779b9ull);
    detail::optimizer_state opt(hyper.optimizer, hyper.learning_rate, model.params());

    std::vector<size_t> indices(train_set.size());
    for (size_t i = 0; i < indices.size(); ++i) indices[i] = i;

    std::vector<epoch_stats> history;
    for (int epoch = 1; epoch <= hyper.epochs; ++epoch) {
        order_rng.shuffle(indices);

        double loss_sum = 0;
        size_t batches = 0;
        for (size_t start = 0; start < indices.size();
             start += static_cast<size_t>(hyper.batch_size)) {
            size_t count =
                std::min(static_cast<size_t>(hyper.batch_size), indices.size() - start);
            tensor x = detail::batch_tensor(train_set, indices, start, count, false);
            tensor t = detail::batch_tensor(train_set, indices, start, count, true);

            tensor p = model.forward(x, true, &dropout_rng);
            double loss = loss_value(hyper.loss, t, p, hyper.loss_opt);
            require(std::isfinite(loss), errc::diverged_loss,
                    "loss diverged at epoch " + std::to_string(epoch));
            loss_sum += loss;
            ++batches;

            model.zero_grads();
            model.backward(loss_gradient(hyper.loss, t, p, hyper.loss_opt));
            opt.step(model.params());
        }

        epoch_stats s = evaluate(model, val_set, hyper.threshold);
        s.epoch = epoch;
        s.train_loss = loss_sum / static_cast<double>(batches);
        history.push_back(s);
        if (opts.on_epoch) opts.on_epoch(s);
        if (opts.stop_at_val_dsc > 0 && s.val_dsc >= opts.stop_at_val_dsc) break;
    }
    return history;
}

} // namespace lvseg

#endif
