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
#ifndef LVSEG_UNET_MODEL_HPP
#define LVSEG_UNET_MODEL_HPP

#include <cmath>
#include <string>
#include <vector>

#include "lvseg/core/image.hpp"
#include "lvseg/unet/rng.hpp"
#include "lvseg/unet/tensor.hpp"

namespace lvseg {

/// Encoder-decoder segmentation network. conv_layers picks the depth:
/// 18 / 23 / 28 convolutions = 3 / 4 / 5 encoder-decoder stage pairs. The
/// 23-layer network with base_filters 64 and input 176 is the reference
/// configuration (31,030,593 trainable parameters).
struct unet_config {
    int input_size = 176; // square; divisible by 2^stages
    int base_filters = 64;
    int conv_layers = 23; // 18 | 23 | 28
    double dropout_rate = 0.0; // 0 disables the dropout layers
    bool batch_norm = false;
    uint64_t seed = 0;

    int stages() const { return (conv_layers - 3) / 5; }

    void validate() const {
        require(conv_layers == 18 || conv_layers == 23 || conv_layers == 28,
                errc::invalid_config, "conv_layers must be 18, 23 or 28");
        require(base_filters >= 1, errc::invalid_config, "base_filters must be >= 1");
        int factor = 1 << stages();
        require(input_size > 0 && input_size % factor == 0, errc::invalid_config,
                "input_size must be a positive multiple of " + std::to_string(factor));
        require(dropout_rate >= 0.0 && dropout_rate < 1.0, errc::invalid_config,
                "dropout_rate must be in [0, 1)");
    }

    friend bool operator==(const unet_config&, const unet_config&) = default;
};

struct param_array {
    std::string name;
    std::vector<int> shape;
    fvec value;
    fvec grad;
    bool trainable = true;

    size_t count() const { return value.size(); }
};

struct layer_report {
    std::string name; // conv2d_1 .. conv2d_N, Keras-style
    int out_h = 0, out_w = 0, out_c = 0;
    size_t param_count = 0;
};

class unet_model {
    enum class op_kind : uint8_t {
        conv, // conv + bias
        batchnorm,
        relu,
        sigmoid,
        maxpool,
        upsample,
        dropout,
        concat,
    };

    struct op {
        op_kind kind;
        int in0 = -1, in1 = -1; // value indices
        int out = -1;
        int kernel = 0, cout = 0; // conv
        int p_w = -1, p_b = -1; // conv param indices
        int p_gamma = -1, p_beta = -1, p_mmean = -1, p_mvar = -1; // batchnorm
        int conv_index = 0; // 1-based, for reporting
    };

public:
    static constexpr float bn_momentum = 0.99f;
    static constexpr float bn_epsilon = 1e-3f;

    explicit unet_model(const unet_config& cfg) : cfg_(cfg) {
        cfg_.validate();
        build_graph();
        rng init_rng(cfg_.seed);
        initialize(init_rng);
    }

    const unet_config& config() const { return cfg_; }

    std::vector<param_array>& params() { return params_; }
    const std::vector<param_array>& params() const { return params_; }

    size_t param_count() const {
        size_t n = 0;
        for (const auto& p : params_)
            if (p.trainable) n += p.count();
        return n;
    }

    /// One row per convolution, mirroring a framework model summary.
    std::vector<layer_report> layer_summary() const {
        std::vector<layer_report> out;
        int size = cfg_.input_size;
        for (const auto& o : ops_) {
            if (o.kind == op_kind::maxpool) size /= 2;
            if (o.kind == op_kind::upsample) size *= 2;
            if (o.kind != op_kind::conv) continue;
            layer_report r;
            r.name = "conv2d_" + std::to_string(o.conv_index);
            r.out_h = r.out_w = size;
            r.out_c = o.cout;
            r.param_count = params_[o.p_w].count() + params_[o.p_b].count();
            out.push_back(std::move(r));
        }
        return out;
    }

    /// Forward pass to per-pixel probabilities. Training mode applies
    /// dropout (when configured) and batch statistics, and retains the
    /// activations needed by backward().
    tensor forward(const tensor& x, bool training = false, rng* dropout_rng = nullptr) {
        require(x.h == cfg_.input_size && x.w == cfg_.input_size && x.c == 1,
                errc::shape_mismatch, "input must be " + std::to_string(cfg_.input_size) +
                                          "x" + std::to_string(cfg_.input_size) + "x1");
        values_.assign(n_values_, tensor{});
        pool_argmax_.assign(ops_.size(), {});
        dropout_masks_.assign(ops_.size(), {});
        bn_cache_.assign(ops_.size(), {});
        training_ = training;

        values_[0] = x;
        for (size_t oi = 0; oi < ops_.size(); ++oi) run_op(oi, training, dropout_rng);
        return values_[ops_.back().out];
    }

    void zero_grads() {
        for (auto& p : params_) std::fill(p.grad.begin(), p.grad.end(), 0.f);
    }

    /// Backprop from dL/d(probabilities). Requires a preceding training
    /// forward pass; gradients accumulate into params()[i].grad.
    void backward(const tensor& dprob) {
        require(training_, errc::internal, "backward needs a training-mode forward");
        grads_.assign(n_values_, tensor{});
        grads_[ops_.back().out] = dprob;
        for (size_t oi = ops_.size(); oi-- > 0;) run_op_backward(oi);
    }

private:
    struct bn_stats {
        std::vector<float> mean, inv_std, xhat_mean_dy, mean_dy; // per channel
    };

    int new_value() { return n_values_++; }

    int add_param(const std::string& name, std::vector<int> shape, bool trainable) {
        param_array p;
        p.name = name;
        p.shape = std::move(shape);
        size_t n = 1;
        for (int d : p.shape) n *= static_cast<size_t>(d);
        p.value.assign(n, 0.f);
        p.grad.assign(n, 0.f);
        p.trainable = trainable;
        params_.push_back(std::move(p));
        return static_cast<int>(params_.size()) - 1;
    }

    int add_conv(int input, int cin, int cout, int k, bool relu_after, bool allow_bn) {
        op o;
        o.kind = op_kind::conv;
        o.in0 = input;
        o.kernel = k;
        o.cout = cout;
        o.conv_index = ++conv_counter_;
        std::string base = "conv2d_" + std::to_string(o.conv_index);
        o.p_w = add_param(base + "/kernel", {k, k, cin, cout}, true);
        o.p_b = add_param(base + "/bias", {cout}, true);
        o.out = new_value();
        ops_.push_back(o);
        int cur = o.out;

        if (allow_bn && cfg_.batch_norm) {
            op bn;
            bn.kind = op_kind::batchnorm;
            bn.in0 = cur;
            bn.cout = cout;
            std::string bname = "batch_normalization_" + std::to_string(++bn_counter_);
            bn.p_gamma = add_param(bname + "/gamma", {cout}, true);
            bn.p_beta = add_param(bname + "/beta", {cout}, true);
            bn.p_mmean = add_param(bname + "/moving_mean", {cout}, false);
            bn.p_mvar = add_param(bname + "/moving_variance", {cout}, false);
            bn.out = new_value();
            ops_.push_back(bn);
            cur = bn.out;
        }

        op act;
        act.kind = relu_after ? op_kind::relu : op_kind::sigmoid;
        act.in0 = cur;
        act.out = new_value();
        ops_.push_back(act);
        return act.out;
    }

    int add_simple(op_kind kind, int input) {
        op o;
        o.kind = kind;
        o.in0 = input;
        o.out = new_value();
        ops_.push_back(o);
        return o.out;
    }

    int add_concat(int a, int b) {
        op o;
        o.kind = op_kind::concat;
        o.in0 = a;
        o.in1 = b;
        o.out = new_value();
        ops_.push_back(o);
        return o.out;
    }

    void build_graph() {
        const int S = cfg_.stages();
        int cur = new_value(); // input
        int cin = 1;

        std::vector<int> skips; // conv2 output per encoder stage
        for (int s = 0; s < S; ++s) {
            int w = cfg_.base_filters << s;
            cur = add_conv(cur, cin, w, 3, true, true);
            cur = add_conv(cur, w, w, 3, true, true);
            skips.push_back(cur);
            cur = add_simple(op_kind::maxpool, cur);
            cin = w;
        }

        int bridge = cfg_.base_filters << S;
        cur = add_conv(cur, cin, bridge, 3, true, true);
        cur = add_conv(cur, bridge, bridge, 3, true, true);
        cin = bridge;

        for (int s = S - 1; s >= 0; --s) {
            int w = cfg_.base_filters << s;
            // dropout sits right before each upsampling (decoder side)
            if (cfg_.dropout_rate > 0) cur = add_simple(op_kind::dropout, cur);
            cur = add_simple(op_kind::upsample, cur);
            cur = add_conv(cur, cin, w, 2, true, true);
            cur = add_concat(skips[s], cur); // encoder features first
            cur = add_conv(cur, 2 * w, w, 3, true, true);
            cur = add_conv(cur, w, w, 3, true, true);
            cin = w;
        }

        add_conv(cur, cin, 1, 1, false, false); // 1x1 + sigmoid
    }

    void initialize(rng& r) {
        for (auto& p : params_) {
            if (p.shape.size() == 4) { // conv kernel: glorot uniform
                int k = p.shape[0];
                int cin = p.shape[2], cout = p.shape[3];
                double limit = std::sqrt(6.0 / (static_cast<double>(k) * k * cin +
                                                static_cast<double>(k) * k * cout));
                for (float& v : p.value)
                    v = static_cast<float>(r.uniform(-limit, limit));
            } else if (p.name.ends_with("gamma") || p.name.ends_with("moving_variance")) {
                std::fill(p.value.begin(), p.value.end(), 1.f);
            }
            // biases, betas and moving means start at zero
        }
    }

    void run_op(size_t oi, bool training, rng* dropout_rng) {
        op& o = ops_[oi];
        const tensor& x = values_[o.in0];
        switch (o.kind) {
        case op_kind::conv:
            values_[o.out] = nn::conv2d(x, params_[o.p_w].value, params_[o.p_b].value,
                                        o.kernel, o.cout);
            break;
        case op_kind::batchnorm:
            values_[o.out] = bn_forward(oi, x, training);
            break;
        case op_kind::relu:
            values_[o.out] = nn::relu(x);
            break;
        case op_kind::sigmoid:
            values_[o.out] = nn::sigmoid(x);
            break;
        case op_kind::maxpool:
            values_[o.out] = nn::maxpool2(x, pool_argmax_[oi]);
            break;
        case op_kind::upsample:
            values_[o.out] = nn::upsample2(x);
            break;
        case op_kind::dropout: {
            if (!training || cfg_.dropout_rate <= 0) {
                values_[o.out] = x;
                break;
            }
            require(dropout_rng != nullptr, errc::internal,
                    "training forward with dropout needs an RNG");
            auto& mask = dropout_masks_[oi];
            mask.assign(x.size(), 1.f);
            float scale = 1.f / (1.f - static_cast<float>(cfg_.dropout_rate));
            for (auto& m : mask)
                m = dropout_rng->coin(cfg_.dropout_rate) ? 0.f : scale;
            tensor y = x;
            for (size_t i = 0; i < y.v.size(); ++i) y.v[i] *= mask[i];
            values_[o.out] = std::move(y);
            break;
        }
        case op_kind::concat:
            values_[o.out] = nn::concat(values_[o.in0], values_[o.in1]);
            break;
        }
    }

    tensor bn_forward(size_t oi, const tensor& x, bool training) {
        op& o = ops_[oi];
        const int C = x.c;
        const size_t cells = x.size() / C;
        tensor y = x;
        auto& gamma = params_[o.p_gamma].value;
        auto& beta = params_[o.p_beta].value;
        auto& mmean = params_[o.p_mmean].value;
        auto& mvar = params_[o.p_mvar].value;

        if (!training) {
            for (size_t i = 0; i < cells; ++i)
                for (int c = 0; c < C; ++c) {
                    float inv = 1.f / std::sqrt(mvar[c] + bn_epsilon);
                    y.v[i * C + c] = gamma[c] * (x.v[i * C + c] - mmean[c]) * inv + beta[c];
                }
            return y;
        }

        bn_stats st;
        st.mean.assign(C, 0.f);
        st.inv_std.assign(C, 0.f);
        std::vector<float> var(C, 0.f);
        for (size_t i = 0; i < cells; ++i)
            for (int c = 0; c < C; ++c) st.mean[c] += x.v[i * C + c];
        for (int c = 0; c < C; ++c) st.mean[c] /= static_cast<float>(cells);
        for (size_t i = 0; i < cells; ++i)
            for (int c = 0; c < C; ++c) {
                float d = x.v[i * C + c] - st.mean[c];
                var[c] += d * d;
            }
        for (int c = 0; c < C; ++c) {
            var[c] /= static_cast<float>(cells);
            st.inv_std[c] = 1.f / std::sqrt(var[c] + bn_epsilon);
            mmean[c] = bn_momentum * mmean[c] + (1.f - bn_momentum) * st.mean[c];
            mvar[c] = bn_momentum * mvar[c] + (1.f - bn_momentum) * var[c];
        }
        for (size_t i = 0; i < cells; ++i)
            for (int c = 0; c < C; ++c)
                y.v[i * C + c] =
                    gamma[c] * (x.v[i * C + c] - st.mean[c]) * st.inv_std[c] + beta[c];
        bn_cache_[oi] = std::move(st);
        return y;
    }

    void run_op_backward(size_t oi) {
        op& o = ops_[oi];
        tensor& dy = grads_[o.out];
        if (dy.v.empty()) return;
        const tensor& x = values_[o.in0];

        auto accumulate = [&](int value_idx, tensor&& g) {
            tensor& slot = grads_[value_idx];
            if (slot.v.empty()) {
                slot = std::move(g);
            } else {
                for (size_t i = 0; i < slot.v.size(); ++i) slot.v[i] += g.v[i];
            }
        };

        switch (o.kind) {
        case op_kind::conv:
            accumulate(o.in0,
                       nn::conv2d_backward(x, params_[o.p_w].value, o.kernel, o.cout, dy,
                                           params_[o.p_w].grad, params_[o.p_b].grad));
            break;
        case op_kind::batchnorm:
            accumulate(o.in0, bn_backward(oi, x, dy));
            break;
        case op_kind::relu:
            accumulate(o.in0, nn::relu_backward(values_[o.out], dy));
            break;
        case op_kind::sigmoid:
            accumulate(o.in0, nn::sigmoid_backward(values_[o.out], dy));
            break;
        case op_kind::maxpool:
            accumulate(o.in0, nn::maxpool2_backward(x, dy, pool_argmax_[oi]));
            break;
        case op_kind::upsample:
            accumulate(o.in0, nn::upsample2_backward(x, dy));
            break;
        case op_kind::dropout: {
            tensor dx = dy;
            if (!dropout_masks_[oi].empty())
                for (size_t i = 0; i < dx.v.size(); ++i) dx.v[i] *= dropout_masks_[oi][i];
            accumulate(o.in0, std::move(dx));
            break;
        }
        case op_kind::concat: {
            const tensor& a = values_[o.in0];
            const tensor& b = values_[o.in1];
            tensor da(a.n, a.h, a.w, a.c), db(b.n, b.h, b.w, b.c);
            nn::concat_backward(dy, da, db);
            accumulate(o.in0, std::move(da));
            accumulate(o.in1, std::move(db));
            break;
        }
        }
        dy.v.clear(); // free as we go
    }

    tensor bn_backward(size_t oi, const tensor& x, const tensor& dy) {
        op& o = ops_[oi];
        const bn_stats& st = bn_cache_[oi];
        const int C = x.c;
        const size_t cells = x.size() / C;
        auto& gamma = params_[o.p_gamma].value;
        auto& dgamma = params_[o.p_gamma].grad;
        auto& dbeta = params_[o.p_beta].grad;

        std::vector<float> sum_dy(C, 0.f), sum_dy_xhat(C, 0.f);
        for (size_t i = 0; i < cells; ++i)
            for (int c = 0; c < C; ++c) {
                float xhat = (x.v[i * C + c] - st.mean[c]) * st.inv_std[c];
                sum_dy[c] += dy.v[i * C + c];
                sum_dy_xhat[c] += dy.v[i * C + c] * xhat;
            }
        for (int c = 0; c < C; ++c) {
            dgamma[c] += sum_dy_xhat[c];
            dbeta[c] += sum_dy[c];
        }

        tensor dx = dy;
        float inv_cells = 1.f / static_cast<float>(cells);
        for (size_t i = 0; i < cells; ++i)
            for (int c = 0; c < C; ++c) {
                float xhat = (x.v[i * C + c] - st.mean[c]) * st.inv_std[c];
                dx.v[i * C + c] =
                    gamma[c] * st.inv_std[c] *
                    (dy.v[i * C + c] - inv_cells * sum_dy[c] - xhat * inv_cells * sum_dy_xhat[c]);
            }
        return dx;
    }

    unet_config cfg_;
    std::vector<op> ops_;
    std::vector<param_array> params_;
    int n_values_ = 0;
    int conv_counter_ = 0;
    int bn_counter_ = 0;
    bool training_ = false;

    std::vector<tensor> values_;
    std::vector<tensor> grads_;
    std::vector<std::vector<uint32_t>> pool_argmax_;
    std::vector<std::vector<float>> dropout_masks_;
    std::vector<bn_stats> bn_cache_;
};

/// Threshold probabilities into a predicted mask: 1 where value > threshold.
inline contour_mask binarize(const image_d& prob_map, double threshold = 0.5) {
    contour_mask out(prob_map.rows(), prob_map.cols(), contour_mask::origin::predicted);
    for (int r = 0; r < prob_map.rows(); ++r)
        for (int c = 0; c < prob_map.cols(); ++c)
            out.data(r, c) = prob_map(r, c) > threshold ? 1 : 0;
    return out;
}

/// Batched inference: one probability map per input image, order preserved.
inline std::vector<image_d> predict(unet_model& model, const std::vector<image_d>& images,
                                    int batch_size = 8) {
    const int size = model.config().input_size;
    std::vector<image_d> out;
    out.reserve(images.size());
    for (size_t start = 0; start < images.size(); start += batch_size) {
        size_t count = std::min(static_cast<size_t>(batch_size), images.size() - start);
        tensor x(static_cast<int>(count), size, size, 1);
        for (size_t i = 0; i < count; ++i) {
            const image_d& img = images[start + i];
            require(img.rows() == size && img.cols() == size, errc::shape_mismatch,
                    "image dims do not match the model input size");
            for (int r = 0; r < size; ++r)
                for (int c = 0; c < size; ++c)
                    x.at(static_cast<int>(i), r, c, 0) = static_cast<float>(img(r, c));
        }
        tensor prob = model.forward(x, false, nullptr);
        for (size_t i = 0; i < count; ++i) {
            image_d p(size, size);
            for (int r = 0; r < size; ++r)
                for (int c = 0; c < size; ++c)
                    p(r, c) = prob.at(static_cast<int>(i), r, c, 0);
            out.push_back(std::move(p));
        }
    }
    return out;
}

} // namespace lvseg

#endif
