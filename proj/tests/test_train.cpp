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
#include <catch2/catch_amalgamated.hpp>

#include "lvseg/unet/train.hpp"
#include "support/oracles.hpp"

using namespace lvseg;

namespace {

std::vector<training_pair> disc_set(int count, int dim, uint64_t seed) {
    rng r(seed);
    std::vector<training_pair> out;
    for (int i = 0; i < count; ++i) {
        training_pair p;
        p.image = image_d(dim, dim);
        for (auto& v : p.image.raw()) v = r.uniform(0.0, 0.15);
        p.mask = contour_mask(dim, dim, contour_mask::origin::ground_truth);
        double cy = r.uniform(dim * 0.3, dim * 0.7);
        double cx = r.uniform(dim * 0.3, dim * 0.7);
        double rad = r.uniform(dim * 0.12, dim * 0.25);
        oracle::draw_disc(p.mask.data, cy, cx, rad);
        for (int row = 0; row < dim; ++row)
            for (int col = 0; col < dim; ++col)
                if (p.mask.data(row, col)) p.image(row, col) = r.uniform(0.8, 1.0);
        out.push_back(std::move(p));
    }
    return out;
}

unet_config tiny_config(uint64_t seed) {
    unet_config cfg;
    cfg.input_size = 32;
    cfg.base_filters = 4;
    cfg.conv_layers = 18;
    cfg.seed = seed;
    return cfg;
}

} // namespace

TEST_CASE("one epoch on four images produces one history row") {
    auto set = disc_set(4, 32, 1);
    unet_model model(tiny_config(2));
    train_hyper hyper;
    hyper.epochs = 1;
    hyper.batch_size = 2;
    hyper.loss = loss_kind::dice;
    auto history = train(model, set, set, hyper);
    REQUIRE(history.size() == 1u);
    CHECK(history[0].epoch == 1);
    CHECK(std::isfinite(history[0].train_loss));
    CHECK(history[0].val_dsc >= 0.0);
}

TEST_CASE("zero learning rate leaves the weights unchanged and the loss constant") {
    // single image: epoch shuffling cannot reorder the loss summation
    auto set = disc_set(1, 32, 3);
    unet_model model(tiny_config(4));
    auto snapshot = model.params();

    train_hyper hyper;
    hyper.epochs = 3;
    hyper.batch_size = 1;
    hyper.learning_rate = 0.0;
    hyper.loss = loss_kind::bce;
    auto history = train(model, set, {}, hyper);

    for (size_t i = 0; i < snapshot.size(); ++i)
        CHECK(model.params()[i].value == snapshot[i].value);
    CHECK(history[0].train_loss == history[1].train_loss);
    CHECK(history[1].train_loss == history[2].train_loss);
}

TEST_CASE("a few epochs reduce the training loss on a toy set") {
    auto set = disc_set(8, 32, 5);
    unet_model model(tiny_config(6));
    train_hyper hyper;
    hyper.epochs = 10;
    hyper.batch_size = 2;
    hyper.learning_rate = 1e-3; // toy-net rate; the full model trains at 1e-5..1e-4
    hyper.loss = loss_kind::dice;
    auto history = train(model, set, set, hyper);
    CHECK(history.back().train_loss < history.front().train_loss);
}

TEST_CASE("training is deterministic for a fixed seed") {
    auto set = disc_set(6, 32, 7);
    train_hyper hyper;
    hyper.epochs = 2;
    hyper.batch_size = 3;
    hyper.loss = loss_kind::dice;

    unet_model a(tiny_config(11));
    unet_model b(tiny_config(11));
    auto ha = train(a, set, set, hyper);
    auto hb = train(b, set, set, hyper);
    CHECK(ha.back().train_loss == hb.back().train_loss);
    CHECK(ha.back().val_dsc == hb.back().val_dsc);
    for (size_t i = 0; i < a.params().size(); ++i)
        CHECK(a.params()[i].value == b.params()[i].value);
}

TEST_CASE("an exploding learning rate surfaces as DivergedLoss") {
    auto set = disc_set(8, 32, 5);
    unet_model model(tiny_config(6));
    train_hyper hyper;
    hyper.epochs = 4;
    hyper.batch_size = 2;
    hyper.learning_rate = 1e10; // drives activations to inf, then loss to NaN
    hyper.loss = loss_kind::dice;
    CHECK_THROWS_MATCHES(train(model, set, {}, hyper), error,
                         Catch::Matchers::Predicate<error>(
                             [](const error& e) { return e.code() == errc::diverged_loss; }));
}

TEST_CASE("dropout and batch norm train without breaking shapes") {
    auto set = disc_set(4, 32, 12);
    unet_config cfg = tiny_config(13);
    cfg.dropout_rate = 0.5;
    cfg.batch_norm = true;
    unet_model model(cfg);
    train_hyper hyper;
    hyper.epochs = 2;
    hyper.batch_size = 2;
    hyper.loss = loss_kind::bce_plus_dice;
    auto history = train(model, set, set, hyper);
    CHECK(history.size() == 2u);
    CHECK(std::isfinite(history.back().train_loss));
}
