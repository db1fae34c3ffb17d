// Copyright 2026 The qdiff Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <catch_amalgamated.hpp>

#include <cmath>

#include "qdiff/optim.hpp"
#include "qdiff/train.hpp"

using namespace qdiff;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

TrainConfig tiny_config() {
    TrainConfig cfg;
    cfg.spec.n = 2;
    cfg.spec.n_anc = 1;
    cfg.spec.T = 2;
    cfg.spec.l0 = 1;
    cfg.lr = 0.05;
    cfg.epochs_per_block = 3;
    cfg.batch_size = 3;
    cfg.seed = 17;
    return cfg;
}

std::vector<Latent> tiny_data() {
    return {{1.0, 0.2, 0.1, 0.4}, {0.3, 1.0, 0.0, 0.5}, {0.6, 0.6, 1.0, 0.1},
            {0.1, 0.2, 0.3, 1.0}, {1.0, 1.0, 0.2, 0.2}};
}

Model init_for(const TrainConfig &cfg) {
    return init_model(cfg.spec, cfg.schedule, cfg.lambda_s, cfg.seed);
}

} // namespace

TEST_CASE("Adam", "[train]") {
    Adam zero(2, 0.1);
    std::vector<double> p{1.0, -2.0};
    zero.step(p, std::vector<double>{0.0, 0.0});
    CHECK(p == std::vector<double>{1.0, -2.0});
    CHECK(zero.step_count == 1);

    Adam one(2, 0.1);
    std::vector<double> q{0.0, 0.0};
    const std::vector<double> g{0.5, -3.0};
    one.step(q, g);
    CHECK_THAT(q[0], WithinAbs(-0.1 * 0.5 / (0.5 + 1e-8), 1e-15));
    CHECK_THAT(q[1], WithinAbs(0.1 * 3.0 / (3.0 + 1e-8), 1e-15));

    Adam steady(1, 0.01);
    std::vector<double> r{0.0};
    double last = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double before = r[0];
        steady.step(r, std::vector<double>{2.5});
        last = before - r[0];
    }
    CHECK_THAT(last, WithinRel(0.01, 0.05));
    CHECK_THROWS_AS(steady.step(r, std::vector<double>{1.0, 2.0}), Error);
}

TEST_CASE("steplr", "[train]") {
    CHECK(steplr(0, 5e-4, 10, 0.05) == 5e-4);
    CHECK_THAT(steplr(10, 5e-4, 10, 0.05), WithinRel(2.5e-5, 1e-12));
    CHECK_THAT(steplr(25, 5e-4, 10, 0.05), WithinRel(1.25e-6, 1e-12));
    CHECK(steplr(9, 5e-4, 10, 0.05) == 5e-4);
}

TEST_CASE("config validation", "[train]") {
    auto cfg = tiny_config();
    CHECK_NOTHROW(validate(cfg));
    cfg.batch_size = 0;
    CHECK_THROWS_AS(validate(cfg), Error);
    cfg = tiny_config();
    cfg.weights.kl = -1;
    CHECK_THROWS_AS(validate(cfg), Error);
    cfg = tiny_config();
    cfg.epochs_per_block = 0;
    CHECK_THROWS_AS(validate(cfg), Error);
}

TEST_CASE("zero loss weights leave parameters unchanged", "[train]") {
    auto cfg = tiny_config();
    cfg.weights = {0.0, 0.0};
    auto m = init_for(cfg);
    const auto before = m;
    train_model(m, tiny_data(), cfg);
    for (std::size_t t = 1; t <= cfg.spec.T; ++t) {
        CHECK(m.block(t).params == before.block(t).params);
    }
}

TEST_CASE("training order, freezing and trace shape", "[train]") {
    auto cfg = tiny_config();
    auto m = init_for(cfg);
    const auto before = m;
    std::vector<std::size_t> order;
    std::vector<Model> snaps;
    const auto traces = train_model(m, tiny_data(), cfg, [&](const Model &mm, const BlockTrace &tr) {
        order.push_back(tr.t);
        snaps.push_back(mm);
    });
    CHECK(order == std::vector<std::size_t>{2, 1});
    // Block 2 is frozen while block 1 trains; the scrambler never changes.
    CHECK(snaps[0].block(2).params == m.block(2).params);
    CHECK(snaps[0].block(1).params == before.block(1).params);
    CHECK(m.forward.scrambler == before.forward.scrambler);
    CHECK(m.forward.schedule == before.forward.schedule);
    for (const auto &tr : traces) {
        REQUIRE(tr.epoch_loss.size() == 3);
        for (double l : tr.epoch_loss) {
            CHECK(std::isfinite(l));
        }
    }
    CHECK(m.block(1).epochs_done == 3);
}

TEST_CASE("training is deterministic and thread-count invariant", "[train]") {
    auto cfg = tiny_config();
    auto a = init_for(cfg);
    train_model(a, tiny_data(), cfg);
    auto b = init_for(cfg);
    train_model(b, tiny_data(), cfg);
    CHECK(a == b);
    cfg.threads = 3;
    auto c = init_for(cfg);
    train_model(c, tiny_data(), cfg);
    CHECK(a == c);
}

TEST_CASE("resuming after an interrupted block reproduces the full run", "[train]") {
    auto cfg = tiny_config();
    cfg.spec.T = 3;
    auto full = init_for(cfg);
    train_model(full, tiny_data(), cfg);

    auto partial = init_for(cfg);
    Model saved;
    try {
        train_model(partial, tiny_data(), cfg, [&](const Model &m, const BlockTrace &tr) {
            saved = m;
            if (tr.t == 3) {
                throw std::runtime_error("killed");
            }
        });
    } catch (const std::runtime_error &) {
    }
    CHECK(saved.block(3).epochs_done == 3);
    CHECK(saved.block(2).epochs_done == 0);
    const auto traces = train_model(saved, tiny_data(), cfg);
    CHECK(traces.size() == 2);
    CHECK(saved == full);
}

TEST_CASE("single-step model trains one block", "[train]") {
    auto cfg = tiny_config();
    cfg.spec.T = 1;
    auto m = init_for(cfg);
    const auto traces = train_model(m, tiny_data(), cfg);
    CHECK(traces.size() == 1);
    CHECK(m.blocks.size() == 1);
}

TEST_CASE("forward cache holds x0..xT", "[train]") {
    auto cfg = tiny_config();
    const auto m = init_for(cfg);
    const auto data = tiny_data();
    const auto cache = build_forward_cache(data, m, 2);
    REQUIRE(cache.size() == data.size());
    CHECK(cache[1].size() == cfg.spec.T + 1);
    CHECK(cache[1][0] == data[1]);
    CHECK(cache[1].back() == qsc_chain(data[1], m.forward, 1).back());
}
