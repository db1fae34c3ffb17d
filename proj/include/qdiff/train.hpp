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
/**
 * @file train.hpp
 * Reverse-order, block-by-block training. Block k+1 is trained with blocks
 * k+2..T frozen: the forward chain supplies the target x_k, the frozen
 * reverse chain supplies x~_{k+1} from x~_T = x_T, and only block k+1's
 * parameters receive gradients.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "adjoint.hpp"
#include "error.hpp"
#include "forward.hpp"
#include "loss.hpp"
#include "optim.hpp"
#include "parallel.hpp"
#include "random.hpp"
#include "reverse.hpp"

namespace qdiff {

struct TrainConfig {
    ModelSpec spec;
    ScheduleKind schedule{ScheduleKind::Cosine};
    double lambda_s{0.1};
    LossWeights weights;
    double lr{5e-4};
    std::size_t epochs_per_block{50};
    std::size_t batch_size{32};
    std::size_t lr_step{10};
    double lr_gamma{0.05};
    std::uint64_t seed{0};
    std::size_t threads{1};
};

inline void validate(const TrainConfig &cfg) {
    auto bad = [](const std::string &what) {
        fail(ErrorCode::ConfigInvalid, what);
    };
    if (cfg.weights.kl < 0.0 || cfg.weights.l1 < 0.0) {
        bad("loss weights must be >= 0");
    }
    if (cfg.batch_size < 1) {
        bad("optim.batch_size must be >= 1");
    }
    if (cfg.epochs_per_block < 1) {
        bad("optim.epochs_per_block must be >= 1");
    }
    if (!(cfg.lr > 0.0)) {
        bad("optim.lr must be > 0");
    }
    if (!(cfg.lr_gamma > 0.0)) {
        bad("optim.lr_gamma must be > 0");
    }
    if (!(cfg.lambda_s >= 0.0 && cfg.lambda_s <= 1.0)) {
        bad("schedule.lambda_s must lie in [0, 1]");
    }
    if (cfg.spec.n < 1 || cfg.spec.n + cfg.spec.n_anc > 20) {
        bad("model.n + model.n_ancilla must lie in [1, 20]");
    }
    if (cfg.spec.T < 1) {
        bad("model.t_steps must be >= 1");
    }
    if (cfg.spec.family == CircuitFamily::Circuit1 &&
        cfg.spec.n + cfg.spec.n_anc < 2) {
        bad("circuit1 needs at least two qubits");
    }
}

/// Per-epoch mean loss of one block.
struct BlockTrace {
    std::size_t t{0};
    std::vector<double> epoch_loss;
};

/// Cached forward chains: chains[i][t] = x_t of sample i (t = 0..T).
using ForwardCache = std::vector<std::vector<Latent>>;

inline ForwardCache build_forward_cache(std::span<const Latent> x0s,
                                        const Model &model, std::size_t threads) {
    ForwardCache cache(x0s.size());
    parallel_for(x0s.size(), threads, [&](std::size_t i) {
        auto chain = qsc_chain(x0s[i], model.forward, i);
        chain.insert(chain.begin(), x0s[i]);
        cache[i] = std::move(chain);
    });
    return cache;
}

/**
 * @brief Train block k+1 for cfg.epochs_per_block epochs. The data order of
 * block k+1 depends only on (seed, k+1), so a restarted block reproduces an
 * uninterrupted run.
 */
inline BlockTrace train_block(std::size_t k, Model &model,
                              const ForwardCache &cache, const TrainConfig &cfg) {
    const std::size_t T = model.spec.T;
    const std::size_t t = k + 1;
    if (t < 1 || t > T) {
        fail(ErrorCode::StepOutOfRange, "block " + std::to_string(t));
    }
    const std::size_t N = cache.size();
    if (N == 0) {
        fail(ErrorCode::BadShape, "training set is empty");
    }

    // x~_{k+1} through the frozen blocks T..k+2.
    std::vector<Latent> inputs(N);
    parallel_for(N, cfg.threads, [&](std::size_t i) {
        inputs[i] = reverse_range(cache[i][T], model, T, t);
    });

    DenoiserBlock &block = model.block(t);
    Adam adam(block.params.size(), cfg.lr);
    auto order_rng = make_rng(cfg.seed, {stream::data_order, t});
    std::vector<std::size_t> order(N);

    BlockTrace trace;
    trace.t = t;
    std::vector<BlockGradient> results(N);
    for (std::size_t epoch = 0; epoch < cfg.epochs_per_block; ++epoch) {
        adam.lr = steplr(epoch, cfg.lr, cfg.lr_step, cfg.lr_gamma);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::shuffle(order.begin(), order.end(), order_rng);

        double epoch_sum = 0.0;
        for (std::size_t start = 0; start < N; start += cfg.batch_size) {
            const std::size_t stop = std::min(N, start + cfg.batch_size);
            const std::size_t B = stop - start;
            parallel_for(B, cfg.threads, [&](std::size_t b) {
                const std::size_t i = order[start + b];
                const Latent &target = cache[i][k];
                results[b] = grad_block(
                    block.shape, block.params, inputs[i],
                    [&](const Latent &pred) {
                        return hybrid_loss_grad(target, pred, cfg.weights);
                    });
            });
            std::vector<double> grad(block.params.size(), 0.0);
            for (std::size_t b = 0; b < B; ++b) {
                epoch_sum += results[b].loss;
                for (std::size_t p = 0; p < grad.size(); ++p) {
                    grad[p] += results[b].grad[p];
                }
            }
            for (auto &g : grad) {
                g /= static_cast<double>(B);
            }
            adam.step(block.params, grad);
        }
        const double mean = epoch_sum / static_cast<double>(N);
        if (!std::isfinite(mean)) {
            fail(ErrorCode::NonFiniteLoss,
                 "block " + std::to_string(t) + " epoch " +
                     std::to_string(epoch) + " mean loss " +
                     std::to_string(mean));
        }
        trace.epoch_loss.push_back(mean);
    }
    block.epochs_done = cfg.epochs_per_block;
    return trace;
}

/// Called after each finished block (checkpointing hook).
using BlockDoneFn = std::function<void(const Model &, const BlockTrace &)>;

/**
 * @brief Train blocks T, T-1, ..., 1 in order. Blocks whose epochs_done
 * already reaches the configured count are skipped, which makes a run
 * resumable from any checkpoint written by `on_block_done`.
 */
inline std::vector<BlockTrace> train_model(Model &model,
                                           std::span<const Latent> x0s,
                                           const TrainConfig &cfg,
                                           const BlockDoneFn &on_block_done = {}) {
    validate(cfg);
    const auto cache = build_forward_cache(x0s, model, cfg.threads);
    std::vector<BlockTrace> traces;
    for (std::size_t k = model.spec.T; k-- > 0;) {
        if (model.block(k + 1).epochs_done >= cfg.epochs_per_block) {
            continue;
        }
        traces.push_back(train_block(k, model, cache, cfg));
        if (on_block_done) {
            on_block_done(model, traces.back());
        }
    }
    return traces;
}

} // namespace qdiff
