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
 * @file reverse.hpp
 * Denoiser blocks and the reverse sampling chain x~_T -> x~_0.
 */
#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "adjoint.hpp"
#include "circuits.hpp"
#include "error.hpp"
#include "forward.hpp"
#include "latent.hpp"
#include "measure.hpp"
#include "random.hpp"
#include "schedule.hpp"

namespace qdiff {

struct ModelSpec {
    std::size_t n{8};
    std::size_t n_anc{2};
    std::size_t T{8};
    std::size_t l0{12};
    CircuitFamily family{CircuitFamily::Circuit1};
    std::size_t scrambler_layers{2};

    bool operator==(const ModelSpec &) const = default;
};

/// Trainable block of reverse step t with depth l0 + t.
struct DenoiserBlock {
    std::size_t t{0};
    BlockShape shape;
    std::vector<double> params;
    std::size_t epochs_done{0};

    bool operator==(const DenoiserBlock &) const = default;
};

struct Model {
    ModelSpec spec;
    ForwardModel forward;
    std::vector<DenoiserBlock> blocks; ///< blocks[t - 1] is step t

    [[nodiscard]] const DenoiserBlock &block(std::size_t t) const {
        return blocks.at(t - 1);
    }
    [[nodiscard]] DenoiserBlock &block(std::size_t t) { return blocks.at(t - 1); }
    [[nodiscard]] std::uint64_t seed() const noexcept { return forward.seed; }

    /// Trainable parameters summed over all blocks.
    [[nodiscard]] std::size_t total_params() const {
        std::size_t s = 0;
        for (const auto &b : blocks) {
            s += b.params.size();
        }
        return s;
    }

    bool operator==(const Model &o) const {
        return spec == o.spec && forward.schedule == o.forward.schedule &&
               forward.scrambler == o.forward.scrambler &&
               forward.seed == o.forward.seed && blocks == o.blocks;
    }
};

inline BlockShape block_shape(const ModelSpec &spec, std::size_t t) {
    return BlockShape{spec.family, spec.n, spec.n_anc, spec.l0 + t};
}

/// Uniform [0, 2pi) initial angles for block t.
inline std::vector<double> init_block_params(const BlockShape &shape,
                                             std::uint64_t seed, std::size_t t) {
    auto rng = make_rng(seed, {stream::block_init, t});
    std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
    std::vector<double> p(shape.num_params());
    for (auto &x : p) {
        x = u(rng);
    }
    return p;
}

inline Model init_model(const ModelSpec &spec, ScheduleKind kind,
                        double lambda_s, std::uint64_t seed) {
    if (spec.n < 1) {
        fail(ErrorCode::BadShape, "model needs at least one data qubit");
    }
    Model m;
    m.spec = spec;
    m.forward.seed = seed;
    m.forward.schedule = make_schedule(kind, spec.T, lambda_s, seed);
    m.forward.scrambler =
        make_scrambler_params(spec.n, spec.T, spec.scrambler_layers, seed);
    for (std::size_t t = 1; t <= spec.T; ++t) {
        DenoiserBlock b;
        b.t = t;
        b.shape = block_shape(spec, t);
        b.params = init_block_params(b.shape, seed, t);
        m.blocks.push_back(std::move(b));
    }
    return m;
}

/**
 * @brief x~_{t-1} from x~_t: embed on the data wires, ancillas in |0>, run
 * the block, keep the ancilla-zero probabilities and max-normalize. A block
 * whose ancilla-zero slice carries no mass raises AllZero.
 */
inline Latent denoise_step(std::span<const double> x, const DenoiserBlock &block) {
    return max_normalize(block_probs(block.shape, block.params, x));
}

/// Shot-sampled variant of denoise_step.
inline Latent denoise_step_shots(std::span<const double> x,
                                 const DenoiserBlock &block,
                                 std::uint64_t shots, std::uint64_t shot_seed) {
    const auto p = block_probs(block.shape, block.params, x);
    return max_normalize(sample_shots(p, shots, shot_seed));
}

/// Apply blocks t_from, t_from - 1, ..., t_to + 1 (analytic probabilities).
inline Latent reverse_range(std::span<const double> x, const Model &model,
                            std::size_t t_from, std::size_t t_to) {
    Latent cur(x.begin(), x.end());
    for (std::size_t t = t_from; t > t_to; --t) {
        cur = denoise_step(cur, model.block(t));
    }
    return cur;
}

/**
 * @brief Full reverse chain from `init` (x~_T). With `shots` set, each
 * step's distribution is replaced by empirical frequencies drawn from the
 * stream (seed, sample, t).
 */
inline Latent sample_chain(std::span<const double> init, const Model &model,
                           std::optional<std::uint64_t> shots,
                           std::uint64_t seed, std::uint64_t sample) {
    Latent cur(init.begin(), init.end());
    for (std::size_t t = model.spec.T; t >= 1; --t) {
        if (shots) {
            cur = denoise_step_shots(cur, model.block(t), *shots,
                                     derive_seed(seed, {stream::shots, sample, t}));
        } else {
            cur = denoise_step(cur, model.block(t));
        }
    }
    return cur;
}

enum class InitMode { Noise, Forward };

/// i.i.d. uniform [0, 1] latent, max-normalized.
inline Latent noise_init(std::size_t dim, std::uint64_t seed,
                         std::uint64_t sample) {
    auto rng = make_rng(seed, {stream::init_latent, sample});
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Latent v(dim);
    for (auto &x : v) {
        x = u(rng);
    }
    return max_normalize(v);
}

inline Latent make_init(InitMode mode, std::span<const double> x0,
                        const Model &model, std::uint64_t seed,
                        std::uint64_t sample) {
    if (mode == InitMode::Noise) {
        return noise_init(std::size_t{1} << model.spec.n, seed, sample);
    }
    if (x0.size() != (std::size_t{1} << model.spec.n)) {
        fail(ErrorCode::LengthMismatch, "forward init needs a latent of length "
                                        "2^n");
    }
    auto chain = qsc_chain(x0, model.forward, sample);
    if (chain.empty()) {
        return Latent(x0.begin(), x0.end());
    }
    return chain.back();
}

} // namespace qdiff
