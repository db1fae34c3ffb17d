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
 * @file forward.hpp
 * Forward degradation processes x_0 -> x_1..x_T:
 *   QSC  - Gaussian noising, amplitude embedding, fixed scheduled scrambler,
 *          measurement and max-normalization.
 *   CDP  - classical DDPM chain (alpha_t = 1 - beta_t), clamped and
 *          max-normalized per step.
 *   IUSP - per-sample random full-strength unitaries, measure and re-embed.
 *   GUSP - as IUSP with the unitary strength scaled by theta_t.
 */
#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "circuits.hpp"
#include "error.hpp"
#include "latent.hpp"
#include "measure.hpp"
#include "random.hpp"
#include "schedule.hpp"
#include "statevector.hpp"

namespace qdiff {

enum class ForwardVariant { QSC, CDP, IUSP, GUSP };

inline const char *variant_name(ForwardVariant v) noexcept {
    switch (v) {
    case ForwardVariant::QSC:
        return "qsc";
    case ForwardVariant::CDP:
        return "cdp";
    case ForwardVariant::IUSP:
        return "iusp";
    case ForwardVariant::GUSP:
        return "gusp";
    }
    return "?";
}

inline ForwardVariant parse_variant(const std::string &name) {
    for (auto v : {ForwardVariant::QSC, ForwardVariant::CDP,
                   ForwardVariant::IUSP, ForwardVariant::GUSP}) {
        if (name == variant_name(v)) {
            return v;
        }
    }
    fail(ErrorCode::BadKind, "unknown forward variant '" + name + "'");
}

/// z = sqrt(alpha_bar) x + sqrt(1 - alpha_bar) eps, eps ~ N(0, I).
inline std::vector<double> gaussian_noising(std::span<const double> x,
                                            double alpha_bar, Rng &rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    const double a = std::sqrt(alpha_bar);
    const double b = std::sqrt(1.0 - alpha_bar);
    std::vector<double> z(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
        z[j] = a * x[j] + b * normal(rng);
    }
    return z;
}

/// embed -> circuit -> Born probabilities -> max-normalize.
inline Latent measure_normalize(std::span<const double> v,
                                std::span<const Gate> gates) {
    auto psi = amplitude_embed(v);
    apply_circuit_inplace(psi, gates);
    return max_normalize(full_probs(psi));
}

/**
 * @brief One QSC forward step producing x_t from x_{t-1}. The noise level
 * uses alpha_bar_{t-1}; the scrambler is the fixed unitary of step t.
 */
inline Latent qsc_step(std::span<const double> x_prev, std::size_t t,
                       const NoiseSchedule &schedule,
                       const ScramblerParams &scrambler, Rng &rng) {
    if (t < 1 || t > schedule.T) {
        fail(ErrorCode::StepOutOfRange, "forward step " + std::to_string(t));
    }
    const auto z = gaussian_noising(x_prev, schedule.alpha_bar(t - 1), rng);
    const auto gates = build_scrambler(t, schedule.theta(t), scrambler);
    return measure_normalize(z, gates);
}

/// Everything a forward chain needs besides x_0.
struct ForwardModel {
    NoiseSchedule schedule;
    ScramblerParams scrambler;
    std::uint64_t seed{0};
};

inline std::vector<Latent> qsc_chain(std::span<const double> x0,
                                     const ForwardModel &fm,
                                     std::uint64_t sample) {
    std::vector<Latent> xs;
    Latent x(x0.begin(), x0.end());
    for (std::size_t t = 1; t <= fm.schedule.T; ++t) {
        auto rng = make_rng(fm.seed, {stream::forward_noise, sample, t});
        x = qsc_step(x, t, fm.schedule, fm.scrambler, rng);
        xs.push_back(x);
    }
    return xs;
}

/**
 * @brief Classical chain x_t = sqrt(1 - beta_t) x_{t-1} + sqrt(beta_t) eps on
 * the raw Gaussian state; each emitted x_t is clamp01 + max_normalize of the
 * raw state so the raw chain keeps the closed-form marginals.
 */
inline std::vector<Latent> cdp_chain(std::span<const double> x0,
                                     const NoiseSchedule &schedule,
                                     std::uint64_t seed, std::uint64_t sample) {
    std::vector<Latent> xs;
    std::vector<double> raw(x0.begin(), x0.end());
    std::normal_distribution<double> normal(0.0, 1.0);
    for (std::size_t t = 1; t <= schedule.T; ++t) {
        auto rng = make_rng(seed, {stream::forward_noise, sample, t});
        const double b = schedule.beta(t);
        const double keep = std::sqrt(1.0 - b);
        const double sd = std::sqrt(b);
        for (auto &r : raw) {
            r = keep * r + sd * normal(rng);
        }
        xs.push_back(max_normalize(clamp01(raw)));
    }
    return xs;
}

/// Raw (unclamped) closed-form CDP marginal at step t.
inline std::vector<double> cdp_marginal(std::span<const double> x0,
                                        const NoiseSchedule &schedule,
                                        std::size_t t, Rng &rng) {
    double ab = 1.0;
    for (std::size_t s = 1; s <= t; ++s) {
        ab *= 1.0 - schedule.beta(s);
    }
    return gaussian_noising(x0, ab, rng);
}

namespace detail {

inline std::vector<Latent> unitary_chain(std::span<const double> x0,
                                         std::size_t T,
                                         std::span<const double> strengths,
                                         std::size_t layers, std::uint64_t seed,
                                         std::uint64_t sample) {
    const std::size_t n = log2_exact(x0.size());
    std::vector<Latent> xs;
    Latent x(x0.begin(), x0.end());
    for (std::size_t t = 1; t <= T; ++t) {
        auto rng = make_rng(seed, {stream::unitary, sample, t});
        // Rotation angles are strength * u radians with u ~ U(0, 1); unlike
        // the QSC scrambler there is no pi factor.
        auto angles = draw_base_angles(rng, n, layers);
        for (auto &a : angles) {
            a *= strengths[t - 1];
        }
        x = measure_normalize(
            x, detail::strongly_entangling(angles, n, layers, {}, false));
        xs.push_back(x);
    }
    return xs;
}

} // namespace detail

/// IUSP: independent per-sample random unitaries at full strength.
inline std::vector<Latent> iusp_chain(std::span<const double> x0, std::size_t T,
                                      std::size_t layers, std::uint64_t seed,
                                      std::uint64_t sample) {
    const std::vector<double> ones(T, 1.0);
    return detail::unitary_chain(x0, T, ones, layers, seed, sample);
}

/// GUSP: per-sample random unitaries with strength theta_t, no Gaussian noise.
inline std::vector<Latent> gusp_chain(std::span<const double> x0,
                                      const NoiseSchedule &schedule,
                                      std::size_t layers, std::uint64_t seed,
                                      std::uint64_t sample) {
    return detail::unitary_chain(x0, schedule.T, schedule.thetas, layers, seed,
                                 sample);
}

inline std::vector<Latent> run_forward(ForwardVariant variant,
                                       std::span<const double> x0,
                                       const ForwardModel &fm,
                                       std::uint64_t sample) {
    switch (variant) {
    case ForwardVariant::QSC:
        return qsc_chain(x0, fm, sample);
    case ForwardVariant::CDP:
        return cdp_chain(x0, fm.schedule, fm.seed, sample);
    case ForwardVariant::IUSP:
        return iusp_chain(x0, fm.schedule.T, fm.scrambler.num_layers, fm.seed,
                          sample);
    case ForwardVariant::GUSP:
        return gusp_chain(x0, fm.schedule, fm.scrambler.num_layers, fm.seed,
                          sample);
    }
    return {};
}

} // namespace qdiff
