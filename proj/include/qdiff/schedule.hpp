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
 * @file schedule.hpp
 * Variance schedules and the derived scrambling strengths.
 *
 * alpha_t = 1 - lambda_s * beta_t, alpha_bar_t = prod_{s<=t} alpha_s and
 * theta_t = sqrt(1 - alpha_bar_t) * eps_t with eps_t ~ U[0, 1) drawn once.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "error.hpp"
#include "random.hpp"

namespace qdiff {

enum class ScheduleKind { Cosine, Linear, Sigmoid, Log };

inline const char *schedule_name(ScheduleKind k) noexcept {
    switch (k) {
    case ScheduleKind::Cosine:
        return "cosine";
    case ScheduleKind::Linear:
        return "linear";
    case ScheduleKind::Sigmoid:
        return "sigmoid";
    case ScheduleKind::Log:
        return "log";
    }
    return "?";
}

inline ScheduleKind parse_schedule_kind(const std::string &name) {
    for (auto k : {ScheduleKind::Cosine, ScheduleKind::Linear,
                   ScheduleKind::Sigmoid, ScheduleKind::Log}) {
        if (name == schedule_name(k)) {
            return k;
        }
    }
    fail(ErrorCode::BadKind, "unknown schedule kind '" + name +
                                 "' (expected cosine, linear, sigmoid or log)");
}

inline constexpr double kCosineOffset = 0.008;
inline constexpr double kBetaMax = 0.999;
inline constexpr double kBetaStart = 1e-4;
inline constexpr double kBetaEnd = 0.02;

namespace detail {

inline double linspace_at(double a, double b, std::size_t i, std::size_t n) {
    if (n == 1) {
        return a;
    }
    return a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
}

} // namespace detail

/// beta_1..beta_T (index 0 holds beta_1).
inline std::vector<double> make_betas(ScheduleKind kind, std::size_t T) {
    if (T < 1) {
        fail(ErrorCode::BadShape, "schedule needs T >= 1");
    }
    std::vector<double> betas(T);
    const double Td = static_cast<double>(T);
    switch (kind) {
    case ScheduleKind::Cosine: {
        auto f = [&](double t) {
            const double c = std::cos((t / Td + kCosineOffset) /
                                      (1.0 + kCosineOffset) * std::numbers::pi / 2);
            return c * c;
        };
        const double f0 = f(0.0);
        for (std::size_t t = 1; t <= T; ++t) {
            const double ab = f(static_cast<double>(t)) / f0;
            const double ab_prev = f(static_cast<double>(t - 1)) / f0;
            betas[t - 1] = std::min(1.0 - ab / ab_prev, kBetaMax);
        }
        break;
    }
    case ScheduleKind::Linear:
        for (std::size_t i = 0; i < T; ++i) {
            betas[i] = detail::linspace_at(kBetaStart, kBetaEnd, i, T);
        }
        break;
    case ScheduleKind::Sigmoid:
        for (std::size_t t = 1; t <= T; ++t) {
            const double z = -6.0 + 12.0 * static_cast<double>(t) / Td;
            betas[t - 1] =
                (kBetaEnd - kBetaStart) / (1.0 + std::exp(-z)) + kBetaStart;
        }
        break;
    case ScheduleKind::Log:
        for (std::size_t i = 0; i < T; ++i) {
            betas[i] = std::exp(detail::linspace_at(std::log(kBetaStart),
                                                    std::log(kBetaEnd), i, T));
        }
        break;
    }
    return betas;
}

struct NoiseSchedule {
    ScheduleKind kind{ScheduleKind::Cosine};
    std::size_t T{0};
    double lambda_s{0.0};
    std::uint64_t seed{0};
    std::vector<double> betas;      ///< beta_1..beta_T
    std::vector<double> alphas;     ///< alpha_1..alpha_T
    std::vector<double> alpha_bars; ///< alpha_bar_0..alpha_bar_T, [0] == 1
    std::vector<double> eps;        ///< eps_1..eps_T in [0, 1)
    std::vector<double> thetas;     ///< theta_1..theta_T

    [[nodiscard]] double beta(std::size_t t) const { return betas.at(t - 1); }
    [[nodiscard]] double alpha(std::size_t t) const { return alphas.at(t - 1); }
    [[nodiscard]] double alpha_bar(std::size_t t) const {
        return alpha_bars.at(t);
    }
    [[nodiscard]] double theta(std::size_t t) const { return thetas.at(t - 1); }

    bool operator==(const NoiseSchedule &) const = default;
};

/// Recompute alphas, alpha_bars and thetas from betas and eps.
inline void derive_schedule(NoiseSchedule &s) {
    s.alphas.resize(s.T);
    s.alpha_bars.assign(s.T + 1, 1.0);
    s.thetas.resize(s.T);
    for (std::size_t t = 1; t <= s.T; ++t) {
        s.alphas[t - 1] = 1.0 - s.lambda_s * s.betas[t - 1];
        s.alpha_bars[t] = s.alpha_bars[t - 1] * s.alphas[t - 1];
        s.thetas[t - 1] = std::sqrt(1.0 - s.alpha_bars[t]) * s.eps[t - 1];
    }
}

inline NoiseSchedule make_schedule(ScheduleKind kind, std::size_t T,
                                   double lambda_s, std::uint64_t seed) {
    if (!(lambda_s >= 0.0 && lambda_s <= 1.0)) {
        fail(ErrorCode::BadShape, "lambda_s must lie in [0, 1]");
    }
    NoiseSchedule s;
    s.kind = kind;
    s.T = T;
    s.lambda_s = lambda_s;
    s.seed = seed;
    s.betas = make_betas(kind, T);
    auto rng = make_rng(seed, {stream::schedule});
    std::uniform_real_distribution<double> u(0.0, 1.0);
    s.eps.resize(T);
    for (auto &e : s.eps) {
        e = u(rng);
    }
    derive_schedule(s);
    return s;
}

} // namespace qdiff
