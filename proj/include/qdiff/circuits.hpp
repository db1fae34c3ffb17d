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
 * @file circuits.hpp
 * Parameterized denoiser templates and the fixed scrambling circuit.
 *
 *  - Circuit1: strongly entangling layers. Per layer a Rot on every qubit,
 *    then a CNOT ring CNOT(q, (q + r_l) mod M) with r_l = (l mod (M-1)) + 1.
 *  - Circuit2: RY RZ RY RZ on every qubit, then a staggered CRY/CRZ ladder
 *    on adjacent pairs (even pairs first, then odd pairs).
 *  - Circuit3: SU(4)-like two-qubit blocks (U3 x2, RZ RY x2, CNOT both
 *    ways) on (2i, 2i+1) pairs in even layers and (2i+1, 2i+2 mod M) pairs
 *    in odd layers.
 */
#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"
#include "gates.hpp"
#include "random.hpp"

namespace qdiff {

enum class CircuitFamily { Circuit1, Circuit2, Circuit3, Scrambler };

inline const char *family_name(CircuitFamily f) noexcept {
    switch (f) {
    case CircuitFamily::Circuit1:
        return "circuit1";
    case CircuitFamily::Circuit2:
        return "circuit2";
    case CircuitFamily::Circuit3:
        return "circuit3";
    case CircuitFamily::Scrambler:
        return "scrambler";
    }
    return "?";
}

inline CircuitFamily parse_family(const std::string &name) {
    for (auto f : {CircuitFamily::Circuit1, CircuitFamily::Circuit2,
                   CircuitFamily::Circuit3}) {
        if (name == family_name(f)) {
            return f;
        }
    }
    fail(ErrorCode::BadKind, "unknown circuit family '" + name +
                                 "' (expected circuit1, circuit2 or circuit3)");
}

/// Number of qubit pairs per Circuit3 layer.
inline constexpr std::size_t circuit3_pairs(std::size_t M) noexcept {
    return M / 2;
}

/// Shapes of the parameter tensors consumed by one block, in storage order.
inline std::vector<std::vector<std::size_t>>
param_shape(CircuitFamily family, std::size_t M, std::size_t L) {
    switch (family) {
    case CircuitFamily::Circuit1:
    case CircuitFamily::Scrambler:
        return {{L, M, 3}};
    case CircuitFamily::Circuit2:
        return {{L, M, 4}, {L, M > 0 ? M - 1 : 0, 2}};
    case CircuitFamily::Circuit3:
        return {{L, circuit3_pairs(M), 10}};
    }
    return {};
}

/// Trainable parameter count of one block.
inline std::size_t param_count(CircuitFamily family, std::size_t M,
                               std::size_t L) {
    std::size_t total = 0;
    for (const auto &shape : param_shape(family, M, L)) {
        std::size_t n = 1;
        for (auto d : shape) {
            n *= d;
        }
        total += n;
    }
    return total;
}

/// Flat parameter vector plus gate sequence of one block.
struct CircuitTemplate {
    CircuitFamily family{CircuitFamily::Circuit1};
    std::size_t num_qubits{0};
    std::size_t num_layers{0};

    [[nodiscard]] std::size_t num_params() const {
        return param_count(family, num_qubits, num_layers);
    }
};

namespace detail {

inline void check_params(CircuitFamily family, std::size_t M, std::size_t L,
                         std::size_t got) {
    const auto want = param_count(family, M, L);
    if (got != want) {
        fail(ErrorCode::BadShape,
             std::string(family_name(family)) + " with M=" + std::to_string(M) +
                 ", L=" + std::to_string(L) + " needs " + std::to_string(want) +
                 " parameters, got " + std::to_string(got));
    }
}

/// Gate bound to trainable slots starting at `first_id` (or constant when
/// `trainable` is false).
inline Gate bound(GateKind kind, std::size_t w0, std::size_t w1,
                  std::span<const double> angles, std::size_t first_id,
                  bool trainable) {
    Gate g;
    g.kind = kind;
    g.wires = {w0, w1};
    for (std::size_t i = 0; i < angles.size(); ++i) {
        g.params[i] = angles[i];
        g.param_ids[i] = trainable ? static_cast<long>(first_id + i) : -1L;
    }
    return g;
}

inline std::vector<Gate> strongly_entangling(std::span<const double> params,
                                             std::size_t M, std::size_t L,
                                             std::span<const std::size_t> ranges,
                                             bool trainable) {
    std::vector<Gate> gates;
    gates.reserve(L * M * 2);
    for (std::size_t l = 0; l < L; ++l) {
        for (std::size_t q = 0; q < M; ++q) {
            const std::size_t off = (l * M + q) * 3;
            gates.push_back(bound(GateKind::Rot, q, q, params.subspan(off, 3),
                                  off, trainable));
        }
        if (M < 2) {
            continue;
        }
        const std::size_t r = ranges.empty() ? (l % (M - 1)) + 1 : ranges[l];
        for (std::size_t q = 0; q < M; ++q) {
            gates.push_back(make_gate2(GateKind::CNOT, q, (q + r) % M));
        }
    }
    return gates;
}

} // namespace detail

/// Default entangler range of layer `l` on `M` qubits.
inline std::size_t default_range(std::size_t l, std::size_t M) {
    return M < 2 ? 0 : (l % (M - 1)) + 1;
}

/**
 * @brief Circuit1 block. `params` is the flattened [L, M, 3] tensor of Rot
 * angles (phi, theta, omega). `ranges` may be empty to use default_range.
 */
inline std::vector<Gate> build_circuit1(std::span<const double> params,
                                        std::size_t M, std::size_t L,
                                        std::span<const std::size_t> ranges = {}) {
    detail::check_params(CircuitFamily::Circuit1, M, L, params.size());
    if (!ranges.empty()) {
        if (ranges.size() != L) {
            fail(ErrorCode::BadShape, "circuit1 needs one range per layer");
        }
        for (auto r : ranges) {
            if (r < 1 || r + 1 > M) {
                fail(ErrorCode::BadShape,
                     "circuit1 range " + std::to_string(r) + " outside [1, " +
                         std::to_string(M - 1) + "]");
            }
        }
    }
    return detail::strongly_entangling(params, M, L, ranges, true);
}

/**
 * @brief Circuit2 block. `params` is [L, M, 4] (RY RZ RY RZ angles) followed
 * by [L, M-1, 2] (two controlled-rotation angles per adjacent pair).
 *
 * Within a layer the even pairs (q even) are applied before the odd ones.
 * A pair leads with CRY when (q + l) is even and with CRZ otherwise, so the
 * pattern alternates across layers.
 */
inline std::vector<Gate> build_circuit2(std::span<const double> params,
                                        std::size_t M, std::size_t L) {
    detail::check_params(CircuitFamily::Circuit2, M, L, params.size());
    std::vector<Gate> gates;
    const std::size_t ladder_base = L * M * 4;
    constexpr GateKind single[4] = {GateKind::RY, GateKind::RZ, GateKind::RY,
                                    GateKind::RZ};
    for (std::size_t l = 0; l < L; ++l) {
        for (std::size_t q = 0; q < M; ++q) {
            for (std::size_t k = 0; k < 4; ++k) {
                const std::size_t off = (l * M + q) * 4 + k;
                gates.push_back(detail::bound(single[k], q, q,
                                              params.subspan(off, 1), off, true));
            }
        }
        for (std::size_t parity = 0; parity < 2; ++parity) {
            for (std::size_t q = parity; q + 1 < M; q += 2) {
                const std::size_t off = ladder_base + (l * (M - 1) + q) * 2;
                const bool ry_first = (q + l) % 2 == 0;
                const GateKind first = ry_first ? GateKind::CRY : GateKind::CRZ;
                const GateKind second = ry_first ? GateKind::CRZ : GateKind::CRY;
                gates.push_back(detail::bound(first, q, q + 1,
                                              params.subspan(off, 1), off, true));
                gates.push_back(detail::bound(second, q, q + 1,
                                              params.subspan(off + 1, 1),
                                              off + 1, true));
            }
        }
    }
    return gates;
}

/// Qubit pairs touched by Circuit3 layer `l`.
inline std::vector<std::array<std::size_t, 2>> circuit3_layer_pairs(std::size_t l,
                                                                    std::size_t M) {
    std::vector<std::array<std::size_t, 2>> pairs;
    for (std::size_t i = 0; i < circuit3_pairs(M); ++i) {
        if (l % 2 == 0) {
            pairs.push_back({2 * i, 2 * i + 1});
        } else {
            pairs.push_back({2 * i + 1, (2 * i + 2) % M});
        }
    }
    return pairs;
}

/**
 * @brief Circuit3 block. `params` is [L, M/2, 10]; per block the angles are
 * U3(a) x3, U3(b) x3, RZ(a), RY(a), RZ(b), RY(b).
 */
inline std::vector<Gate> build_circuit3(std::span<const double> params,
                                        std::size_t M, std::size_t L) {
    detail::check_params(CircuitFamily::Circuit3, M, L, params.size());
    std::vector<Gate> gates;
    for (std::size_t l = 0; l < L; ++l) {
        const auto pairs = circuit3_layer_pairs(l, M);
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            const auto [a, b] = pairs[i];
            const std::size_t off = (l * pairs.size() + i) * 10;
            auto p = [&](std::size_t k, std::size_t n) {
                return params.subspan(off + k, n);
            };
            gates.push_back(detail::bound(GateKind::U3, a, a, p(0, 3), off, true));
            gates.push_back(
                detail::bound(GateKind::U3, b, b, p(3, 3), off + 3, true));
            gates.push_back(
                detail::bound(GateKind::RZ, a, a, p(6, 1), off + 6, true));
            gates.push_back(
                detail::bound(GateKind::RY, a, a, p(7, 1), off + 7, true));
            gates.push_back(
                detail::bound(GateKind::RZ, b, b, p(8, 1), off + 8, true));
            gates.push_back(
                detail::bound(GateKind::RY, b, b, p(9, 1), off + 9, true));
            gates.push_back(make_gate2(GateKind::CNOT, a, b));
            gates.push_back(make_gate2(GateKind::CNOT, b, a));
        }
    }
    return gates;
}

inline std::vector<Gate> build_circuit(CircuitFamily family,
                                       std::span<const double> params,
                                       std::size_t M, std::size_t L) {
    switch (family) {
    case CircuitFamily::Circuit1:
        return build_circuit1(params, M, L);
    case CircuitFamily::Circuit2:
        return build_circuit2(params, M, L);
    case CircuitFamily::Circuit3:
        return build_circuit3(params, M, L);
    case CircuitFamily::Scrambler:
        break;
    }
    fail(ErrorCode::BadKind, "scrambler circuits are built by build_scrambler");
}

/**
 * @brief Fixed per-step base angles of the forward scrambler, uniform in
 * [0, 1). Drawn once from the master seed and never modified.
 */
struct ScramblerParams {
    std::size_t num_qubits{0};
    std::size_t num_layers{2};
    std::uint64_t seed{0};
    /// base_angles[t - 1] holds the flattened [L_s, n, 3] tensor for step t.
    std::vector<std::vector<double>> base_angles;

    [[nodiscard]] std::size_t steps() const noexcept { return base_angles.size(); }

    bool operator==(const ScramblerParams &) const = default;
};

/// Uniform [0,1) angle tensor of the scrambler shape drawn from `rng`.
inline std::vector<double> draw_base_angles(Rng &rng, std::size_t n,
                                            std::size_t layers) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> a(param_count(CircuitFamily::Scrambler, n, layers));
    for (auto &x : a) {
        x = u(rng);
    }
    return a;
}

inline ScramblerParams make_scrambler_params(std::size_t n, std::size_t steps,
                                             std::size_t layers,
                                             std::uint64_t seed) {
    ScramblerParams sp;
    sp.num_qubits = n;
    sp.num_layers = layers;
    sp.seed = seed;
    for (std::size_t t = 1; t <= steps; ++t) {
        auto rng = make_rng(seed, {stream::scrambler, t});
        sp.base_angles.push_back(draw_base_angles(rng, n, layers));
    }
    return sp;
}

/// Circuit1-shaped constant circuit with angles pi * strength * base.
inline std::vector<Gate> build_scaled_scrambler(std::span<const double> base,
                                                double strength, std::size_t n,
                                                std::size_t layers) {
    detail::check_params(CircuitFamily::Scrambler, n, layers, base.size());
    if (!(strength >= 0.0)) {
        fail(ErrorCode::BadShape, "scrambling strength must be >= 0");
    }
    std::vector<double> angles(base.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
        angles[i] = std::numbers::pi * strength * base[i];
    }
    return detail::strongly_entangling(angles, n, layers, {}, false);
}

/**
 * @brief Scrambling unitary of forward step `t` (1-based) with strength
 * `theta_t` in [0, 1].
 */
inline std::vector<Gate> build_scrambler(std::size_t t, double theta_t,
                                         const ScramblerParams &base) {
    if (t < 1 || t > base.steps()) {
        fail(ErrorCode::StepOutOfRange,
             "scrambler step " + std::to_string(t) + " outside [1, " +
                 std::to_string(base.steps()) + "]");
    }
    return build_scaled_scrambler(base.base_angles[t - 1], theta_t,
                                  base.num_qubits, base.num_layers);
}

} // namespace qdiff
