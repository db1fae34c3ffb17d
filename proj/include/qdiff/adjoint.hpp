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
 * @file adjoint.hpp
 * Gradients of a scalar loss of one denoiser block's max-normalized,
 * ancilla-projected output with respect to that block's parameters.
 *
 * The adjoint sweep runs the circuit forward once, seeds the costate with
 * dL/dp_j * psi_j on the ancilla-zero slice, then walks the gates backwards
 * accumulating 2 Re <lambda| dG psi>.
 */
#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "circuits.hpp"
#include "error.hpp"
#include "latent.hpp"
#include "loss.hpp"
#include "measure.hpp"
#include "statevector.hpp"

namespace qdiff {

/// Shape of one denoiser block: n data qubits, n_anc ancillas, L layers.
struct BlockShape {
    CircuitFamily family{CircuitFamily::Circuit1};
    std::size_t n{0};
    std::size_t n_anc{0};
    std::size_t layers{0};

    [[nodiscard]] std::size_t num_qubits() const noexcept { return n + n_anc; }
    [[nodiscard]] std::size_t num_params() const {
        return param_count(family, num_qubits(), layers);
    }
    bool operator==(const BlockShape &) const = default;
};

/// Final joint state of a block applied to `input` with ancillas in |0>.
inline StateVector run_block_state(std::span<const Gate> gates,
                                   std::span<const double> input,
                                   std::size_t n_anc) {
    auto psi = append_zero_qubits(amplitude_embed(input), n_anc);
    apply_circuit_inplace(psi, gates);
    return psi;
}

/// Ancilla-zero probabilities of the block output (before normalization).
inline ProbVector block_probs(const BlockShape &shape,
                              std::span<const double> theta,
                              std::span<const double> input) {
    const auto gates =
        build_circuit(shape.family, theta, shape.num_qubits(), shape.layers);
    return ancilla_projected_probs(run_block_state(gates, input, shape.n_anc),
                                   shape.n, shape.n_anc);
}

/**
 * @brief Chain dL/dx through x = p / p[j*] with j* held fixed:
 * dL/dp_j = g_j / p* for j != j*, and
 * dL/dp_{j*} = g_{j*} / p* - sum_i g_i p_i / p*^2.
 */
inline std::vector<double> max_normalize_backward(std::span<const double> p,
                                                  std::span<const double> g) {
    const std::size_t js = argmax(p);
    const double ps = p[js];
    std::vector<double> gp(p.size());
    double acc = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) {
        gp[j] = g[j] / ps;
        acc += g[j] * p[j];
    }
    gp[js] -= acc / (ps * ps);
    return gp;
}

/**
 * @brief Adjoint sweep. `psi` is the final state, `lambda` the costate
 * dL/dpsi^*. Returns the gradient over `num_params` trainable slots.
 */
inline std::vector<double> adjoint_sweep(std::span<const Gate> gates,
                                         StateVector psi, StateVector lambda,
                                         std::size_t num_params) {
    std::vector<double> grad(num_params, 0.0);
    StateVector mu;
    for (std::size_t k = gates.size(); k-- > 0;) {
        const Gate &g = gates[k];
        apply_gate_adjoint_inplace(psi, g);
        for (std::size_t i = 0; i < qdiff::num_params(g.kind); ++i) {
            if (g.param_ids[i] < 0) {
                continue;
            }
            mu = psi;
            apply_gate_derivative_inplace(mu, g, i);
            grad[static_cast<std::size_t>(g.param_ids[i])] +=
                2.0 * std::real(inner_product(lambda, mu));
        }
        apply_gate_adjoint_inplace(lambda, g);
    }
    return grad;
}

/// Loss of a block output: receives x~ and returns value plus dL/dx~.
using LossAdjointFn = std::function<LossAndGrad(const Latent &)>;

struct BlockGradient {
    double loss{0.0};
    Latent output;
    std::vector<double> grad;
};

/**
 * @brief Exact (infinite-shot) gradient of loss(max_normalize(p(theta)))
 * for one block, where p is the ancilla-zero slice of the output state.
 */
inline BlockGradient grad_block(const BlockShape &shape,
                                std::span<const double> theta,
                                std::span<const double> input,
                                const LossAdjointFn &loss_fn) {
    const auto gates =
        build_circuit(shape.family, theta, shape.num_qubits(), shape.layers);
    const auto psi = run_block_state(gates, input, shape.n_anc);
    const auto p = ancilla_projected_probs(psi, shape.n, shape.n_anc);

    BlockGradient out;
    out.output = max_normalize(p);
    auto lg = loss_fn(out.output);
    if (!std::isfinite(lg.value)) {
        fail(ErrorCode::NonFiniteLoss,
             "loss evaluated to " + std::to_string(lg.value));
    }
    out.loss = lg.value;

    const auto gp = max_normalize_backward(p, lg.grad);
    StateVector lambda(psi.num_qubits(),
                       std::vector<cplx>(psi.size(), cplx{0.0, 0.0}));
    for (std::size_t j = 0; j < gp.size(); ++j) {
        const std::size_t idx = j << shape.n_anc;
        lambda[idx] = gp[j] * psi[idx];
    }
    out.grad = adjoint_sweep(gates, psi, std::move(lambda), theta.size());
    for (double g : out.grad) {
        if (!std::isfinite(g)) {
            fail(ErrorCode::NonFiniteLoss, "non-finite gradient entry");
        }
    }
    return out;
}

/// Central differences (f(t + h e_i) - f(t - h e_i)) / 2h.
inline std::vector<double>
finite_diff_oracle(std::span<const double> theta,
                   const std::function<double(std::span<const double>)> &f,
                   double h) {
    std::vector<double> t(theta.begin(), theta.end());
    std::vector<double> grad(theta.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double orig = t[i];
        t[i] = orig + h;
        const double fp = f(t);
        t[i] = orig - h;
        const double fm = f(t);
        t[i] = orig;
        grad[i] = (fp - fm) / (2.0 * h);
    }
    return grad;
}

/**
 * @brief Parameter-shift cross-check of grad_block. Each angle of a single
 * Pauli-rotation generator uses the two-term rule; CRY/CRZ use the
 * four-term rule for generators with eigenvalues {0, +-1/2}.
 */
inline std::vector<double> param_shift_grad(const BlockShape &shape,
                                            std::span<const double> theta,
                                            std::span<const double> input,
                                            const LossAdjointFn &loss_fn) {
    const auto gates =
        build_circuit(shape.family, theta, shape.num_qubits(), shape.layers);
    std::vector<GateKind> kind_of(theta.size(), GateKind::RY);
    for (const auto &g : gates) {
        for (std::size_t i = 0; i < num_params(g.kind); ++i) {
            if (g.param_ids[i] >= 0) {
                kind_of[static_cast<std::size_t>(g.param_ids[i])] = g.kind;
            }
        }
    }

    const auto p0 = block_probs(shape, theta, input);
    const auto lg = loss_fn(max_normalize(p0));
    const auto gp = max_normalize_backward(p0, lg.grad);

    std::vector<double> t(theta.begin(), theta.end());
    auto probs_at = [&](std::size_t i, double shift) {
        const double orig = t[i];
        t[i] = orig + shift;
        auto p = block_probs(shape, t, input);
        t[i] = orig;
        return p;
    };

    constexpr double pi = std::numbers::pi;
    const double c1 = (std::numbers::sqrt2 + 1.0) / (4.0 * std::numbers::sqrt2);
    const double c2 = (std::numbers::sqrt2 - 1.0) / (4.0 * std::numbers::sqrt2);

    std::vector<double> grad(theta.size(), 0.0);
    for (std::size_t i = 0; i < theta.size(); ++i) {
        std::vector<double> dp(p0.size(), 0.0);
        if (kind_of[i] == GateKind::CRY || kind_of[i] == GateKind::CRZ) {
            const auto a = probs_at(i, pi / 2);
            const auto b = probs_at(i, -pi / 2);
            const auto c = probs_at(i, 3 * pi / 2);
            const auto d = probs_at(i, -3 * pi / 2);
            for (std::size_t j = 0; j < dp.size(); ++j) {
                dp[j] = c1 * (a[j] - b[j]) - c2 * (c[j] - d[j]);
            }
        } else {
            const auto a = probs_at(i, pi / 2);
            const auto b = probs_at(i, -pi / 2);
            for (std::size_t j = 0; j < dp.size(); ++j) {
                dp[j] = 0.5 * (a[j] - b[j]);
            }
        }
        for (std::size_t j = 0; j < dp.size(); ++j) {
            grad[i] += gp[j] * dp[j];
        }
    }
    return grad;
}

} // namespace qdiff
