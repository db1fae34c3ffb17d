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
 * @file statevector.hpp
 * Dense statevector of an m-qubit register. Wire 0 is the most significant
 * bit of the basis index, so wire w flips bit (m - 1 - w).
 */
#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"
#include "gates.hpp"

namespace qdiff {

class StateVector {
  public:
    StateVector() = default;

    /// |0...0> on `num_qubits` wires.
    explicit StateVector(std::size_t num_qubits)
        : num_qubits_(num_qubits), amps_(std::size_t{1} << num_qubits) {
        amps_[0] = 1.0;
    }

    StateVector(std::size_t num_qubits, std::vector<cplx> amps)
        : num_qubits_(num_qubits), amps_(std::move(amps)) {
        if (amps_.size() != (std::size_t{1} << num_qubits_)) {
            fail(ErrorCode::BadLength,
                 "statevector of " + std::to_string(num_qubits_) +
                     " qubits needs " +
                     std::to_string(std::size_t{1} << num_qubits_) +
                     " amplitudes, got " + std::to_string(amps_.size()));
        }
    }

    [[nodiscard]] std::size_t num_qubits() const noexcept { return num_qubits_; }
    [[nodiscard]] std::size_t size() const noexcept { return amps_.size(); }
    [[nodiscard]] std::span<const cplx> amplitudes() const noexcept {
        return amps_;
    }
    [[nodiscard]] std::span<cplx> amplitudes() noexcept { return amps_; }
    [[nodiscard]] const cplx &operator[](std::size_t i) const { return amps_[i]; }
    [[nodiscard]] cplx &operator[](std::size_t i) { return amps_[i]; }

    [[nodiscard]] double norm() const {
        double s = 0.0;
        for (const auto &a : amps_) {
            s += std::norm(a);
        }
        return std::sqrt(s);
    }

  private:
    std::size_t num_qubits_{0};
    std::vector<cplx> amps_{cplx{1.0, 0.0}};
};

/// log2 of `n` when `n` is a power of two, otherwise BadLength.
inline std::size_t log2_exact(std::size_t n) {
    if (n == 0 || !std::has_single_bit(n)) {
        fail(ErrorCode::BadLength,
             "length " + std::to_string(n) + " is not a power of two");
    }
    return static_cast<std::size_t>(std::countr_zero(n));
}

/**
 * @brief Load a nonnegative real vector into amplitudes, L2-normalized.
 * Negative entries are clamped to zero first.
 */
inline StateVector amplitude_embed(std::span<const double> v) {
    const std::size_t nq = log2_exact(v.size());
    std::vector<cplx> amps(v.size());
    double ss = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double x = std::max(v[i], 0.0);
        amps[i] = x;
        ss += x * x;
    }
    if (!(ss > 0.0)) {
        fail(ErrorCode::ZeroVector, "cannot embed a vector with zero norm");
    }
    const double inv = 1.0 / std::sqrt(ss);
    for (auto &a : amps) {
        a *= inv;
    }
    return StateVector(nq, std::move(amps));
}

/// `s` tensored with |0>^{n_extra} on new trailing wires.
inline StateVector append_zero_qubits(const StateVector &s,
                                      std::size_t n_extra) {
    std::vector<cplx> amps(s.size() << n_extra);
    for (std::size_t j = 0; j < s.size(); ++j) {
        amps[j << n_extra] = s[j];
    }
    return StateVector(s.num_qubits() + n_extra, std::move(amps));
}

namespace detail {

inline void check_wire(std::size_t wire, std::size_t nq) {
    if (wire >= nq) {
        fail(ErrorCode::WireOutOfRange, "wire " + std::to_string(wire) +
                                            " on a " + std::to_string(nq) +
                                            "-qubit register");
    }
}

inline void check_gate(const Gate &g, std::size_t nq) {
    check_wire(g.wires[0], nq);
    if (is_controlled(g.kind)) {
        check_wire(g.wires[1], nq);
        if (g.wires[0] == g.wires[1]) {
            fail(ErrorCode::WireOutOfRange,
                 std::string(gate_name(g.kind)) +
                     " needs distinct control and target wires");
        }
    }
}

/**
 * @brief Core kernel: apply `m` to `target`. With a control wire, only the
 * control=1 half is touched unless `zero_off_control` is set, in which case
 * the control=0 half is cleared (used for derivatives of controlled gates).
 */
inline void apply_matrix(std::span<cplx> amps, std::size_t nq, const Mat2 &m,
                         std::size_t target, long control,
                         bool zero_off_control) {
    const std::size_t tbit = std::size_t{1} << (nq - 1 - target);
    const std::size_t cbit =
        control >= 0 ? std::size_t{1} << (nq - 1 - static_cast<std::size_t>(
                                                        control))
                     : 0;
    const std::size_t half = amps.size() / 2;
    const std::size_t low = tbit - 1;
    for (std::size_t k = 0; k < half; ++k) {
        const std::size_t i0 = ((k & ~low) << 1U) | (k & low);
        const std::size_t i1 = i0 | tbit;
        if (cbit != 0U && (i0 & cbit) == 0U) {
            if (zero_off_control) {
                amps[i0] = 0.0;
                amps[i1] = 0.0;
            }
            continue;
        }
        const cplx a0 = amps[i0];
        const cplx a1 = amps[i1];
        amps[i0] = m[0] * a0 + m[1] * a1;
        amps[i1] = m[2] * a0 + m[3] * a1;
    }
}

inline long control_of(const Gate &g) {
    return is_controlled(g.kind) ? static_cast<long>(g.wires[0]) : -1L;
}

} // namespace detail

inline void apply_gate_inplace(StateVector &s, const Gate &g) {
    detail::check_gate(g, s.num_qubits());
    detail::apply_matrix(s.amplitudes(), s.num_qubits(), gate_matrix(g),
                         g.target(), detail::control_of(g), false);
}

/// G^dagger applied in place.
inline void apply_gate_adjoint_inplace(StateVector &s, const Gate &g) {
    detail::check_gate(g, s.num_qubits());
    detail::apply_matrix(s.amplitudes(), s.num_qubits(),
                         adjoint(gate_matrix(g)), g.target(),
                         detail::control_of(g), false);
}

/// (dG / d angle_which) applied in place; the result is not normalized.
inline void apply_gate_derivative_inplace(StateVector &s, const Gate &g,
                                          std::size_t which) {
    detail::check_gate(g, s.num_qubits());
    detail::apply_matrix(s.amplitudes(), s.num_qubits(),
                         gate_matrix_derivative(g, which), g.target(),
                         detail::control_of(g), true);
}

inline StateVector apply_gate(StateVector s, const Gate &g) {
    apply_gate_inplace(s, g);
    return s;
}

inline void apply_circuit_inplace(StateVector &s, std::span<const Gate> gates) {
    for (const auto &g : gates) {
        apply_gate_inplace(s, g);
    }
}

inline StateVector apply_circuit(StateVector s, std::span<const Gate> gates) {
    apply_circuit_inplace(s, gates);
    return s;
}

/// <a|b>
inline cplx inner_product(const StateVector &a, const StateVector &b) {
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i) {
        acc += std::conj(a[i]) * b[i];
    }
    return acc;
}

} // namespace qdiff
