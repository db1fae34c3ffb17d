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
 * @file gates.hpp
 * Gate set of the simulator. Every gate is either a single-qubit 2x2 unitary
 * or a controlled 2x2 unitary, so a single kernel covers all of them.
 *
 * Conventions:
 *   RY(t)        = [[cos t/2, -sin t/2], [sin t/2, cos t/2]]
 *   RZ(t)        = diag(exp(-i t/2), exp(i t/2))
 *   Rot(p, t, w) = RZ(w) RY(t) RZ(p)
 *   U3(t, p, l)  = [[cos t/2, -e^{il} sin t/2], [e^{ip} sin t/2,
 *                   e^{i(p+l)} cos t/2]]
 * Two-qubit gates use wires = {control, target}.
 */
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>

#include "error.hpp"

namespace qdiff {

using cplx = std::complex<double>;

/// Row-major 2x2 complex matrix.
using Mat2 = std::array<cplx, 4>;

enum class GateKind { Rot, U3, RY, RZ, CNOT, CZ, CRY, CRZ };

inline constexpr std::size_t num_params(GateKind k) noexcept {
    switch (k) {
    case GateKind::Rot:
    case GateKind::U3:
        return 3;
    case GateKind::RY:
    case GateKind::RZ:
    case GateKind::CRY:
    case GateKind::CRZ:
        return 1;
    case GateKind::CNOT:
    case GateKind::CZ:
        return 0;
    }
    return 0;
}

inline constexpr bool is_controlled(GateKind k) noexcept {
    return k == GateKind::CNOT || k == GateKind::CZ || k == GateKind::CRY ||
           k == GateKind::CRZ;
}

inline const char *gate_name(GateKind k) noexcept {
    switch (k) {
    case GateKind::Rot:
        return "Rot";
    case GateKind::U3:
        return "U3";
    case GateKind::RY:
        return "RY";
    case GateKind::RZ:
        return "RZ";
    case GateKind::CNOT:
        return "CNOT";
    case GateKind::CZ:
        return "CZ";
    case GateKind::CRY:
        return "CRY";
    case GateKind::CRZ:
        return "CRZ";
    }
    return "?";
}

/**
 * @brief One gate instance. `param_ids[i]` is the index of angle `i` in the
 * trainable parameter vector of the enclosing block, or -1 when the angle is
 * a constant.
 */
struct Gate {
    GateKind kind{GateKind::RY};
    std::array<std::size_t, 2> wires{0, 0};
    std::array<double, 3> params{0.0, 0.0, 0.0};
    std::array<long, 3> param_ids{-1, -1, -1};

    [[nodiscard]] std::size_t num_wires() const noexcept {
        return is_controlled(kind) ? 2 : 1;
    }

    [[nodiscard]] std::size_t target() const noexcept {
        return is_controlled(kind) ? wires[1] : wires[0];
    }

    bool operator==(const Gate &) const = default;
};

inline Gate make_gate(GateKind kind, std::size_t w0, double a = 0.0,
                      double b = 0.0, double c = 0.0) {
    Gate g;
    g.kind = kind;
    g.wires = {w0, w0};
    g.params = {a, b, c};
    return g;
}

inline Gate make_gate2(GateKind kind, std::size_t control, std::size_t target,
                       double a = 0.0) {
    Gate g;
    g.kind = kind;
    g.wires = {control, target};
    g.params = {a, 0.0, 0.0};
    return g;
}

namespace detail {

inline cplx phase(double a) { return {std::cos(a), std::sin(a)}; }

inline Mat2 matmul(const Mat2 &a, const Mat2 &b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

inline Mat2 ry(double t) {
    const double c = std::cos(t / 2);
    const double s = std::sin(t / 2);
    return {cplx{c, 0}, cplx{-s, 0}, cplx{s, 0}, cplx{c, 0}};
}

inline Mat2 dry(double t) {
    const double c = std::cos(t / 2);
    const double s = std::sin(t / 2);
    return {cplx{-s / 2, 0}, cplx{-c / 2, 0}, cplx{c / 2, 0}, cplx{-s / 2, 0}};
}

inline Mat2 rz(double t) {
    return {phase(-t / 2), cplx{0, 0}, cplx{0, 0},
            phase(t / 2)};
}

inline Mat2 drz(double t) {
    return {cplx{0, -0.5} * phase(-t / 2), cplx{0, 0}, cplx{0, 0},
            cplx{0, 0.5} * phase(t / 2)};
}

inline Mat2 u3(double t, double p, double l) {
    const double c = std::cos(t / 2);
    const double s = std::sin(t / 2);
    return {cplx{c, 0}, -s * phase(l), s * phase(p),
            c * phase(p + l)};
}

inline Mat2 du3(double t, double p, double l, std::size_t which) {
    const double c = std::cos(t / 2);
    const double s = std::sin(t / 2);
    const cplx i{0, 1};
    switch (which) {
    case 0:
        return {cplx{-s / 2, 0}, -c / 2 * phase(l), c / 2 * phase(p),
                -s / 2 * phase(p + l)};
    case 1:
        return {cplx{0, 0}, cplx{0, 0}, i * s * phase(p),
                i * c * phase(p + l)};
    default:
        return {cplx{0, 0}, -i * s * phase(l), cplx{0, 0},
                i * c * phase(p + l)};
    }
}

inline const Mat2 pauli_x{cplx{0, 0}, cplx{1, 0}, cplx{1, 0}, cplx{0, 0}};
inline const Mat2 pauli_z{cplx{1, 0}, cplx{0, 0}, cplx{0, 0}, cplx{-1, 0}};
inline const Mat2 zero2{cplx{0, 0}, cplx{0, 0}, cplx{0, 0}, cplx{0, 0}};

} // namespace detail

/**
 * @brief The 2x2 matrix acting on the target wire (for controlled gates, the
 * block applied when the control is |1>).
 */
inline Mat2 gate_matrix(const Gate &g) {
    const auto &p = g.params;
    switch (g.kind) {
    case GateKind::Rot:
        return detail::matmul(detail::rz(p[2]),
                              detail::matmul(detail::ry(p[1]), detail::rz(p[0])));
    case GateKind::U3:
        return detail::u3(p[0], p[1], p[2]);
    case GateKind::RY:
    case GateKind::CRY:
        return detail::ry(p[0]);
    case GateKind::RZ:
    case GateKind::CRZ:
        return detail::rz(p[0]);
    case GateKind::CNOT:
        return detail::pauli_x;
    case GateKind::CZ:
        return detail::pauli_z;
    }
    return detail::zero2;
}

/**
 * @brief Derivative of gate_matrix(g) with respect to angle `which`.
 * For controlled gates the derivative vanishes on the control-|0> subspace;
 * callers handle that through apply_derivative.
 */
inline Mat2 gate_matrix_derivative(const Gate &g, std::size_t which) {
    using namespace detail;
    const auto &p = g.params;
    if (which >= num_params(g.kind)) {
        fail(ErrorCode::BadShape, std::string("gate ") + gate_name(g.kind) +
                                      " has no parameter " +
                                      std::to_string(which));
    }
    switch (g.kind) {
    case GateKind::Rot:
        switch (which) {
        case 0:
            return matmul(rz(p[2]), matmul(ry(p[1]), drz(p[0])));
        case 1:
            return matmul(rz(p[2]), matmul(dry(p[1]), rz(p[0])));
        default:
            return matmul(drz(p[2]), matmul(ry(p[1]), rz(p[0])));
        }
    case GateKind::U3:
        return du3(p[0], p[1], p[2], which);
    case GateKind::RY:
    case GateKind::CRY:
        return dry(p[0]);
    case GateKind::RZ:
    case GateKind::CRZ:
        return drz(p[0]);
    default:
        return zero2;
    }
}

inline Mat2 adjoint(const Mat2 &m) {
    return {std::conj(m[0]), std::conj(m[2]), std::conj(m[1]), std::conj(m[3])};
}

} // namespace qdiff
