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
#include <numbers>
#include <random>

#include "oracle.hpp"
#include "qdiff/measure.hpp"
#include "qdiff/statevector.hpp"

using namespace qdiff;
using Catch::Matchers::WithinAbs;

namespace {

std::vector<double> real_parts(const StateVector &s) {
    std::vector<double> r;
    for (auto a : s.amplitudes()) {
        r.push_back(a.real());
    }
    return r;
}

} // namespace

TEST_CASE("amplitude_embed normalizes by the L2 norm", "[qsim]") {
    const std::vector<double> one_hot{2, 0, 0, 0};
    CHECK(real_parts(amplitude_embed(one_hot)) == std::vector<double>{1, 0, 0, 0});
    const std::vector<double> uniform{1, 1, 1, 1};
    for (double a : real_parts(amplitude_embed(uniform))) {
        CHECK_THAT(a, WithinAbs(0.5, 1e-15));
    }
    const std::vector<double> pyth{3, 4};
    const auto s = amplitude_embed(pyth);
    CHECK(s.num_qubits() == 1);
    CHECK_THAT(s[0].real(), WithinAbs(0.6, 1e-15));
    CHECK_THAT(s[1].real(), WithinAbs(0.8, 1e-15));
    CHECK(s[1].imag() == 0.0);
}

TEST_CASE("amplitude_embed clamps negatives and rejects bad input", "[qsim]") {
    const std::vector<double> neg{-1, 3, 0, 4};
    const auto s = amplitude_embed(neg);
    CHECK(s[0] == cplx{0.0, 0.0});
    CHECK_THAT(s[1].real(), WithinAbs(0.6, 1e-15));

    const std::vector<double> zero{0, 0};
    CHECK_THROWS_MATCHES(amplitude_embed(zero), Error,
                         Catch::Matchers::Predicate<Error>(
                             [](const Error &e) { return e.code() == ErrorCode::ZeroVector; }));
    const std::vector<double> three{1, 1, 1};
    CHECK_THROWS_MATCHES(amplitude_embed(three), Error,
                         Catch::Matchers::Predicate<Error>(
                             [](const Error &e) { return e.code() == ErrorCode::BadLength; }));
    CHECK_THROWS_AS(StateVector(2, std::vector<cplx>(3)), Error);
}

TEST_CASE("single gates act as their truth tables", "[qsim]") {
    auto s = apply_gate(StateVector(1), make_gate(GateKind::RY, 0, std::numbers::pi));
    CHECK_THAT(std::abs(s[0]), WithinAbs(0.0, 1e-15));
    CHECK_THAT(s[1].real(), WithinAbs(1.0, 1e-15));

    // |10> with wire 0 as the most significant bit.
    StateVector ten(2, {0.0, 0.0, 1.0, 0.0});
    const auto out = apply_gate(ten, make_gate2(GateKind::CNOT, 0, 1));
    CHECK(out[3] == cplx{1.0, 0.0});
    CHECK(out[2] == cplx{0.0, 0.0});

    std::mt19937_64 rng(11);
    const auto psi = oracle::random_state(3, rng);
    const auto same = apply_gate(psi, make_gate(GateKind::Rot, 1, 0.0, 0.0, 0.0));
    CHECK(oracle::max_diff(same.amplitudes(), psi.amplitudes()) < 1e-15);
}

TEST_CASE("apply_circuit basics", "[qsim]") {
    std::mt19937_64 rng(3);
    const auto psi = oracle::random_state(2, rng);
    CHECK(apply_circuit(psi, std::vector<Gate>{}).amplitudes()[1] == psi[1]);

    const std::vector<Gate> twice{make_gate(GateKind::RY, 0, std::numbers::pi),
                                  make_gate(GateKind::RY, 0, std::numbers::pi)};
    const auto s = apply_circuit(StateVector(1), twice);
    CHECK_THAT(s[0].real(), WithinAbs(-1.0, 1e-15));
    const auto p = full_probs(s);
    CHECK_THAT(p[0], WithinAbs(1.0, 1e-15));
    CHECK_THAT(p[1], WithinAbs(0.0, 1e-15));
}

TEST_CASE("random 3-qubit 10-gate circuits match the dense oracle", "[qsim][oracle]") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Gate> gates;
        for (int k = 0; k < 10; ++k) {
            gates.push_back(oracle::random_gate(3, rng));
        }
        const auto psi = oracle::random_state(3, rng);
        const auto got = apply_circuit(psi, gates);
        const auto want = oracle::apply(oracle::circuit_matrix(gates, 3), psi.amplitudes());
        REQUIRE(oracle::max_diff(got.amplitudes(), want) < 1e-12);
    }
}

TEST_CASE("gate matrices are unitary and derivatives match differences", "[qsim]") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const auto g = oracle::random_gate(2, rng);
        const auto m = gate_matrix(g);
        const auto prod = detail::matmul(m, adjoint(m));
        CHECK(std::abs(prod[0] - 1.0) < 1e-12);
        CHECK(std::abs(prod[1]) < 1e-12);
        CHECK(std::abs(prod[2]) < 1e-12);
        CHECK(std::abs(prod[3] - 1.0) < 1e-12);

        for (std::size_t k = 0; k < num_params(g.kind); ++k) {
            const double h = 1e-6;
            Gate gp = g;
            Gate gm = g;
            gp.params[k] += h;
            gm.params[k] -= h;
            const auto d = gate_matrix_derivative(g, k);
            const auto a = gate_matrix(gp);
            const auto b = gate_matrix(gm);
            for (int i = 0; i < 4; ++i) {
                CHECK(std::abs(d[i] - (a[i] - b[i]) / (2 * h)) < 1e-8);
            }
        }
    }
}

TEST_CASE("adjoint application inverts the gate", "[qsim]") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 100; ++trial) {
        const auto g = oracle::random_gate(3, rng);
        const auto psi = oracle::random_state(3, rng);
        auto s = apply_gate(psi, g);
        apply_gate_adjoint_inplace(s, g);
        CHECK(oracle::max_diff(s.amplitudes(), psi.amplitudes()) < 1e-13);
    }
}

TEST_CASE("wire validation", "[qsim]") {
    StateVector s(2);
    CHECK_THROWS_MATCHES(apply_gate(s, make_gate(GateKind::RY, 2, 0.1)), Error,
                         Catch::Matchers::Predicate<Error>([](const Error &e) {
                             return e.code() == ErrorCode::WireOutOfRange;
                         }));
    CHECK_THROWS_AS(apply_gate(s, make_gate2(GateKind::CNOT, 1, 1)), Error);
}

TEST_CASE("full_probs follows the Born rule", "[qsim]") {
    const std::vector<double> v{3, 4};
    const auto p = full_probs(amplitude_embed(v));
    CHECK_THAT(p[0], WithinAbs(0.36, 1e-15));
    CHECK_THAT(p[1], WithinAbs(0.64, 1e-15));
    std::mt19937_64 rng(1);
    const auto q = full_probs(oracle::random_state(4, rng));
    double s = 0.0;
    for (double x : q) {
        s += x;
    }
    CHECK_THAT(s, WithinAbs(1.0, 1e-12));
}

TEST_CASE("ancilla projection slices the ancilla-zero block", "[qsim]") {
    std::mt19937_64 rng(9);
    const auto data = oracle::random_state(2, rng);
    const auto joint = append_zero_qubits(data, 1);
    const auto p = ancilla_projected_probs(joint, 2, 1);
    const auto want = full_probs(data);
    for (std::size_t j = 0; j < p.size(); ++j) {
        CHECK_THAT(p[j], WithinAbs(want[j], 1e-15));
    }

    // Ancilla flipped to |1>.
    auto flipped = apply_gate(joint, make_gate(GateKind::RY, 2, std::numbers::pi));
    for (double x : ancilla_projected_probs(flipped, 2, 1)) {
        CHECK_THAT(x, WithinAbs(0.0, 1e-15));
    }

    // Entangled 3+1 state: every second entry of the full distribution.
    const auto ent = oracle::random_state(4, rng);
    const auto full = full_probs(ent);
    const auto proj = ancilla_projected_probs(ent, 3, 1);
    REQUIRE(proj.size() == 8);
    double rest = 0.0;
    for (std::size_t j = 0; j < 8; ++j) {
        CHECK(proj[j] == full[2 * j]);
        rest += full[2 * j + 1];
    }
    double tot = rest;
    for (double x : proj) {
        tot += x;
    }
    CHECK_THAT(tot, WithinAbs(1.0, 1e-10));
    CHECK_THROWS_AS(ancilla_projected_probs(ent, 2, 1), Error);
}

TEST_CASE("sample_shots", "[qsim]") {
    const std::vector<double> det{1, 0, 0, 0};
    CHECK(sample_shots(det, 17, 3) == std::vector<double>{1, 0, 0, 0});

    const std::vector<double> half{0.5, 0.5};
    const auto a = sample_shots(half, 4, 99);
    CHECK(a == sample_shots(half, 4, 99));
    CHECK_THAT(a[0] + a[1], WithinAbs(1.0, 1e-15));
    CHECK_THROWS_AS(sample_shots(half, 0, 1), Error);

    // Unnormalized input is renormalized first.
    const std::vector<double> scaled{0.2, 0.0};
    CHECK(sample_shots(scaled, 5, 1) == std::vector<double>{1, 0});

    const std::vector<double> uni(16, 1.0 / 16);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        for (double f : sample_shots(uni, 1 << 14, seed)) {
            CHECK(std::abs(f - 1.0 / 16) < 0.02);
        }
    }
}
