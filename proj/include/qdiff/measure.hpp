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
#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"
#include "random.hpp"
#include "statevector.hpp"

namespace qdiff {

/// Measurement probabilities over a set of basis states.
using ProbVector = std::vector<double>;

/// Born-rule probabilities |a_j|^2 over the full register.
inline ProbVector full_probs(const StateVector &s) {
    ProbVector p(s.size());
    for (std::size_t j = 0; j < s.size(); ++j) {
        p[j] = std::norm(s[j]);
    }
    return p;
}

/**
 * @brief Probabilities of |j> (x) |0>^{n_anc} for every data index j.
 *
 * Ancillas are the trailing `n_anc` wires, so the ancilla-zero slice is the
 * stride-2^{n_anc} gather starting at index 0. The result sums to at most 1;
 * the missing mass belongs to the ancilla != 0 branches.
 */
inline ProbVector ancilla_projected_probs(const StateVector &s,
                                          std::size_t n_data,
                                          std::size_t n_anc) {
    if (n_data + n_anc != s.num_qubits()) {
        fail(ErrorCode::BadSplit, std::to_string(n_data) + " data + " +
                                      std::to_string(n_anc) +
                                      " ancilla qubits on a " +
                                      std::to_string(s.num_qubits()) +
                                      "-qubit state");
    }
    ProbVector p(std::size_t{1} << n_data);
    for (std::size_t j = 0; j < p.size(); ++j) {
        p[j] = std::norm(s[j << n_anc]);
    }
    return p;
}

/**
 * @brief Empirical frequencies of `n_shots` draws from `p` (renormalized to
 * sum 1 first). Pure function of (p, n_shots, seed).
 */
inline ProbVector sample_shots(std::span<const double> p, std::uint64_t n_shots,
                               std::uint64_t seed) {
    if (n_shots == 0) {
        fail(ErrorCode::ZeroShots, "shot count must be positive");
    }
    double total = 0.0;
    for (double v : p) {
        if (v < 0.0) {
            fail(ErrorCode::BadShape, "negative probability in sample_shots");
        }
        total += v;
    }
    if (!(total > 0.0)) {
        fail(ErrorCode::ZeroVector, "cannot sample from an all-zero vector");
    }

    // Multinomial via sequential conditional binomials.
    Rng rng(seed);
    ProbVector freq(p.size(), 0.0);
    std::uint64_t remaining = n_shots;
    double mass_left = total;
    for (std::size_t j = 0; j < p.size() && remaining > 0; ++j) {
        std::uint64_t count = 0;
        if (j + 1 == p.size() || p[j] >= mass_left) {
            count = remaining;
        } else if (p[j] > 0.0) {
            std::binomial_distribution<std::uint64_t> bin(remaining,
                                                          p[j] / mass_left);
            count = bin(rng);
        }
        freq[j] = static_cast<double>(count) / static_cast<double>(n_shots);
        remaining -= count;
        mass_left -= p[j];
    }
    return freq;
}

} // namespace qdiff
