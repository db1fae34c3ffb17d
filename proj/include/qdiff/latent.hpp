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

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "error.hpp"

namespace qdiff {

/**
 * Classical carrier between diffusion steps: a nonnegative vector of length
 * 2^n whose largest entry is exactly 1.
 */
using Latent = std::vector<double>;

/// Index of the first maximal entry.
inline std::size_t argmax(std::span<const double> p) {
    return static_cast<std::size_t>(
        std::distance(p.begin(), std::max_element(p.begin(), p.end())));
}

inline Latent max_normalize(std::span<const double> p) {
    if (p.empty()) {
        fail(ErrorCode::AllZero, "cannot max-normalize an empty vector");
    }
    const double m = p[argmax(p)];
    if (!(m > 0.0)) {
        fail(ErrorCode::AllZero, "cannot max-normalize a vector with no "
                                 "positive entry");
    }
    Latent out(p.size());
    for (std::size_t j = 0; j < p.size(); ++j) {
        out[j] = p[j] / m;
    }
    out[argmax(p)] = 1.0;
    return out;
}

/// Elementwise clamp into [0, 1].
inline std::vector<double> clamp01(std::span<const double> v) {
    std::vector<double> out(v.size());
    std::transform(v.begin(), v.end(), out.begin(),
                   [](double x) { return std::clamp(x, 0.0, 1.0); });
    return out;
}

} // namespace qdiff
