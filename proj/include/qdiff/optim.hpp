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

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"

namespace qdiff {

/// Adam with bias correction.
struct Adam {
    double lr{5e-4};
    double beta1{0.9};
    double beta2{0.999};
    double eps{1e-8};
    std::size_t step_count{0};
    std::vector<double> m;
    std::vector<double> v;

    Adam() = default;
    Adam(std::size_t n, double learning_rate)
        : lr(learning_rate), m(n, 0.0), v(n, 0.0) {}

    void step(std::span<double> params, std::span<const double> grads) {
        if (params.size() != m.size() || grads.size() != m.size()) {
            fail(ErrorCode::LengthMismatch, "Adam state holds " +
                                                std::to_string(m.size()) +
                                                " moments");
        }
        ++step_count;
        const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(step_count));
        const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(step_count));
        for (std::size_t i = 0; i < params.size(); ++i) {
            m[i] = beta1 * m[i] + (1.0 - beta1) * grads[i];
            v[i] = beta2 * v[i] + (1.0 - beta2) * grads[i] * grads[i];
            const double mhat = m[i] / bc1;
            const double vhat = v[i] / bc2;
            params[i] -= lr * mhat / (std::sqrt(vhat) + eps);
        }
    }
};

/// base_lr * gamma^floor(epoch / step_size)
inline double steplr(std::size_t epoch, double base_lr, std::size_t step_size,
                     double gamma) {
    if (step_size == 0) {
        return base_lr;
    }
    return base_lr * std::pow(gamma, static_cast<double>(epoch / step_size));
}

} // namespace qdiff
