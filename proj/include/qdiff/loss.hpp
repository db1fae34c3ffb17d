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

/// Floor added before sum-normalizing latents into distributions.
inline constexpr double kProbFloor = 1e-10;

struct LossWeights {
    double kl{0.5};
    double l1{5.0};
};

/// Loss value together with dL/d(prediction).
struct LossAndGrad {
    double value{0.0};
    std::vector<double> grad;
};

/// (x + floor) / sum(x + floor)
inline std::vector<double> floored_distribution(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) {
        s += v + kProbFloor;
    }
    std::vector<double> d(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
        d[j] = (x[j] + kProbFloor) / s;
    }
    return d;
}

/**
 * @brief lambda_kl * KL(x^ || y^) + lambda_l1 * ||x - y||_1 where `target`
 * is x (forward latent), `pred` is y (denoiser output) and ^ denotes the
 * floored sum-normalization. Gradient is with respect to `pred`; the L1
 * subgradient at a tie is 0.
 */
inline LossAndGrad hybrid_loss_grad(std::span<const double> target,
                                    std::span<const double> pred,
                                    LossWeights w) {
    if (target.size() != pred.size()) {
        fail(ErrorCode::LengthMismatch,
             "loss inputs of length " + std::to_string(target.size()) +
                 " and " + std::to_string(pred.size()));
    }
    const std::size_t N = target.size();
    LossAndGrad out;
    out.grad.assign(N, 0.0);

    if (w.kl != 0.0) {
        const auto p = floored_distribution(target);
        double sq = 0.0;
        for (double v : pred) {
            sq += v + kProbFloor;
        }
        double kl = 0.0;
        for (std::size_t j = 0; j < N; ++j) {
            const double q = (pred[j] + kProbFloor) / sq;
            kl += p[j] * std::log(p[j] / q);
            // d/dy_j of -sum_i p_i log q_i, with sum_i p_i = 1.
            out.grad[j] += w.kl * (1.0 / sq - p[j] / (pred[j] + kProbFloor));
        }
        out.value += w.kl * kl;
    }
    if (w.l1 != 0.0) {
        double l1 = 0.0;
        for (std::size_t j = 0; j < N; ++j) {
            const double d = target[j] - pred[j];
            l1 += std::abs(d);
            if (d > 0.0) {
                out.grad[j] -= w.l1;
            } else if (d < 0.0) {
                out.grad[j] += w.l1;
            }
        }
        out.value += w.l1 * l1;
    }
    return out;
}

inline double hybrid_loss(std::span<const double> target,
                          std::span<const double> pred, LossWeights w) {
    return hybrid_loss_grad(target, pred, w).value;
}

} // namespace qdiff
