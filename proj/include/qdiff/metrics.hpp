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
 * @file metrics.hpp
 * Diagnostics: latent entropy along forward chains and the finite-shot
 * convergence study of the reverse chain.
 */
#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"
#include "forward.hpp"
#include "loss.hpp"
#include "parallel.hpp"
#include "reverse.hpp"

namespace qdiff {

/**
 * @brief Shannon entropy in bits of the sum-normalized latent, with the
 * 0 log 0 = 0 convention (the limit of the floored distribution as the
 * floor goes to zero). An all-zero latent falls back to the floored form.
 */
inline double shannon_entropy(std::span<const double> x) {
    double sum = 0.0;
    for (double v : x) {
        sum += std::max(v, 0.0);
    }
    const auto p = sum > 0.0 ? std::vector<double>() : floored_distribution(x);
    double h = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double v = sum > 0.0 ? std::max(x[j], 0.0) / sum : p[j];
        if (v > 0.0) {
            h -= v * std::log2(v);
        }
    }
    return h;
}

/// Mean entropy H_0..H_T of one forward variant over a sample set.
struct EntropyTrace {
    ForwardVariant variant{ForwardVariant::QSC};
    std::vector<double> mean_bits;
};

inline std::vector<EntropyTrace>
entropy_report(std::span<const Latent> x0s, const ForwardModel &fm,
               std::span<const ForwardVariant> variants, std::size_t threads) {
    std::vector<EntropyTrace> out;
    const std::size_t T = fm.schedule.T;
    for (auto v : variants) {
        std::vector<std::vector<double>> per(x0s.size());
        parallel_for(x0s.size(), threads, [&](std::size_t i) {
            std::vector<double> h{shannon_entropy(x0s[i])};
            for (const auto &x : run_forward(v, x0s[i], fm, i)) {
                h.push_back(shannon_entropy(x));
            }
            per[i] = std::move(h);
        });
        EntropyTrace tr{v, std::vector<double>(T + 1, 0.0)};
        for (const auto &h : per) {
            for (std::size_t t = 0; t <= T; ++t) {
                tr.mean_bits[t] += h[t];
            }
        }
        for (auto &m : tr.mean_bits) {
            m /= static_cast<double>(x0s.empty() ? 1 : x0s.size());
        }
        out.push_back(std::move(tr));
    }
    return out;
}

/// Shot counts 2^lo .. 2^hi.
inline std::vector<std::uint64_t> shot_grid(unsigned lo = 5, unsigned hi = 14) {
    std::vector<std::uint64_t> g;
    for (unsigned k = lo; k <= hi; ++k) {
        g.push_back(std::uint64_t{1} << k);
    }
    return g;
}

/// ||a - b||_2 / len(a)
inline double pixel_l2(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        fail(ErrorCode::LengthMismatch, "pixel_l2 inputs differ in length");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += (a[i] - b[i]) * (a[i] - b[i]);
    }
    return std::sqrt(s) / static_cast<double>(a.size());
}

struct ShotStudy {
    std::vector<std::uint64_t> shots;
    std::vector<double> mean_l2;
    std::vector<Latent> analytic;               ///< I~_inf per image
    std::vector<std::vector<Latent>> generated; ///< [shot index][image]
};

/**
 * @brief Regenerate `count` images from identical noise inits for every
 * shot count and compare against the analytic chain.
 */
inline ShotStudy shot_study(const Model &model, std::size_t count,
                            std::uint64_t seed,
                            std::span<const std::uint64_t> shots,
                            std::size_t threads) {
    for (std::size_t i = 1; i < shots.size(); ++i) {
        if (shots[i] <= shots[i - 1]) {
            fail(ErrorCode::BadShape, "shot grid must be strictly increasing");
        }
    }
    ShotStudy st;
    st.shots.assign(shots.begin(), shots.end());
    const std::size_t dim = std::size_t{1} << model.spec.n;
    st.analytic.resize(count);
    parallel_for(count, threads, [&](std::size_t i) {
        st.analytic[i] =
            sample_chain(noise_init(dim, seed, i), model, std::nullopt, seed, i);
    });
    for (auto s : shots) {
        std::vector<Latent> imgs(count);
        parallel_for(count, threads, [&](std::size_t i) {
            imgs[i] = sample_chain(noise_init(dim, seed, i), model, s, seed, i);
        });
        double acc = 0.0;
        for (std::size_t i = 0; i < count; ++i) {
            acc += pixel_l2(imgs[i], st.analytic[i]);
        }
        st.mean_l2.push_back(count ? acc / static_cast<double>(count) : 0.0);
        st.generated.push_back(std::move(imgs));
    }
    return st;
}

} // namespace qdiff
