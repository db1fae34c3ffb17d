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

#include "qdiff/forward.hpp"
#include "qdiff/metrics.hpp"

using namespace qdiff;
using Catch::Matchers::WithinAbs;

namespace {

ForwardModel make_fm(std::size_t n, std::size_t T, double lambda_s, std::uint64_t seed) {
    ForwardModel fm;
    fm.schedule = make_schedule(ScheduleKind::Cosine, T, lambda_s, seed);
    fm.scrambler = make_scrambler_params(n, T, 2, seed);
    fm.seed = seed;
    return fm;
}

void check_latent(const Latent &x) {
    double mx = 0.0;
    for (double v : x) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        mx = std::max(mx, v);
    }
    CHECK(mx == 1.0);
}

Latent peaked(std::size_t dim, std::size_t at) {
    Latent x(dim, 0.1);
    x[at] = 1.0;
    return x;
}

} // namespace

TEST_CASE("gaussian_noising limits and variance", "[forward]") {
    const std::vector<double> x{0.3, 0.7};
    Rng rng(1);
    CHECK(gaussian_noising(x, 1.0, rng) == x);
    Rng a(9);
    Rng b(9);
    const auto z = gaussian_noising(x, 0.0, a);
    std::normal_distribution<double> normal(0.0, 1.0);
    CHECK(z[0] == normal(b));

    Rng mc(123);
    const double ab = 0.64;
    const std::vector<double> one{0.5};
    double s = 0.0;
    double s2 = 0.0;
    const int N = 100000;
    for (int i = 0; i < N; ++i) {
        const double d = gaussian_noising(one, ab, mc)[0] - std::sqrt(ab) * 0.5;
        s += d;
        s2 += d * d;
    }
    const double var = s2 / N - (s / N) * (s / N);
    CHECK(std::abs(var - (1 - ab)) < 0.02 * (1 - ab));
}

TEST_CASE("max_normalize", "[forward]") {
    const std::vector<double> p{0.2, 0.8};
    const auto x = max_normalize(p);
    CHECK_THAT(x[0], WithinAbs(0.25, 1e-15));
    CHECK(x[1] == 1.0);
    const std::vector<double> u(5, 0.3);
    for (double v : max_normalize(u)) {
        CHECK(v == 1.0);
    }
    CHECK(max_normalize(x) == x);
    CHECK_THROWS_AS(max_normalize(std::vector<double>{0.0, 0.0}), Error);
}

TEST_CASE("degenerate QSC step is the squaring map", "[forward]") {
    const auto fm = make_fm(1, 1, 0.0, 4);
    const std::vector<double> x{1.0, 0.5};
    Rng rng(0);
    const auto y = qsc_step(x, 1, fm.schedule, fm.scrambler, rng);
    CHECK_THAT(y[0], WithinAbs(1.0, 1e-12));
    CHECK_THAT(y[1], WithinAbs(0.25, 1e-12));
    CHECK_THROWS_AS(qsc_step(x, 2, fm.schedule, fm.scrambler, rng), Error);
}

TEST_CASE("zero-strength scrambler permutes basis latents", "[forward]") {
    const auto fm = make_fm(3, 2, 0.0, 6);
    Latent basis(8, 0.0);
    basis[3] = 1.0;
    Rng rng(0);
    const auto y = qsc_step(basis, 1, fm.schedule, fm.scrambler, rng);
    int ones = 0;
    for (double v : y) {
        CHECK((v == 0.0 || std::abs(v - 1.0) < 1e-12));
        ones += v > 0.5;
    }
    CHECK(ones == 1);
}

TEST_CASE("forward chains keep latent invariants and are deterministic", "[forward]") {
    const auto fm = make_fm(4, 8, 0.1, 10);
    const auto x0 = peaked(16, 5);
    for (auto v : {ForwardVariant::QSC, ForwardVariant::CDP, ForwardVariant::IUSP,
                   ForwardVariant::GUSP}) {
        const auto chain = run_forward(v, x0, fm, 3);
        REQUIRE(chain.size() == 8);
        for (const auto &x : chain) {
            check_latent(x);
        }
        CHECK(run_forward(v, x0, fm, 3) == chain);
        CHECK_FALSE(run_forward(v, x0, fm, 4) == chain);
    }
}

TEST_CASE("CDP with tiny betas stays near x0", "[forward]") {
    auto s = make_schedule(ScheduleKind::Linear, 4, 1.0, 0);
    for (auto &b : s.betas) {
        b = 1e-14;
    }
    derive_schedule(s);
    const auto x0 = peaked(8, 2);
    for (const auto &x : cdp_chain(x0, s, 1, 0)) {
        for (std::size_t j = 0; j < x.size(); ++j) {
            CHECK(std::abs(x[j] - x0[j]) < 1e-5);
        }
    }
}

TEST_CASE("CDP sequential chain matches the closed-form marginal", "[forward]") {
    const auto s = make_schedule(ScheduleKind::Cosine, 8, 1.0, 0);
    const std::vector<double> x0{0.8};
    const std::size_t t = 5;
    const int N = 100000;
    double ms = 0, vs = 0, mm = 0, vm = 0;
    std::normal_distribution<double> normal(0.0, 1.0);
    Rng rng(17);
    for (int i = 0; i < N; ++i) {
        double r = x0[0];
        for (std::size_t k = 1; k <= t; ++k) {
            r = std::sqrt(1 - s.beta(k)) * r + std::sqrt(s.beta(k)) * normal(rng);
        }
        ms += r;
        vs += r * r;
        const double m = cdp_marginal(x0, s, t, rng)[0];
        mm += m;
        vm += m * m;
    }
    ms /= N;
    mm /= N;
    vs = vs / N - ms * ms;
    vm = vm / N - mm * mm;
    CHECK(std::abs(ms - mm) < 0.02 * std::abs(mm));
    CHECK(std::abs(vs - vm) < 0.02 * vm);
}

TEST_CASE("CDP of a zero image is clamped noise", "[forward]") {
    const auto s = make_schedule(ScheduleKind::Cosine, 3, 1.0, 0);
    const std::vector<double> x0(16, 0.0);
    for (const auto &x : cdp_chain(x0, s, 2, 0)) {
        check_latent(x);
    }
}

TEST_CASE("IUSP and GUSP edge cases", "[forward]") {
    const auto x0 = peaked(8, 1);
    CHECK(iusp_chain(x0, 0, 2, 1, 0).empty());

    auto s = make_schedule(ScheduleKind::Cosine, 4, 0.1, 1);
    std::fill(s.thetas.begin(), s.thetas.end(), 0.0);
    // Zero strength leaves only the CNOT skeleton: a fixed permutation of
    // the squared latent, applied once per step.
    const auto chain = gusp_chain(x0, s, 2, 1, 0);
    Latent x = x0;
    for (const auto &y : chain) {
        const auto gates = build_scaled_scrambler(
            std::vector<double>(param_count(CircuitFamily::Scrambler, 3, 2), 0.0),
            0.0, 3, 2);
        x = measure_normalize(x, gates);
        for (std::size_t j = 0; j < x.size(); ++j) {
            CHECK_THAT(y[j], WithinAbs(x[j], 1e-12));
        }
    }
}

TEST_CASE("GUSP disturbance grows along the schedule", "[forward]") {
    double early = 0.0;
    double late = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto s = make_schedule(ScheduleKind::Cosine, 8, 1.0, seed);
        const auto x0 = peaked(16, seed % 16);
        const auto chain = gusp_chain(x0, s, 2, seed, 0);
        auto l1 = [](const Latent &a, const Latent &b) {
            double d = 0.0;
            for (std::size_t j = 0; j < a.size(); ++j) {
                d += std::abs(a[j] - b[j]);
            }
            return d;
        };
        early += l1(chain[1], chain[0]);
        late += l1(chain[7], chain[6]);
    }
    CHECK(late > early);
}

TEST_CASE("variant names", "[forward]") {
    CHECK(parse_variant("gusp") == ForwardVariant::GUSP);
    CHECK(std::string(variant_name(ForwardVariant::CDP)) == "cdp");
    CHECK_THROWS_AS(parse_variant("ddpm"), Error);
}
