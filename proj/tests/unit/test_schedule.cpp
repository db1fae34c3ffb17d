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

#include "qdiff/schedule.hpp"

using namespace qdiff;
using Catch::Matchers::WithinAbs;

namespace {

/// Independent cosine-schedule reference: beta_t from the f(t) ratio.
std::vector<double> cosine_reference(std::size_t T) {
    const double s = 0.008;
    auto f = [&](double t) {
        const double c = std::cos((t / T + s) / (1 + s) * std::numbers::pi / 2);
        return c * c;
    };
    std::vector<double> b;
    for (std::size_t t = 1; t <= T; ++t) {
        b.push_back(std::min(1.0 - f(double(t)) / f(double(t - 1)), 0.999));
    }
    return b;
}

} // namespace

TEST_CASE("cosine betas match the closed form", "[schedule]") {
    for (std::size_t T : {1u, 8u, 100u}) {
        const auto got = make_betas(ScheduleKind::Cosine, T);
        const auto want = cosine_reference(T);
        REQUIRE(got.size() == T);
        for (std::size_t i = 0; i < T; ++i) {
            CHECK_THAT(got[i], WithinAbs(want[i], 1e-12));
        }
    }
}

TEST_CASE("linear, sigmoid and log betas", "[schedule]") {
    const auto lin = make_betas(ScheduleKind::Linear, 2);
    CHECK_THAT(lin[0], WithinAbs(1e-4, 1e-18));
    CHECK_THAT(lin[1], WithinAbs(0.02, 1e-18));
    const auto lg = make_betas(ScheduleKind::Log, 3);
    CHECK_THAT(lg[0], WithinAbs(1e-4, 1e-15));
    CHECK_THAT(lg[1], WithinAbs(std::sqrt(1e-4 * 0.02), 1e-15));
    CHECK_THAT(lg[2], WithinAbs(0.02, 1e-15));
    const auto sg = make_betas(ScheduleKind::Sigmoid, 4);
    for (std::size_t t = 1; t <= 4; ++t) {
        const double sig = 1.0 / (1.0 + std::exp(-(-6.0 + 12.0 * t / 4.0)));
        CHECK_THAT(sg[t - 1], WithinAbs(sig * (0.02 - 1e-4) + 1e-4, 1e-15));
    }
    for (auto k : {ScheduleKind::Linear, ScheduleKind::Sigmoid, ScheduleKind::Log}) {
        const auto b = make_betas(k, 50);
        for (std::size_t i = 1; i < b.size(); ++i) {
            CHECK(b[i] > b[i - 1]);
        }
    }
    CHECK_THROWS_AS(make_betas(ScheduleKind::Cosine, 0), Error);
    CHECK_THROWS_AS(parse_schedule_kind("quadratic"), Error);
    CHECK(parse_schedule_kind("sigmoid") == ScheduleKind::Sigmoid);
}

TEST_CASE("schedule invariants", "[schedule]") {
    for (std::size_t T : {8u, 100u}) {
        for (auto k : {ScheduleKind::Cosine, ScheduleKind::Linear,
                       ScheduleKind::Sigmoid, ScheduleKind::Log}) {
            const auto s = make_schedule(k, T, 0.1, 5);
            CHECK(s.alpha_bar(0) == 1.0);
            for (std::size_t t = 1; t <= T; ++t) {
                CHECK(s.beta(t) > 0.0);
                CHECK(s.beta(t) <= 0.999);
                CHECK(s.alpha(t) == 1.0 - 0.1 * s.beta(t));
                CHECK(s.alpha_bar(t) < s.alpha_bar(t - 1));
                CHECK(s.alpha_bar(t) > 0.0);
                CHECK(s.theta(t) >= 0.0);
                CHECK(s.theta(t) < 1.0);
                CHECK_THAT(s.theta(t), WithinAbs(std::sqrt(1 - s.alpha_bar(t)) *
                                                     s.eps.at(t - 1),
                                                 1e-15));
            }
        }
    }
}

TEST_CASE("zero scaling disables noise and scrambling", "[schedule]") {
    const auto s = make_schedule(ScheduleKind::Cosine, 8, 0.0, 3);
    for (std::size_t t = 1; t <= 8; ++t) {
        CHECK(s.alpha(t) == 1.0);
        CHECK(s.alpha_bar(t) == 1.0);
        CHECK(s.theta(t) == 0.0);
    }
    CHECK_THROWS_AS(make_schedule(ScheduleKind::Cosine, 8, 1.5, 3), Error);
}

TEST_CASE("schedule determinism and theta trend", "[schedule]") {
    CHECK(make_schedule(ScheduleKind::Cosine, 8, 0.1, 42) ==
          make_schedule(ScheduleKind::Cosine, 8, 0.1, 42));
    std::vector<double> mean(8, 0.0);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto s = make_schedule(ScheduleKind::Cosine, 8, 0.1, seed);
        for (std::size_t t = 1; t <= 8; ++t) {
            mean[t - 1] += s.theta(t) / 100.0;
        }
    }
    CHECK(mean[7] > mean[3]);
    CHECK(mean[3] > mean[0]);
}
