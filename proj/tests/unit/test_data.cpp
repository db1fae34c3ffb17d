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

#include <cstdint>
#include <filesystem>

#include "qdiff/data.hpp"

using namespace qdiff;
using Catch::Matchers::WithinAbs;

namespace {

void be32(std::vector<std::uint8_t> &b, std::uint32_t v) {
    for (int s = 24; s >= 0; s -= 8) {
        b.push_back(static_cast<std::uint8_t>(v >> s));
    }
}

std::vector<std::uint8_t> idx_images(std::uint32_t n, std::uint32_t r, std::uint32_t c,
                                     std::uint8_t fill) {
    std::vector<std::uint8_t> b;
    be32(b, 0x803);
    be32(b, n);
    be32(b, r);
    be32(b, c);
    b.insert(b.end(), std::size_t{n} * r * c, fill);
    return b;
}

std::vector<std::uint8_t> idx_labels(const std::vector<std::uint8_t> &labels) {
    std::vector<std::uint8_t> b;
    be32(b, 0x801);
    be32(b, static_cast<std::uint32_t>(labels.size()));
    b.insert(b.end(), labels.begin(), labels.end());
    return b;
}

bool has_code(const Error &e, ErrorCode c) { return e.code() == c; }

} // namespace

TEST_CASE("IDX parsing", "[data]") {
    const auto ds = parse_idx(idx_images(3, 2, 2, 7), idx_labels({1, 2, 1}));
    CHECK(ds.size() == 3);
    CHECK(ds.rows == 2);
    CHECK(ds.image(2).at(1, 1) == 7.0);

    auto bad_magic = idx_images(1, 2, 2, 0);
    bad_magic[3] = 0x01;
    try {
        parse_idx(bad_magic, idx_labels({0}));
        FAIL("expected BadMagic");
    } catch (const Error &e) {
        CHECK(has_code(e, ErrorCode::BadMagic));
    }

    auto truncated = idx_images(2, 2, 2, 0);
    truncated.pop_back();
    try {
        parse_idx(truncated, idx_labels({0, 1}));
        FAIL("expected TruncatedFile");
    } catch (const Error &e) {
        CHECK(has_code(e, ErrorCode::TruncatedFile));
    }

    try {
        parse_idx(idx_images(2, 2, 2, 0), idx_labels({0, 1, 2}));
        FAIL("expected CountMismatch");
    } catch (const Error &e) {
        CHECK(has_code(e, ErrorCode::CountMismatch));
    }
    CHECK_THROWS_AS(parse_idx(std::vector<std::uint8_t>{0, 0}, idx_labels({})), Error);
}

TEST_CASE("box-filter resize", "[data]") {
    Image flat{28, 28, std::vector<double>(28 * 28, 93.0)};
    for (double p : resize(flat, 16).pixels) {
        CHECK_THAT(p, WithinAbs(93.0, 1e-12));
    }
    Image two{2, 2, {0, 255, 0, 255}};
    const auto one = resize(two, 1);
    CHECK(one.pixels.size() == 1);
    CHECK_THAT(one.pixels[0], WithinAbs(127.5, 1e-12));

    for (std::size_t r : {0u, 5u, 13u, 27u}) {
        for (std::size_t c : {0u, 9u, 20u}) {
            Image delta{28, 28, std::vector<double>(28 * 28, 0.0)};
            delta.pixels[r * 28 + c] = 255.0;
            double mass = 0.0;
            for (double p : resize(delta, 16).pixels) {
                mass += p;
            }
            CHECK_THAT(mass, WithinAbs(255.0 * (16.0 / 28) * (16.0 / 28), 1e-9));
        }
    }
}

TEST_CASE("to_latent", "[data]") {
    Image white{2, 2, std::vector<double>(4, 255.0)};
    CHECK(to_latent(white) == Latent(4, 1.0));
    Image black{2, 2, std::vector<double>(4, 0.0)};
    CHECK_THROWS_AS(to_latent(black), Error);
    Image half{2, 2, {128.0, 64.0, 0.0, 32.0}};
    const auto x = to_latent(half);
    CHECK(x[0] == 1.0);
    CHECK_THAT(x[1], WithinAbs(0.5, 1e-15));
}

TEST_CASE("bundled MNIST subset loads and filters by class", "[data]") {
    const std::string dir = QDIFF_TEST_DATA;
    const auto ds = load_idx(dir + "/mnist-subset-images-idx3-ubyte.gz",
                             dir + "/mnist-subset-labels-idx1-ubyte.gz");
    CHECK(ds.rows == 28);
    CHECK(ds.cols == 28);
    CHECK(ds.size() == 1200);
    const auto threes = filter_class(ds, 3, 50);
    CHECK(threes.size() == 50);
    std::size_t seen = 0;
    for (std::size_t i = 0; i < ds.size() && seen < 50; ++i) {
        if (ds.labels[i] == 3) {
            CHECK(ds.image(i).pixels == threes[seen].pixels);
            ++seen;
        }
    }
    const auto xs = load_latents(ds, 0, 8, 64);
    CHECK(xs.size() == 64);
    for (const auto &x : xs) {
        CHECK(x.size() == 64);
    }
    CHECK(load_latents(ds, 0, 8, 64) == xs);
    CHECK_THROWS_AS(load_idx(dir + "/missing-images", dir + "/missing-labels"), Error);
}
