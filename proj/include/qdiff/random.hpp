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

#include <cstdint>
#include <initializer_list>
#include <random>

namespace qdiff {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30U)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27U)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31U);
}

/**
 * @brief Derive a stream seed from a master seed and a list of indices
 * (sample, step, purpose tag...). Streams never depend on batch order or
 * thread count.
 */
inline std::uint64_t derive_seed(std::uint64_t master,
                                 std::initializer_list<std::uint64_t> keys) {
    std::uint64_t h = mix64(master);
    for (auto k : keys) {
        h = mix64(h ^ mix64(k + 0x632BE59BD9B4E019ULL));
    }
    return h;
}

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t master,
                    std::initializer_list<std::uint64_t> keys) {
    return Rng{derive_seed(master, keys)};
}

/// Purpose tags mixed into derived seeds so unrelated streams never collide.
namespace stream {
inline constexpr std::uint64_t schedule = 0x5C4EDULL;
inline constexpr std::uint64_t scrambler = 0x5C4A3ULL;
inline constexpr std::uint64_t forward_noise = 0xF0D1ULL;
inline constexpr std::uint64_t block_init = 0xB10CULL;
inline constexpr std::uint64_t data_order = 0xDA7AULL;
inline constexpr std::uint64_t init_latent = 0x1A7EULL;
inline constexpr std::uint64_t shots = 0x5407ULL;
inline constexpr std::uint64_t unitary = 0x0417ULL;
} // namespace stream

} // namespace qdiff
