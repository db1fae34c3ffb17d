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
 * @file png.hpp
 * Latent grids as 8-bit grayscale PNG. Encoding is deterministic: filter
 * type 0 on every row and a fixed zlib level.
 */
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <zlib.h>

#include "error.hpp"
#include "io.hpp"
#include "latent.hpp"

namespace qdiff {

struct GrayImage {
    std::size_t width{0};
    std::size_t height{0};
    std::vector<std::uint8_t> pixels;

    [[nodiscard]] std::uint8_t at(std::size_t r, std::size_t c) const {
        return pixels[r * width + c];
    }
};

inline constexpr std::size_t kGridGap = 2;
inline constexpr std::uint8_t kGridGapValue = 128;

inline std::uint8_t to_pixel(double x) {
    return static_cast<std::uint8_t>(std::lround(std::clamp(x, 0.0, 1.0) * 255.0));
}

/**
 * @brief Tile latents (each side x side, row-major) into a grid with `cols`
 * columns separated by 2 px gray gaps. cols = 0 picks ceil(sqrt(count)).
 */
inline GrayImage render_grid(std::span<const Latent> latents, std::size_t side,
                             std::size_t cols = 0) {
    if (latents.empty()) {
        fail(ErrorCode::BadShape, "cannot render an empty grid");
    }
    if (cols == 0) {
        cols = static_cast<std::size_t>(
            std::ceil(std::sqrt(static_cast<double>(latents.size()))));
    }
    const std::size_t rows = (latents.size() + cols - 1) / cols;
    GrayImage img;
    img.width = cols * side + (cols - 1) * kGridGap;
    img.height = rows * side + (rows - 1) * kGridGap;
    img.pixels.assign(img.width * img.height, kGridGapValue);
    for (std::size_t k = 0; k < rows * cols; ++k) {
        const std::size_t r0 = (k / cols) * (side + kGridGap);
        const std::size_t c0 = (k % cols) * (side + kGridGap);
        for (std::size_t r = 0; r < side; ++r) {
            for (std::size_t c = 0; c < side; ++c) {
                std::uint8_t v = 0;
                if (k < latents.size()) {
                    if (latents[k].size() != side * side) {
                        fail(ErrorCode::LengthMismatch,
                             "latent does not match the tile side");
                    }
                    v = to_pixel(latents[k][r * side + c]);
                }
                img.pixels[(r0 + r) * img.width + c0 + c] = v;
            }
        }
    }
    return img;
}

namespace detail {

inline void put_be32(std::vector<std::uint8_t> &out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24U));
    out.push_back(static_cast<std::uint8_t>(v >> 16U));
    out.push_back(static_cast<std::uint8_t>(v >> 8U));
    out.push_back(static_cast<std::uint8_t>(v));
}

inline void put_chunk(std::vector<std::uint8_t> &out, const char *type,
                      std::span<const std::uint8_t> data) {
    put_be32(out, static_cast<std::uint32_t>(data.size()));
    const std::size_t start = out.size();
    out.insert(out.end(), type, type + 4);
    out.insert(out.end(), data.begin(), data.end());
    const auto crc = crc32(0L, out.data() + start,
                           static_cast<uInt>(out.size() - start));
    put_be32(out, static_cast<std::uint32_t>(crc));
}

} // namespace detail

inline std::vector<std::uint8_t> encode_png(const GrayImage &img) {
    std::vector<std::uint8_t> raw;
    raw.reserve((img.width + 1) * img.height);
    for (std::size_t r = 0; r < img.height; ++r) {
        raw.push_back(0);
        raw.insert(raw.end(), img.pixels.begin() + static_cast<long>(r * img.width),
                   img.pixels.begin() + static_cast<long>((r + 1) * img.width));
    }
    uLongf zlen = compressBound(static_cast<uLong>(raw.size()));
    std::vector<std::uint8_t> z(zlen);
    if (compress2(z.data(), &zlen, raw.data(), static_cast<uLong>(raw.size()),
                  9) != Z_OK) {
        fail(ErrorCode::Io, "zlib compression failed");
    }
    z.resize(zlen);

    std::vector<std::uint8_t> out{0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};
    std::vector<std::uint8_t> ihdr;
    detail::put_be32(ihdr, static_cast<std::uint32_t>(img.width));
    detail::put_be32(ihdr, static_cast<std::uint32_t>(img.height));
    ihdr.insert(ihdr.end(), {8, 0, 0, 0, 0}); // 8-bit gray, no interlace
    detail::put_chunk(out, "IHDR", ihdr);
    detail::put_chunk(out, "IDAT", z);
    detail::put_chunk(out, "IEND", {});
    return out;
}

/**
 * @brief Decoder for the subset encode_png writes (8-bit gray, filter 0,
 * single or multiple IDAT chunks).
 */
inline GrayImage decode_png_gray(std::span<const std::uint8_t> png) {
    auto be32 = [&](std::size_t off) {
        if (off + 4 > png.size()) {
            fail(ErrorCode::TruncatedFile, "png cut short");
        }
        return (std::uint32_t{png[off]} << 24U) | (std::uint32_t{png[off + 1]} << 16U) |
               (std::uint32_t{png[off + 2]} << 8U) | std::uint32_t{png[off + 3]};
    };
    static constexpr std::array<std::uint8_t, 8> sig{0x89, 'P', 'N', 'G',
                                                     '\r', '\n', 0x1A, '\n'};
    if (png.size() < 8 || !std::equal(sig.begin(), sig.end(), png.begin())) {
        fail(ErrorCode::BadMagic, "not a PNG file");
    }
    GrayImage img;
    std::vector<std::uint8_t> z;
    std::size_t off = 8;
    while (off + 8 <= png.size()) {
        const std::uint32_t len = be32(off);
        const std::string type(png.begin() + static_cast<long>(off + 4),
                               png.begin() + static_cast<long>(off + 8));
        const std::size_t data = off + 8;
        if (data + len + 4 > png.size()) {
            fail(ErrorCode::TruncatedFile, "png chunk cut short");
        }
        if (type == "IHDR") {
            img.width = be32(data);
            img.height = be32(data + 4);
            if (png[data + 8] != 8 || png[data + 9] != 0) {
                fail(ErrorCode::BadShape, "only 8-bit grayscale PNG supported");
            }
        } else if (type == "IDAT") {
            z.insert(z.end(), png.begin() + static_cast<long>(data),
                     png.begin() + static_cast<long>(data + len));
        }
        off = data + len + 4;
    }
    std::vector<std::uint8_t> raw((img.width + 1) * img.height);
    uLongf rlen = static_cast<uLongf>(raw.size());
    if (uncompress(raw.data(), &rlen, z.data(), static_cast<uLong>(z.size())) !=
            Z_OK ||
        rlen != raw.size()) {
        fail(ErrorCode::TruncatedFile, "png image data does not inflate");
    }
    img.pixels.resize(img.width * img.height);
    for (std::size_t r = 0; r < img.height; ++r) {
        if (raw[r * (img.width + 1)] != 0) {
            fail(ErrorCode::BadShape, "only filter type 0 supported");
        }
        std::copy_n(raw.begin() + static_cast<long>(r * (img.width + 1) + 1),
                    img.width, img.pixels.begin() + static_cast<long>(r * img.width));
    }
    return img;
}

inline void export_grid(std::span<const Latent> latents, std::size_t side,
                        const std::string &path, std::size_t cols = 0) {
    write_bytes(path, encode_png(render_grid(latents, side, cols)));
}

} // namespace qdiff
