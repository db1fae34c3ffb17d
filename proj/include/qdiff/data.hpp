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
 * @file data.hpp
 * IDX (MNIST / Fashion-MNIST) ingestion, box-filter resizing and conversion
 * of images to latents. Files ending in ".gz" are decompressed with zlib.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"
#include "io.hpp"
#include "latent.hpp"

namespace qdiff {

inline constexpr std::uint32_t kIdxImageMagic = 0x00000803; // 2051
inline constexpr std::uint32_t kIdxLabelMagic = 0x00000801; // 2049

/// Row-major grayscale image with real-valued pixels.
struct Image {
    std::size_t height{0};
    std::size_t width{0};
    std::vector<double> pixels;

    [[nodiscard]] double at(std::size_t r, std::size_t c) const {
        return pixels[r * width + c];
    }
};

struct ImageDataset {
    std::size_t rows{0};
    std::size_t cols{0};
    std::vector<std::uint8_t> pixels; ///< N * rows * cols raw bytes
    std::vector<std::uint8_t> labels;

    [[nodiscard]] std::size_t size() const noexcept { return labels.size(); }

    [[nodiscard]] Image image(std::size_t i) const {
        Image img{rows, cols, std::vector<double>(rows * cols)};
        const std::size_t off = i * rows * cols;
        for (std::size_t p = 0; p < rows * cols; ++p) {
            img.pixels[p] = pixels[off + p];
        }
        return img;
    }
};

namespace detail {

inline std::uint32_t read_be32(std::span<const std::uint8_t> b, std::size_t off,
                               const std::string &what) {
    if (b.size() < off + 4) {
        fail(ErrorCode::TruncatedFile, what + ": header cut short");
    }
    return (std::uint32_t{b[off]} << 24U) | (std::uint32_t{b[off + 1]} << 16U) |
           (std::uint32_t{b[off + 2]} << 8U) | std::uint32_t{b[off + 3]};
}

} // namespace detail

/// Parse IDX image and label payloads held in memory.
inline ImageDataset parse_idx(std::span<const std::uint8_t> images,
                              std::span<const std::uint8_t> labels) {
    if (detail::read_be32(images, 0, "images") != kIdxImageMagic) {
        fail(ErrorCode::BadMagic, "image file magic is not 0x00000803");
    }
    if (detail::read_be32(labels, 0, "labels") != kIdxLabelMagic) {
        fail(ErrorCode::BadMagic, "label file magic is not 0x00000801");
    }
    const std::size_t n_img = detail::read_be32(images, 4, "images");
    const std::size_t rows = detail::read_be32(images, 8, "images");
    const std::size_t cols = detail::read_be32(images, 12, "images");
    const std::size_t n_lab = detail::read_be32(labels, 4, "labels");
    if (n_img != n_lab) {
        fail(ErrorCode::CountMismatch, std::to_string(n_img) + " images but " +
                                           std::to_string(n_lab) + " labels");
    }
    const std::size_t need = 16 + n_img * rows * cols;
    if (images.size() < need) {
        fail(ErrorCode::TruncatedFile,
             "image payload has " + std::to_string(images.size()) +
                 " bytes, expected " + std::to_string(need));
    }
    if (labels.size() < 8 + n_lab) {
        fail(ErrorCode::TruncatedFile, "label payload cut short");
    }
    ImageDataset ds;
    ds.rows = rows;
    ds.cols = cols;
    ds.pixels.assign(images.begin() + 16, images.begin() + static_cast<long>(need));
    ds.labels.assign(labels.begin() + 8,
                     labels.begin() + static_cast<long>(8 + n_lab));
    return ds;
}

inline ImageDataset load_idx(const std::string &images_path,
                             const std::string &labels_path) {
    return parse_idx(read_file_bytes(images_path), read_file_bytes(labels_path));
}

/// The first `limit` images carrying `label`, in file order.
inline std::vector<Image> filter_class(const ImageDataset &ds,
                                       std::optional<int> label,
                                       std::size_t limit) {
    std::vector<Image> out;
    for (std::size_t i = 0; i < ds.size() && out.size() < limit; ++i) {
        if (!label || ds.labels[i] == *label) {
            out.push_back(ds.image(i));
        }
    }
    return out;
}

/**
 * @brief Area-weighted box filter to side x side. Each target cell is the
 * average of the source area it covers, so constants stay constant and the
 * total mass scales by (side / H)(side / W).
 */
inline Image resize(const Image &img, std::size_t side) {
    if (side == 0 || img.height == 0 || img.width == 0) {
        fail(ErrorCode::BadShape, "resize needs non-empty sizes");
    }
    // Overlap weights of target cell i with every source cell along one axis.
    auto weights = [side](std::size_t src) {
        std::vector<std::vector<std::pair<std::size_t, double>>> w(side);
        const double scale = static_cast<double>(src) / static_cast<double>(side);
        for (std::size_t i = 0; i < side; ++i) {
            const double lo = static_cast<double>(i) * scale;
            const double hi = static_cast<double>(i + 1) * scale;
            const auto first = static_cast<std::size_t>(std::floor(lo));
            for (std::size_t s = first; s < src && static_cast<double>(s) < hi;
                 ++s) {
                const double overlap = std::min(hi, static_cast<double>(s + 1)) -
                                       std::max(lo, static_cast<double>(s));
                if (overlap > 0.0) {
                    w[i].emplace_back(s, overlap / scale);
                }
            }
        }
        return w;
    };
    const auto wr = weights(img.height);
    const auto wc = weights(img.width);
    Image out{side, side, std::vector<double>(side * side, 0.0)};
    for (std::size_t r = 0; r < side; ++r) {
        for (std::size_t c = 0; c < side; ++c) {
            double acc = 0.0;
            for (const auto &[sr, a] : wr[r]) {
                for (const auto &[sc, b] : wc[c]) {
                    acc += a * b * img.at(sr, sc);
                }
            }
            out.pixels[r * side + c] = acc;
        }
    }
    return out;
}

/// Pixels / 255, flattened row-major, max-normalized.
inline Latent to_latent(const Image &img) {
    std::vector<double> v(img.pixels.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = img.pixels[i] / 255.0;
    }
    return max_normalize(v);
}

/**
 * @brief Training latents: first `limit` images of class `label`, resized to
 * `side`. Degenerate (all-zero) images are skipped.
 */
inline std::vector<Latent> load_latents(const ImageDataset &ds,
                                        std::optional<int> label,
                                        std::size_t side, std::size_t limit) {
    std::vector<Latent> out;
    for (std::size_t i = 0; i < ds.size() && out.size() < limit; ++i) {
        if (label && ds.labels[i] != *label) {
            continue;
        }
        const auto img = resize(ds.image(i), side);
        if (*std::max_element(img.pixels.begin(), img.pixels.end()) <= 0.0) {
            continue;
        }
        out.push_back(to_latent(img));
    }
    return out;
}

} // namespace qdiff
