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
 * @file checkpoint.hpp
 * Single-file model checkpoint:
 *
 *   "QDIFFCKP"                       8-byte magic
 *   u32 version                      little-endian, currently 1
 *   u64 n, bytes                     JSON metadata (spec, schedule, seed,
 *                                    epochs per block, config echo)
 *   u32 tensor count
 *   per tensor: u32 name length, name, u32 ndim, u64 dims[ndim],
 *               f64 values (little-endian)
 *
 * Loading then saving reproduces the file byte for byte.
 */
#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "circuits.hpp"
#include "error.hpp"
#include "io.hpp"
#include "reverse.hpp"
#include "schedule.hpp"

namespace qdiff {

inline constexpr char kCheckpointMagic[8] = {'Q', 'D', 'I', 'F', 'F', 'C', 'K', 'P'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Tensor {
    std::string name;
    std::vector<std::uint64_t> shape;
    std::vector<double> values;
};

/// Model plus run metadata as stored on disk.
struct Checkpoint {
    Model model;
    nlohmann::json config = nullptr; ///< config echo, null when unknown

    bool operator==(const Checkpoint &o) const {
        return model == o.model && config == o.config;
    }
};

namespace detail {

class ByteWriter {
  public:
    void u32(std::uint32_t v) { le(v, 4); }
    void u64(std::uint64_t v) { le(v, 8); }
    void f64(double v) { le(std::bit_cast<std::uint64_t>(v), 8); }
    void raw(std::span<const std::uint8_t> b) { out_.insert(out_.end(), b.begin(), b.end()); }
    void str(const std::string &s) {
        out_.insert(out_.end(), s.begin(), s.end());
    }
    [[nodiscard]] std::vector<std::uint8_t> take() { return std::move(out_); }

  private:
    void le(std::uint64_t v, int n) {
        for (int i = 0; i < n; ++i) {
            out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
        }
    }
    std::vector<std::uint8_t> out_;
};

class ByteReader {
  public:
    explicit ByteReader(std::span<const std::uint8_t> b) : b_(b) {}
    std::uint32_t u32() { return static_cast<std::uint32_t>(le(4)); }
    std::uint64_t u64() { return le(8); }
    double f64() { return std::bit_cast<double>(le(8)); }
    std::string str(std::size_t n) {
        need(n);
        std::string s(b_.begin() + static_cast<long>(pos_),
                      b_.begin() + static_cast<long>(pos_ + n));
        pos_ += n;
        return s;
    }
    [[nodiscard]] bool done() const { return pos_ == b_.size(); }

  private:
    void need(std::size_t n) const {
        if (pos_ + n > b_.size()) {
            fail(ErrorCode::TruncatedFile, "checkpoint cut short");
        }
    }
    std::uint64_t le(int n) {
        need(static_cast<std::size_t>(n));
        std::uint64_t v = 0;
        for (int i = 0; i < n; ++i) {
            v |= std::uint64_t{b_[pos_++]} << (8 * i);
        }
        return v;
    }
    std::span<const std::uint8_t> b_;
    std::size_t pos_{0};
};

inline std::vector<std::uint64_t> to_u64(const std::vector<std::size_t> &v) {
    return {v.begin(), v.end()};
}

} // namespace detail

inline nlohmann::json spec_to_json(const ModelSpec &s) {
    return {{"n", s.n},
            {"n_ancilla", s.n_anc},
            {"t_steps", s.T},
            {"l0", s.l0},
            {"family", family_name(s.family)},
            {"scrambler_layers", s.scrambler_layers}};
}

inline std::vector<std::uint8_t> serialize_checkpoint(const Checkpoint &ck) {
    const Model &m = ck.model;
    const auto &s = m.forward.schedule;
    nlohmann::json meta;
    meta["spec"] = spec_to_json(m.spec);
    meta["schedule"] = {{"kind", schedule_name(s.kind)},
                        {"lambda_s", s.lambda_s},
                        {"seed", s.seed}};
    meta["seed"] = m.forward.seed;
    meta["scrambler_seed"] = m.forward.scrambler.seed;
    std::vector<std::size_t> epochs;
    for (const auto &b : m.blocks) {
        epochs.push_back(b.epochs_done);
    }
    meta["epochs_done"] = epochs;
    meta["config"] = ck.config;

    std::vector<Tensor> tensors;
    const std::uint64_t T = s.T;
    tensors.push_back({"schedule.betas", {T}, s.betas});
    tensors.push_back({"schedule.alphas", {T}, s.alphas});
    tensors.push_back({"schedule.alpha_bars", {T + 1}, s.alpha_bars});
    tensors.push_back({"schedule.eps", {T}, s.eps});
    tensors.push_back({"schedule.thetas", {T}, s.thetas});
    {
        const auto &sc = m.forward.scrambler;
        Tensor t{"scrambler.base_angles",
                 {sc.steps(), sc.num_layers, sc.num_qubits, 3},
                 {}};
        for (const auto &a : sc.base_angles) {
            t.values.insert(t.values.end(), a.begin(), a.end());
        }
        tensors.push_back(std::move(t));
    }
    for (const auto &b : m.blocks) {
        const auto shapes =
            param_shape(b.shape.family, b.shape.num_qubits(), b.shape.layers);
        std::size_t off = 0;
        for (std::size_t k = 0; k < shapes.size(); ++k) {
            std::size_t count = 1;
            for (auto d : shapes[k]) {
                count *= d;
            }
            tensors.push_back({"block." + std::to_string(b.t) + "." + std::to_string(k),
                               detail::to_u64(shapes[k]),
                               std::vector<double>(b.params.begin() + static_cast<long>(off),
                                                   b.params.begin() +
                                                       static_cast<long>(off + count))});
            off += count;
        }
    }

    detail::ByteWriter w;
    w.str(std::string(kCheckpointMagic, 8));
    w.u32(kCheckpointVersion);
    const std::string js = meta.dump();
    w.u64(js.size());
    w.str(js);
    w.u32(static_cast<std::uint32_t>(tensors.size()));
    for (const auto &t : tensors) {
        w.u32(static_cast<std::uint32_t>(t.name.size()));
        w.str(t.name);
        w.u32(static_cast<std::uint32_t>(t.shape.size()));
        for (auto d : t.shape) {
            w.u64(d);
        }
        for (double v : t.values) {
            w.f64(v);
        }
    }
    return w.take();
}

inline Checkpoint deserialize_checkpoint(std::span<const std::uint8_t> bytes) {
    detail::ByteReader r(bytes);
    if (r.str(8) != std::string(kCheckpointMagic, 8)) {
        fail(ErrorCode::BadMagic, "not a qdiff checkpoint");
    }
    if (const auto v = r.u32(); v != kCheckpointVersion) {
        fail(ErrorCode::BadCheckpoint, "unsupported checkpoint version " +
                                           std::to_string(v));
    }
    nlohmann::json meta;
    try {
        meta = nlohmann::json::parse(r.str(r.u64()));
    } catch (const nlohmann::json::exception &e) {
        fail(ErrorCode::BadCheckpoint, std::string("metadata: ") + e.what());
    }

    std::map<std::string, Tensor> tensors;
    const std::uint32_t count = r.u32();
    for (std::uint32_t i = 0; i < count; ++i) {
        Tensor t;
        t.name = r.str(r.u32());
        const std::uint32_t nd = r.u32();
        std::uint64_t total = 1;
        for (std::uint32_t d = 0; d < nd; ++d) {
            t.shape.push_back(r.u64());
            total *= t.shape.back();
        }
        t.values.resize(total);
        for (auto &v : t.values) {
            v = r.f64();
        }
        tensors.emplace(t.name, std::move(t));
    }
    if (!r.done()) {
        fail(ErrorCode::BadCheckpoint, "trailing bytes after the last tensor");
    }
    auto tensor = [&](const std::string &name,
                      std::size_t expect) -> const std::vector<double> & {
        auto it = tensors.find(name);
        if (it == tensors.end()) {
            fail(ErrorCode::BadCheckpoint, "missing tensor " + name);
        }
        if (it->second.values.size() != expect) {
            fail(ErrorCode::BadCheckpoint, "tensor " + name + " has the wrong size");
        }
        return it->second.values;
    };

    Checkpoint ck;
    Model &m = ck.model;
    try {
        const auto &sj = meta.at("spec");
        m.spec.n = sj.at("n").get<std::size_t>();
        m.spec.n_anc = sj.at("n_ancilla").get<std::size_t>();
        m.spec.T = sj.at("t_steps").get<std::size_t>();
        m.spec.l0 = sj.at("l0").get<std::size_t>();
        m.spec.family = parse_family(sj.at("family").get<std::string>());
        m.spec.scrambler_layers = sj.at("scrambler_layers").get<std::size_t>();
        m.forward.seed = meta.at("seed").get<std::uint64_t>();
        auto &s = m.forward.schedule;
        s.kind = parse_schedule_kind(meta.at("schedule").at("kind").get<std::string>());
        s.lambda_s = meta.at("schedule").at("lambda_s").get<double>();
        s.seed = meta.at("schedule").at("seed").get<std::uint64_t>();
        s.T = m.spec.T;
        m.forward.scrambler.seed = meta.at("scrambler_seed").get<std::uint64_t>();
        const auto epochs = meta.at("epochs_done").get<std::vector<std::size_t>>();
        if (epochs.size() != m.spec.T) {
            fail(ErrorCode::BadCheckpoint, "epochs_done has the wrong length");
        }
        ck.config = meta.at("config");

        const std::size_t T = m.spec.T;
        s.betas = tensor("schedule.betas", T);
        s.alphas = tensor("schedule.alphas", T);
        s.alpha_bars = tensor("schedule.alpha_bars", T + 1);
        s.eps = tensor("schedule.eps", T);
        s.thetas = tensor("schedule.thetas", T);

        auto &sc = m.forward.scrambler;
        sc.num_qubits = m.spec.n;
        sc.num_layers = m.spec.scrambler_layers;
        const std::size_t per = param_count(CircuitFamily::Scrambler, sc.num_qubits,
                                            sc.num_layers);
        const auto &base = tensor("scrambler.base_angles", T * per);
        for (std::size_t t = 0; t < T; ++t) {
            sc.base_angles.emplace_back(base.begin() + static_cast<long>(t * per),
                                        base.begin() + static_cast<long>((t + 1) * per));
        }

        for (std::size_t t = 1; t <= T; ++t) {
            DenoiserBlock b;
            b.t = t;
            b.shape = block_shape(m.spec, t);
            b.epochs_done = epochs[t - 1];
            const auto shapes =
                param_shape(b.shape.family, b.shape.num_qubits(), b.shape.layers);
            for (std::size_t k = 0; k < shapes.size(); ++k) {
                std::size_t cnt = 1;
                for (auto d : shapes[k]) {
                    cnt *= d;
                }
                const auto &v = tensor(
                    "block." + std::to_string(t) + "." + std::to_string(k), cnt);
                b.params.insert(b.params.end(), v.begin(), v.end());
            }
            m.blocks.push_back(std::move(b));
        }
    } catch (const nlohmann::json::exception &e) {
        fail(ErrorCode::BadCheckpoint, std::string("metadata: ") + e.what());
    }
    return ck;
}

inline void save_checkpoint(const Checkpoint &ck, const std::string &path) {
    write_bytes(path, serialize_checkpoint(ck));
}

inline Checkpoint load_checkpoint(const std::string &path) {
    return deserialize_checkpoint(read_file_bytes(path));
}

} // namespace qdiff
