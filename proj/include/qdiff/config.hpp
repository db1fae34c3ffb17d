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
 * @file config.hpp
 * On-disk run configuration (JSON). Every section and key is optional and
 * defaults to the reference setup; unknown keys are rejected with their
 * full key path.
 *
 * {
 *   "model":    {"n", "n_ancilla", "t_steps", "l0", "family", "scrambler_layers"},
 *   "schedule": {"kind", "lambda_s"},
 *   "loss":     {"lambda_kl", "lambda_l1"},
 *   "optim":    {"lr", "epochs_per_block", "batch_size", "lr_step", "lr_gamma"},
 *   "data":     {"images", "labels", "class", "resize", "samples"},
 *   "seed":     integer
 * }
 */
#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "circuits.hpp"
#include "error.hpp"
#include "schedule.hpp"
#include "train.hpp"

namespace qdiff {

using json = nlohmann::json;

struct DataConfig {
    std::string images;
    std::string labels;
    std::optional<int> label;
    std::size_t resize{16};
    std::size_t samples{1000};
};

struct RunConfig {
    TrainConfig train;
    DataConfig data;
};

namespace detail {

inline void check_keys(const json &obj, const std::string &path,
                       const std::set<std::string> &allowed) {
    if (!obj.is_object()) {
        fail(ErrorCode::ConfigInvalid,
             (path.empty() ? std::string("config") : path) + ": expected an object");
    }
    for (const auto &[key, _] : obj.items()) {
        if (allowed.count(key) == 0U) {
            fail(ErrorCode::ConfigInvalid,
                 (path.empty() ? key : path + "." + key) + ": unknown key");
        }
    }
}

template <class T>
void read_key(const json &obj, const std::string &path, const char *key, T &out) {
    if (!obj.contains(key)) {
        return;
    }
    const auto &v = obj.at(key);
    const std::string where = path + "." + key;
    try {
        if constexpr (std::is_same_v<T, std::string>) {
            if (!v.is_string()) {
                throw std::runtime_error("expected a string");
            }
        } else if constexpr (std::is_integral_v<T>) {
            if (!v.is_number_integer()) {
                throw std::runtime_error("expected an integer");
            }
            if constexpr (std::is_unsigned_v<T>) {
                if (v.get<long long>() < 0) {
                    throw std::runtime_error("expected a nonnegative integer");
                }
            }
        } else {
            if (!v.is_number()) {
                throw std::runtime_error("expected a number");
            }
        }
        out = v.get<T>();
    } catch (const std::exception &e) {
        fail(ErrorCode::ConfigInvalid, where + ": " + e.what());
    }
}

template <class Fn>
auto parse_enum(const std::string &where, const std::string &value, Fn &&fn) {
    try {
        return fn(value);
    } catch (const Error &e) {
        fail(ErrorCode::ConfigInvalid, where + ": " + e.what());
    }
}

} // namespace detail

/**
 * @brief Parse and validate a config document. Relative data paths are
 * resolved against `base_dir`.
 */
inline RunConfig parse_config(const json &doc,
                              const std::filesystem::path &base_dir = {}) {
    using detail::read_key;
    detail::check_keys(doc, "", {"model", "schedule", "loss", "optim", "data", "seed"});
    RunConfig rc;
    auto &tc = rc.train;
    const json empty = json::object();
    auto section = [&](const char *name) -> const json & {
        return doc.contains(name) ? doc.at(name) : empty;
    };

    const auto &model = section("model");
    detail::check_keys(model, "model",
                       {"n", "n_ancilla", "t_steps", "l0", "family",
                        "scrambler_layers"});
    read_key(model, "model", "n", tc.spec.n);
    read_key(model, "model", "n_ancilla", tc.spec.n_anc);
    read_key(model, "model", "t_steps", tc.spec.T);
    read_key(model, "model", "l0", tc.spec.l0);
    read_key(model, "model", "scrambler_layers", tc.spec.scrambler_layers);
    std::string family = family_name(tc.spec.family);
    read_key(model, "model", "family", family);
    tc.spec.family = detail::parse_enum("model.family", family, parse_family);

    const auto &sched = section("schedule");
    detail::check_keys(sched, "schedule", {"kind", "lambda_s"});
    std::string kind = schedule_name(tc.schedule);
    read_key(sched, "schedule", "kind", kind);
    tc.schedule = detail::parse_enum("schedule.kind", kind, parse_schedule_kind);
    read_key(sched, "schedule", "lambda_s", tc.lambda_s);

    const auto &loss = section("loss");
    detail::check_keys(loss, "loss", {"lambda_kl", "lambda_l1"});
    read_key(loss, "loss", "lambda_kl", tc.weights.kl);
    read_key(loss, "loss", "lambda_l1", tc.weights.l1);

    const auto &optim = section("optim");
    detail::check_keys(optim, "optim",
                       {"lr", "epochs_per_block", "batch_size", "lr_step",
                        "lr_gamma"});
    read_key(optim, "optim", "lr", tc.lr);
    read_key(optim, "optim", "epochs_per_block", tc.epochs_per_block);
    read_key(optim, "optim", "batch_size", tc.batch_size);
    read_key(optim, "optim", "lr_step", tc.lr_step);
    read_key(optim, "optim", "lr_gamma", tc.lr_gamma);

    const auto &data = section("data");
    detail::check_keys(data, "data",
                       {"images", "labels", "class", "resize", "samples"});
    read_key(data, "data", "images", rc.data.images);
    read_key(data, "data", "labels", rc.data.labels);
    if (data.contains("class") && !data.at("class").is_null()) {
        int label = 0;
        read_key(data, "data", "class", label);
        if (label < 0 || label > 255) {
            fail(ErrorCode::ConfigInvalid, "data.class: must lie in [0, 255]");
        }
        rc.data.label = label;
    }
    read_key(data, "data", "resize", rc.data.resize);
    read_key(data, "data", "samples", rc.data.samples);
    for (auto *p : {&rc.data.images, &rc.data.labels}) {
        if (!p->empty() && std::filesystem::path(*p).is_relative() &&
            !base_dir.empty()) {
            *p = (base_dir / *p).lexically_normal().string();
        }
    }

    read_key(doc, "", "seed", tc.seed);

    validate(tc);
    if (rc.data.resize * rc.data.resize != (std::size_t{1} << tc.spec.n)) {
        fail(ErrorCode::ConfigInvalid,
             "data.resize: resize^2 must equal 2^model.n (" +
                 std::to_string(std::size_t{1} << tc.spec.n) + ")");
    }
    if (rc.data.samples < 1) {
        fail(ErrorCode::ConfigInvalid, "data.samples: must be >= 1");
    }
    return rc;
}

inline RunConfig load_config(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        fail(ErrorCode::ConfigInvalid, "cannot read config file " + path);
    }
    json doc;
    try {
        in >> doc;
    } catch (const json::exception &e) {
        fail(ErrorCode::ConfigInvalid, path + ": " + e.what());
    }
    return parse_config(doc, std::filesystem::path(path).parent_path());
}

/// Canonical echo of a config (sorted keys, every field explicit).
inline json to_json(const RunConfig &rc) {
    const auto &tc = rc.train;
    json j;
    j["model"] = {{"n", tc.spec.n},
                  {"n_ancilla", tc.spec.n_anc},
                  {"t_steps", tc.spec.T},
                  {"l0", tc.spec.l0},
                  {"family", family_name(tc.spec.family)},
                  {"scrambler_layers", tc.spec.scrambler_layers}};
    j["schedule"] = {{"kind", schedule_name(tc.schedule)},
                     {"lambda_s", tc.lambda_s}};
    j["loss"] = {{"lambda_kl", tc.weights.kl}, {"lambda_l1", tc.weights.l1}};
    j["optim"] = {{"lr", tc.lr},
                  {"epochs_per_block", tc.epochs_per_block},
                  {"batch_size", tc.batch_size},
                  {"lr_step", tc.lr_step},
                  {"lr_gamma", tc.lr_gamma}};
    j["data"] = {{"images", rc.data.images},
                 {"labels", rc.data.labels},
                 {"class", rc.data.label ? json(*rc.data.label) : json(nullptr)},
                 {"resize", rc.data.resize},
                 {"samples", rc.data.samples}};
    j["seed"] = tc.seed;
    return j;
}

/// FNV-1a 64 of the canonical config echo, as 16 hex digits.
inline std::string config_hash(const json &canonical) {
    const std::string s = canonical.dump();
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    std::ostringstream os;
    os << std::hex;
    os.width(16);
    os.fill('0');
    os << h;
    return os.str();
}

} // namespace qdiff
