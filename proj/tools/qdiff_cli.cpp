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

// qdiff command-line driver: train, sample, ablate-forward, shots, entropy.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qdiff/qdiff.hpp"

namespace fs = std::filesystem;
using namespace qdiff;

namespace {

enum ExitCode : int {
    kOk = 0,
    kFailure = 1,
    kConfigInvalid = 2,
    kDataError = 3,
    kNumericalFailure = 4,
};

/// Marks errors raised while reading the dataset.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_text(const fs::path &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        fail(ErrorCode::Io, "cannot write " + path.string());
    }
    out << text;
}

/// <file>.meta.json next to every artifact.
void write_sidecar(const fs::path &artifact, const std::string &command,
                   const std::string &cfg_hash, std::uint64_t seed,
                   const json &extra = json::object()) {
    json meta = extra;
    meta["command"] = command;
    meta["config_hash"] = cfg_hash;
    meta["seed"] = seed;
    meta["artifact"] = artifact.filename().string();
    write_text(artifact.string() + ".meta.json", meta.dump(2) + "\n");
}

std::vector<Latent> load_training_latents(const RunConfig &rc) {
    try {
        if (rc.data.images.empty() || rc.data.labels.empty()) {
            fail(ErrorCode::ConfigInvalid,
                 "data.images and data.labels must be set");
        }
        const auto ds = load_idx(rc.data.images, rc.data.labels);
        auto xs = load_latents(ds, rc.data.label, rc.data.resize, rc.data.samples);
        if (xs.empty()) {
            fail(ErrorCode::CountMismatch, "no images match data.class");
        }
        return xs;
    } catch (const Error &e) {
        if (e.code() == ErrorCode::ConfigInvalid) {
            throw;
        }
        throw DataError(e.what());
    }
}

std::vector<ForwardVariant> parse_variants(const std::string &list) {
    std::vector<ForwardVariant> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) {
            out.push_back(parse_variant(item));
        }
    }
    if (out.empty()) {
        fail(ErrorCode::ConfigInvalid, "--variants is empty");
    }
    return out;
}

std::vector<std::uint64_t> parse_grid(const std::string &list) {
    if (list.empty()) {
        return shot_grid();
    }
    std::vector<std::uint64_t> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) {
            out.push_back(std::stoull(item));
        }
    }
    return out;
}

std::size_t side_of(const ModelSpec &spec) {
    const auto side = static_cast<std::size_t>(
        std::lround(std::sqrt(static_cast<double>(std::size_t{1} << spec.n))));
    if (side * side != (std::size_t{1} << spec.n)) {
        fail(ErrorCode::BadShape, "2^n is not a square image size");
    }
    return side;
}

std::string latents_csv(const std::vector<Latent> &xs) {
    std::ostringstream os;
    os << "sample";
    if (!xs.empty()) {
        for (std::size_t j = 0; j < xs[0].size(); ++j) {
            os << ",p" << j;
        }
    }
    os << "\n";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        os << i;
        for (double v : xs[i]) {
            os << "," << fmt_double(v);
        }
        os << "\n";
    }
    return os.str();
}

struct Options {
    std::string config;
    std::string checkpoint;
    std::string out{"."};
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> shots;
    std::size_t threads{1};
    std::size_t count{16};
    std::string variants{"qsc,cdp,iusp,gusp"};
    std::string grid;
    bool resume{false};
};

int cmd_train(const Options &o) {
    auto rc = load_config(o.config);
    if (o.seed) {
        rc.train.seed = *o.seed;
    }
    rc.train.threads = o.threads;
    const auto latents = load_training_latents(rc);
    const json echo = to_json(rc);
    const std::string hash = config_hash(echo);

    fs::create_directories(o.out);
    const fs::path ckpt_path = fs::path(o.out) / "model.ckpt";
    Checkpoint ck;
    if (o.resume && fs::exists(ckpt_path)) {
        ck = load_checkpoint(ckpt_path.string());
        if (ck.config != echo) {
            fail(ErrorCode::ConfigInvalid,
                 "checkpoint in " + o.out + " was written with another config");
        }
        std::cerr << "resuming from " << ckpt_path << "\n";
    } else {
        ck.model = init_model(rc.train.spec, rc.train.schedule, rc.train.lambda_s,
                              rc.train.seed);
        ck.config = echo;
    }

    std::ostringstream loss_csv;
    loss_csv << "block,epoch,mean_loss\n";
    auto on_done = [&](const Model &m, const BlockTrace &tr) {
        ck.model = m;
        save_checkpoint(ck, ckpt_path.string());
        for (std::size_t e = 0; e < tr.epoch_loss.size(); ++e) {
            loss_csv << tr.t << "," << e << "," << fmt_double(tr.epoch_loss[e])
                     << "\n";
        }
        std::cerr << "block " << tr.t << ": loss " << tr.epoch_loss.front()
                  << " -> " << tr.epoch_loss.back() << "\n";
    };
    train_model(ck.model, latents, rc.train, on_done);
    save_checkpoint(ck, ckpt_path.string());
    write_sidecar(ckpt_path, "train", hash, rc.train.seed,
                  {{"samples", latents.size()}});
    const fs::path loss_path = fs::path(o.out) / "loss.csv";
    write_text(loss_path, loss_csv.str());
    write_sidecar(loss_path, "train", hash, rc.train.seed);
    return kOk;
}

int cmd_sample(const Options &o) {
    const auto ck = load_checkpoint(o.checkpoint);
    const Model &m = ck.model;
    const std::uint64_t seed = o.seed.value_or(0);
    const std::size_t dim = std::size_t{1} << m.spec.n;
    std::vector<Latent> xs(o.count);
    parallel_for(o.count, o.threads, [&](std::size_t i) {
        xs[i] = sample_chain(noise_init(dim, seed, i), m, o.shots, seed, i);
    });
    fs::create_directories(o.out);
    const std::string hash = config_hash(ck.config);
    const json extra = {{"count", o.count},
                        {"shots", o.shots ? json(*o.shots) : json("inf")}};
    const fs::path png = fs::path(o.out) / "samples.png";
    export_grid(xs, side_of(m.spec), png.string());
    write_sidecar(png, "sample", hash, seed, extra);
    const fs::path csv = fs::path(o.out) / "latents.csv";
    write_text(csv, latents_csv(xs));
    write_sidecar(csv, "sample", hash, seed, extra);
    return kOk;
}

/// Entropy traces (and optionally per-step grids) for the forward variants.
int run_forward_study(const Options &o, bool with_grids, const char *command) {
    auto rc = load_config(o.config);
    if (o.seed) {
        rc.train.seed = *o.seed;
    }
    auto latents = load_training_latents(rc);
    if (latents.size() > o.count) {
        latents.resize(o.count);
    }
    const auto model = init_model(rc.train.spec, rc.train.schedule,
                                  rc.train.lambda_s, rc.train.seed);
    const auto variants = parse_variants(o.variants);
    const auto traces = entropy_report(latents, model.forward, variants, o.threads);
    const std::string hash = config_hash(to_json(rc));

    fs::create_directories(o.out);
    std::ostringstream csv;
    csv << "step,variant,entropy_bits\n";
    for (const auto &tr : traces) {
        for (std::size_t t = 0; t < tr.mean_bits.size(); ++t) {
            csv << t << "," << variant_name(tr.variant) << ","
                << fmt_double(tr.mean_bits[t]) << "\n";
        }
    }
    const fs::path csv_path = fs::path(o.out) / "entropy.csv";
    write_text(csv_path, csv.str());
    write_sidecar(csv_path, command, hash, rc.train.seed,
                  {{"samples", latents.size()}});

    if (with_grids) {
        // One row per sample, one column per step 0..T.
        const std::size_t rows = std::min<std::size_t>(latents.size(), 8);
        const std::size_t side = side_of(rc.train.spec);
        for (auto v : variants) {
            std::vector<Latent> tiles;
            for (std::size_t i = 0; i < rows; ++i) {
                tiles.push_back(latents[i]);
                for (auto &x : run_forward(v, latents[i], model.forward, i)) {
                    tiles.push_back(std::move(x));
                }
            }
            const fs::path png =
                fs::path(o.out) / (std::string("forward_") + variant_name(v) + ".png");
            export_grid(tiles, side, png.string(), rc.train.spec.T + 1);
            write_sidecar(png, command, hash, rc.train.seed,
                          {{"variant", variant_name(v)}});
        }
    }
    return kOk;
}

int cmd_shots(const Options &o) {
    const auto ck = load_checkpoint(o.checkpoint);
    const std::uint64_t seed = o.seed.value_or(0);
    const auto grid = parse_grid(o.grid);
    const auto st = shot_study(ck.model, o.count, seed, grid, o.threads);
    const std::string hash = config_hash(ck.config);
    const std::size_t side = side_of(ck.model.spec);

    fs::create_directories(o.out);
    std::ostringstream csv;
    csv << "shots,mean_l2\n";
    for (std::size_t k = 0; k < st.shots.size(); ++k) {
        csv << st.shots[k] << "," << fmt_double(st.mean_l2[k]) << "\n";
    }
    const fs::path csv_path = fs::path(o.out) / "shots.csv";
    write_text(csv_path, csv.str());
    write_sidecar(csv_path, "shots", hash, seed, {{"count", o.count}});

    const fs::path inf_png = fs::path(o.out) / "shots_inf.png";
    export_grid(st.analytic, side, inf_png.string());
    write_sidecar(inf_png, "shots", hash, seed, {{"shots", "inf"}});
    for (std::size_t k = 0; k < st.shots.size(); ++k) {
        const fs::path png =
            fs::path(o.out) / ("shots_" + std::to_string(st.shots[k]) + ".png");
        export_grid(st.generated[k], side, png.string());
        write_sidecar(png, "shots", hash, seed, {{"shots", st.shots[k]}});
    }
    return kOk;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"qdiff: quantum scrambling diffusion on a statevector simulator"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&](CLI::App *sub) {
        sub->add_option("--out", o.out, "Output directory")->capture_default_str();
        sub->add_option("--threads", o.threads, "Worker threads")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        sub->add_option("--seed", o.seed, "Random seed");
    };

    auto *train = app.add_subcommand("train", "Train all denoiser blocks");
    train->add_option("--config", o.config, "Run config (JSON)")->required();
    train->add_flag("--resume", o.resume,
                    "Continue from <out>/model.ckpt, skipping finished blocks");
    add_common(train);

    auto *sample = app.add_subcommand("sample", "Generate images from noise");
    sample->add_option("--checkpoint", o.checkpoint, "Model checkpoint")->required();
    sample->add_option("--count", o.count, "Number of images")->capture_default_str();
    sample->add_option("--shots", o.shots, "Shots per measurement (omit for exact)")
        ->check(CLI::PositiveNumber);
    add_common(sample);

    auto *ablate = app.add_subcommand("ablate-forward",
                                      "Entropy traces and step grids of forward variants");
    ablate->add_option("--config", o.config, "Run config (JSON)")->required();
    ablate->add_option("--variants", o.variants, "Comma-separated variants")
        ->capture_default_str();
    ablate->add_option("--count", o.count, "Number of images")->capture_default_str();
    add_common(ablate);

    auto *shots = app.add_subcommand("shots", "Finite-shot convergence study");
    shots->add_option("--checkpoint", o.checkpoint, "Model checkpoint")->required();
    shots->add_option("--grid", o.grid,
                      "Comma-separated shot counts (default 2^5..2^14)");
    shots->add_option("--count", o.count, "Number of images")->capture_default_str();
    add_common(shots);

    auto *entropy = app.add_subcommand("entropy", "Entropy traces of forward variants");
    entropy->add_option("--config", o.config, "Run config (JSON)")->required();
    entropy->add_option("--variants", o.variants, "Comma-separated variants")
        ->capture_default_str();
    entropy->add_option("--count", o.count, "Number of images")->capture_default_str();
    add_common(entropy);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigInvalid;
    }

    try {
        if (*train) {
            return cmd_train(o);
        }
        if (*sample) {
            return cmd_sample(o);
        }
        if (*ablate) {
            return run_forward_study(o, true, "ablate-forward");
        }
        if (*shots) {
            return cmd_shots(o);
        }
        if (*entropy) {
            return run_forward_study(o, false, "entropy");
        }
    } catch (const DataError &e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kDataError;
    } catch (const Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        switch (e.code()) {
        case ErrorCode::ConfigInvalid:
        case ErrorCode::BadKind:
            return kConfigInvalid;
        case ErrorCode::NonFiniteLoss:
            return kNumericalFailure;
        default:
            return kFailure;
        }
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFailure;
    }
    return kFailure;
}
