// Copyright 2026 The pairsketch Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: one subcommand per experiment plus `gen`.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "pairsketch/errors.hpp"
#include "pairsketch/graph_io.hpp"
#include "pairsketch/harness.hpp"
#include "pairsketch/heavy_edges.hpp"

using pairsketch::harness::ExperimentConfig;
using pairsketch::harness::Json;

namespace {

struct Common {
    std::string config_path;
    std::optional<std::uint64_t> trials;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    std::string output;
    std::string csv;
    std::string input;
    std::string generator;
    std::optional<std::uint32_t> n;
    std::optional<double> p;
    std::optional<std::uint64_t> m;
    std::optional<std::uint64_t> t;
    std::optional<double> alpha;
    std::optional<int> b;
    std::optional<std::uint64_t> instance_seed;
    bool directed = false;
    bool quiet = false;
};

void add_common(CLI::App *app, Common &c) {
    app->add_option("--config", c.config_path, "JSON experiment config; flags override its fields");
    app->add_option("--trials", c.trials, "Number of trials");
    app->add_option("--seed", c.seed, "Master seed (PAIRSKETCH_SEED overrides the config file seed)");
    app->add_option("--threads", c.threads, "Worker threads, 0 for all cores");
    app->add_option("--output", c.output, "Write the JSON report here instead of stdout");
    app->add_option("--csv", c.csv, "Append a CSV summary row here");
    app->add_flag("--quiet", c.quiet, "Only print verdict lines");
}

void add_instance(CLI::App *app, Common &c) {
    app->add_option("--input", c.input, "Instance file");
    app->add_option("--gen", c.generator, "Instance generator (gnp, gnm, star, planted-triangles, matching)");
    app->add_option("--n", c.n, "Generator: vertices");
    app->add_option("--p", c.p, "Generator: edge probability");
    app->add_option("--m", c.m, "Generator: edges");
    app->add_option("--t", c.t, "Generator: planted triangles");
    app->add_option("--instance-seed", c.instance_seed, "Generator seed");
    app->add_flag("--directed", c.directed, "Treat the stream as directed");
}

Json instance_json(const Common &c, const Json &base, const std::string &default_generator) {
    Json in = base;
    if (!c.input.empty()) {
        in = Json{{"file", c.input}};
        if (c.directed) {
            in["directed"] = true;
        }
        return in;
    }
    if (!c.generator.empty()) {
        in = Json{{"generator", c.generator}};
    } else if (!in.contains("file") && !in.contains("generator")) {
        in["generator"] = default_generator;
    }
    if (c.n) in["n"] = *c.n;
    if (c.p) in["p"] = *c.p;
    if (c.m) in["m"] = *c.m;
    if (c.t) in["t"] = *c.t;
    if (c.alpha) in["alpha"] = *c.alpha;
    if (c.b) in["b"] = *c.b;
    if (c.instance_seed) in["seed"] = *c.instance_seed;
    if (c.directed) in["directed"] = true;
    return in;
}

int run(const std::string &algorithm, const Common &c, const Json &params_from_flags) {
    Json j = Json::object();
    if (!c.config_path.empty()) {
        j = Json::parse(pairsketch::io::read_file(c.config_path));
    }
    j["algorithm"] = algorithm;
    if (const char *env = std::getenv("PAIRSKETCH_SEED")) {
        try {
            j["seed"] = std::stoull(env);
        } catch (const std::exception &) {
            throw pairsketch::ConfigError("PAIRSKETCH_SEED is not an unsigned integer");
        }
    }
    if (c.seed) j["seed"] = *c.seed;
    if (c.trials) j["trials"] = *c.trials;
    if (c.threads) j["threads"] = *c.threads;
    if (algorithm != "equivalence") {
        j["instance"] = instance_json(c, j.value("instance", Json::object()), algorithm == "bhm" ? "matching" : "gnp");
    }
    Json params = j.value("params", Json::object());
    for (const auto &[k, v] : params_from_flags.items()) {
        params[k] = v;
    }
    j["params"] = params;
    ExperimentConfig config = ExperimentConfig::from_json(j);
    if (!c.output.empty()) config.output = c.output;
    if (!c.csv.empty()) config.csv = c.csv;
    auto report = pairsketch::harness::run_experiment(config);
    pairsketch::harness::emit_report(report, config.output, config.csv);
    if (config.output.empty() && !c.quiet) {
        std::cout << report.canonical();
    }
    for (const auto &v : report.verdicts) {
        std::cerr << (v.pass ? "PASS " : "FAIL ") << v.name << " observed=" << v.observed << " expected=" << v.expected
                  << " sigma=" << v.sigma << '\n';
    }
    return report.pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"pairsketch: pair-sampling sketch experiments"};
    app.require_subcommand(1);

    Common c;
    Json params = Json::object();

    auto *bhm = app.add_subcommand("bhm", "Boolean hidden matching protocol");
    add_common(bhm, c);
    add_instance(bhm, c);
    std::optional<std::uint64_t> copies, meta;
    bhm->add_option("--alpha", c.alpha, "Generator: matching size over n");
    bhm->add_option("--b", c.b, "Generator: hidden bit");
    bhm->add_option("--copies", copies, "Copies per majority vote");
    bhm->add_option("--meta-trials", meta, "Majority-vote trials");

    auto *tri = app.add_subcommand("triangle", "Triangle counting estimator");
    add_common(tri, c);
    add_instance(tri, c);
    std::optional<std::uint64_t> k;
    tri->add_option("--k", k, "Sampling parameter k");

    auto *heavy = app.add_subcommand("heavy", "Heavy edge counting estimator");
    add_common(heavy, c);
    add_instance(heavy, c);
    std::optional<std::uint64_t> d_H, d_T;
    std::optional<double> heavy_eps;
    heavy->add_option("--d-H,--dh", d_H, "Head degree threshold");
    heavy->add_option("--d-T,--dt", d_T, "Tail degree threshold");
    heavy->add_option("--eps", heavy_eps, "Accuracy; sets trials to ceil(12 / eps^2) unless --trials is given");

    auto *snap = app.add_subcommand("snapshot", "Pseudosnapshot estimator for one class pair");
    add_common(snap, c);
    add_instance(snap, c);
    std::optional<std::uint64_t> kappa, hash_seed;
    std::optional<double> eps;
    std::vector<double> thresholds;
    std::optional<std::size_t> class_alpha, class_beta;
    snap->add_option("--kappa", kappa, "Integer accuracy parameter");
    snap->add_option("--eps", eps, "Accuracy parameter");
    snap->add_option("--thresholds", thresholds, "Bias thresholds t1,...,tl")->delimiter(',');
    snap->add_option("--alpha", class_alpha, "Head degree class");
    snap->add_option("--beta", class_beta, "Tail degree class");
    snap->add_option("--hash-seed", hash_seed, "Seed of the hash functions");
    std::optional<std::uint64_t> snap_copies;
    snap->add_option("--copies", snap_copies, "Same as --trials");

    auto *eq = app.add_subcommand("equivalence", "Exact agreement of the two sketch backends");
    add_common(eq, c);
    std::optional<std::uint64_t> size, max_initial, max_length;
    eq->add_option("--size", size, "Universe size");
    eq->add_option("--max-initial", max_initial, "Largest initial set");
    eq->add_option("--max-length", max_length, "Longest script");

    auto *gen = app.add_subcommand("gen", "Write a generated instance file");
    std::string kind, out, sidecar;
    Common g;
    gen->add_option("kind", kind, "gnp, gnm, star, planted-triangles or matching")->required();
    gen->add_option("--out", out, "Output file")->required();
    gen->add_option("--sidecar", sidecar, "planted-triangles: ground-truth JSON path");
    gen->add_option("--n", g.n, "Vertices")->required();
    gen->add_option("--p", g.p, "Edge probability");
    gen->add_option("--m", g.m, "Edges");
    gen->add_option("--t", g.t, "Planted triangles");
    gen->add_option("--alpha", g.alpha, "Matching size over n");
    gen->add_option("--b", g.b, "Hidden bit");
    gen->add_option("--seed", g.instance_seed, "Seed");
    gen->add_flag("--directed", g.directed, "Directed pairs");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            std::uint64_t seed = g.instance_seed.value_or(1);
            if (kind == "gnp") {
                pairsketch::io::write_stream(out, pairsketch::gen::gnp(*g.n, g.p.value_or(0.5), seed, g.directed));
            } else if (kind == "gnm") {
                pairsketch::io::write_stream(out, pairsketch::gen::gnm(*g.n, g.m.value_or(0), seed, g.directed));
            } else if (kind == "star") {
                pairsketch::io::write_stream(out, pairsketch::gen::star(*g.n));
            } else if (kind == "planted-triangles") {
                auto p = pairsketch::gen::planted_triangles(*g.n, g.t.value_or(1), seed);
                pairsketch::io::write_stream(out, p.stream);
                std::string side = sidecar.empty() ? out + ".json" : sidecar;
                Json truth{{"generator", kind}, {"n", *g.n}, {"t", p.triangles}, {"seed", seed}, {"T", p.triangles}};
                pairsketch::io::write_file(side, truth.dump(2) + "\n");
            } else if (kind == "matching") {
                pairsketch::io::write_bhm(
                    out, pairsketch::gen::matching(*g.n, g.alpha.value_or(0.25), static_cast<std::uint8_t>(g.b.value_or(1)), seed));
            } else {
                throw pairsketch::ConfigError("unknown generator '" + kind + "'");
            }
            return 0;
        }
        if (*bhm) {
            if (copies) params["copies"] = *copies;
            if (meta) params["meta_trials"] = *meta;
            return run("bhm", c, params);
        }
        if (*tri) {
            if (k) params["k"] = *k;
            return run("triangle", c, params);
        }
        if (*heavy) {
            if (d_H) params["d_H"] = *d_H;
            if (d_T) params["d_T"] = *d_T;
            if (heavy_eps && !c.trials) {
                pairsketch::heavy::HeavyParams hp;
                hp.eps = *heavy_eps;
                hp.validate(1);
                c.trials = hp.resolved_copies();
            }
            return run("heavy", c, params);
        }
        if (*snap) {
            if (kappa) params["kappa"] = *kappa;
            if (eps) params["eps"] = *eps;
            if (!thresholds.empty()) params["thresholds"] = thresholds;
            if (class_alpha) params["alpha"] = *class_alpha;
            if (class_beta) params["beta"] = *class_beta;
            if (hash_seed) params["hash_seed"] = *hash_seed;
            if (snap_copies) c.trials = *snap_copies;
            return run("snapshot", c, params);
        }
        if (size) params["size"] = *size;
        if (max_initial) params["max_initial"] = *max_initial;
        if (max_length) params["max_length"] = *max_length;
        return run("equivalence", c, params);
    } catch (const std::exception &e) {
        std::cerr << "pairsketch: " << e.what() << '\n';
        return 2;
    }
}
