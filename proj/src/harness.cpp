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

#include "pairsketch/harness.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "pairsketch/bhm.hpp"
#include "pairsketch/errors.hpp"
#include "pairsketch/graph_io.hpp"
#include "pairsketch/heavy_edges.hpp"
#include "pairsketch/parallel.hpp"
#include "pairsketch/pseudosnapshot.hpp"
#include "pairsketch/qsim.hpp"
#include "pairsketch/triangle.hpp"

namespace pairsketch::harness {

namespace {

constexpr std::uint64_t kInstanceDomain = 0x696E7374616E6365ULL;
constexpr std::uint64_t kMetaDomain = 0x6D657461ULL;
constexpr std::uint64_t kHashDomain = 0x68617368ULL;

const std::set<std::string> kAlgorithms{"bhm", "triangle", "heavy", "snapshot", "equivalence"};

void check_keys(const Json &j, const std::set<std::string> &allowed, const std::string &where) {
    if (!j.is_object()) {
        throw ConfigError(where + " must be an object");
    }
    for (const auto &[key, value] : j.items()) {
        if (!allowed.count(key)) {
            throw ConfigError("unknown key '" + key + "' in " + where);
        }
    }
}

template <class T>
T get_or(const Json &j, const std::string &key, T fallback) {
    if (!j.contains(key)) {
        return fallback;
    }
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception &e) {
        throw ConfigError("bad value for '" + key + "': " + e.what());
    }
}

template <class T>
T require(const Json &j, const std::string &key, const std::string &where) {
    if (!j.contains(key)) {
        throw ConfigError("missing '" + key + "' in " + where);
    }
    return get_or<T>(j, key, T{});
}

Json summary_json(const stats::Summary &s) {
    return Json{{"count", s.count},
                {"mean", s.mean},
                {"variance", s.variance},
                {"std_error", s.std_error},
                {"ci_half_width", s.half_width}};
}

Verdict sigma_verdict(const std::string &name, double observed, double expected, double sigma) {
    Verdict v{name, stats::within_sigma(observed, expected, sigma), observed, expected, sigma, "|observed - expected| <= 4 sigma"};
    return v;
}

std::uint64_t instance_seed(const ExperimentConfig &c) {
    return get_or<std::uint64_t>(c.instance, "seed", derive_seed(c.seed, kInstanceDomain));
}

struct GraphInstance {
    EdgeStream stream;
    std::optional<std::uint64_t> planted;
};

GraphInstance load_graph(const ExperimentConfig &c, bool directed) {
    const Json &in = c.instance;
    if (in.contains("file")) {
        check_keys(in, {"file", "directed"}, "instance");
        return {io::parse_stream(require<std::string>(in, "file", "instance"), get_or<bool>(in, "directed", directed)), std::nullopt};
    }
    auto kind = require<std::string>(in, "generator", "instance");
    auto seed = instance_seed(c);
    if (kind == "gnp") {
        check_keys(in, {"generator", "n", "p", "seed", "directed"}, "instance");
        return {gen::gnp(require<std::uint32_t>(in, "n", "instance"), require<double>(in, "p", "instance"), seed,
                         get_or<bool>(in, "directed", directed)),
                std::nullopt};
    }
    if (kind == "gnm") {
        check_keys(in, {"generator", "n", "m", "seed", "directed"}, "instance");
        return {gen::gnm(require<std::uint32_t>(in, "n", "instance"), require<std::uint64_t>(in, "m", "instance"), seed,
                         get_or<bool>(in, "directed", directed)),
                std::nullopt};
    }
    if (kind == "star") {
        check_keys(in, {"generator", "n", "directed"}, "instance");
        EdgeStream s = gen::star(require<std::uint32_t>(in, "n", "instance"));
        s.directed = get_or<bool>(in, "directed", directed);
        return {s, std::nullopt};
    }
    if (kind == "planted-triangles") {
        check_keys(in, {"generator", "n", "t", "seed"}, "instance");
        auto p = gen::planted_triangles(require<std::uint32_t>(in, "n", "instance"), require<std::uint64_t>(in, "t", "instance"), seed);
        return {p.stream, p.triangles};
    }
    throw ConfigError("unknown graph generator '" + kind + "'");
}

bhm::BhmInstance load_bhm(const ExperimentConfig &c) {
    const Json &in = c.instance;
    if (in.contains("file")) {
        check_keys(in, {"file"}, "instance");
        return io::parse_bhm(require<std::string>(in, "file", "instance"));
    }
    auto kind = require<std::string>(in, "generator", "instance");
    if (kind != "matching") {
        throw ConfigError("bhm instances come from a file or the matching generator");
    }
    check_keys(in, {"generator", "n", "alpha", "b", "seed"}, "instance");
    return gen::matching(require<std::uint32_t>(in, "n", "instance"), require<double>(in, "alpha", "instance"),
                         get_or<std::uint8_t>(in, "b", 1), instance_seed(c));
}

Json stream_json(const EdgeStream &s) { return Json{{"n", s.n}, {"m", s.m()}, {"directed", s.directed}}; }

Report run_bhm(const ExperimentConfig &c) {
    check_keys(c.params, {"copies", "meta_trials"}, "params");
    bhm::BhmInstance inst = load_bhm(c);
    Report rep;
    auto outs = run_trials<int>(c.trials, c.threads, [&](std::uint64_t i) {
        auto r = bhm::run_single(inst, derive_seed(c.seed, i));
        return r ? (*r == inst.b ? 1 : 0) : -1;
    });
    stats::Running correct;
    std::uint64_t n_correct = 0, n_wrong = 0, n_bot = 0;
    for (int o : outs) {
        correct.add(o == 1);
        n_correct += o == 1;
        n_wrong += o == 0;
        n_bot += o == -1;
    }
    rep.aggregate = correct.summary();
    const double alpha = inst.alpha, trials = static_cast<double>(c.trials);
    rep.oracle = Json{{"alpha", alpha}, {"b", inst.b}, {"n", inst.n}, {"edges", inst.matching.size()},
                      {"p_correct", alpha}, {"p_incorrect_bound", alpha / 2}};
    if (inst.n <= 6) {
        auto law = bhm::exact_output_law(inst, false);
        rep.oracle["exact"] = Json{{"p0", law.p0}, {"p1", law.p1}, {"bot", law.bot}};
    }
    rep.extra = Json{{"correct", n_correct}, {"incorrect", n_wrong}, {"bot", n_bot}};
    double f_correct = static_cast<double>(n_correct) / trials, f_wrong = static_cast<double>(n_wrong) / trials;
    rep.verdicts.push_back(sigma_verdict("correct_rate", f_correct, alpha, stats::binomial_std_error(alpha, c.trials)));
    double s_wrong = stats::binomial_std_error(alpha / 2, c.trials);
    rep.verdicts.push_back(Verdict{"incorrect_rate", f_wrong <= alpha / 2 + 4 * s_wrong, f_wrong, alpha / 2, s_wrong,
                                   "observed <= expected + 4 sigma"});
    auto meta = get_or<std::uint64_t>(c.params, "meta_trials", 0);
    if (meta > 0) {
        auto copies = get_or<std::uint64_t>(c.params, "copies", bhm::default_copies(alpha));
        auto votes = run_trials<int>(meta, c.threads, [&](std::uint64_t j) {
            return bhm::run_majority(inst, copies, derive_seed(c.seed, kMetaDomain, j)) == inst.b ? 1 : 0;
        });
        double success = 0;
        for (int v : votes) {
            success += v;
        }
        success /= static_cast<double>(meta);
        double s = stats::binomial_std_error(2.0 / 3.0, meta);
        rep.extra["majority"] = Json{{"copies", copies}, {"meta_trials", meta}, {"success", success}};
        rep.verdicts.push_back(
            Verdict{"majority_success", success >= 2.0 / 3.0 - 4 * s, success, 2.0 / 3.0, s, "observed >= expected - 4 sigma"});
    }
    return rep;
}

Report run_triangle(const ExperimentConfig &c) {
    check_keys(c.params, {"k"}, "params");
    auto g = load_graph(c, false);
    auto k = get_or<std::uint64_t>(c.params, "k", 1);
    if (k < 1) {
        throw ConfigError("k must be at least 1");
    }
    auto oracle = triangle::oracle_t_split(g.stream, k);
    Report rep;
    auto outs = run_trials<std::int64_t>(c.trials, c.threads, [&](std::uint64_t i) {
        return triangle::run_single(g.stream, k, derive_seed(c.seed, i));
    });
    stats::Running acc;
    std::int64_t max_abs = 0;
    for (auto x : outs) {
        acc.add(static_cast<double>(x));
        max_abs = std::max<std::int64_t>(max_abs, std::abs(x));
    }
    rep.aggregate = acc.summary();
    rep.oracle = Json{{"T", oracle.T},
                      {"T_less", to_double(oracle.T_less)},
                      {"T_less_exact", to_string(oracle.T_less)},
                      {"T_greater_exact", to_string(oracle.T_greater)},
                      {"k", k}};
    // Only T_less is estimated; the T_greater term is the exact oracle value.
    rep.extra = Json{{"stream", stream_json(g.stream)},
                     {"max_abs_output", max_abs},
                     {"T_hat", rep.aggregate.mean + to_double(oracle.T_greater)},
                     {"T_hat_note", "estimated T_less plus oracle T_greater"}};
    rep.verdicts.push_back(sigma_verdict("mean", rep.aggregate.mean, to_double(oracle.T_less), rep.aggregate.std_error));
    double bound = static_cast<double>(k * g.stream.m());
    rep.verdicts.push_back(Verdict{"output_bound", static_cast<double>(max_abs) <= bound, static_cast<double>(max_abs), bound, 0,
                                   "max |X| <= k m"});
    bool identity = oracle.T_less + oracle.T_greater == Rational(oracle.T);
    rep.verdicts.push_back(Verdict{"oracle_identity", identity, to_double(oracle.T_less + oracle.T_greater),
                                   static_cast<double>(oracle.T), 0, "T_less + T_greater = T in rationals"});
    if (g.planted) {
        rep.oracle["planted"] = *g.planted;
        rep.verdicts.push_back(Verdict{"planted_count", oracle.T == *g.planted, static_cast<double>(oracle.T),
                                       static_cast<double>(*g.planted), 0, "oracle count equals planted count"});
    }
    return rep;
}

Report run_heavy(const ExperimentConfig &c) {
    check_keys(c.params, {"d_H", "d_T"}, "params");
    auto g = load_graph(c, true);
    heavy::HeavyParams hp;
    hp.d_H = get_or<std::uint64_t>(c.params, "d_H", 1);
    hp.d_T = get_or<std::uint64_t>(c.params, "d_T", 1);
    hp.validate(g.stream.n);
    auto truth = heavy::oracle_heavy_count(g.stream, hp.d_H, hp.d_T);
    auto outs = run_trials<std::int64_t>(c.trials, c.threads, [&](std::uint64_t i) {
        return heavy::run_single(g.stream, hp.d_H, hp.d_T, derive_seed(c.seed, i));
    });
    Report rep;
    stats::Running acc;
    for (auto x : outs) {
        acc.add(static_cast<double>(x));
    }
    rep.aggregate = acc.summary();
    rep.oracle = Json{{"heavy_edges", truth}, {"d_H", hp.d_H}, {"d_T", hp.d_T}};
    rep.extra = Json{{"stream", stream_json(g.stream)}};
    rep.verdicts.push_back(sigma_verdict("mean", rep.aggregate.mean, static_cast<double>(truth), rep.aggregate.std_error));
    return rep;
}

Report run_snapshot(const ExperimentConfig &c) {
    check_keys(c.params, {"kappa", "eps", "thresholds", "alpha", "beta", "hash_seed", "capacity_constant"}, "params");
    auto g = load_graph(c, true);
    snapshot::SnapshotParams sp;
    sp.kappa = get_or<std::uint64_t>(c.params, "kappa", 2);
    sp.eps = get_or<double>(c.params, "eps", 0.5);
    sp.thresholds = get_or<std::vector<double>>(c.params, "thresholds", {-1.0, 0.0});
    sp.alpha = get_or<std::size_t>(c.params, "alpha", 0);
    sp.beta = get_or<std::size_t>(c.params, "beta", 0);
    sp.capacity_constant = get_or<std::uint64_t>(c.params, "capacity_constant", 32);
    sp.copies = c.trials;
    snapshot::HashOracles hashes{get_or<std::uint64_t>(c.params, "hash_seed", derive_seed(c.seed, kHashDomain)), sp.kappa, sp.eps};
    auto grid = snapshot::DegreeGrid::build(g.stream.n, sp.eps);
    auto ctx = snapshot::Context::make(g.stream, hashes, grid, sp);
    auto expected = snapshot::expected_estimate(g.stream, hashes, grid, sp);
    auto runs = run_trials<snapshot::Estimate>(c.trials, c.threads, [&](std::uint64_t i) {
        return snapshot::run_single(ctx, derive_seed(c.seed, i));
    });
    const std::size_t l = sp.thresholds.size();
    std::vector<stats::Running> cells(l * l);
    stats::Running total;
    std::map<std::string, std::uint64_t> ends;
    std::uint64_t max_scratch = 0;
    for (const auto &est : runs) {
        double sum = 0;
        for (std::size_t a = 0; a < l; ++a) {
            for (std::size_t b = 0; b < l; ++b) {
                cells[a * l + b].add(est.entries[a][b]);
                sum += est.entries[a][b];
            }
        }
        total.add(sum);
        ++ends[snapshot::termination_name(est.terminated_by)];
        max_scratch = std::max(max_scratch, est.scratch_used);
    }
    Report rep;
    rep.aggregate = total.summary();
    rep.oracle = Json{{"restricted", expected.restricted},
                      {"expected", expected.expected},
                      {"in_class", expected.in_class},
                      {"qualifying", expected.qualifying},
                      {"bias_bound", expected.bias_bound},
                      {"grid", grid.levels},
                      {"M", ctx.layout.M},
                      {"hash_sum_ok", ctx.hash_sum_ok}};
    Json means = Json::array();
    bool bias_ok = true;
    for (std::size_t a = 0; a < l; ++a) {
        Json row = Json::array();
        for (std::size_t b = 0; b < l; ++b) {
            auto s = cells[a * l + b].summary();
            row.push_back(Json{{"mean", s.mean}, {"std_error", s.std_error}, {"variance", s.variance}});
            auto want = static_cast<double>(expected.expected[a][b]);
            rep.verdicts.push_back(sigma_verdict("entry_" + std::to_string(a) + "_" + std::to_string(b), s.mean, want, s.std_error));
            auto gap = expected.restricted[a][b] - expected.expected[a][b];
            bias_ok = bias_ok && gap <= expected.bias_bound;
        }
        means.push_back(row);
    }
    rep.extra = Json{{"stream", stream_json(g.stream)}, {"entries", means}, {"terminations", ends}, {"max_scratch_used", max_scratch}};
    rep.verdicts.push_back(Verdict{"bias_bound", bias_ok, static_cast<double>(expected.bias_bound),
                                   static_cast<double>(expected.bias_bound), 0,
                                   "restricted - expected <= bound in every entry"});
    double capacity_hits = static_cast<double>(ends.count("capacity") ? ends["capacity"] : 0);
    rep.verdicts.push_back(Verdict{"scratch_capacity", !ctx.hash_sum_ok || capacity_hits == 0, capacity_hits, 0, 0,
                                   "no run exhausts scratch under the hash-sum hypothesis"});
    return rep;
}

Report run_equivalence(const ExperimentConfig &c) {
    check_keys(c.params, {"size", "max_initial", "max_length"}, "params");
    auto size = get_or<std::uint64_t>(c.params, "size", 8);
    auto max_initial = get_or<std::uint64_t>(c.params, "max_initial", 4);
    auto max_length = get_or<std::size_t>(c.params, "max_length", 5);
    if (size < 2 || size > 16 || max_initial < 1 || max_initial > size || max_length < 1) {
        throw ConfigError("equivalence needs 2 <= size <= 16, 1 <= max_initial <= size, max_length >= 1");
    }
    auto res = check_equivalence(size, max_initial, c.trials, max_length, c.seed);
    Report rep;
    rep.aggregate.count = res.scripts;
    rep.aggregate.mean = res.max_tv;
    rep.oracle = Json{{"tolerance", 1e-9}};
    rep.extra = Json{{"initial_sets", res.initial_sets}, {"scripts", res.scripts}, {"max_tv", res.max_tv},
                     {"max_mass_error", res.max_mass_error}};
    rep.verdicts.push_back(Verdict{"max_tv", res.max_tv <= 1e-9, res.max_tv, 0, 0, "max total variation <= 1e-9"});
    rep.verdicts.push_back(
        Verdict{"mass", res.max_mass_error <= 1e-9, res.max_mass_error, 0, 0, "every law sums to 1 within 1e-9"});
    return rep;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const Json &j) {
    check_keys(j, {"algorithm", "instance", "params", "trials", "seed", "threads", "output", "csv"}, "config");
    ExperimentConfig c;
    c.algorithm = require<std::string>(j, "algorithm", "config");
    c.instance = get_or<Json>(j, "instance", Json::object());
    c.params = get_or<Json>(j, "params", Json::object());
    c.trials = get_or<std::uint64_t>(j, "trials", c.trials);
    c.seed = get_or<std::uint64_t>(j, "seed", c.seed);
    c.threads = get_or<unsigned>(j, "threads", c.threads);
    c.output = get_or<std::string>(j, "output", "");
    c.csv = get_or<std::string>(j, "csv", "");
    c.validate();
    return c;
}

Json ExperimentConfig::to_json() const {
    return Json{{"algorithm", algorithm}, {"instance", instance}, {"params", params}, {"trials", trials}, {"seed", seed}};
}

void ExperimentConfig::validate() const {
    if (!kAlgorithms.count(algorithm)) {
        throw ConfigError("unknown algorithm '" + algorithm + "'");
    }
    if (trials < 1) {
        throw ConfigError("trials must be at least 1");
    }
    if (!instance.is_object() || !params.is_object()) {
        throw ConfigError("instance and params must be objects");
    }
    if (algorithm != "equivalence" && !instance.contains("file") && !instance.contains("generator")) {
        throw ConfigError("instance needs 'file' or 'generator'");
    }
}

bool Report::pass() const {
    return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict &v) { return v.pass; });
}

Json Report::to_json() const {
    Json vs = Json::array();
    for (const auto &v : verdicts) {
        vs.push_back(Json{{"name", v.name},
                          {"pass", v.pass},
                          {"observed", v.observed},
                          {"expected", v.expected},
                          {"sigma", v.sigma},
                          {"detail", v.detail}});
    }
    return Json{{"schema_version", kSchemaVersion},
                {"config", config},
                {"aggregate", summary_json(aggregate)},
                {"oracle", oracle},
                {"extra", extra},
                {"verdicts", vs},
                {"pass", pass()}};
}

std::string Report::canonical() const { return to_json().dump(2) + "\n"; }

std::string Report::csv_header() { return "algorithm,seed,trials,mean,variance,ci_half_width,pass\n"; }

std::string Report::csv_row() const {
    Json row = Json::array({config.value("algorithm", ""), config.value("seed", 0), config.value("trials", 0), aggregate.mean,
                            aggregate.variance, aggregate.half_width});
    std::string out;
    for (const auto &cell : row) {
        out += (cell.is_string() ? cell.get<std::string>() : cell.dump()) + ",";
    }
    return out + (pass() ? "true" : "false") + "\n";
}

Report run_experiment(const ExperimentConfig &config) {
    config.validate();
    Report rep;
    try {
        if (config.algorithm == "bhm") {
            rep = run_bhm(config);
        } else if (config.algorithm == "triangle") {
            rep = run_triangle(config);
        } else if (config.algorithm == "heavy") {
            rep = run_heavy(config);
        } else if (config.algorithm == "snapshot") {
            rep = run_snapshot(config);
        } else {
            rep = run_equivalence(config);
        }
    } catch (const ConfigError &) {
        throw;
    } catch (const Error &e) {
        throw std::runtime_error(config.algorithm + " experiment: " + e.what());
    }
    rep.config = config.to_json();
    return rep;
}

void emit_report(const Report &report, const std::string &path, const std::string &csv_path) {
    if (!path.empty()) {
        io::write_file(path, report.canonical());
    }
    if (!csv_path.empty()) {
        bool fresh = !std::filesystem::exists(csv_path);
        std::ofstream out(csv_path, std::ios::app | std::ios::binary);
        if (!out) {
            throw std::runtime_error(csv_path + ": cannot open for writing");
        }
        if (fresh) {
            out << Report::csv_header();
        }
        out << report.csv_row();
    }
}

Script random_script(std::uint64_t size, std::size_t length, CounterRng &rng) {
    Script script;
    for (std::size_t i = 0; i < length; ++i) {
        switch (rng.below(3)) {
            case 0: {
                PermutationSpec pi;
                switch (rng.below(3)) {
                    case 0: {
                        std::uint64_t a = rng.below(size), b = rng.below(size - 1);
                        b += b >= a;
                        pi.swap(ElementId{a}, ElementId{b});
                        break;
                    }
                    case 1: {
                        if (size < 4) {
                            pi.swap(ElementId{0}, ElementId{1});
                            break;
                        }
                        std::uint64_t len = 1 + rng.below(size / 2);
                        std::uint64_t a = rng.below(size - 2 * len + 1);
                        std::uint64_t b = a + len + rng.below(size - a - 2 * len + 1);
                        pi.swap_blocks(ElementId{a}, ElementId{b}, len);
                        break;
                    }
                    default: {
                        std::uint64_t w = 2 + rng.below(size - 1);
                        std::uint64_t lo = rng.below(size - w + 1);
                        pi.rotate({0, 0, {0}, static_cast<std::int64_t>(lo), w, 1 + rng.below(w - 1)});
                        break;
                    }
                }
                script.push_back(ScriptOp::update(std::move(pi)));
                break;
            }
            case 1:
                script.push_back(ScriptOp::query_one(ElementId{rng.below(size)}));
                break;
            default: {
                std::uint64_t a = rng.below(size), b = rng.below(size - 1);
                b += b >= a;
                script.push_back(ScriptOp::query_pair(ElementId{a}, ElementId{b}));
                break;
            }
        }
    }
    return script;
}

EquivalenceResult check_equivalence(
    std::uint64_t size, std::uint64_t max_initial, std::uint64_t scripts_per_set, std::size_t max_length, std::uint64_t seed) {
    UniverseSpec universe = UniverseSpec::flat(size);
    EquivalenceResult res;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << size); ++mask) {
        auto k = static_cast<std::uint64_t>(std::popcount(mask));
        if (k > max_initial) {
            continue;
        }
        ++res.initial_sets;
        std::vector<ElementId> initial;
        for (std::uint64_t x = 0; x < size; ++x) {
            if (mask >> x & 1) {
                initial.push_back(ElementId{x});
            }
        }
        for (std::uint64_t s = 0; s < scripts_per_set; ++s) {
            CounterRng rng(derive_seed(seed, mask, s));
            Script script = random_script(size, 1 + rng.below(max_length), rng);
            auto a = qsim::enumerate_distribution(universe, initial, script, qsim::Backend::Stochastic);
            auto b = qsim::enumerate_distribution(universe, initial, script, qsim::Backend::Quantum);
            res.max_tv = std::max(res.max_tv, total_variation(a, b));
            res.max_mass_error = std::max({res.max_mass_error, std::abs(a.total() - 1), std::abs(b.total() - 1)});
            ++res.scripts;
        }
    }
    return res;
}

}  // namespace pairsketch::harness
