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

#include "pairsketch/pseudosnapshot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pairsketch/exact.hpp"
#include "pairsketch/parallel.hpp"
#include "pairsketch/rng.hpp"

namespace pairsketch::snapshot {

namespace {

constexpr std::uint64_t kNoiseDomain = 0x6E6F697365ULL;

Rational capped_pseudobias(
    const Rational &dout_sampled, std::uint64_t dout_after, std::uint64_t d_rounded, std::uint64_t d_after, const Rational &g) {
    Rational b = Rational(2) * (dout_sampled + Rational(dout_after)) / Rational(d_rounded + d_after) - 1 + g;
    return std::min(b, Rational(1));
}

RealMatrix zero_matrix(std::size_t l) { return RealMatrix(l, std::vector<double>(l, 0.0)); }
CountMatrix zero_counts(std::size_t l) { return CountMatrix(l, std::vector<std::uint64_t>(l, 0)); }

bool in_range(std::uint64_t d, std::uint64_t lo, std::uint64_t hi) { return d >= lo && d < hi; }

// Per-edge endpoint statistics in one forward pass.
struct PassStats {
    std::uint64_t d_before = 0;
    std::uint64_t d_after = 0;
    std::size_t level = 0;
    std::uint64_t sampled = 0;
    Rational pseudobias;
};

std::vector<std::array<PassStats, 2>> forward_pass(const EdgeStream &stream, const HashOracles &hashes, const DegreeGrid &grid) {
    const std::uint32_t n = stream.n;
    std::vector<std::uint64_t> total(n, 0), total_out(n, 0);
    for (const Edge &e : stream.edges) {
        ++total[e.u];
        ++total[e.v];
        ++total_out[e.u];
    }
    std::vector<std::uint64_t> deg(n, 0), out(n, 0);
    std::vector<std::vector<std::uint64_t>> out_edges(n);
    std::vector<std::array<PassStats, 2>> result(stream.m());
    for (std::size_t k = 0; k < stream.m(); ++k) {
        const Edge &e = stream.edges[k];
        ++deg[e.u];
        ++deg[e.v];
        ++out[e.u];
        out_edges[e.u].push_back(k);
        const std::uint32_t ends[2] = {e.u, e.v};
        for (int side = 0; side < 2; ++side) {
            std::uint32_t w = ends[side];
            PassStats &s = result[k][side];
            s.d_before = deg[w];
            s.d_after = total[w] - deg[w];
            s.level = grid.index_of(deg[w]);
            for (std::uint64_t id : out_edges[w]) {
                s.sampled += hashes.f(grid, s.level, id);
            }
            std::uint64_t d = grid.levels[s.level];
            Rational dout_sampled(BigInt(s.sampled * 2 * d), BigInt(hashes.kappa));
            s.pseudobias = capped_pseudobias(dout_sampled, total_out[w] - out[w], d, s.d_after, hashes.g(w));
        }
    }
    return result;
}

}  // namespace

DegreeGrid DegreeGrid::build(std::uint32_t n, double eps) {
    if (n == 0) {
        throw InvalidParamsError("grid needs n >= 1");
    }
    if (!(eps > 0 && eps <= 1)) {
        throw InvalidParamsError("eps must lie in (0, 1]");
    }
    const long double base = 1.0L + static_cast<long double>(eps) * eps * eps;
    std::size_t top = 0;
    while (std::pow(base, static_cast<long double>(top + 1)) <= static_cast<long double>(n)) {
        ++top;
    }
    DegreeGrid grid;
    grid.eps = eps;
    for (std::size_t i = 0; i < top; ++i) {
        grid.levels.push_back(static_cast<std::uint64_t>(std::floor(std::pow(base, static_cast<long double>(i)))));
    }
    grid.levels.push_back(n);
    grid.levels.erase(std::unique(grid.levels.begin(), grid.levels.end()), grid.levels.end());
    return grid;
}

std::size_t DegreeGrid::index_of(std::uint64_t d) const {
    auto it = std::upper_bound(levels.begin(), levels.end(), d);
    if (it == levels.begin()) {
        throw InvalidParamsError("degree " + std::to_string(d) + " below the grid");
    }
    return static_cast<std::size_t>(it - levels.begin()) - 1;
}

bool HashOracles::f(const DegreeGrid &grid, std::size_t level, std::uint64_t edge) const {
    std::uint64_t d = grid.levels.at(level);
    std::uint64_t h = mix64(derive_seed(seed, level + 1, edge));
    return static_cast<unsigned __int128>(h) * (2 * d) < static_cast<unsigned __int128>(kappa) << 64;
}

std::uint32_t HashOracles::g_raw(std::uint32_t vertex) const {
    return static_cast<std::uint32_t>(mix64(derive_seed(seed, kNoiseDomain, vertex)) >> 32);
}

Rational HashOracles::g(std::uint32_t vertex) const {
    Rational unit(BigInt(2) * g_raw(vertex), BigInt(1) << 32);
    return exact_rational(eps) * (unit - 1);
}

EdgeLocalStats pseudobias_exact(
    const EdgeStream &stream, const HashOracles &hashes, const DegreeGrid &grid, std::size_t edge, std::uint32_t v) {
    if (edge >= stream.m()) {
        throw InvalidQueryError("edge index out of range");
    }
    const Edge &target = stream.edges[edge];
    if (target.u != v && target.v != v) {
        throw InvalidQueryError("vertex " + std::to_string(v) + " is not an endpoint of edge " + std::to_string(edge));
    }
    EdgeLocalStats s;
    for (std::size_t k = 0; k < stream.m(); ++k) {
        const Edge &e = stream.edges[k];
        if (e.u != v && e.v != v) {
            continue;
        }
        bool head = e.u == v;
        if (k <= edge) {
            ++s.d_before;
            s.dout_before += head;
        } else {
            ++s.d_after;
            s.dout_after += head;
        }
    }
    s.i_tilde = grid.index_of(s.d_before);
    s.d_rounded = grid.levels[s.i_tilde];
    for (std::size_t k = 0; k <= edge; ++k) {
        if (stream.edges[k].u == v && hashes.f(grid, s.i_tilde, k)) {
            ++s.sampled;
        }
    }
    s.dout_sampled = Rational(BigInt(s.sampled) * 2 * s.d_rounded, BigInt(hashes.kappa));
    s.g = hashes.g(v);
    s.pseudobias = capped_pseudobias(s.dout_sampled, s.dout_after, s.d_rounded, s.d_after, s.g);
    std::uint64_t d = s.d_before + s.d_after;
    std::uint64_t dout = s.dout_before + s.dout_after;
    s.bias = Rational(BigInt(2 * dout) - d, BigInt(d));
    return s;
}

std::optional<std::size_t> bias_class(const Rational &b, const std::vector<Rational> &thresholds) {
    if (thresholds.empty() || b < thresholds.front() || b > 1) {
        return std::nullopt;
    }
    auto it = std::upper_bound(thresholds.begin(), thresholds.end(), b);
    return static_cast<std::size_t>(it - thresholds.begin()) - 1;
}

std::vector<Rational> exact_thresholds(const std::vector<double> &thresholds) {
    std::vector<Rational> out;
    for (double t : thresholds) {
        out.push_back(exact_rational(t));
    }
    return out;
}

CountMatrix pseudosnapshot_exact(
    const EdgeStream &stream,
    const HashOracles &hashes,
    const DegreeGrid &grid,
    const std::vector<double> &thresholds,
    std::optional<ClassPair> restrict_to) {
    stream.validate();
    auto t = exact_thresholds(thresholds);
    CountMatrix hist = zero_counts(t.size());
    auto stats = forward_pass(stream, hashes, grid);
    for (const auto &edge : stats) {
        if (restrict_to) {
            const auto &lv = grid.levels;
            if (restrict_to->alpha + 1 >= lv.size() || restrict_to->beta + 1 >= lv.size()) {
                throw InvalidParamsError("class index out of range");
            }
            if (!in_range(edge[0].d_before, lv[restrict_to->alpha], lv[restrict_to->alpha + 1]) ||
                !in_range(edge[1].d_before, lv[restrict_to->beta], lv[restrict_to->beta + 1])) {
                continue;
            }
        }
        auto cu = bias_class(edge[0].pseudobias, t);
        auto cv = bias_class(edge[1].pseudobias, t);
        if (cu && cv) {
            ++hist[*cu][*cv];
        }
    }
    return hist;
}

void SnapshotParams::validate(const DegreeGrid &grid) const {
    if (kappa < 1) {
        throw InvalidParamsError("kappa must be at least 1");
    }
    if (!(eps > 0 && eps <= 1)) {
        throw InvalidParamsError("eps must lie in (0, 1]");
    }
    if (thresholds.empty()) {
        throw InvalidParamsError("need at least one threshold");
    }
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
        if (!(thresholds[i] >= -1 && thresholds[i] <= 1)) {
            throw InvalidParamsError("thresholds must lie in [-1, 1]");
        }
        if (i > 0 && !(thresholds[i] > thresholds[i - 1])) {
            throw InvalidParamsError("thresholds must be strictly increasing");
        }
    }
    if (alpha + 1 >= grid.levels.size() || beta + 1 >= grid.levels.size()) {
        throw InvalidParamsError("class index needs a next grid level");
    }
    if (capacity_constant < 1 || copies < 1) {
        throw InvalidParamsError("capacity constant and copies must be positive");
    }
}

ExpectedReport expected_estimate(
    const EdgeStream &stream, const HashOracles &hashes, const DegreeGrid &grid, const SnapshotParams &params) {
    stream.validate();
    params.validate(grid);
    auto t = exact_thresholds(params.thresholds);
    ExpectedReport rep;
    rep.restricted = zero_counts(t.size());
    rep.expected = zero_counts(t.size());
    const auto &lv = grid.levels;
    for (const auto &edge : forward_pass(stream, hashes, grid)) {
        if (!in_range(edge[0].d_before, lv[params.alpha], lv[params.alpha + 1]) ||
            !in_range(edge[1].d_before, lv[params.beta], lv[params.beta + 1])) {
            continue;
        }
        ++rep.in_class;
        bool qualifies = edge[0].sampled + 1 <= params.kappa && edge[1].sampled + 1 <= params.kappa;
        rep.qualifying += qualifies;
        auto cu = bias_class(edge[0].pseudobias, t);
        auto cv = bias_class(edge[1].pseudobias, t);
        if (cu && cv) {
            ++rep.restricted[*cu][*cv];
            if (qualifies) {
                ++rep.expected[*cu][*cv];
            }
        }
    }
    rep.bias_bound = rep.in_class - rep.qualifying;
    return rep;
}

Context Context::make(const EdgeStream &stream, const HashOracles &hashes, const DegreeGrid &grid, const SnapshotParams &params) {
    stream.validate();
    params.validate(grid);
    if (hashes.kappa != params.kappa) {
        throw InvalidParamsError("hash oracles and params disagree on kappa");
    }
    Context ctx;
    ctx.stream = &stream;
    ctx.hashes = hashes;
    ctx.grid = grid;
    ctx.params = params;
    ctx.thresholds = exact_thresholds(params.thresholds);
    ctx.d_a = grid.levels[params.alpha];
    ctx.d_a1 = grid.levels[params.alpha + 1];
    ctx.d_b = grid.levels[params.beta];
    ctx.d_b1 = grid.levels[params.beta + 1];
    const std::uint64_t k = params.kappa, m = stream.m();
    Layout &L = ctx.layout;
    L.n = stream.n;
    L.kappa = k;
    L.copies = 2 * k * k;
    L.M = params.capacity_constant * k * k * k * m;
    L.positions = L.M * stream.n;
    std::uint64_t sum = 0;
    for (std::size_t e = 0; e < m; ++e) {
        ctx.f_alpha.push_back(hashes.f(grid, params.alpha, e));
        ctx.f_beta.push_back(hashes.f(grid, params.beta, e));
        sum += ctx.f_alpha.back() + ctx.f_beta.back();
    }
    ctx.hash_sum_ok = sum <= 2 * k * m;
    if (m == 0) {
        return ctx;
    }
    if (std::max(ctx.d_a + (k - 1) * ctx.d_a1, ctx.d_b + (k - 1) * ctx.d_b1) >= L.positions) {
        throw InvalidParamsError("query positions exceed the stack range");
    }
    ctx.universe = std::make_shared<const UniverseSpec>(UniverseSpec(
        "pseudosnapshot",
        {Component{"S", {Factor::range("slot", 0, L.M)}},
         Component{"V",
                   {Factor::range("v", 0, stream.n), Factor::range("label", 0, 4 * L.copies), Factor::range("pos", 0, L.positions)}}}));
    return ctx;
}

std::uint64_t Context::first_deleted(Family f) const {
    switch (f) {
        case Family::A:
            return d_a;
        case Family::B:
            return d_a1;
        case Family::C:
            return d_b;
        case Family::D:
            break;
    }
    return d_b1;
}

PermutationSpec inc_permutation(const Context &ctx, Family f, std::uint32_t v, std::uint64_t r, std::uint64_t &cursor) {
    const Layout &L = ctx.layout;
    std::uint64_t need = L.copies * r;
    if (cursor + need > L.M) {
        throw CapacityError("scratch exhausted: need " + std::to_string(need) + ", have " + std::to_string(L.M - cursor));
    }
    PermutationSpec pi;
    for (std::uint64_t c = 0; c < L.copies; ++c) {
        pi.rotate({1,
                   2,
                   {static_cast<std::int64_t>(v), static_cast<std::int64_t>(L.label(f, c)), 0},
                   0,
                   L.positions,
                   r % L.positions});
    }
    for (std::uint64_t c = 0; c < L.copies; ++c) {
        pi.swap_blocks(L.scratch(cursor + c * r), L.stack(v, f, c, 1), r);
    }
    cursor += need;
    return pi;
}

std::vector<EdgeQuery> edge_queries(const Context &ctx, std::uint32_t u, std::uint32_t v) {
    const Layout &L = ctx.layout;
    const std::uint64_t k = L.kappa;
    std::vector<EdgeQuery> out;
    out.reserve(4 * k * k);
    for (std::uint64_t i = 1; i <= k; ++i) {
        for (std::uint64_t j = 1; j <= k; ++j) {
            std::uint64_t p = ctx.d_a + (i - 1) * ctx.d_a1, q = i * ctx.d_a1;
            std::uint64_t p2 = ctx.d_b + (j - 1) * ctx.d_b1, q2 = j * ctx.d_b1;
            std::uint64_t t = copy_t(k, i, j), s = copy_s(k, i, j);
            out.push_back({1, i, j, L.stack(u, Family::A, t, p), L.stack(v, Family::C, t, p2)});
            out.push_back({2, i, j, L.stack(u, Family::B, t, q), L.stack(v, Family::C, s, p2)});
            out.push_back({3, i, j, L.stack(u, Family::A, s, p), L.stack(v, Family::D, t, q2)});
            out.push_back({4, i, j, L.stack(u, Family::B, s, q), L.stack(v, Family::D, s, q2)});
        }
    }
    return out;
}

std::vector<Progression> cleanup_progressions(const Context &ctx, std::uint32_t u, std::uint32_t v) {
    const Layout &L = ctx.layout;
    std::vector<Progression> out;
    for (std::uint32_t w : {u, v}) {
        for (Family f : {Family::A, Family::B, Family::C, Family::D}) {
            std::uint64_t first = ctx.first_deleted(f), step = ctx.step(f);
            std::uint64_t count = (L.positions - 1 - first) / step + 1;
            for (std::uint64_t c = 0; c < L.copies; ++c) {
                out.push_back({L.stack(w, f, c, first), step, count});
            }
        }
    }
    return out;
}

std::string termination_name(Termination t) {
    switch (t) {
        case Termination::StreamEnd:
            return "stream_end";
        case Termination::Plus:
            return "plus";
        case Termination::Minus:
            return "minus";
        case Termination::Cleanup:
            return "cleanup";
        case Termination::Capacity:
            return "capacity";
        case Termination::HashSum:
            break;
    }
    return "hash_sum";
}

Estimate zero_estimate(const Context &ctx, Termination t) {
    Estimate est;
    est.entries = zero_matrix(ctx.thresholds.size());
    est.terminated_by = t;
    return est;
}

Estimate classical_stage(const Context &ctx, std::size_t edge, const EdgeQuery &q, QueryOutcome outcome) {
    Estimate est = zero_estimate(ctx, outcome == QueryOutcome::Plus ? Termination::Plus : Termination::Minus);
    est.edge = edge;
    est.x = q.x;
    est.i = q.i;
    est.j = q.j;
    const Edge &e = ctx.stream->edges[edge];
    std::uint64_t d_after[2] = {0, 0}, dout_after[2] = {0, 0};
    const std::uint32_t ends[2] = {e.u, e.v};
    for (std::size_t k = edge + 1; k < ctx.stream->m(); ++k) {
        const Edge &f = ctx.stream->edges[k];
        for (int side = 0; side < 2; ++side) {
            if (f.u == ends[side] || f.v == ends[side]) {
                ++d_after[side];
                dout_after[side] += f.u == ends[side];
            }
        }
    }
    const std::uint64_t kappa = ctx.params.kappa;
    Rational sampled_u(BigInt(q.i - 1) * 2 * ctx.d_a, BigInt(kappa));
    Rational sampled_v(BigInt(q.j - 1) * 2 * ctx.d_b, BigInt(kappa));
    Rational bu = capped_pseudobias(sampled_u, dout_after[0], ctx.d_a, d_after[0], ctx.hashes.g(e.u));
    Rational bv = capped_pseudobias(sampled_v, dout_after[1], ctx.d_b, d_after[1], ctx.hashes.g(e.v));
    auto cu = bias_class(bu, ctx.thresholds);
    auto cv = bias_class(bv, ctx.thresholds);
    if (cu && cv) {
        double value = static_cast<double>(ctx.layout.M) / 2;
        bool positive = (outcome == QueryOutcome::Plus) == (q.x == 1 || q.x == 4);
        est.entries[*cu][*cv] = positive ? value : -value;
    }
    return est;
}

std::vector<ElementRange> initial_members(const Context &ctx) { return {ElementRange{ctx.layout.scratch(0), ctx.layout.M}}; }

Estimate run_single(const Context &ctx, std::uint64_t seed) {
    if (ctx.stream->m() == 0) {
        return zero_estimate(ctx, Termination::StreamEnd);
    }
    auto init = initial_members(ctx);
    auto sketch = SketchHandle::create(ctx.universe, std::span<const ElementRange>(init), seed);
    return run_on(sketch, ctx);
}

Estimate run_single(
    const EdgeStream &stream, const HashOracles &hashes, const DegreeGrid &grid, const SnapshotParams &params, std::uint64_t seed) {
    return run_single(Context::make(stream, hashes, grid, params), seed);
}

RealMatrix estimate(
    const EdgeStream &stream,
    const HashOracles &hashes,
    const DegreeGrid &grid,
    const SnapshotParams &params,
    std::uint64_t seed,
    unsigned threads) {
    Context ctx = Context::make(stream, hashes, grid, params);
    auto runs = run_trials<Estimate>(params.copies, threads, [&](std::uint64_t i) { return run_single(ctx, derive_seed(seed, i)); });
    RealMatrix mean = zero_matrix(ctx.thresholds.size());
    for (const auto &est : runs) {
        for (std::size_t a = 0; a < mean.size(); ++a) {
            for (std::size_t b = 0; b < mean.size(); ++b) {
                mean[a][b] += est.entries[a][b];
            }
        }
    }
    for (auto &row : mean) {
        for (auto &x : row) {
            x /= static_cast<double>(params.copies);
        }
    }
    return mean;
}

RealMatrix exact_expected_estimate(const Context &ctx) {
    RealMatrix mean = zero_matrix(ctx.thresholds.size());
    if (ctx.stream->m() == 0) {
        return mean;
    }
    auto init = initial_members(ctx);
    auto law = qsim::replay_output_law<RealMatrix>(
        ctx.universe, std::span<const ElementRange>(init), [&](SketchHandle &s) { return run_on(s, ctx).entries; });
    for (const auto &[p, value] : law) {
        for (std::size_t a = 0; a < mean.size(); ++a) {
            for (std::size_t b = 0; b < mean.size(); ++b) {
                mean[a][b] += p * value[a][b];
            }
        }
    }
    return mean;
}

StackMirror::StackMirror(const Context &ctx)
    : ctx_(&ctx), stacks_(ctx.layout.n), r_(ctx.layout.n, 0), sampled_alpha_(ctx.layout.n, 0), sampled_beta_(ctx.layout.n, 0) {}

std::uint64_t StackMirror::sampled(std::uint32_t v, Family f) const {
    return f == Family::A || f == Family::B ? sampled_alpha_[v] : sampled_beta_[v];
}

void StackMirror::apply_edge(std::size_t e) {
    const Context &ctx = *ctx_;
    const Edge &edge = ctx.stream->edges.at(e);
    auto inc = [&](std::uint32_t w, Family f, std::uint64_t r) {
        auto &s = stacks_[w][static_cast<int>(f)];
        std::set<std::uint64_t> next;
        for (auto p : s) {
            next.insert(p + r);
        }
        for (std::uint64_t p = 1; p <= r; ++p) {
            next.insert(p);
        }
        s = std::move(next);
        cursor_ += ctx.layout.copies * r;
    };
    for (std::uint32_t w : {edge.u, edge.v}) {
        for (Family f : {Family::A, Family::B, Family::C, Family::D}) {
            inc(w, f, 1);
        }
    }
    if (ctx.f_alpha[e]) {
        inc(edge.u, Family::A, ctx.d_a1);
        inc(edge.u, Family::B, ctx.d_a1);
    }
    if (ctx.f_beta[e]) {
        inc(edge.u, Family::C, ctx.d_b1);
        inc(edge.u, Family::D, ctx.d_b1);
    }
    for (std::uint32_t w : {edge.u, edge.v}) {
        for (Family f : {Family::A, Family::B, Family::C, Family::D}) {
            auto &s = stacks_[w][static_cast<int>(f)];
            std::uint64_t first = ctx.first_deleted(f), step = ctx.step(f);
            for (auto it = s.lower_bound(first); it != s.end();) {
                it = (*it - first) % step == 0 ? s.erase(it) : std::next(it);
            }
        }
    }
    ++r_[edge.u];
    ++r_[edge.v];
    sampled_alpha_[edge.u] += ctx.f_alpha[e];
    sampled_beta_[edge.u] += ctx.f_beta[e];
}

std::string StackMirror::compare(const SketchHandle &sketch) const {
    const Context &ctx = *ctx_;
    const Layout &L = ctx.layout;
    std::uint64_t expected = L.M - cursor_;
    for (const auto &per_vertex : stacks_) {
        for (const auto &s : per_vertex) {
            expected += s.size() * L.copies;
        }
    }
    if (sketch.debug_size() != expected) {
        return "size " + std::to_string(sketch.debug_size()) + ", modelled " + std::to_string(expected);
    }
    auto scratch = sketch.debug_runs(0);
    bool scratch_ok = cursor_ == L.M ? scratch.empty()
                                     : scratch.size() == 1 && scratch[0].first.index == cursor_ && scratch[0].count == L.M - cursor_;
    if (!scratch_ok) {
        return "scratch is not the suffix from " + std::to_string(cursor_);
    }
    for (std::uint32_t v = 0; v < L.n; ++v) {
        for (Family f : {Family::A, Family::B, Family::C, Family::D}) {
            for (std::uint64_t c = 0; c < L.copies; ++c) {
                for (auto p : stack(v, f)) {
                    if (!sketch.debug_contains(L.stack(v, f, c, p))) {
                        return "missing position " + std::to_string(p) + " of vertex " + std::to_string(v) + " family " +
                               std::to_string(static_cast<int>(f)) + " copy " + std::to_string(c);
                    }
                }
            }
        }
    }
    return {};
}

bool StackMirror::interval_form(std::uint32_t v, Family f) const {
    const Context &ctx = *ctx_;
    const auto &s = stacks_[v][static_cast<int>(f)];
    const std::uint64_t r = r_[v], R = sampled(v, f);
    const std::uint64_t h = ctx.first_deleted(f), D = ctx.step(f);
    auto is_range = [&](std::uint64_t lo, std::uint64_t hi, std::uint64_t until) {
        // s restricted to [lo, until) equals [lo', hi) for the returned lo'.
        std::vector<std::uint64_t> got(s.lower_bound(lo), s.lower_bound(until));
        if (got.empty()) {
            return std::optional<std::uint64_t>(hi);
        }
        if (got.back() + 1 != hi || got.back() - got.front() + 1 != got.size()) {
            return std::optional<std::uint64_t>();
        }
        return std::optional<std::uint64_t>(got.front());
    };
    if (R == 0) {
        std::uint64_t top = std::min(r + 1, h);
        auto lo = is_range(0, top, std::numeric_limits<std::uint64_t>::max());
        return lo && (*lo == 1 || top <= 1);
    }
    auto base = is_range(0, h, h);
    if (!base || (*base != 1 && h > 1)) {
        return false;
    }
    for (std::uint64_t i = 1; i <= R; ++i) {
        std::uint64_t start = h + (i - 1) * D;
        std::uint64_t end = i < R ? h + i * D : R * D + std::min(r + 1, h);
        std::uint64_t until = i < R ? start + D : std::numeric_limits<std::uint64_t>::max();
        auto lo = is_range(start, end, until);
        if (!lo) {
            return false;
        }
        // rho = lo - start must lie in [1, r]; an empty window needs end - start <= r.
        std::uint64_t need = std::max(*lo, start + 1);
        if (need - start > r || (*lo < end && *lo != need)) {
            return false;
        }
    }
    return true;
}

}  // namespace pairsketch::snapshot
