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

#ifndef PAIRSKETCH_PSEUDOSNAPSHOT_HPP
#define PAIRSKETCH_PSEUDOSNAPSHOT_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pairsketch/errors.hpp"
#include "pairsketch/graph.hpp"
#include "pairsketch/rational.hpp"
#include "pairsketch/sketch.hpp"

namespace pairsketch::snapshot {

/// Geometric degree grid floor((1+eps^3)^i), last level n, with repeated
/// values collapsed. Class indices refer to the collapsed grid.
struct DegreeGrid {
    double eps = 0.5;
    std::vector<std::uint64_t> levels;

    static DegreeGrid build(std::uint32_t n, double eps);
    /// Largest i with levels[i] <= d; d >= 1.
    std::size_t index_of(std::uint64_t d) const;
};

/// Pure hash functions of (seed, level, edge index) and (seed, vertex).
struct HashOracles {
    std::uint64_t seed = 0;
    std::uint64_t kappa = 1;
    double eps = 0.5;

    /// 1 with probability min(1, kappa / (2 d)), d = grid.levels[level].
    bool f(const DegreeGrid &grid, std::size_t level, std::uint64_t edge) const;
    /// Noise -eps + 2 eps k / 2^32 with k uniform in [0, 2^32).
    std::uint32_t g_raw(std::uint32_t vertex) const;
    Rational g(std::uint32_t vertex) const;
};

struct EdgeLocalStats {
    std::uint64_t d_before = 0;  // counts e itself
    std::uint64_t dout_before = 0;
    std::uint64_t d_after = 0;
    std::uint64_t dout_after = 0;
    std::size_t i_tilde = 0;
    std::uint64_t d_rounded = 0;
    std::uint64_t sampled = 0;  // out-edges up to and including e passing f at level i_tilde
    Rational dout_sampled;      // sampled * 2 d_rounded / kappa
    Rational g;
    Rational pseudobias;
    Rational bias;  // (dout - din) / d over the whole stream
};

/// Statistics of endpoint v of edge number `edge`, by scanning the stream.
EdgeLocalStats pseudobias_exact(
    const EdgeStream &stream, const HashOracles &hashes, const DegreeGrid &grid, std::size_t edge, std::uint32_t v);

/// Class of a bias value: [t_i, t_{i+1}) for i < l-1, [t_l, 1] for the last.
std::optional<std::size_t> bias_class(const Rational &b, const std::vector<Rational> &thresholds);
std::vector<Rational> exact_thresholds(const std::vector<double> &thresholds);

using CountMatrix = std::vector<std::vector<std::uint64_t>>;
using RealMatrix = std::vector<std::vector<double>>;

struct ClassPair {
    std::size_t alpha = 0;
    std::size_t beta = 0;
};

/// Pseudosnapshot, optionally restricted to edges u -> v with d_before(u)
/// in [d_alpha, d_alpha+1) and d_before(v) in [d_beta, d_beta+1).
CountMatrix pseudosnapshot_exact(
    const EdgeStream &stream,
    const HashOracles &hashes,
    const DegreeGrid &grid,
    const std::vector<double> &thresholds,
    std::optional<ClassPair> restrict_to = std::nullopt);

struct SnapshotParams {
    std::uint64_t kappa = 1;
    double eps = 0.5;
    std::vector<double> thresholds{-1.0};
    std::size_t alpha = 0;
    std::size_t beta = 0;
    std::uint64_t capacity_constant = 32;
    std::uint64_t copies = 1;

    void validate(const DegreeGrid &grid) const;
};

/// What the estimator converges to. An in-class edge qualifies when the
/// sampled out-counts of both endpoints leave room in the kappa query rows;
/// only qualifying edges contribute, so the bias of each entry is at most
/// the number of non-qualifying in-class edges.
struct ExpectedReport {
    CountMatrix restricted;
    CountMatrix expected;
    std::uint64_t in_class = 0;
    std::uint64_t qualifying = 0;
    std::uint64_t bias_bound = 0;
};
ExpectedReport expected_estimate(
    const EdgeStream &stream, const HashOracles &hashes, const DegreeGrid &grid, const SnapshotParams &params);

enum class Family : std::uint8_t { A = 0, B = 1, C = 2, D = 3 };

/// Universe layout: scratch {0, ..., M-1}, then (vertex, label, position)
/// with label = family * 2 kappa^2 + copy and position in [0, M n).
struct Layout {
    std::uint32_t n = 0;
    std::uint64_t kappa = 1;
    std::uint64_t copies = 2;  // 2 kappa^2
    std::uint64_t M = 0;
    std::uint64_t positions = 0;  // M n

    ElementId scratch(std::uint64_t i) const { return ElementId{i}; }
    std::uint64_t label(Family f, std::uint64_t copy) const { return static_cast<std::uint64_t>(f) * copies + copy; }
    ElementId stack(std::uint32_t v, Family f, std::uint64_t copy, std::uint64_t position) const {
        return ElementId{M + ((std::uint64_t{v} * 4 * copies + label(f, copy)) * positions + position)};
    }
};

/// Copy indices of query (i, j), both 1-based: t = 2((i-1) kappa + (j-1)), s = t + 1.
inline std::uint64_t copy_t(std::uint64_t kappa, std::uint64_t i, std::uint64_t j) { return 2 * ((i - 1) * kappa + (j - 1)); }
inline std::uint64_t copy_s(std::uint64_t kappa, std::uint64_t i, std::uint64_t j) { return copy_t(kappa, i, j) + 1; }

struct EdgeQuery {
    int x = 1;
    std::uint64_t i = 1;
    std::uint64_t j = 1;
    ElementId a;
    ElementId b;
};

struct Progression {
    ElementId first;
    std::uint64_t stride = 1;
    std::uint64_t count = 0;
};

/// Fixed inputs of one estimator configuration, shared by all copies.
struct Context {
    const EdgeStream *stream = nullptr;
    HashOracles hashes;
    DegreeGrid grid;
    SnapshotParams params;
    Layout layout;
    UniversePtr universe;
    std::vector<Rational> thresholds;
    std::uint64_t d_a = 1, d_a1 = 1, d_b = 1, d_b1 = 1;
    std::vector<bool> f_alpha;
    std::vector<bool> f_beta;
    bool hash_sum_ok = true;

    static Context make(const EdgeStream &stream, const HashOracles &hashes, const DegreeGrid &grid, const SnapshotParams &params);

    std::uint64_t step(Family f) const { return f == Family::A || f == Family::B ? d_a1 : d_b1; }
    /// Smallest deleted position of a stack; deleted positions are
    /// first + k step, k >= 0.
    std::uint64_t first_deleted(Family f) const;
};

/// inc(E, v, r): one update that shifts every copy of stack (v, E) by r and
/// fills positions 1..r from scratch. Throws CapacityError when fewer than
/// 2 kappa^2 r scratch elements remain.
PermutationSpec inc_permutation(const Context &ctx, Family f, std::uint32_t v, std::uint64_t r, std::uint64_t &cursor);

/// The 4 kappa^2 pair queries of edge u -> v, in issue order.
std::vector<EdgeQuery> edge_queries(const Context &ctx, std::uint32_t u, std::uint32_t v);

/// Single-element queries of cleanup(u, v), as progressions per stack copy.
std::vector<Progression> cleanup_progressions(const Context &ctx, std::uint32_t u, std::uint32_t v);

enum class Termination : std::uint8_t { StreamEnd, Plus, Minus, Cleanup, Capacity, HashSum };
std::string termination_name(Termination t);

struct Estimate {
    RealMatrix entries;
    Termination terminated_by = Termination::StreamEnd;
    std::optional<std::size_t> edge;
    int x = 0;
    std::uint64_t i = 0;
    std::uint64_t j = 0;
    std::uint64_t scratch_used = 0;
};

Estimate zero_estimate(const Context &ctx, Termination t);

/// Classical stage after query r^x_{ij} of edge `edge` returned `outcome`.
Estimate classical_stage(const Context &ctx, std::size_t edge, const EdgeQuery &q, QueryOutcome outcome);

struct NoObserver {
    template <class S>
    void operator()(std::size_t, const S &, std::uint64_t) const {}
};

template <PairSketch S>
void inc(S &sketch, const Context &ctx, Family f, std::uint32_t v, std::uint64_t r, std::uint64_t &cursor) {
    sketch.update(inc_permutation(ctx, f, v, r, cursor));
}

template <PairSketch S>
std::optional<std::pair<EdgeQuery, QueryOutcome>> query_edge(S &sketch, const Context &ctx, std::uint32_t u, std::uint32_t v) {
    for (const EdgeQuery &q : edge_queries(ctx, u, v)) {
        QueryOutcome r = sketch.query_pair(q.a, q.b);
        if (r != QueryOutcome::Bot) {
            return std::pair{q, r};
        }
    }
    return std::nullopt;
}

template <PairSketch S>
QueryOutcome cleanup(S &sketch, const Context &ctx, std::uint32_t u, std::uint32_t v) {
    for (const Progression &p : cleanup_progressions(ctx, u, v)) {
        if (sketch.query_one_each(p.first, p.stride, p.count) != QueryOutcome::Bot) {
            return QueryOutcome::In;
        }
    }
    return QueryOutcome::Bot;
}

template <PairSketch S, class Observer = NoObserver>
Estimate run_on(S &sketch, const Context &ctx, Observer &&observe = {}) {
    if (!ctx.hash_sum_ok) {
        return zero_estimate(ctx, Termination::HashSum);
    }
    std::uint64_t cursor = 0;
    const auto &edges = ctx.stream->edges;
    try {
        for (std::size_t e = 0; e < edges.size(); ++e) {
            const std::uint32_t u = edges[e].u, v = edges[e].v;
            for (std::uint32_t w : {u, v}) {
                for (Family f : {Family::A, Family::B, Family::C, Family::D}) {
                    inc(sketch, ctx, f, w, 1, cursor);
                }
            }
            if (ctx.f_alpha[e]) {
                inc(sketch, ctx, Family::A, u, ctx.d_a1, cursor);
                inc(sketch, ctx, Family::B, u, ctx.d_a1, cursor);
            }
            if (ctx.f_beta[e]) {
                inc(sketch, ctx, Family::C, u, ctx.d_b1, cursor);
                inc(sketch, ctx, Family::D, u, ctx.d_b1, cursor);
            }
            if (auto hit = query_edge(sketch, ctx, u, v)) {
                Estimate est = classical_stage(ctx, e, hit->first, hit->second);
                est.scratch_used = cursor;
                return est;
            }
            if (cleanup(sketch, ctx, u, v) != QueryOutcome::Bot) {
                Estimate est = zero_estimate(ctx, Termination::Cleanup);
                est.edge = e;
                est.scratch_used = cursor;
                return est;
            }
            observe(e + 1, sketch, cursor);
        }
    } catch (const CapacityError &) {
        Estimate est = zero_estimate(ctx, Termination::Capacity);
        est.scratch_used = cursor;
        return est;
    }
    Estimate est = zero_estimate(ctx, Termination::StreamEnd);
    est.scratch_used = cursor;
    return est;
}

std::vector<ElementRange> initial_members(const Context &ctx);

Estimate run_single(const Context &ctx, std::uint64_t seed);
Estimate run_single(
    const EdgeStream &stream, const HashOracles &hashes, const DegreeGrid &grid, const SnapshotParams &params, std::uint64_t seed);

/// Entrywise mean of params.copies runs.
RealMatrix estimate(
    const EdgeStream &stream,
    const HashOracles &hashes,
    const DegreeGrid &grid,
    const SnapshotParams &params,
    std::uint64_t seed,
    unsigned threads = 1);

/// Exact expectation of run_single, by one replay per live query.
RealMatrix exact_expected_estimate(const Context &ctx);

/// Rule-level model of the four stacks of every vertex, for checking a
/// surviving sketch against the shift-and-fill and deletion rules.
class StackMirror {
   public:
    explicit StackMirror(const Context &ctx);

    void apply_edge(std::size_t e);

    const std::set<std::uint64_t> &stack(std::uint32_t v, Family f) const { return stacks_[v][static_cast<int>(f)]; }
    std::uint64_t cursor() const { return cursor_; }
    std::uint64_t degree(std::uint32_t v) const { return r_[v]; }
    /// Processed edges with head v whose alpha (A, B) or beta (C, D) hash is 1.
    std::uint64_t sampled(std::uint32_t v, Family f) const;

    /// Empty string when the sketch holds exactly the modelled set.
    std::string compare(const SketchHandle &sketch) const;

    /// Whether stack (v, f) has the interval-union form with some offsets
    /// rho_i in [1, r].
    bool interval_form(std::uint32_t v, Family f) const;

   private:
    const Context *ctx_;
    std::vector<std::array<std::set<std::uint64_t>, 4>> stacks_;
    std::vector<std::uint64_t> r_;
    std::vector<std::uint64_t> sampled_alpha_;
    std::vector<std::uint64_t> sampled_beta_;
    std::uint64_t cursor_ = 0;
};

}  // namespace pairsketch::snapshot

#endif
