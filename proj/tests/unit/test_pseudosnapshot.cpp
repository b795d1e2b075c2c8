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


#include <cmath>
#include <set>

#include "doctest.h"
#include "pairsketch/errors.hpp"
#include "pairsketch/graph_io.hpp"
#include "pairsketch/pseudosnapshot.hpp"
#include "test_util.hpp"

using namespace pairsketch;
using namespace pairsketch::snapshot;
using pairsketch::testing::within_4sigma;

namespace {

struct Fixture {
    EdgeStream stream;
    HashOracles hashes;
    DegreeGrid grid;
    SnapshotParams params;
};

// Two bias classes on a directed G(12, 30); see the acceptance fixture.
Fixture fixture(std::uint64_t graph_seed = 1, std::size_t cls = 0) {
    Fixture f;
    f.stream = gen::gnm(12, 30, graph_seed, true);
    f.params.kappa = 2;
    f.params.eps = 0.5;
    f.params.thresholds = {-1.0, 0.0};
    f.params.alpha = cls;
    f.params.beta = cls;
    f.hashes = HashOracles{7, 2, 0.5};
    f.grid = DegreeGrid::build(12, 0.5);
    return f;
}

EdgeStream stream_of(std::uint32_t n, std::initializer_list<Edge> edges) {
    EdgeStream s;
    s.n = n;
    s.directed = true;
    s.edges = edges;
    return s;
}

}  // namespace

TEST_SUITE("pseudosnapshot") {
    TEST_CASE("degree grid") {
        auto grid = DegreeGrid::build(12, 0.5);
        std::vector<std::uint64_t> want{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12};
        CHECK(grid.levels == want);
        CHECK(grid.index_of(1) == 0);
        CHECK(grid.index_of(10) == 9);
        CHECK(grid.index_of(11) == 9);
        CHECK(grid.index_of(12) == 10);
        CHECK_THROWS_AS(grid.index_of(0), InvalidParamsError);

        auto coarse = DegreeGrid::build(100, 1.0);
        CHECK(coarse.levels == std::vector<std::uint64_t>{1, 2, 4, 8, 16, 32, 100});
        CHECK(DegreeGrid::build(1, 0.5).levels == std::vector<std::uint64_t>{1});
        CHECK_THROWS_AS(DegreeGrid::build(0, 0.5), InvalidParamsError);
        CHECK_THROWS_AS(DegreeGrid::build(5, 0.0), InvalidParamsError);
    }

    TEST_CASE("hash oracles are pure with the stated rates") {
        auto grid = DegreeGrid::build(64, 1.0);
        HashOracles h{99, 3, 1.0};
        for (std::size_t level = 0; level < grid.levels.size(); ++level) {
            double p = std::min(1.0, 3.0 / (2.0 * static_cast<double>(grid.levels[level])));
            std::uint64_t hits = 0, trials = 20000;
            for (std::uint64_t e = 0; e < trials; ++e) {
                bool a = h.f(grid, level, e);
                CHECK(a == h.f(grid, level, e));
                hits += a;
            }
            CHECK(within_4sigma(hits, trials, p));
        }
        HashOracles other{100, 3, 1.0};
        int differ = 0;
        double sum = 0;
        for (std::uint32_t v = 0; v < 4000; ++v) {
            Rational g = h.g(v);
            CHECK(g >= Rational(-1));
            CHECK(g < Rational(1));
            CHECK(h.g_raw(v) == h.g_raw(v));
            differ += h.g_raw(v) != other.g_raw(v);
            sum += to_double(g);
        }
        CHECK(differ > 3990);
        // Uniform on [-1, 1): standard error of the mean is 1 / sqrt(3 * 4000).
        CHECK(std::abs(sum / 4000) < 4 / std::sqrt(12000.0));
    }

    TEST_CASE("pseudobias of a fresh tail is -1 + g") {
        auto s = stream_of(3, {{0, 1}, {0, 2}});
        HashOracles h{5, 2, 0.5};
        auto grid = DegreeGrid::build(3, 0.5);
        auto st = pseudobias_exact(s, h, grid, 1, 2);
        CHECK(st.d_before == 1);
        CHECK(st.d_after == 0);
        CHECK(st.sampled == 0);
        CHECK(st.pseudobias == Rational(-1) + h.g(2));
        CHECK(st.bias == Rational(-1));
        CHECK_THROWS_AS(pseudobias_exact(s, h, grid, 1, 1), InvalidQueryError);
        CHECK_THROWS_AS(pseudobias_exact(s, h, grid, 2, 0), InvalidQueryError);
    }

    TEST_CASE("pseudobias is capped at 1") {
        // The first out-edge of a source at degree 1 is sampled with rate 1 and
        // scaled by 2 d / kappa = 1, so the uncapped value is 1 + g.
        auto s = stream_of(4, {{0, 1}, {0, 2}, {0, 3}});
        auto grid = DegreeGrid::build(4, 0.5);
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            HashOracles h{seed, 2, 0.5};
            auto st = pseudobias_exact(s, h, grid, 0, 0);
            CHECK(st.sampled == 1);
            CHECK(st.dout_sampled == Rational(1));
            CHECK(st.pseudobias == std::min(Rational(1), Rational(1) + h.g(0)));
            CHECK(st.pseudobias <= Rational(1));
        }
    }

    TEST_CASE("sampled out-degree is unbiased over hash draws") {
        // kappa = 2 gives rate 1/d at every level, and scale d.
        auto s = gen::gnm(12, 30, 3, true);
        auto grid = DegreeGrid::build(12, 0.5);
        std::vector<std::pair<std::size_t, std::uint32_t>> probes;
        for (std::size_t e = 0; e < s.m(); e += 7) {
            probes.emplace_back(e, s.edges[e].u);
        }
        for (auto [e, w] : probes) {
            const std::uint64_t draws = 4000;
            double sum = 0, sq = 0, want = 0;
            for (std::uint64_t seed = 0; seed < draws; ++seed) {
                auto st = pseudobias_exact(s, HashOracles{seed, 2, 0.5}, grid, e, w);
                double x = to_double(st.dout_sampled);
                sum += x;
                sq += x * x;
                want = static_cast<double>(st.dout_before);
            }
            double mean = sum / draws;
            double se = std::sqrt(std::max(sq / draws - mean * mean, 0.0) / draws);
            INFO("edge " << e << " vertex " << w);
            CHECK(std::abs(mean - want) <= 4 * se + 1e-12);
        }
    }

    TEST_CASE("bias classes") {
        auto t = exact_thresholds({-1.0, 0.0, 0.5});
        CHECK(bias_class(Rational(-1), t) == 0u);
        CHECK(bias_class(Rational(-1, 2), t) == 0u);
        CHECK(bias_class(Rational(0), t) == 1u);
        CHECK(bias_class(Rational(1, 2), t) == 2u);
        CHECK(bias_class(Rational(1), t) == 2u);
        CHECK_FALSE(bias_class(Rational(-3, 2), t).has_value());
        CHECK_FALSE(bias_class(Rational(3, 2), t).has_value());
    }

    TEST_CASE("single edge and empty stream") {
        auto s = stream_of(2, {{0, 1}});
        auto grid = DegreeGrid::build(2, 0.5);
        std::uint64_t seed = 0;
        while (HashOracles{seed, 2, 0.5}.g(1) < 0) {
            ++seed;
        }
        HashOracles h{seed, 2, 0.5};
        CHECK(pseudosnapshot_exact(s, h, grid, {-1.0}) == CountMatrix{{1}});

        EdgeStream empty;
        empty.n = 5;
        empty.directed = true;
        auto g5 = DegreeGrid::build(5, 0.5);
        CHECK(pseudosnapshot_exact(empty, h, g5, {-1.0, 0.0}) == CountMatrix{{0, 0}, {0, 0}});
    }

    TEST_CASE("single-pass pseudosnapshot agrees with per-edge scans") {
        for (std::uint64_t seed = 1; seed <= 4; ++seed) {
            auto s = gen::gnm(10, 25, seed, true);
            auto grid = DegreeGrid::build(10, 0.5);
            HashOracles h{seed * 13, 2, 0.5};
            std::vector<double> th{-1.0, -0.25, 0.5};
            auto t = exact_thresholds(th);
            CountMatrix want(3, std::vector<std::uint64_t>(3, 0));
            CountMatrix want_restricted = want;
            for (std::size_t e = 0; e < s.m(); ++e) {
                auto su = pseudobias_exact(s, h, grid, e, s.edges[e].u);
                auto sv = pseudobias_exact(s, h, grid, e, s.edges[e].v);
                auto cu = bias_class(su.pseudobias, t), cv = bias_class(sv.pseudobias, t);
                if (cu && cv) {
                    ++want[*cu][*cv];
                    if (su.i_tilde == 1 && sv.i_tilde == 0) {
                        ++want_restricted[*cu][*cv];
                    }
                }
            }
            CHECK(pseudosnapshot_exact(s, h, grid, th) == want);
            CHECK(pseudosnapshot_exact(s, h, grid, th, ClassPair{1, 0}) == want_restricted);
        }
    }

    TEST_CASE("parameter validation") {
        auto f = fixture();
        auto bad = f.params;
        bad.thresholds = {0.0, -0.5};
        CHECK_THROWS_AS(bad.validate(f.grid), InvalidParamsError);
        bad = f.params;
        bad.alpha = f.grid.levels.size() - 1;
        CHECK_THROWS_AS(bad.validate(f.grid), InvalidParamsError);
        bad = f.params;
        bad.kappa = 0;
        CHECK_THROWS_AS(bad.validate(f.grid), InvalidParamsError);
        HashOracles wrong{7, 3, 0.5};
        CHECK_THROWS_AS(Context::make(f.stream, wrong, f.grid, f.params), InvalidParamsError);
    }

    TEST_CASE("query_edge pairs are disjoint") {
        for (std::uint64_t kappa = 1; kappa <= 4; ++kappa) {
            auto f = fixture();
            f.params.kappa = kappa;
            f.hashes.kappa = kappa;
            f.params.alpha = 1;
            f.params.beta = 2;
            Context ctx = Context::make(f.stream, f.hashes, f.grid, f.params);
            auto qs = edge_queries(ctx, 3, 5);
            REQUIRE(qs.size() == 4 * kappa * kappa);
            std::set<std::uint64_t> seen;
            for (const auto &q : qs) {
                CHECK(seen.insert(q.a.index).second);
                CHECK(seen.insert(q.b.index).second);
                CHECK(ctx.universe->decode(q.a).coords[0] == 3);
                CHECK(ctx.universe->decode(q.b).coords[0] == 5);
            }
        }
    }

    TEST_CASE("copy indices") {
        CHECK(copy_t(3, 1, 1) == 0);
        CHECK(copy_s(3, 1, 1) == 1);
        CHECK(copy_t(3, 2, 3) == 10);
        CHECK(copy_s(3, 3, 3) == 17);
    }

    TEST_CASE("inc shifts every copy and fills the bottom from scratch") {
        auto f = fixture();
        Context ctx = Context::make(f.stream, f.hashes, f.grid, f.params);
        auto init = initial_members(ctx);
        auto sketch = SketchHandle::planned(ctx.universe, init, std::nullopt);
        std::uint64_t cursor = 0;
        inc(sketch, ctx, Family::B, 4, 1, cursor);
        CHECK(cursor == ctx.layout.copies);
        inc(sketch, ctx, Family::B, 4, 3, cursor);
        CHECK(cursor == 4 * ctx.layout.copies);
        CHECK(sketch.debug_size() == ctx.layout.M);
        for (std::uint64_t c = 0; c < ctx.layout.copies; ++c) {
            for (std::uint64_t p = 1; p <= 4; ++p) {
                CHECK(sketch.debug_contains(ctx.layout.stack(4, Family::B, c, p)));
            }
            CHECK_FALSE(sketch.debug_contains(ctx.layout.stack(4, Family::B, c, 5)));
            CHECK_FALSE(sketch.debug_contains(ctx.layout.stack(4, Family::A, c, 1)));
        }
        CHECK_FALSE(sketch.debug_contains(ctx.layout.scratch(0)));
        CHECK(sketch.debug_contains(ctx.layout.scratch(cursor)));
        // The whole remaining scratch cannot fund one more copy set of size M.
        std::uint64_t saved = cursor;
        CHECK_THROWS_AS(inc_permutation(ctx, Family::A, 0, ctx.layout.M, cursor), CapacityError);
        CHECK(cursor == saved);
    }

    TEST_CASE("queries on empty stacks never fire") {
        auto f = fixture();
        Context ctx = Context::make(f.stream, f.hashes, f.grid, f.params);
        auto init = initial_members(ctx);
        auto sketch = SketchHandle::planned(ctx.universe, init, std::nullopt);
        CHECK_FALSE(query_edge(sketch, ctx, 0, 1).has_value());
        CHECK(cleanup(sketch, ctx, 0, 1) == QueryOutcome::Bot);
        CHECK(sketch.live_log().empty());
        CHECK(sketch.debug_size() == ctx.layout.M);
    }

    TEST_CASE("cleanup below the query thresholds deletes nothing") {
        auto f = fixture(1, 2);
        Context ctx = Context::make(f.stream, f.hashes, f.grid, f.params);
        REQUIRE(ctx.d_a == 3);
        auto init = initial_members(ctx);
        auto sketch = SketchHandle::planned(ctx.universe, init, std::nullopt);
        std::uint64_t cursor = 0;
        for (Family fam : {Family::A, Family::B, Family::C, Family::D}) {
            inc(sketch, ctx, fam, 0, 2, cursor);
            inc(sketch, ctx, fam, 1, 2, cursor);
        }
        std::uint64_t before = sketch.debug_size();
        CHECK(cleanup(sketch, ctx, 0, 1) == QueryOutcome::Bot);
        CHECK(sketch.debug_size() == before);
        CHECK(sketch.live_log().empty());
    }

    TEST_CASE("classical stage sign and magnitude") {
        auto f = fixture();
        Context ctx = Context::make(f.stream, f.hashes, f.grid, f.params);
        double half = static_cast<double>(ctx.layout.M) / 2;
        for (int x = 1; x <= 4; ++x) {
            EdgeQuery q{x, 1, 1, {}, {}};
            for (auto o : {QueryOutcome::Plus, QueryOutcome::Minus}) {
                Estimate est = classical_stage(ctx, 0, q, o);
                double total = 0;
                int nonzero = 0;
                for (const auto &row : est.entries) {
                    for (double v : row) {
                        total += v;
                        nonzero += v != 0;
                    }
                }
                CHECK(nonzero <= 1);
                if (nonzero == 1) {
                    bool positive = (o == QueryOutcome::Plus) == (x == 1 || x == 4);
                    CHECK(total == (positive ? half : -half));
                }
                CHECK(est.terminated_by == (o == QueryOutcome::Plus ? Termination::Plus : Termination::Minus));
            }
        }
    }

    TEST_CASE("surviving sketch matches the stack mirror") {
        for (std::size_t cls : {std::size_t{0}, std::size_t{2}}) {
            auto f = fixture(cls == 0 ? 1 : 7, cls);
            Context ctx = Context::make(f.stream, f.hashes, f.grid, f.params);
            auto init = initial_members(ctx);
            for (std::uint64_t trial = 0; trial < 120; ++trial) {
                auto sketch = SketchHandle::create(ctx.universe, std::span<const ElementRange>(init), derive_seed(17, trial));
                StackMirror mirror(ctx);
                std::string failure;
                run_on(sketch, ctx, [&](std::size_t processed, const SketchHandle &s, std::uint64_t cursor) {
                    mirror.apply_edge(processed - 1);
                    if (!failure.empty()) {
                        return;
                    }
                    if (cursor != mirror.cursor()) {
                        failure = "cursor";
                    } else {
                        failure = mirror.compare(s);
                    }
                    for (std::uint32_t v = 0; v < ctx.layout.n && failure.empty(); ++v) {
                        for (Family fam : {Family::A, Family::B, Family::C, Family::D}) {
                            if (!mirror.interval_form(v, fam)) {
                                failure = "interval form of vertex " + std::to_string(v);
                            }
                        }
                    }
                });
                INFO("trial " << trial << ": " << failure);
                CHECK(failure.empty());
            }
        }
    }

    TEST_CASE("exact expectation equals the qualifying pseudosnapshot") {
        for (auto [graph_seed, cls] : {std::pair<std::uint64_t, std::size_t>{1, 0}, {7, 2}}) {
            auto f = fixture(graph_seed, cls);
            Context ctx = Context::make(f.stream, f.hashes, f.grid, f.params);
            auto want = expected_estimate(f.stream, f.hashes, f.grid, f.params);
            CHECK(want.bias_bound == want.in_class - want.qualifying);
            auto got = exact_expected_estimate(ctx);
            for (std::size_t a = 0; a < 2; ++a) {
                for (std::size_t b = 0; b < 2; ++b) {
                    CHECK(got[a][b] == doctest::Approx(static_cast<double>(want.expected[a][b])).epsilon(1e-9));
                    CHECK(want.expected[a][b] <= want.restricted[a][b]);
                    double gap = static_cast<double>(want.restricted[a][b]) - got[a][b];
                    CHECK(gap <= static_cast<double>(want.bias_bound) + 1e-9);
                }
            }
        }
    }

    TEST_CASE("terminations") {
        auto f = fixture();
        EdgeStream empty;
        empty.n = 12;
        empty.directed = true;
        Context none = Context::make(empty, f.hashes, f.grid, f.params);
        CHECK(run_single(none, 3).terminated_by == Termination::StreamEnd);
        CHECK(exact_expected_estimate(none) == RealMatrix{{0, 0}, {0, 0}});

        // Sum f <= 2m <= 2 kappa m always holds; force the flag to check the guard.
        Context ctx = Context::make(f.stream, f.hashes, f.grid, f.params);
        CHECK(ctx.hash_sum_ok);
        ctx.hash_sum_ok = false;
        Estimate flagged = run_single(ctx, 3);
        CHECK(flagged.terminated_by == Termination::HashSum);
        CHECK(flagged.entries == RealMatrix{{0, 0}, {0, 0}});

        auto small = f.params;
        small.capacity_constant = 1;
        Context tight = Context::make(f.stream, f.hashes, f.grid, small);
        bool saw_capacity = false;
        for (std::uint64_t seed = 0; seed < 50 && !saw_capacity; ++seed) {
            Estimate est = run_single(tight, seed);
            if (est.terminated_by == Termination::Capacity) {
                saw_capacity = true;
                CHECK(est.entries == RealMatrix{{0, 0}, {0, 0}});
                CHECK(est.scratch_used <= tight.layout.M);
            }
        }
        CHECK(saw_capacity);
        CHECK(termination_name(Termination::Capacity) == "capacity");
    }

    TEST_CASE("Monte Carlo mean is near the exact expectation") {
        auto f = fixture(7, 2);
        Context ctx = Context::make(f.stream, f.hashes, f.grid, f.params);
        auto want = exact_expected_estimate(ctx);
        const std::uint64_t trials = 4000;
        RealMatrix sum(2, std::vector<double>(2, 0)), sq = sum;
        for (std::uint64_t t = 0; t < trials; ++t) {
            Estimate est = run_single(ctx, derive_seed(23, t));
            for (std::size_t a = 0; a < 2; ++a) {
                for (std::size_t b = 0; b < 2; ++b) {
                    sum[a][b] += est.entries[a][b];
                    sq[a][b] += est.entries[a][b] * est.entries[a][b];
                }
            }
        }
        for (std::size_t a = 0; a < 2; ++a) {
            for (std::size_t b = 0; b < 2; ++b) {
                double mean = sum[a][b] / trials;
                double var = sq[a][b] / trials - mean * mean;
                double se = std::sqrt(std::max(var, 0.0) / trials);
                CHECK(std::abs(mean - want[a][b]) <= 4 * se + 1e-9);
            }
        }
    }
}
