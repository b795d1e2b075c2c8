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

#ifndef PAIRSKETCH_TRIANGLE_HPP
#define PAIRSKETCH_TRIANGLE_HPP

#include <cstdint>
#include <vector>

#include "pairsketch/graph.hpp"
#include "pairsketch/rational.hpp"
#include "pairsketch/sketch.hpp"

namespace pairsketch::triangle {

/// A triangle with edges ordered by arrival: uv, then uw, then vw.
struct TriangleRecord {
    std::uint32_t u = 0;
    std::uint32_t v = 0;
    std::uint32_t w = 0;
    std::uint64_t degb_uvw = 0;  // edges at v arriving strictly between uv and vw
    std::uint64_t degb_uwv = 0;  // edges at w arriving strictly between uw and vw
    Rational t_less;
};

struct TriangleOracleReport {
    std::uint64_t T = 0;
    Rational T_less;
    Rational T_greater;
    std::vector<TriangleRecord> per_triangle;
};

TriangleOracleReport oracle_t_split(const EdgeStream &stream, std::uint64_t k);

struct TriangleParams {
    std::uint64_t k = 1;
    double T_prime = 1;
    double Delta_E = 1;
    double eps = 0.5;
    double delta = 0.1;
    std::uint64_t copies = 0;  // per group; 0 picks ceil(3 (k m / (T' eps))^2)
    std::uint64_t groups = 0;  // 0 picks the odd number >= 18 ln(1/delta)

    void validate() const;
};

struct EstimatePlan {
    std::uint64_t copies = 0;
    std::uint64_t groups = 0;
};
EstimatePlan plan_estimate(const TriangleParams &params, std::uint64_t m);

std::uint64_t choose_k(double T_prime, std::uint64_t m, double Delta_E);

/// Universe [n]^2 followed by scratch {1, ..., 2m}.
UniversePtr make_universe(std::uint32_t n, std::uint64_t m);
std::vector<ElementRange> initial_members(std::uint32_t n, std::uint64_t m);

constexpr ElementId pair_element(std::uint32_t n, std::uint32_t w, std::uint32_t u) {
    return ElementId{std::uint64_t{w} * n + u};
}
/// Scratch slot i in {1, ..., 2m}.
constexpr ElementId scratch_element(std::uint32_t n, std::uint64_t i) {
    return ElementId{std::uint64_t{n} * n + (i - 1)};
}

struct NoObserver {
    template <class S>
    void operator()(std::size_t, bool, const S &) const {}
};

/// One run. `classical` supplies g through below(k), which selects an edge
/// when it returns 0; the observer sees (edges processed, whether this edge
/// was selected, sketch) after every surviving edge.
template <PairSketch S, class Coins, class Observer = NoObserver>
std::int64_t run_on(S &sketch, const EdgeStream &stream, std::uint64_t k, Coins &classical, Observer &&observe = {}) {
    const std::uint32_t n = stream.n;
    const auto m = static_cast<std::int64_t>(stream.m());
    for (std::size_t l = 0; l < stream.edges.size(); ++l) {
        const Edge &e = stream.edges[l];
        bool selected = classical.below(k) == 0;
        if (selected) {
            for (std::uint32_t w = 0; w < n; ++w) {
                QueryOutcome r = sketch.query_pair(pair_element(n, w, e.u), pair_element(n, w, e.v));
                if (r != QueryOutcome::Bot) {
                    auto value = static_cast<std::int64_t>(k) * m;
                    return r == QueryOutcome::Plus ? value : -value;
                }
            }
        }
        PermutationSpec pi;
        pi.swap(scratch_element(n, 2 * l + 1), pair_element(n, e.u, e.v));
        pi.swap(scratch_element(n, 2 * l + 2), pair_element(n, e.v, e.u));
        sketch.update(pi);
        observe(l + 1, selected, sketch);
    }
    return 0;
}

std::int64_t run_single(const EdgeStream &stream, std::uint64_t k, std::uint64_t seed);

/// Median over groups of the mean of `copies` runs.
double estimate(const EdgeStream &stream, const TriangleParams &params, std::uint64_t seed, unsigned threads = 1);

}  // namespace pairsketch::triangle

#endif
