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

#ifndef PAIRSKETCH_HEAVY_EDGES_HPP
#define PAIRSKETCH_HEAVY_EDGES_HPP

#include <cstdint>
#include <vector>

#include "pairsketch/graph.hpp"
#include "pairsketch/sketch.hpp"

namespace pairsketch::heavy {

enum Role : std::uint8_t { Head = 0, Tail = 1 };

/// Number of edges u -> v whose running degrees, counting the edge itself,
/// satisfy d_u >= d_H and d_v >= d_T.
std::uint64_t oracle_heavy_count(const EdgeStream &stream, std::uint64_t d_H, std::uint64_t d_T);

struct HeavyParams {
    std::uint64_t d_H = 1;
    std::uint64_t d_T = 1;
    double eps = 0.1;
    std::uint64_t copies = 0;  // 0 picks ceil(12 / eps^2)

    void validate(std::uint32_t n) const;
    std::uint64_t resolved_copies() const;
};

/// Universe: stacks (w, role, position) with positions {1, ..., 2n},
/// followed by scratch slots {0, ..., 4m-1}.
UniversePtr make_universe(std::uint32_t n, std::uint64_t m);
std::vector<ElementRange> initial_members(std::uint32_t n, std::uint64_t m);

constexpr ElementId stack_element(std::uint32_t n, std::uint32_t w, Role q, std::uint64_t position) {
    return ElementId{(std::uint64_t{w} * 2 + q) * (2 * std::uint64_t{n}) + (position - 1)};
}
constexpr ElementId scratch_element(std::uint32_t n, std::uint64_t i) {
    return ElementId{std::uint64_t{n} * 4 * n + i};
}

/// Update for the edge with index `index`: each of the four stacks of u and
/// v cycles its positions {1, ..., d_Q} by one, then four scratch slots are
/// swapped into position 1.
PermutationSpec edge_permutation(std::uint32_t n, std::uint64_t index, const Edge &e, std::uint64_t d_H, std::uint64_t d_T);

struct NoObserver {
    template <class S>
    void operator()(std::size_t, const S &) const {}
};

template <PairSketch S, class Observer = NoObserver>
std::int64_t run_on(S &sketch, const EdgeStream &stream, std::uint64_t d_H, std::uint64_t d_T, Observer &&observe = {}) {
    const auto m = static_cast<std::int64_t>(stream.m());
    for (std::size_t i = 0; i < stream.edges.size(); ++i) {
        const Edge &e = stream.edges[i];
        sketch.update(edge_permutation(stream.n, i, e, d_H, d_T));
        QueryOutcome r = sketch.query_pair(stack_element(stream.n, e.u, Head, d_H), stack_element(stream.n, e.v, Tail, d_T));
        if (r != QueryOutcome::Bot) {
            return r == QueryOutcome::Plus ? 2 * m : -2 * m;
        }
        observe(i + 1, sketch);
    }
    return 0;
}

std::int64_t run_single(const EdgeStream &stream, std::uint64_t d_H, std::uint64_t d_T, std::uint64_t seed);

double estimate(const EdgeStream &stream, const HeavyParams &params, std::uint64_t seed, unsigned threads = 1);

/// Set held by a surviving sketch after `processed` edges, computed in closed
/// form from running degrees: stack (w, Q) is {1, ..., min(d_w, d_Q)}, minus
/// d_Q when w's latest edge queried that stack and d_w >= d_Q. Scratch slots
/// of unprocessed edges are present, and so is a processed slot whose swap
/// target was already occupied (the swap then leaves both in the set).
std::vector<ElementId> mirror_members(
    const EdgeStream &stream, std::uint64_t d_H, std::uint64_t d_T, std::size_t processed);

/// Exact expectation of run_single, by enumerating the sketch outcomes.
double exact_expectation(const EdgeStream &stream, std::uint64_t d_H, std::uint64_t d_T, bool quantum_backend);

}  // namespace pairsketch::heavy

#endif
