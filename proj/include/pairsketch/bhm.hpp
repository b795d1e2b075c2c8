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

#ifndef PAIRSKETCH_BHM_HPP
#define PAIRSKETCH_BHM_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "pairsketch/sketch.hpp"

namespace pairsketch::bhm {

struct BhmUpdate {
    enum class Kind : std::uint8_t { VertexBit, EdgeLabel };
    Kind kind = Kind::VertexBit;
    std::uint32_t u = 0;  // the vertex, for VertexBit
    std::uint32_t v = 0;
    std::uint8_t bit = 0;

    static BhmUpdate vertex(std::uint32_t w, std::uint8_t bit) { return {Kind::VertexBit, w, w, bit}; }
    static BhmUpdate edge(std::uint32_t u, std::uint32_t v, std::uint8_t z) { return {Kind::EdgeLabel, u, v, z}; }
};

/// Planted instance: x_u ^ x_v ^ z_uv = b on every matching edge.
struct BhmInstance {
    std::uint32_t n = 0;
    double alpha = 0;
    std::uint8_t b = 0;
    std::vector<std::uint8_t> x;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> matching;
    std::vector<std::uint8_t> z;
    std::vector<BhmUpdate> stream;

    /// Throws ValidationError naming the offending update or edge.
    void validate() const;
};

enum class StreamOrder { Shuffle, EdgesFirst, BitsFirst };

BhmInstance generate_instance(std::uint32_t n, double alpha, std::uint8_t b, std::uint64_t seed, StreamOrder order);

/// Rebuilds x, matching and z from a stream and checks the promise.
BhmInstance instance_from_stream(
    std::uint32_t n, double alpha, std::uint8_t b, std::vector<BhmUpdate> stream);

/// Universe [n] x {0,1} x {0,1}: vertex, bit label, parity tag.
UniversePtr make_universe(std::uint32_t n);
std::vector<ElementId> initial_members(const UniverseSpec &universe, std::uint32_t n);

/// The four pair queries issued for edge uv, in the fixed order
/// (a,b) = (0,0), (1,1), (0,1), (1,0).
struct EdgeQuery {
    std::uint8_t a;
    std::uint8_t b;
    ElementId x;
    ElementId y;
};
std::array<EdgeQuery, 4> edge_queries(std::uint32_t u, std::uint32_t v);

/// Id of (v, a, c); matches make_universe's encoding.
constexpr ElementId element(std::uint32_t v, std::uint8_t a, std::uint8_t c) {
    return ElementId{4 * std::uint64_t{v} + 2 * std::uint64_t{a} + c};
}

/// Called after every update processed while the sketch is alive.
struct NoObserver {
    template <class S>
    void operator()(std::size_t, const S &) const {}
};

/// Quantum stage then classical stage. Returns the answer bit or nullopt (Bot).
template <PairSketch S, class Observer = NoObserver>
std::optional<std::uint8_t> run_on(S &sketch, const BhmInstance &inst, Observer &&observe = {}) {
    std::size_t i = 0;
    std::optional<std::uint8_t> c;
    std::uint32_t eu = 0, ev = 0;
    for (; i < inst.stream.size() && !c; ++i) {
        const BhmUpdate &up = inst.stream[i];
        if (up.kind == BhmUpdate::Kind::VertexBit) {
            if (up.bit) {
                PermutationSpec pi;
                pi.swap_blocks(element(up.u, 0, 0), element(up.u, 1, 0), 2);
                sketch.update(pi);
            }
            observe(i, sketch);
            continue;
        }
        for (const EdgeQuery &q : edge_queries(up.u, up.v)) {
            QueryOutcome r = sketch.query_pair(q.x, q.y);
            if (r == QueryOutcome::Minus) {
                return std::nullopt;
            }
            if (r == QueryOutcome::Plus) {
                c = static_cast<std::uint8_t>(q.a ^ q.b ^ up.bit);
                eu = up.u;
                ev = up.v;
                break;
            }
        }
        if (!c) {
            observe(i, sketch);
        }
    }
    if (!c) {
        return std::nullopt;
    }
    for (; i < inst.stream.size(); ++i) {
        const BhmUpdate &up = inst.stream[i];
        if (up.kind == BhmUpdate::Kind::VertexBit && (up.u == eu || up.u == ev)) {
            *c ^= up.bit;
        }
    }
    return c;
}

std::optional<std::uint8_t> run_single(const BhmInstance &inst, std::uint64_t seed);

std::uint64_t default_copies(double alpha);

/// Majority over independent copies; Bot votes are dropped, ties and
/// all-Bot go to 0.
std::uint8_t run_majority(const BhmInstance &inst, std::uint64_t copies, std::uint64_t seed);

/// Exact law of run_single on the given instance: P[0], P[1], P[Bot].
struct OutputLaw {
    double p0 = 0;
    double p1 = 0;
    double bot = 0;
};
OutputLaw exact_output_law(const BhmInstance &inst, bool quantum_backend);

/// Expected members while no edge has terminated: (v, y_v, c) for every
/// vertex without an arrived matching edge, y_v the bit seen so far or 0.
std::vector<ElementId> lemma_members(const UniverseSpec &universe, const BhmInstance &inst, std::size_t processed);

}  // namespace pairsketch::bhm

#endif
