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

#include "pairsketch/bhm.hpp"

#include <cmath>
#include <set>
#include <string>

#include "pairsketch/errors.hpp"
#include "pairsketch/exact.hpp"

namespace pairsketch::bhm {

namespace {

std::uint32_t edge_count(std::uint32_t n, double alpha) {
    double target = alpha * n;
    double rounded = std::round(target);
    if (!(alpha >= 0) || std::abs(target - rounded) > 1e-9) {
        throw InvalidParamsError("alpha * n must be a nonnegative integer");
    }
    return static_cast<std::uint32_t>(rounded);
}

std::string edge_name(std::uint32_t u, std::uint32_t v) {
    return "(" + std::to_string(u) + "," + std::to_string(v) + ")";
}

}  // namespace

void BhmInstance::validate() const {
    if (x.size() != n) {
        throw ValidationError("vertex bit vector has wrong length");
    }
    if (matching.size() != z.size()) {
        throw ValidationError("matching and label vectors differ in length");
    }
    if (2 * matching.size() > n) {
        throw ValidationError("matching larger than n/2 edges");
    }
    std::vector<bool> covered(n, false);
    for (std::size_t i = 0; i < matching.size(); ++i) {
        auto [u, v] = matching[i];
        if (u >= n || v >= n || u == v) {
            throw ValidationError("invalid matching edge " + edge_name(u, v));
        }
        if (covered[u] || covered[v]) {
            throw ValidationError("matching edge " + edge_name(u, v) + " shares a vertex with another edge");
        }
        covered[u] = covered[v] = true;
        if ((x[u] ^ x[v] ^ z[i]) != b) {
            throw ValidationError("promise violated on edge " + edge_name(u, v));
        }
    }
    std::vector<bool> seen_bit(n, false);
    std::set<std::pair<std::uint32_t, std::uint32_t>> seen_edges;
    std::set<std::pair<std::uint32_t, std::uint32_t>> wanted;
    for (auto [u, v] : matching) {
        wanted.insert({std::min(u, v), std::max(u, v)});
    }
    for (std::size_t i = 0; i < stream.size(); ++i) {
        const BhmUpdate &up = stream[i];
        std::string where = "update " + std::to_string(i) + ": ";
        if (up.bit > 1) {
            throw ValidationError(where + "bit must be 0 or 1");
        }
        if (up.kind == BhmUpdate::Kind::VertexBit) {
            if (up.u >= n) {
                throw ValidationError(where + "vertex out of range");
            }
            if (seen_bit[up.u]) {
                throw ValidationError(where + "duplicate bit for vertex " + std::to_string(up.u));
            }
            if (up.bit != x[up.u]) {
                throw ValidationError(where + "bit disagrees with x");
            }
            seen_bit[up.u] = true;
        } else {
            auto key = std::make_pair(std::min(up.u, up.v), std::max(up.u, up.v));
            if (!wanted.count(key)) {
                throw ValidationError(where + "edge " + edge_name(up.u, up.v) + " is not in the matching");
            }
            if (!seen_edges.insert(key).second) {
                throw ValidationError(where + "duplicate edge " + edge_name(up.u, up.v));
            }
            if ((x[up.u] ^ x[up.v] ^ up.bit) != b) {
                throw ValidationError(where + "promise violated on edge " + edge_name(up.u, up.v));
            }
        }
    }
    if (seen_edges.size() != matching.size()) {
        throw ValidationError("stream is missing matching edges");
    }
    for (std::uint32_t v = 0; v < n; ++v) {
        if (!seen_bit[v]) {
            throw ValidationError("stream is missing the bit of vertex " + std::to_string(v));
        }
    }
}

BhmInstance generate_instance(std::uint32_t n, double alpha, std::uint8_t b, std::uint64_t seed, StreamOrder order) {
    std::uint32_t edges = edge_count(n, alpha);
    if (2 * std::uint64_t{edges} > n) {
        throw InvalidParamsError("need 2 * alpha * n <= n");
    }
    if (b > 1) {
        throw InvalidParamsError("b must be 0 or 1");
    }
    CounterRng rng(seed);
    BhmInstance inst;
    inst.n = n;
    inst.alpha = alpha;
    inst.b = b;
    inst.x.resize(n);
    for (auto &bit : inst.x) {
        bit = static_cast<std::uint8_t>(rng.below(2));
    }
    std::vector<std::uint32_t> perm(n);
    for (std::uint32_t v = 0; v < n; ++v) {
        perm[v] = v;
    }
    for (std::uint32_t k = n; k > 1; --k) {
        std::swap(perm[k - 1], perm[rng.below(k)]);
    }
    for (std::uint32_t i = 0; i < edges; ++i) {
        std::uint32_t u = perm[2 * i], v = perm[2 * i + 1];
        inst.matching.emplace_back(u, v);
        inst.z.push_back(static_cast<std::uint8_t>(inst.x[u] ^ inst.x[v] ^ b));
    }
    std::vector<BhmUpdate> bits, labels;
    for (std::uint32_t v = 0; v < n; ++v) {
        bits.push_back(BhmUpdate::vertex(v, inst.x[v]));
    }
    for (std::uint32_t i = 0; i < edges; ++i) {
        labels.push_back(BhmUpdate::edge(inst.matching[i].first, inst.matching[i].second, inst.z[i]));
    }
    if (order == StreamOrder::EdgesFirst) {
        inst.stream = labels;
        inst.stream.insert(inst.stream.end(), bits.begin(), bits.end());
    } else {
        inst.stream = bits;
        inst.stream.insert(inst.stream.end(), labels.begin(), labels.end());
    }
    if (order == StreamOrder::Shuffle) {
        for (std::size_t k = inst.stream.size(); k > 1; --k) {
            std::swap(inst.stream[k - 1], inst.stream[rng.below(k)]);
        }
    }
    return inst;
}

BhmInstance instance_from_stream(std::uint32_t n, double alpha, std::uint8_t b, std::vector<BhmUpdate> stream) {
    BhmInstance inst;
    inst.n = n;
    inst.alpha = alpha;
    inst.b = b;
    inst.x.assign(n, 0);
    for (std::size_t i = 0; i < stream.size(); ++i) {
        const auto &up = stream[i];
        if (up.u >= n || up.v >= n) {
            throw ValidationError("update " + std::to_string(i) + ": vertex out of range");
        }
        if (up.kind == BhmUpdate::Kind::VertexBit) {
            inst.x[up.u] = up.bit;
        } else {
            inst.matching.emplace_back(up.u, up.v);
            inst.z.push_back(up.bit);
        }
    }
    inst.stream = std::move(stream);
    std::uint32_t edges;
    try {
        edges = edge_count(n, alpha);
    } catch (const InvalidParamsError &e) {
        throw ValidationError(e.what());
    }
    if (edges != inst.matching.size()) {
        throw ValidationError(
            "header promises " + std::to_string(edges) + " edges but the stream has " +
            std::to_string(inst.matching.size()));
    }
    inst.validate();
    return inst;
}

UniversePtr make_universe(std::uint32_t n) {
    if (n == 0) {
        throw InvalidParamsError("n must be positive");
    }
    return std::make_shared<const UniverseSpec>(UniverseSpec(
        "bhm",
        {Component{
            "Q", {Factor::range("vertex", 0, n), Factor::range("bit", 0, 2), Factor::range("parity", 0, 2)}}}));
}

std::vector<ElementId> initial_members(const UniverseSpec &universe, std::uint32_t n) {
    std::vector<ElementId> out;
    for (std::uint32_t v = 0; v < n; ++v) {
        for (std::int64_t c = 0; c < 2; ++c) {
            out.push_back(universe.encode(0, {v, 0, c}));
        }
    }
    return out;
}

std::array<EdgeQuery, 4> edge_queries(std::uint32_t u, std::uint32_t v) {
    static constexpr std::uint8_t kOrder[4][2] = {{0, 0}, {1, 1}, {0, 1}, {1, 0}};
    std::array<EdgeQuery, 4> out;
    for (int i = 0; i < 4; ++i) {
        std::uint8_t a = kOrder[i][0], b = kOrder[i][1];
        std::uint8_t c = a ^ b;
        out[i] = EdgeQuery{a, b, element(u, a, c), element(v, b, c)};
    }
    return out;
}

std::optional<std::uint8_t> run_single(const BhmInstance &inst, std::uint64_t seed) {
    auto universe = make_universe(inst.n);
    auto initial = initial_members(*universe, inst.n);
    auto sketch = SketchHandle::create(universe, initial, seed);
    return run_on(sketch, inst);
}

std::uint64_t default_copies(double alpha) {
    if (!(alpha > 0)) {
        throw InvalidParamsError("alpha must be positive");
    }
    return static_cast<std::uint64_t>(std::ceil(48 / alpha - 1e-9));
}

std::uint8_t run_majority(const BhmInstance &inst, std::uint64_t copies, std::uint64_t seed) {
    if (copies == 0) {
        throw InvalidParamsError("copies must be positive");
    }
    auto universe = make_universe(inst.n);
    auto initial = initial_members(*universe, inst.n);
    std::uint64_t votes[2] = {0, 0};
    for (std::uint64_t c = 0; c < copies; ++c) {
        auto sketch = SketchHandle::create(universe, initial, derive_seed(seed, c));
        if (auto r = run_on(sketch, inst)) {
            ++votes[*r];
        }
    }
    return votes[1] > votes[0] ? 1 : 0;
}

OutputLaw exact_output_law(const BhmInstance &inst, bool quantum_backend) {
    auto universe = make_universe(inst.n);
    auto initial = initial_members(*universe, inst.n);
    auto law = qsim::exact_output_distribution<int>(
        *universe,
        initial,
        [&](ScriptedSketch &s) {
            auto r = run_on(s, inst);
            return r ? static_cast<int>(*r) : -1;
        },
        quantum_backend ? qsim::Backend::Quantum : qsim::Backend::Stochastic,
        EnumerationLimits{std::uint64_t{1} << 16, 4 * inst.stream.size() + 4});
    return OutputLaw{law[0], law[1], law[-1]};
}

std::vector<ElementId> lemma_members(const UniverseSpec &universe, const BhmInstance &inst, std::size_t processed) {
    std::vector<std::uint8_t> y(inst.n, 0);
    std::vector<bool> gone(inst.n, false);
    for (std::size_t i = 0; i < processed && i < inst.stream.size(); ++i) {
        const auto &up = inst.stream[i];
        if (up.kind == BhmUpdate::Kind::VertexBit) {
            y[up.u] = up.bit;
        } else {
            gone[up.u] = gone[up.v] = true;
        }
    }
    std::vector<ElementId> out;
    for (std::uint32_t v = 0; v < inst.n; ++v) {
        if (!gone[v]) {
            for (std::int64_t c = 0; c < 2; ++c) {
                out.push_back(universe.encode(0, {v, y[v], c}));
            }
        }
    }
    return out;
}

}  // namespace pairsketch::bhm
