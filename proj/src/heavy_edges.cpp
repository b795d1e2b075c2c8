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

#include "pairsketch/heavy_edges.hpp"

#include <cmath>

#include "pairsketch/errors.hpp"
#include "pairsketch/exact.hpp"
#include "pairsketch/parallel.hpp"

namespace pairsketch::heavy {

std::uint64_t oracle_heavy_count(const EdgeStream &stream, std::uint64_t d_H, std::uint64_t d_T) {
    stream.validate();
    std::vector<std::uint64_t> deg(stream.n, 0);
    std::uint64_t count = 0;
    for (const Edge &e : stream.edges) {
        ++deg[e.u];
        ++deg[e.v];
        count += deg[e.u] >= d_H && deg[e.v] >= d_T;
    }
    return count;
}

void HeavyParams::validate(std::uint32_t n) const {
    if (d_H < 1 || d_T < 1 || d_H > 2 * std::uint64_t{n} || d_T > 2 * std::uint64_t{n}) {
        throw InvalidParamsError("thresholds must lie in [1, 2n]");
    }
    if (!(eps > 0 && eps <= 1)) {
        throw InvalidParamsError("eps must lie in (0, 1]");
    }
}

std::uint64_t HeavyParams::resolved_copies() const {
    if (copies) {
        return copies;
    }
    return static_cast<std::uint64_t>(std::ceil(12 / (eps * eps) - 1e-9));
}

UniversePtr make_universe(std::uint32_t n, std::uint64_t m) {
    if (n == 0) {
        throw InvalidParamsError("n must be positive");
    }
    std::vector<Component> parts{Component{
        "W", {Factor::range("w", 0, n), Factor::alphabet("role", {"H", "T"}), Factor::range("pos", 1, 2 * std::uint64_t{n})}}};
    if (m > 0) {
        parts.push_back(Component{"S", {Factor::range("i", 0, 4 * m)}});
    }
    return std::make_shared<const UniverseSpec>(UniverseSpec("heavy", std::move(parts)));
}

std::vector<ElementRange> initial_members(std::uint32_t n, std::uint64_t m) {
    return {ElementRange{scratch_element(n, 0), 4 * m}};
}

PermutationSpec edge_permutation(std::uint32_t n, std::uint64_t index, const Edge &e, std::uint64_t d_H, std::uint64_t d_T) {
    PermutationSpec pi;
    const std::uint64_t thresholds[2] = {d_H, d_T};
    for (std::uint32_t w : {e.u, e.v}) {
        for (Role q : {Head, Tail}) {
            pi.rotate({0, 2, {static_cast<std::int64_t>(w), static_cast<std::int64_t>(q), 1}, 1, thresholds[q], 1});
        }
    }
    std::uint64_t l = 4 * index;
    pi.swap(scratch_element(n, l), stack_element(n, e.u, Head, 1));
    pi.swap(scratch_element(n, l + 1), stack_element(n, e.u, Tail, 1));
    pi.swap(scratch_element(n, l + 2), stack_element(n, e.v, Head, 1));
    pi.swap(scratch_element(n, l + 3), stack_element(n, e.v, Tail, 1));
    return pi;
}

std::int64_t run_single(const EdgeStream &stream, std::uint64_t d_H, std::uint64_t d_T, std::uint64_t seed) {
    if (stream.m() == 0) {
        return 0;
    }
    auto universe = make_universe(stream.n, stream.m());
    auto initial = initial_members(stream.n, stream.m());
    auto sketch = SketchHandle::create(universe, std::span<const ElementRange>(initial), seed);
    return run_on(sketch, stream, d_H, d_T);
}

double estimate(const EdgeStream &stream, const HeavyParams &params, std::uint64_t seed, unsigned threads) {
    params.validate(stream.n);
    if (stream.m() == 0) {
        return 0;
    }
    std::uint64_t copies = params.resolved_copies();
    auto outputs = run_trials<std::int64_t>(copies, threads, [&](std::uint64_t i) {
        return run_single(stream, params.d_H, params.d_T, derive_seed(seed, i));
    });
    double sum = 0;
    for (auto x : outputs) {
        sum += static_cast<double>(x);
    }
    return sum / static_cast<double>(copies);
}

std::vector<ElementId> mirror_members(
    const EdgeStream &stream, std::uint64_t d_H, std::uint64_t d_T, std::size_t processed) {
    const std::uint32_t n = stream.n;
    const std::uint64_t thresholds[2] = {d_H, d_T};
    std::vector<std::uint64_t> deg(n, 0);
    std::vector<int> last_role(n, -1);
    std::vector<bool> scratch(4 * stream.m(), true);
    for (std::size_t i = 0; i < processed; ++i) {
        const Edge &e = stream.edges[i];
        const std::uint32_t ends[2] = {e.u, e.v};
        for (int k = 0; k < 4; ++k) {
            std::uint32_t w = ends[k / 2];
            int q = k % 2;
            std::uint64_t d = thresholds[q];
            // Position d_Q occupied before this edge means position 1 is
            // occupied after the cycle, so the scratch slot stays.
            bool full = deg[w] >= d && last_role[w] != q;
            scratch[4 * i + k] = full;
        }
        ++deg[e.u];
        ++deg[e.v];
        last_role[e.u] = Head;
        last_role[e.v] = Tail;
    }
    std::vector<ElementId> out;
    for (std::uint32_t w = 0; w < n; ++w) {
        for (Role q : {Head, Tail}) {
            std::uint64_t top = std::min(deg[w], thresholds[q]);
            bool hole = deg[w] >= thresholds[q] && last_role[w] == q;
            for (std::uint64_t p = 1; p <= top; ++p) {
                if (!(hole && p == thresholds[q])) {
                    out.push_back(stack_element(n, w, q, p));
                }
            }
        }
    }
    for (std::size_t i = 0; i < scratch.size(); ++i) {
        if (scratch[i]) {
            out.push_back(scratch_element(n, i));
        }
    }
    return out;
}

double exact_expectation(const EdgeStream &stream, std::uint64_t d_H, std::uint64_t d_T, bool quantum_backend) {
    auto universe = make_universe(stream.n, stream.m());
    std::vector<ElementId> initial;
    for (std::uint64_t i = 0; i < 4 * stream.m(); ++i) {
        initial.push_back(scratch_element(stream.n, i));
    }
    auto law = qsim::exact_output_distribution<std::int64_t>(
        *universe,
        initial,
        [&](ScriptedSketch &s) { return run_on(s, stream, d_H, d_T); },
        quantum_backend ? qsim::Backend::Quantum : qsim::Backend::Stochastic,
        EnumerationLimits{std::uint64_t{1} << 16, 2 * stream.m()});
    double mean = 0;
    for (const auto &[value, p] : law) {
        mean += static_cast<double>(value) * p;
    }
    return mean;
}

}  // namespace pairsketch::heavy
