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

#ifndef PAIRSKETCH_EXACT_HPP
#define PAIRSKETCH_EXACT_HPP

#include <map>
#include <utility>
#include <vector>

#include "pairsketch/qsim.hpp"

namespace pairsketch::qsim {

/// Exact output law of an algorithm whose quantum stage is non-adaptive
/// (the operation sequence does not depend on outcomes until the first
/// non-Bot one). `run` maps a sketch to the algorithm's output; it is
/// replayed once per terminal outcome of the enumerated distribution.
template <class Value, class Run>
std::map<Value, double> exact_output_distribution(
    const UniverseSpec &universe,
    std::span<const ElementId> initial,
    Run run,
    Backend backend,
    const EnumerationLimits &limits = {}) {
    ScriptedSketch recorder;
    Value all_bot = run(recorder);
    OutcomeDistribution dist = enumerate_distribution(universe, initial, recorder.script(), backend, limits);
    std::map<Value, double> out;
    for (const auto &[seq, p] : dist.entries) {
        if (seq.empty() || seq.back() == QueryOutcome::Bot) {
            out[all_bot] += p;
            continue;
        }
        ScriptedSketch planned(seq.size() - 1, seq.back());
        out[run(planned)] += p;
    }
    return out;
}

/// Exact output law of an algorithm that only adapts after its first
/// non-Bot outcome, for universes too large to enumerate. Live query k is
/// reached with probability |T_k|/|T| and then fires with probability
/// 1/|T_k| per cell, so each terminal branch has weight independent of the
/// path: 1/|T| for In, 2/|T| for Plus with both members, 1/(2|T|) for each
/// of Plus and Minus with one member. One replay per live query.
template <class Value, class Run>
std::vector<std::pair<double, Value>> replay_output_law(
    UniversePtr universe, std::span<const ElementRange> initial, Run run) {
    SketchHandle probe = SketchHandle::planned(universe, initial, std::nullopt);
    std::uint64_t total = probe.debug_size();
    Value all_bot = run(probe);
    std::vector<std::pair<double, Value>> out;
    const double inv = 1.0 / static_cast<double>(total);
    out.emplace_back(static_cast<double>(probe.debug_size()) * inv, std::move(all_bot));
    const auto log = probe.live_log();
    auto branch = [&](std::size_t k, QueryOutcome o, double p) {
        SketchHandle s = SketchHandle::planned(universe, initial, SketchHandle::Plan{k, o});
        out.emplace_back(p, run(s));
    };
    for (std::size_t k = 0; k < log.size(); ++k) {
        if (!log[k].pair) {
            branch(k, QueryOutcome::In, inv);
        } else if (log[k].present == 2) {
            branch(k, QueryOutcome::Plus, 2 * inv);
        } else {
            branch(k, QueryOutcome::Plus, inv / 2);
            branch(k, QueryOutcome::Minus, inv / 2);
        }
    }
    return out;
}

}  // namespace pairsketch::qsim

#endif
