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

#ifndef PAIRSKETCH_SKETCH_HPP
#define PAIRSKETCH_SKETCH_HPP

#include <concepts>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pairsketch/member_set.hpp"
#include "pairsketch/permutation.hpp"
#include "pairsketch/rng.hpp"
#include "pairsketch/universe.hpp"

namespace pairsketch {

enum class QueryOutcome : std::uint8_t { Bot = 0, In = 1, Plus = 2, Minus = 3 };

char outcome_char(QueryOutcome o);
std::string outcome_name(QueryOutcome o);

/// Stochastic implementation of the pair-sampling sketch. The handle owns a
/// set T and a private random stream; a non-Bot query result destroys it.
/// Not copyable: the only way to look at T without consuming it is the
/// test-only debug_members().
class SketchHandle {
   public:
    static SketchHandle create(UniversePtr universe, std::span<const ElementId> initial, std::uint64_t seed);
    static SketchHandle create(UniversePtr universe, std::span<const ElementRange> initial, std::uint64_t seed);

    /// A query that could have ended the sketch: query_one on a member, or
    /// query_pair with at least one member present.
    struct LiveQuery {
        bool pair = false;
        int present = 0;
        std::uint64_t size = 0;
    };
    using Plan = std::pair<std::size_t, QueryOutcome>;

    /// Deterministic handle: every live query answers Bot, except live query
    /// number plan->first, which answers plan->second. Replaying an algorithm
    /// once per live query yields its exact output law.
    static SketchHandle planned(UniversePtr universe, std::span<const ElementRange> initial, std::optional<Plan> plan);
    const std::vector<LiveQuery> &live_log() const { return log_; }

    SketchHandle(SketchHandle &&) noexcept = default;
    SketchHandle &operator=(SketchHandle &&) noexcept = default;
    SketchHandle(const SketchHandle &) = delete;
    SketchHandle &operator=(const SketchHandle &) = delete;

    void update(const PermutationSpec &pi);
    QueryOutcome query_one(ElementId x);
    QueryOutcome query_pair(ElementId x, ElementId y);

    /// Same as query_one on first, first+stride, ... (count elements) in that
    /// order, stopping at the first In. Only members are visited.
    QueryOutcome query_one_each(ElementId first, std::uint64_t stride, std::uint64_t count);

    /// Swap of a fresh dummy element with x.
    void add_via_dummy(ElementId next_dummy, ElementId x);

    bool alive() const { return !final_.has_value(); }
    std::optional<QueryOutcome> final_outcome() const { return final_; }
    const UniverseSpec &universe() const { return *universe_; }

    /// Test-only snapshot of T.
    std::vector<ElementId> debug_members() const;
    std::uint64_t debug_size() const;
    bool debug_contains(ElementId x) const;
    /// Members of one block as global ranges.
    std::vector<ElementRange> debug_runs(std::uint64_t block) const;

   private:
    SketchHandle(UniversePtr universe, std::uint64_t seed);
    void require_alive() const;
    void require_member_of_universe(ElementId x) const;
    bool fire_one();
    std::optional<QueryOutcome> fire_pair(bool both);

    UniversePtr universe_;
    MemberSet members_;
    CounterRng rng_;
    std::optional<QueryOutcome> final_;
    std::vector<ElementRange> moved_a_;
    std::vector<ElementRange> moved_b_;
    bool planned_ = false;
    std::optional<Plan> plan_;
    std::vector<LiveQuery> log_;
};

/// Operations shared by every sketch backend (stochastic, state vector, and
/// the scripted recorder), so algorithms can run unchanged on each.
template <class S>
concept PairSketch = requires(S &s, const PermutationSpec &pi, ElementId x, std::uint64_t n) {
    s.update(pi);
    { s.query_one(x) } -> std::same_as<QueryOutcome>;
    { s.query_pair(x, x) } -> std::same_as<QueryOutcome>;
    { s.query_one_each(x, n, n) } -> std::same_as<QueryOutcome>;
};

struct ScriptOp {
    enum class Kind : std::uint8_t { Update, QueryOne, QueryPair };
    Kind kind = Kind::Update;
    PermutationSpec permutation;
    ElementId x;
    ElementId y;

    static ScriptOp update(PermutationSpec pi) { return ScriptOp{Kind::Update, std::move(pi), {}, {}}; }
    static ScriptOp query_one(ElementId x) { return ScriptOp{Kind::QueryOne, {}, x, {}}; }
    static ScriptOp query_pair(ElementId x, ElementId y) { return ScriptOp{Kind::QueryPair, {}, x, y}; }
    bool is_query() const { return kind != Kind::Update; }
};
using Script = std::vector<ScriptOp>;

/// Throws ScriptError on out-of-universe elements, x = y pairs, or invalid permutations.
void check_script(const UniverseSpec &universe, const Script &script);

struct NoiselessReplay {
    std::vector<ElementId> survivors;
    double survival_probability = 1.0;
};

/// Applies the script with every query answering Bot. The survivor set is
/// the same in every run that survives, with probability |T'|/|T|.
NoiselessReplay replay_noiseless(
    const UniverseSpec &universe, std::span<const ElementId> initial, const Script &script);

/// Records the operations an algorithm issues and answers Bot, except for
/// one planned (query index, outcome) which it returns and then stops.
/// Used to extract the fixed script of a non-adaptive quantum stage and to
/// evaluate the algorithm's output for each terminal outcome.
class ScriptedSketch {
   public:
    ScriptedSketch() = default;
    ScriptedSketch(std::size_t query_index, QueryOutcome outcome) : plan_({query_index, outcome}) {}

    void update(const PermutationSpec &pi);
    QueryOutcome query_one(ElementId x);
    QueryOutcome query_pair(ElementId x, ElementId y);
    QueryOutcome query_one_each(ElementId first, std::uint64_t stride, std::uint64_t count);

    const Script &script() const { return script_; }
    std::size_t queries() const { return queries_; }

   private:
    QueryOutcome answer();

    std::optional<std::pair<std::size_t, QueryOutcome>> plan_;
    Script script_;
    std::size_t queries_ = 0;
    bool done_ = false;
};

/// Limits for exhaustive branch enumeration.
struct EnumerationLimits {
    std::uint64_t max_universe = std::uint64_t{1} << 16;
    std::size_t max_script_length = 12;
};

/// Exact probability of each outcome sequence of a script. A sequence stops
/// at the first non-Bot outcome, since the sketch is then destroyed.
struct OutcomeDistribution {
    std::map<std::vector<QueryOutcome>, double> entries;

    double total() const;
    double probability(const std::vector<QueryOutcome> &seq) const;
    std::string format() const;
};

double total_variation(const OutcomeDistribution &a, const OutcomeDistribution &b);

/// Enumeration with the stochastic set semantics.
OutcomeDistribution enumerate_stochastic(
    const UniverseSpec &universe,
    std::span<const ElementId> initial,
    const Script &script,
    const EnumerationLimits &limits = {});

std::vector<ElementId> ids(std::initializer_list<std::uint64_t> values);

}  // namespace pairsketch

#endif
