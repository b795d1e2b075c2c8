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

#include "pairsketch/sketch.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "pairsketch/errors.hpp"

namespace pairsketch {

char outcome_char(QueryOutcome o) {
    switch (o) {
        case QueryOutcome::In:
            return 'I';
        case QueryOutcome::Plus:
            return '+';
        case QueryOutcome::Minus:
            return '-';
        case QueryOutcome::Bot:
            break;
    }
    return 'B';
}

std::string outcome_name(QueryOutcome o) {
    switch (o) {
        case QueryOutcome::In:
            return "in";
        case QueryOutcome::Plus:
            return "plus";
        case QueryOutcome::Minus:
            return "minus";
        case QueryOutcome::Bot:
            break;
    }
    return "bot";
}

std::vector<ElementId> ids(std::initializer_list<std::uint64_t> values) {
    std::vector<ElementId> out;
    for (auto v : values) {
        out.push_back(ElementId{v});
    }
    return out;
}

SketchHandle::SketchHandle(UniversePtr universe, std::uint64_t seed)
    : universe_(std::move(universe)), members_(universe_), rng_(seed) {}

SketchHandle SketchHandle::create(UniversePtr universe, std::span<const ElementId> initial, std::uint64_t seed) {
    if (initial.empty()) {
        throw InvalidInitError("initial set is empty");
    }
    SketchHandle h(std::move(universe), seed);
    for (ElementId x : initial) {
        if (!h.universe_->contains(x)) {
            throw InvalidInitError("initial element " + std::to_string(x.index) + " outside universe");
        }
        h.members_.insert(x);
    }
    return h;
}

SketchHandle SketchHandle::create(UniversePtr universe, std::span<const ElementRange> initial, std::uint64_t seed) {
    SketchHandle h(std::move(universe), seed);
    for (const auto &r : initial) {
        if (r.first.index + r.count > h.universe_->cardinality()) {
            throw InvalidInitError("initial range outside universe");
        }
        h.members_.insert_range(r.first, r.count);
    }
    if (h.members_.size() == 0) {
        throw InvalidInitError("initial set is empty");
    }
    return h;
}

SketchHandle SketchHandle::planned(
    UniversePtr universe, std::span<const ElementRange> initial, std::optional<Plan> plan) {
    SketchHandle h = create(std::move(universe), initial, 0);
    h.planned_ = true;
    h.plan_ = plan;
    return h;
}

bool SketchHandle::fire_one() {
    if (!planned_) {
        return rng_.below(members_.size()) == 0;
    }
    std::size_t index = log_.size();
    log_.push_back({false, 1, members_.size()});
    if (!plan_ || plan_->first != index) {
        return false;
    }
    if (plan_->second != QueryOutcome::In) {
        throw InvalidQueryError("planned outcome impossible for query_one");
    }
    return true;
}

std::optional<QueryOutcome> SketchHandle::fire_pair(bool both) {
    if (!planned_) {
        // One draw from [0, 2|T|): both present gives Plus on 4 cells (2/|T|),
        // one present gives Plus and Minus one cell each (1/(2|T|)).
        std::uint64_t u = rng_.below(2 * members_.size());
        if (both) {
            return u < 4 ? std::optional(QueryOutcome::Plus) : std::nullopt;
        }
        if (u < 2) {
            return u == 0 ? QueryOutcome::Plus : QueryOutcome::Minus;
        }
        return std::nullopt;
    }
    std::size_t index = log_.size();
    log_.push_back({true, both ? 2 : 1, members_.size()});
    if (!plan_ || plan_->first != index) {
        return std::nullopt;
    }
    QueryOutcome o = plan_->second;
    if (o != QueryOutcome::Plus && !(o == QueryOutcome::Minus && !both)) {
        throw InvalidQueryError("planned outcome impossible for query_pair");
    }
    return o;
}

void SketchHandle::require_alive() const {
    if (final_) {
        throw SketchDestroyedError("sketch was destroyed by an earlier query");
    }
}

void SketchHandle::require_member_of_universe(ElementId x) const {
    if (!universe_->contains(x)) {
        throw InvalidQueryError("element " + std::to_string(x.index) + " outside universe");
    }
}

void SketchHandle::update(const PermutationSpec &pi) {
    require_alive();
    pi.validate(*universe_);
    for (const auto &r : pi.rotations()) {
        RotationLine line = rotation_line(*universe_, r);
        if (line.stride == 1) {
            auto [block, off] = universe_->block_of(line.base);
            members_.rotate_window(block, off, r.window_size, r.shift);
            continue;
        }
        std::vector<std::uint64_t> moved;
        for (std::uint64_t t = 0; t < r.window_size; ++t) {
            if (members_.erase(ElementId{line.base.index + t * line.stride})) {
                moved.push_back(line.base.index + ((t + r.shift) % r.window_size) * line.stride);
            }
        }
        for (auto m : moved) {
            members_.insert(ElementId{m});
        }
    }
    for (const auto &s : pi.swaps()) {
        moved_a_.clear();
        moved_b_.clear();
        members_.extract_range(s.a, s.length, moved_a_);
        members_.extract_range(s.b, s.length, moved_b_);
        for (const auto &r : moved_a_) {
            members_.insert_range(ElementId{r.first.index - s.a.index + s.b.index}, r.count);
        }
        for (const auto &r : moved_b_) {
            members_.insert_range(ElementId{r.first.index - s.b.index + s.a.index}, r.count);
        }
    }
}

QueryOutcome SketchHandle::query_one(ElementId x) {
    require_alive();
    require_member_of_universe(x);
    if (!members_.contains(x)) {
        return QueryOutcome::Bot;
    }
    if (fire_one()) {
        final_ = QueryOutcome::In;
        return QueryOutcome::In;
    }
    members_.erase(x);
    return QueryOutcome::Bot;
}

QueryOutcome SketchHandle::query_pair(ElementId x, ElementId y) {
    require_alive();
    if (x == y) {
        throw InvalidQueryError("query_pair needs two distinct elements");
    }
    require_member_of_universe(x);
    require_member_of_universe(y);
    bool has_x = members_.contains(x);
    bool has_y = members_.contains(y);
    if (!has_x && !has_y) {
        return QueryOutcome::Bot;
    }
    if (auto o = fire_pair(has_x && has_y)) {
        final_ = *o;
        return *o;
    }
    members_.erase(x);
    members_.erase(y);
    return QueryOutcome::Bot;
}

QueryOutcome SketchHandle::query_one_each(ElementId first, std::uint64_t stride, std::uint64_t count) {
    require_alive();
    if (count == 0) {
        return QueryOutcome::Bot;
    }
    if (stride == 0 || count == 1) {
        return query_one(first);
    }
    unsigned __int128 last128 = static_cast<unsigned __int128>(first.index) +
                                static_cast<unsigned __int128>(stride) * (count - 1);
    if (last128 >= universe_->cardinality()) {
        throw InvalidQueryError("progression leaves the universe");
    }
    ElementId last{static_cast<std::uint64_t>(last128)};
    auto [block, off] = universe_->block_of(first);
    auto [last_block, last_off] = universe_->block_of(last);
    if (block != last_block) {
        for (std::uint64_t k = 0; k < count; ++k) {
            if (query_one(ElementId{first.index + k * stride}) == QueryOutcome::In) {
                return QueryOutcome::In;
            }
        }
        return QueryOutcome::Bot;
    }
    std::vector<std::uint64_t> hits;
    for (const auto &run : members_.block_runs(block)) {
        if (run.hi <= off) {
            continue;
        }
        if (run.lo > last_off) {
            break;
        }
        std::uint64_t start = std::max(run.lo, off);
        std::uint64_t p = off + (start - off + stride - 1) / stride * stride;
        for (; p < run.hi && p <= last_off; p += stride) {
            hits.push_back(p);
        }
    }
    std::uint64_t base = first.index - off;
    for (std::uint64_t p : hits) {
        if (fire_one()) {
            final_ = QueryOutcome::In;
            return QueryOutcome::In;
        }
        members_.erase(ElementId{base + p});
    }
    return QueryOutcome::Bot;
}

void SketchHandle::add_via_dummy(ElementId next_dummy, ElementId x) {
    PermutationSpec pi;
    pi.swap(next_dummy, x);
    update(pi);
}

std::vector<ElementId> SketchHandle::debug_members() const {
    require_alive();
    return members_.elements();
}

std::uint64_t SketchHandle::debug_size() const {
    require_alive();
    return members_.size();
}

bool SketchHandle::debug_contains(ElementId x) const {
    require_alive();
    return members_.contains(x);
}

std::vector<ElementRange> SketchHandle::debug_runs(std::uint64_t block) const {
    require_alive();
    if (block >= universe_->block_count()) {
        throw InvalidQueryError("block " + std::to_string(block) + " outside universe");
    }
    std::uint64_t base = universe_->block_start(block).index;
    std::vector<ElementRange> out;
    for (const auto &run : members_.block_runs(block)) {
        out.push_back(ElementRange{ElementId{base + run.lo}, run.hi - run.lo});
    }
    return out;
}

void check_script(const UniverseSpec &universe, const Script &script) {
    for (std::size_t i = 0; i < script.size(); ++i) {
        const auto &op = script[i];
        std::string where = "script op " + std::to_string(i) + ": ";
        switch (op.kind) {
            case ScriptOp::Kind::Update:
                try {
                    op.permutation.validate(universe);
                } catch (const PermutationError &e) {
                    throw ScriptError(where + e.what());
                }
                break;
            case ScriptOp::Kind::QueryPair:
                if (op.x == op.y) {
                    throw ScriptError(where + "query_pair needs two distinct elements");
                }
                if (!universe.contains(op.y)) {
                    throw ScriptError(where + "element outside universe");
                }
                [[fallthrough]];
            case ScriptOp::Kind::QueryOne:
                if (!universe.contains(op.x)) {
                    throw ScriptError(where + "element outside universe");
                }
                break;
            default:
                throw ScriptError(where + "unknown operation kind");
        }
    }
}

NoiselessReplay replay_noiseless(
    const UniverseSpec &universe, std::span<const ElementId> initial, const Script &script) {
    check_script(universe, script);
    std::set<std::uint64_t> members;
    for (ElementId x : initial) {
        if (!universe.contains(x)) {
            throw ScriptError("initial element outside universe");
        }
        members.insert(x.index);
    }
    if (members.empty()) {
        throw InvalidInitError("initial set is empty");
    }
    double initial_size = static_cast<double>(members.size());
    for (const auto &op : script) {
        if (op.kind == ScriptOp::Kind::Update) {
            std::set<std::uint64_t> next;
            for (auto m : members) {
                next.insert(op.permutation.apply(universe, ElementId{m}).index);
            }
            members = std::move(next);
        } else {
            members.erase(op.x.index);
            if (op.kind == ScriptOp::Kind::QueryPair) {
                members.erase(op.y.index);
            }
        }
    }
    NoiselessReplay out;
    for (auto m : members) {
        out.survivors.push_back(ElementId{m});
    }
    out.survival_probability = static_cast<double>(members.size()) / initial_size;
    return out;
}

QueryOutcome ScriptedSketch::answer() {
    if (done_) {
        throw SketchDestroyedError("scripted sketch already returned its planned outcome");
    }
    std::size_t index = queries_++;
    if (plan_ && plan_->first == index) {
        done_ = true;
        return plan_->second;
    }
    return QueryOutcome::Bot;
}

void ScriptedSketch::update(const PermutationSpec &pi) {
    if (done_) {
        throw SketchDestroyedError("scripted sketch already returned its planned outcome");
    }
    script_.push_back(ScriptOp::update(pi));
}

QueryOutcome ScriptedSketch::query_one(ElementId x) {
    QueryOutcome o = answer();
    script_.push_back(ScriptOp::query_one(x));
    return o;
}

QueryOutcome ScriptedSketch::query_pair(ElementId x, ElementId y) {
    if (x == y) {
        throw InvalidQueryError("query_pair needs two distinct elements");
    }
    QueryOutcome o = answer();
    script_.push_back(ScriptOp::query_pair(x, y));
    return o;
}

QueryOutcome ScriptedSketch::query_one_each(ElementId first, std::uint64_t stride, std::uint64_t count) {
    for (std::uint64_t k = 0; k < count; ++k) {
        if (query_one(ElementId{first.index + k * stride}) != QueryOutcome::Bot) {
            return QueryOutcome::In;
        }
        if (stride == 0) {
            break;
        }
    }
    return QueryOutcome::Bot;
}

double OutcomeDistribution::total() const {
    double t = 0;
    for (const auto &[seq, p] : entries) {
        t += p;
    }
    return t;
}

double OutcomeDistribution::probability(const std::vector<QueryOutcome> &seq) const {
    auto it = entries.find(seq);
    return it == entries.end() ? 0.0 : it->second;
}

std::string OutcomeDistribution::format() const {
    std::ostringstream out;
    out.precision(12);
    for (const auto &[seq, p] : entries) {
        std::string s;
        for (auto o : seq) {
            s += outcome_char(o);
        }
        out << '[' << s << "] " << p << '\n';
    }
    return out.str();
}

double total_variation(const OutcomeDistribution &a, const OutcomeDistribution &b) {
    double sum = 0;
    for (const auto &[seq, p] : a.entries) {
        sum += std::abs(p - b.probability(seq));
    }
    for (const auto &[seq, p] : b.entries) {
        if (!a.entries.count(seq)) {
            sum += p;
        }
    }
    return sum / 2;
}

namespace {

constexpr double kPrune = 1e-12;

struct StochasticEnumerator {
    const Script &script;
    std::vector<std::vector<ElementId>> images;
    OutcomeDistribution out;

    void emit(std::vector<QueryOutcome> seq, QueryOutcome o, double p) {
        if (p < kPrune) {
            return;
        }
        seq.push_back(o);
        out.entries[seq] += p;
    }

    void run(std::size_t i, std::vector<std::uint64_t> members, std::vector<QueryOutcome> seq, double p) {
        for (; i < script.size(); ++i) {
            const auto &op = script[i];
            if (op.kind == ScriptOp::Kind::Update) {
                for (auto &m : members) {
                    m = images[i][m].index;
                }
                std::sort(members.begin(), members.end());
                continue;
            }
            bool pair = op.kind == ScriptOp::Kind::QueryPair;
            auto has = [&](ElementId x) { return std::binary_search(members.begin(), members.end(), x.index); };
            std::size_t hits = static_cast<std::size_t>(has(op.x)) + static_cast<std::size_t>(pair && has(op.y));
            if (hits == 0) {
                seq.push_back(QueryOutcome::Bot);
                continue;
            }
            double size = static_cast<double>(members.size());
            double stop;
            if (!pair) {
                stop = 1 / size;
                emit(seq, QueryOutcome::In, p * stop);
            } else if (hits == 2) {
                stop = 2 / size;
                emit(seq, QueryOutcome::Plus, p * stop);
            } else {
                stop = 1 / size;
                emit(seq, QueryOutcome::Plus, p / (2 * size));
                emit(seq, QueryOutcome::Minus, p / (2 * size));
            }
            std::erase_if(members, [&](std::uint64_t m) { return m == op.x.index || (pair && m == op.y.index); });
            seq.push_back(QueryOutcome::Bot);
            p *= 1 - stop;
            if (p < kPrune) {
                return;
            }
        }
        out.entries[seq] += p;
    }
};

}  // namespace

OutcomeDistribution enumerate_stochastic(
    const UniverseSpec &universe,
    std::span<const ElementId> initial,
    const Script &script,
    const EnumerationLimits &limits) {
    if (universe.cardinality() > limits.max_universe) {
        throw TooLargeError("universe exceeds the enumeration guard");
    }
    if (script.size() > limits.max_script_length) {
        throw TooLargeError("script exceeds the enumeration guard");
    }
    if (initial.empty()) {
        throw InvalidInitError("initial set is empty");
    }
    check_script(universe, script);
    StochasticEnumerator e{script, {}, {}};
    e.images.resize(script.size());
    for (std::size_t i = 0; i < script.size(); ++i) {
        if (script[i].kind == ScriptOp::Kind::Update) {
            e.images[i] = script[i].permutation.materialize(universe);
        }
    }
    std::vector<std::uint64_t> members;
    for (ElementId x : initial) {
        members.push_back(x.index);
    }
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    e.run(0, std::move(members), {}, 1.0);
    return e.out;
}

}  // namespace pairsketch
