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

#include "pairsketch/qsim.hpp"

#include <cmath>

#include "pairsketch/errors.hpp"

namespace pairsketch::qsim {

namespace {

constexpr std::uint64_t kMaxDense = std::uint64_t{1} << 22;
constexpr double kNormTolerance = 1e-9;
constexpr double kPrune = 1e-12;

void check_pair(const UniverseSpec &u, ElementId x, ElementId y) {
    if (x == y) {
        throw InvalidQueryError("pair measurement needs two distinct elements");
    }
    if (!u.contains(x) || !u.contains(y)) {
        throw InvalidQueryError("measured element outside universe");
    }
}

}  // namespace

StateVector StateVector::create(UniversePtr universe, std::span<const ElementId> initial) {
    if (initial.empty()) {
        throw InvalidInitError("initial set is empty");
    }
    if (universe->cardinality() > kMaxDense) {
        throw TooLargeError("universe too large for a dense state vector");
    }
    std::vector<Amplitude> amps(universe->cardinality());
    std::size_t count = 0;
    for (ElementId x : initial) {
        if (!universe->contains(x)) {
            throw InvalidInitError("initial element outside universe");
        }
        if (amps[x.index] == Amplitude{}) {
            amps[x.index] = 1;
            ++count;
        }
    }
    double a = 1 / std::sqrt(static_cast<double>(count));
    for (auto &v : amps) {
        v *= a;
    }
    return StateVector(std::move(universe), std::move(amps));
}

double StateVector::norm() const {
    double s = 0;
    for (const auto &a : amps_) {
        s += std::norm(a);
    }
    return std::sqrt(s);
}

void StateVector::normalize() {
    double n = norm();
    if (n == 0) {
        throw Error("cannot normalize the zero vector");
    }
    for (auto &a : amps_) {
        a /= n;
    }
}

void apply_projector(std::span<Amplitude> v, Projector p, ElementId x, ElementId y) {
    Amplitude ax = v[x.index];
    switch (p) {
        case Projector::OneIn:
            for (auto &a : v) {
                a = 0;
            }
            v[x.index] = ax;
            return;
        case Projector::OneBot:
            v[x.index] = 0;
            return;
        case Projector::PairBot:
            v[x.index] = 0;
            v[y.index] = 0;
            return;
        case Projector::PairPlus:
        case Projector::PairMinus:
            break;
    }
    Amplitude ay = v[y.index];
    double sign = p == Projector::PairPlus ? 1.0 : -1.0;
    Amplitude c = (ax + sign * ay) / 2.0;
    for (auto &a : v) {
        a = 0;
    }
    v[x.index] = c;
    v[y.index] = sign * c;
}

double projector_weight(std::span<const Amplitude> v, Projector p, ElementId x, ElementId y) {
    switch (p) {
        case Projector::OneIn:
            return std::norm(v[x.index]);
        case Projector::PairPlus:
            return std::norm(v[x.index] + v[y.index]) / 2;
        case Projector::PairMinus:
            return std::norm(v[x.index] - v[y.index]) / 2;
        case Projector::OneBot:
        case Projector::PairBot:
            break;
    }
    double s = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i != x.index && !(p == Projector::PairBot && i == y.index)) {
            s += std::norm(v[i]);
        }
    }
    return s;
}

StateVector qs_create(UniversePtr universe, std::span<const ElementId> initial) {
    return StateVector::create(std::move(universe), initial);
}

void qs_apply_permutation(StateVector &psi, const PermutationSpec &pi) {
    if (pi.is_identity()) {
        return;
    }
    std::vector<ElementId> image = pi.materialize(psi.universe());
    auto amps = psi.mutable_amplitudes();
    std::vector<Amplitude> next(amps.size());
    for (std::size_t u = 0; u < amps.size(); ++u) {
        next[image[u].index] = amps[u];
    }
    std::copy(next.begin(), next.end(), amps.begin());
}

QueryOutcome qs_measure_one(StateVector &psi, ElementId x, CounterRng &rng) {
    if (!psi.universe().contains(x)) {
        throw InvalidQueryError("measured element outside universe");
    }
    auto amps = psi.mutable_amplitudes();
    double p_in = projector_weight(amps, Projector::OneIn, x);
    if (p_in > 0 && rng.uniform01() < p_in) {
        apply_projector(amps, Projector::OneIn, x);
        psi.normalize();
        return QueryOutcome::In;
    }
    if (p_in > 0) {
        apply_projector(amps, Projector::OneBot, x);
        psi.normalize();
    }
    return QueryOutcome::Bot;
}

QueryOutcome qs_measure_pair(StateVector &psi, ElementId x, ElementId y, CounterRng &rng) {
    check_pair(psi.universe(), x, y);
    auto amps = psi.mutable_amplitudes();
    double p_plus = projector_weight(amps, Projector::PairPlus, x, y);
    double p_minus = projector_weight(amps, Projector::PairMinus, x, y);
    if (p_plus + p_minus == 0) {
        return QueryOutcome::Bot;
    }
    double u = rng.uniform01();
    QueryOutcome o = QueryOutcome::Bot;
    Projector p = Projector::PairBot;
    if (u < p_plus) {
        o = QueryOutcome::Plus;
        p = Projector::PairPlus;
    } else if (u < p_plus + p_minus) {
        o = QueryOutcome::Minus;
        p = Projector::PairMinus;
    }
    apply_projector(amps, p, x, y);
    psi.normalize();
    return o;
}

QuantumSketch::QuantumSketch(UniversePtr universe, std::span<const ElementId> initial, std::uint64_t seed)
    : psi_(StateVector::create(std::move(universe), initial)), rng_(seed) {}

void QuantumSketch::require_alive() const {
    if (!alive_) {
        throw SketchDestroyedError("sketch was destroyed by an earlier query");
    }
}

void QuantumSketch::update(const PermutationSpec &pi) {
    require_alive();
    qs_apply_permutation(psi_, pi);
}

QueryOutcome QuantumSketch::query_one(ElementId x) {
    require_alive();
    QueryOutcome o = qs_measure_one(psi_, x, rng_);
    alive_ = o == QueryOutcome::Bot;
    return o;
}

QueryOutcome QuantumSketch::query_pair(ElementId x, ElementId y) {
    require_alive();
    QueryOutcome o = qs_measure_pair(psi_, x, y, rng_);
    alive_ = o == QueryOutcome::Bot;
    return o;
}

QueryOutcome QuantumSketch::query_one_each(ElementId first, std::uint64_t stride, std::uint64_t count) {
    for (std::uint64_t k = 0; k < count; ++k) {
        if (query_one(ElementId{first.index + k * stride}) == QueryOutcome::In) {
            return QueryOutcome::In;
        }
        if (stride == 0) {
            break;
        }
    }
    return QueryOutcome::Bot;
}

OutcomeDistribution enumerate_quantum(
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
    check_script(universe, script);
    auto owned = std::make_shared<const UniverseSpec>(universe);
    StateVector psi = StateVector::create(owned, initial);
    auto amps = psi.mutable_amplitudes();
    OutcomeDistribution out;
    std::vector<QueryOutcome> seq;
    double p = 1;
    // Only the Bot branch continues; every other outcome ends the sequence.
    for (const auto &op : script) {
        if (op.kind == ScriptOp::Kind::Update) {
            qs_apply_permutation(psi, op.permutation);
            continue;
        }
        double stop = 0;
        auto record = [&](QueryOutcome o, double w) {
            stop += w;
            if (p * w >= kPrune) {
                auto s = seq;
                s.push_back(o);
                out.entries[s] += p * w;
            }
        };
        Projector bot;
        if (op.kind == ScriptOp::Kind::QueryOne) {
            record(QueryOutcome::In, projector_weight(amps, Projector::OneIn, op.x));
            bot = Projector::OneBot;
        } else {
            record(QueryOutcome::Plus, projector_weight(amps, Projector::PairPlus, op.x, op.y));
            record(QueryOutcome::Minus, projector_weight(amps, Projector::PairMinus, op.x, op.y));
            bot = Projector::PairBot;
        }
        seq.push_back(QueryOutcome::Bot);
        double keep = projector_weight(amps, bot, op.x, op.y);
        if (std::abs(keep + stop - 1) > kNormTolerance) {
            throw Error("projector weights do not sum to one");
        }
        p *= keep;
        if (p < kPrune) {
            return out;
        }
        apply_projector(amps, bot, op.x, op.y);
        psi.normalize();
    }
    out.entries[seq] += p;
    return out;
}

OutcomeDistribution enumerate_distribution(
    const UniverseSpec &universe,
    std::span<const ElementId> initial,
    const Script &script,
    Backend backend,
    const EnumerationLimits &limits) {
    if (backend == Backend::Quantum) {
        return enumerate_quantum(universe, initial, script, limits);
    }
    return enumerate_stochastic(universe, initial, script, limits);
}

}  // namespace pairsketch::qsim
