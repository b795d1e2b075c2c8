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

#ifndef PAIRSKETCH_QSIM_HPP
#define PAIRSKETCH_QSIM_HPP

#include <complex>
#include <span>
#include <vector>

#include "pairsketch/sketch.hpp"

namespace pairsketch::qsim {

using Amplitude = std::complex<double>;

/// Dense state over the universe basis.
class StateVector {
   public:
    static StateVector create(UniversePtr universe, std::span<const ElementId> initial);

    const UniverseSpec &universe() const { return *universe_; }
    std::span<const Amplitude> amplitudes() const { return amps_; }
    std::span<Amplitude> mutable_amplitudes() { return amps_; }
    Amplitude amplitude(ElementId x) const { return amps_[x.index]; }
    double norm() const;
    void normalize();

   private:
    StateVector(UniversePtr universe, std::vector<Amplitude> amps)
        : universe_(std::move(universe)), amps_(std::move(amps)) {}

    UniversePtr universe_;
    std::vector<Amplitude> amps_;
};

/// The five projectors of the two measurements:
/// OneIn = |x><x|, OneBot = I - OneIn,
/// PairPlus/PairMinus = (|x> +- |y>)(<x| +- <y|)/2, PairBot = I - PairPlus - PairMinus.
enum class Projector { OneIn, OneBot, PairPlus, PairMinus, PairBot };

/// v <- P v, unnormalized.
void apply_projector(std::span<Amplitude> v, Projector p, ElementId x, ElementId y = {});

/// ||P v||^2.
double projector_weight(std::span<const Amplitude> v, Projector p, ElementId x, ElementId y = {});

StateVector qs_create(UniversePtr universe, std::span<const ElementId> initial);
void qs_apply_permutation(StateVector &psi, const PermutationSpec &pi);
QueryOutcome qs_measure_one(StateVector &psi, ElementId x, CounterRng &rng);
QueryOutcome qs_measure_pair(StateVector &psi, ElementId x, ElementId y, CounterRng &rng);

/// State-vector sketch with the same interface as SketchHandle.
class QuantumSketch {
   public:
    QuantumSketch(UniversePtr universe, std::span<const ElementId> initial, std::uint64_t seed);

    void update(const PermutationSpec &pi);
    QueryOutcome query_one(ElementId x);
    QueryOutcome query_pair(ElementId x, ElementId y);
    QueryOutcome query_one_each(ElementId first, std::uint64_t stride, std::uint64_t count);

    bool alive() const { return alive_; }
    const StateVector &state() const { return psi_; }

   private:
    void require_alive() const;

    StateVector psi_;
    CounterRng rng_;
    bool alive_ = true;
};

OutcomeDistribution enumerate_quantum(
    const UniverseSpec &universe,
    std::span<const ElementId> initial,
    const Script &script,
    const EnumerationLimits &limits = {});

enum class Backend { Stochastic, Quantum };

OutcomeDistribution enumerate_distribution(
    const UniverseSpec &universe,
    std::span<const ElementId> initial,
    const Script &script,
    Backend backend,
    const EnumerationLimits &limits = {});

}  // namespace pairsketch::qsim

#endif
