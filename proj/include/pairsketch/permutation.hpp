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

#ifndef PAIRSKETCH_PERMUTATION_HPP
#define PAIRSKETCH_PERMUTATION_HPP

#include <cstdint>
#include <vector>

#include "pairsketch/universe.hpp"

namespace pairsketch {

/// Exchanges [a, a+length) with [b, b+length) elementwise.
struct BlockSwap {
    ElementId a;
    ElementId b;
    std::uint64_t length = 1;
};

/// Cyclic shift of one coordinate inside a window, other coordinates fixed:
/// value window_lo + t maps to window_lo + (t + shift) mod window_size for
/// the tuples equal to `anchor` away from `coordinate`.
struct CoordinateRotation {
    std::size_t component = 0;
    std::size_t coordinate = 0;
    std::vector<std::int64_t> anchor;
    std::int64_t window_lo = 0;
    std::uint64_t window_size = 1;
    std::uint64_t shift = 0;
};

/// Succinct permutation of a universe. Rotations act first, then swaps.
/// Bijectivity follows from pairwise disjoint rotation domains and pairwise
/// disjoint swap ranges; validate() checks both.
class PermutationSpec {
   public:
    PermutationSpec &swap(ElementId a, ElementId b) { return swap_blocks(a, b, 1); }
    PermutationSpec &swap_blocks(ElementId a, ElementId b, std::uint64_t length);
    PermutationSpec &rotate(CoordinateRotation rotation);

    const std::vector<BlockSwap> &swaps() const { return swaps_; }
    const std::vector<CoordinateRotation> &rotations() const { return rotations_; }
    bool is_identity() const { return swaps_.empty() && rotations_.empty(); }

    void validate(const UniverseSpec &universe) const;

    /// Image of a single element.
    ElementId apply(const UniverseSpec &universe, ElementId id) const;

    /// Full image table; throws PermutationError if it is not a bijection.
    std::vector<ElementId> materialize(const UniverseSpec &universe) const;

   private:
    std::vector<BlockSwap> swaps_;
    std::vector<CoordinateRotation> rotations_;
};

/// First element of a rotation domain and the id step along it.
struct RotationLine {
    ElementId base;
    std::uint64_t stride;
};
RotationLine rotation_line(const UniverseSpec &universe, const CoordinateRotation &rotation);

}  // namespace pairsketch

#endif
