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

#include "pairsketch/permutation.hpp"

#include <algorithm>

#include "pairsketch/errors.hpp"

namespace pairsketch {

PermutationSpec &PermutationSpec::swap_blocks(ElementId a, ElementId b, std::uint64_t length) {
    if (length > 0 && a != b) {
        swaps_.push_back(BlockSwap{a, b, length});
    }
    return *this;
}

PermutationSpec &PermutationSpec::rotate(CoordinateRotation rotation) {
    if (rotation.window_size == 0) {
        throw PermutationError("rotation window is empty");
    }
    rotation.shift %= rotation.window_size;
    if (rotation.shift != 0) {
        rotations_.push_back(std::move(rotation));
    }
    return *this;
}

RotationLine rotation_line(const UniverseSpec &universe, const CoordinateRotation &r) {
    if (r.component >= universe.components().size()) {
        throw PermutationError("rotation names an unknown component");
    }
    const auto &factors = universe.components()[r.component].factors;
    if (r.coordinate >= factors.size() || r.anchor.size() != factors.size()) {
        throw PermutationError("rotation anchor does not match component arity");
    }
    const Factor &f = factors[r.coordinate];
    if (!f.holds(r.window_lo) || !f.holds(r.window_lo + static_cast<std::int64_t>(r.window_size) - 1)) {
        throw PermutationError("rotation window leaves factor '" + f.name + "'");
    }
    Tuple t{r.component, r.anchor};
    t.coords[r.coordinate] = r.window_lo;
    ElementId base;
    try {
        base = universe.encode(t);
    } catch (const EncodingError &e) {
        throw PermutationError(std::string("rotation anchor: ") + e.what());
    }
    return RotationLine{base, universe.stride(r.component, r.coordinate)};
}

namespace {

bool windows_overlap(const CoordinateRotation &a, const CoordinateRotation &b) {
    std::int64_t a_hi = a.window_lo + static_cast<std::int64_t>(a.window_size);
    std::int64_t b_hi = b.window_lo + static_cast<std::int64_t>(b.window_size);
    return a.window_lo < b_hi && b.window_lo < a_hi;
}

bool in_window(const CoordinateRotation &r, std::int64_t v) {
    return v >= r.window_lo && v < r.window_lo + static_cast<std::int64_t>(r.window_size);
}

bool domains_intersect(const CoordinateRotation &a, const CoordinateRotation &b) {
    if (a.component != b.component) {
        return false;
    }
    for (std::size_t c = 0; c < a.anchor.size(); ++c) {
        if (c != a.coordinate && c != b.coordinate && a.anchor[c] != b.anchor[c]) {
            return false;
        }
    }
    if (a.coordinate == b.coordinate) {
        return windows_overlap(a, b);
    }
    return in_window(a, b.anchor[a.coordinate]) && in_window(b, a.anchor[b.coordinate]);
}

}  // namespace

void PermutationSpec::validate(const UniverseSpec &universe) const {
    for (std::size_t i = 0; i < rotations_.size(); ++i) {
        rotation_line(universe, rotations_[i]);
        for (std::size_t j = 0; j < i; ++j) {
            if (domains_intersect(rotations_[i], rotations_[j])) {
                throw PermutationError("rotation domains overlap");
            }
        }
    }
    std::vector<std::pair<std::uint64_t, std::uint64_t>> ranges;
    ranges.reserve(2 * swaps_.size());
    for (const auto &s : swaps_) {
        for (ElementId x : {s.a, s.b}) {
            if (x.index + s.length > universe.cardinality() || x.index + s.length < x.index) {
                throw PermutationError("swap range leaves the universe");
            }
            ranges.emplace_back(x.index, x.index + s.length);
        }
    }
    std::sort(ranges.begin(), ranges.end());
    for (std::size_t i = 1; i < ranges.size(); ++i) {
        if (ranges[i].first < ranges[i - 1].second) {
            throw PermutationError("swap ranges overlap; the map would not be a bijection");
        }
    }
}

ElementId PermutationSpec::apply(const UniverseSpec &universe, ElementId id) const {
    for (const auto &r : rotations_) {
        RotationLine line = rotation_line(universe, r);
        if (id.index < line.base.index) {
            continue;
        }
        std::uint64_t d = id.index - line.base.index;
        if (d % line.stride != 0 || d / line.stride >= r.window_size) {
            continue;
        }
        std::uint64_t t = (d / line.stride + r.shift) % r.window_size;
        id = ElementId{line.base.index + t * line.stride};
        break;
    }
    for (const auto &s : swaps_) {
        if (id.index >= s.a.index && id.index < s.a.index + s.length) {
            return ElementId{s.b.index + (id.index - s.a.index)};
        }
        if (id.index >= s.b.index && id.index < s.b.index + s.length) {
            return ElementId{s.a.index + (id.index - s.b.index)};
        }
    }
    return id;
}

std::vector<ElementId> PermutationSpec::materialize(const UniverseSpec &universe) const {
    validate(universe);
    std::uint64_t n = universe.cardinality();
    std::vector<ElementId> image(n);
    std::vector<bool> hit(n, false);
    for (std::uint64_t x = 0; x < n; ++x) {
        ElementId y = apply(universe, ElementId{x});
        if (y.index >= n || hit[y.index]) {
            throw PermutationError("map is not a bijection");
        }
        hit[y.index] = true;
        image[x] = y;
    }
    return image;
}

}  // namespace pairsketch
