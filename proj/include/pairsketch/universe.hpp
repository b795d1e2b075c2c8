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

#ifndef PAIRSKETCH_UNIVERSE_HPP
#define PAIRSKETCH_UNIVERSE_HPP

#include <compare>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace pairsketch {

/// Index of an element in the universe, in [0, |U|).
struct ElementId {
    std::uint64_t index = 0;

    auto operator<=>(const ElementId &) const = default;
};

/// A run of consecutive element ids.
struct ElementRange {
    ElementId first;
    std::uint64_t count = 0;
};

/// One coordinate of a product component: an integer range {lo, ..., lo+size-1}
/// or a finite label alphabet (coordinate value = label index).
struct Factor {
    std::string name;
    std::int64_t lo = 0;
    std::uint64_t size = 0;
    std::vector<std::string> labels;

    static Factor range(std::string name, std::int64_t lo, std::uint64_t size);
    static Factor alphabet(std::string name, std::vector<std::string> labels);

    bool is_alphabet() const { return !labels.empty(); }
    bool holds(std::int64_t value) const;
};

/// A product of factors, ordered most significant first.
struct Component {
    std::string name;
    std::vector<Factor> factors;
};

struct Tuple {
    std::size_t component = 0;
    std::vector<std::int64_t> coords;

    bool operator==(const Tuple &) const = default;
};

/// Disjoint union of product components with a bijective row-major encoding.
/// Elements that differ only in their last coordinate form a contiguous
/// "block"; the sketch stores its member set block by block.
class UniverseSpec {
   public:
    UniverseSpec() = default;
    UniverseSpec(std::string name, std::vector<Component> components);

    /// Single component with one integer factor {lo, ..., lo+size-1}.
    static UniverseSpec flat(std::uint64_t size, std::int64_t lo = 0);

    const std::string &name() const { return name_; }
    const std::vector<Component> &components() const { return components_; }
    std::uint64_t cardinality() const { return cardinality_; }
    std::uint64_t component_offset(std::size_t c) const { return offsets_[c]; }
    std::uint64_t component_size(std::size_t c) const { return offsets_[c + 1] - offsets_[c]; }

    ElementId encode(const Tuple &tuple) const;
    ElementId encode(std::size_t component, std::initializer_list<std::int64_t> coords) const;
    Tuple decode(ElementId id) const;
    bool contains(ElementId id) const { return id.index < cardinality_; }
    std::size_t component_of(ElementId id) const;

    /// Label index of `label` in factor `factor` of component `component`.
    std::int64_t label(std::size_t component, std::size_t factor, std::string_view label) const;

    /// Distance in ids between neighbours along coordinate `coordinate`.
    std::uint64_t stride(std::size_t component, std::size_t coordinate) const;

    std::uint64_t block_count() const { return block_offsets_.back(); }
    std::uint64_t block_size_of_component(std::size_t c) const { return block_sizes_[c]; }

    struct BlockPos {
        std::uint64_t block;
        std::uint64_t offset;
    };
    BlockPos block_of(ElementId id) const;
    ElementId block_start(std::uint64_t block) const;
    std::uint64_t block_size(std::uint64_t block) const;

    std::string format(ElementId id) const;

   private:
    std::string name_;
    std::vector<Component> components_;
    std::vector<std::uint64_t> offsets_{0};
    std::vector<std::uint64_t> block_sizes_;
    std::vector<std::uint64_t> block_offsets_{0};
    std::uint64_t cardinality_ = 0;
};

using UniversePtr = std::shared_ptr<const UniverseSpec>;

}  // namespace pairsketch

#endif
