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

#ifndef PAIRSKETCH_MEMBER_SET_HPP
#define PAIRSKETCH_MEMBER_SET_HPP

#include <cstdint>
#include <vector>

#include "pairsketch/universe.hpp"

namespace pairsketch {

/// Subset of a universe stored as sorted runs inside each block.
/// Stacks and scratch ranges stay a handful of runs, so shifting a whole
/// stack or moving a scratch range costs O(runs) instead of O(elements).
class MemberSet {
   public:
    struct Run {
        std::uint64_t lo;
        std::uint64_t hi;
    };
    using Runs = std::vector<Run>;

    explicit MemberSet(UniversePtr universe);

    const UniverseSpec &universe() const { return *universe_; }
    std::uint64_t size() const { return size_; }

    bool contains(ElementId id) const;
    bool insert(ElementId id);
    bool erase(ElementId id);

    /// Union with [first, first+count).
    void insert_range(ElementId first, std::uint64_t count);
    /// Removes members of [first, first+count) and appends them to `out` as runs.
    void extract_range(ElementId first, std::uint64_t count, std::vector<ElementRange> &out);

    /// Within one block, maps local offset lo+o to lo+((o+shift) mod width).
    void rotate_window(std::uint64_t block, std::uint64_t lo, std::uint64_t width, std::uint64_t shift);

    /// Runs of one block, local offsets.
    const Runs &block_runs(std::uint64_t block) const { return blocks_[block]; }

    std::vector<ElementId> elements() const;

   private:
    std::uint64_t insert_local(Runs &runs, std::uint64_t lo, std::uint64_t hi);
    std::uint64_t erase_local(Runs &runs, std::uint64_t lo, std::uint64_t hi, Runs *removed);

    UniversePtr universe_;
    std::vector<Runs> blocks_;
    std::uint64_t size_ = 0;
    Runs scratch_;
};

}  // namespace pairsketch

#endif
