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

#include "pairsketch/member_set.hpp"

#include <algorithm>

#include "pairsketch/errors.hpp"

namespace pairsketch {

namespace {

constexpr std::uint64_t kMaxBlocks = std::uint64_t{1} << 24;

// First run whose end is >= lo (touching or overlapping [lo, ...)).
MemberSet::Runs::iterator first_touching(MemberSet::Runs &runs, std::uint64_t lo) {
    return std::lower_bound(
        runs.begin(), runs.end(), lo, [](const MemberSet::Run &r, std::uint64_t v) { return r.hi < v; });
}

}  // namespace

MemberSet::MemberSet(UniversePtr universe) : universe_(std::move(universe)) {
    if (universe_->block_count() > kMaxBlocks) {
        throw CapacityError("universe has too many blocks for the member store");
    }
    blocks_.resize(universe_->block_count());
}

bool MemberSet::contains(ElementId id) const {
    auto [block, off] = universe_->block_of(id);
    const Runs &runs = blocks_[block];
    auto it = std::upper_bound(runs.begin(), runs.end(), off, [](std::uint64_t v, const Run &r) { return v < r.lo; });
    return it != runs.begin() && off < std::prev(it)->hi;
}

bool MemberSet::insert(ElementId id) {
    auto [block, off] = universe_->block_of(id);
    std::uint64_t added = insert_local(blocks_[block], off, off + 1);
    size_ += added;
    return added != 0;
}

bool MemberSet::erase(ElementId id) {
    auto [block, off] = universe_->block_of(id);
    std::uint64_t removed = erase_local(blocks_[block], off, off + 1, nullptr);
    size_ -= removed;
    return removed != 0;
}

void MemberSet::insert_range(ElementId first, std::uint64_t count) {
    if (count == 0) {
        return;
    }
    if (first.index + count > universe_->cardinality()) {
        throw EncodingError("range exceeds universe");
    }
    std::uint64_t pos = first.index;
    std::uint64_t end = first.index + count;
    while (pos < end) {
        auto [block, off] = universe_->block_of(ElementId{pos});
        std::uint64_t take = std::min(end - pos, universe_->block_size(block) - off);
        size_ += insert_local(blocks_[block], off, off + take);
        pos += take;
    }
}

void MemberSet::extract_range(ElementId first, std::uint64_t count, std::vector<ElementRange> &out) {
    if (count == 0) {
        return;
    }
    if (first.index + count > universe_->cardinality()) {
        throw EncodingError("range exceeds universe");
    }
    std::uint64_t pos = first.index;
    std::uint64_t end = first.index + count;
    while (pos < end) {
        auto [block, off] = universe_->block_of(ElementId{pos});
        std::uint64_t take = std::min(end - pos, universe_->block_size(block) - off);
        scratch_.clear();
        size_ -= erase_local(blocks_[block], off, off + take, &scratch_);
        std::uint64_t base = pos - off;
        for (const Run &r : scratch_) {
            out.push_back(ElementRange{ElementId{base + r.lo}, r.hi - r.lo});
        }
        pos += take;
    }
}

void MemberSet::rotate_window(std::uint64_t block, std::uint64_t lo, std::uint64_t width, std::uint64_t shift) {
    shift %= width;
    if (shift == 0) {
        return;
    }
    Runs &runs = blocks_[block];
    scratch_.clear();
    erase_local(runs, lo, lo + width, &scratch_);
    for (const Run &r : scratch_) {
        std::uint64_t a = r.lo - lo + shift;
        std::uint64_t b = r.hi - lo + shift;
        if (b <= width) {
            insert_local(runs, lo + a, lo + b);
        } else if (a >= width) {
            insert_local(runs, lo + a - width, lo + b - width);
        } else {
            insert_local(runs, lo + a, lo + width);
            insert_local(runs, lo, lo + b - width);
        }
    }
}

std::vector<ElementId> MemberSet::elements() const {
    std::vector<ElementId> out;
    out.reserve(size_);
    for (std::uint64_t b = 0; b < blocks_.size(); ++b) {
        if (blocks_[b].empty()) {
            continue;
        }
        std::uint64_t base = universe_->block_start(b).index;
        for (const Run &r : blocks_[b]) {
            for (std::uint64_t x = r.lo; x < r.hi; ++x) {
                out.push_back(ElementId{base + x});
            }
        }
    }
    return out;
}

std::uint64_t MemberSet::insert_local(Runs &runs, std::uint64_t lo, std::uint64_t hi) {
    auto first = first_touching(runs, lo);
    auto last = first;
    std::uint64_t covered = 0;
    std::uint64_t new_lo = lo;
    std::uint64_t new_hi = hi;
    for (; last != runs.end() && last->lo <= hi; ++last) {
        std::uint64_t a = std::max(last->lo, lo);
        std::uint64_t b = std::min(last->hi, hi);
        if (b > a) {
            covered += b - a;
        }
        new_lo = std::min(new_lo, last->lo);
        new_hi = std::max(new_hi, last->hi);
    }
    if (first == last) {
        runs.insert(first, Run{lo, hi});
    } else {
        first->lo = new_lo;
        first->hi = new_hi;
        runs.erase(first + 1, last);
    }
    return (hi - lo) - covered;
}

std::uint64_t MemberSet::erase_local(Runs &runs, std::uint64_t lo, std::uint64_t hi, Runs *removed) {
    auto it = std::lower_bound(runs.begin(), runs.end(), lo, [](const Run &r, std::uint64_t v) { return r.hi <= v; });
    std::uint64_t count = 0;
    while (it != runs.end() && it->lo < hi) {
        std::uint64_t a = std::max(it->lo, lo);
        std::uint64_t b = std::min(it->hi, hi);
        count += b - a;
        if (removed) {
            removed->push_back(Run{a, b});
        }
        if (it->lo < a && it->hi > b) {
            Run right{b, it->hi};
            it->hi = a;
            runs.insert(it + 1, right);
            return count;
        }
        if (it->lo < a) {
            it->hi = a;
            ++it;
        } else if (it->hi > b) {
            it->lo = b;
            ++it;
        } else {
            it = runs.erase(it);
        }
    }
    return count;
}

}  // namespace pairsketch
