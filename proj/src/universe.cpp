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

#include "pairsketch/universe.hpp"

#include <algorithm>
#include <sstream>

#include "pairsketch/errors.hpp"

namespace pairsketch {

Factor Factor::range(std::string name, std::int64_t lo, std::uint64_t size) {
    if (size == 0) {
        throw EncodingError("factor '" + name + "' is empty");
    }
    return Factor{std::move(name), lo, size, {}};
}

Factor Factor::alphabet(std::string name, std::vector<std::string> labels) {
    if (labels.empty()) {
        throw EncodingError("factor '" + name + "' has no labels");
    }
    std::uint64_t size = labels.size();
    return Factor{std::move(name), 0, size, std::move(labels)};
}

bool Factor::holds(std::int64_t value) const {
    return value >= lo && static_cast<std::uint64_t>(value - lo) < size;
}

UniverseSpec::UniverseSpec(std::string name, std::vector<Component> components)
    : name_(std::move(name)), components_(std::move(components)) {
    if (components_.empty()) {
        throw EncodingError("universe has no components");
    }
    unsigned __int128 total = 0;
    for (const auto &c : components_) {
        if (c.factors.empty()) {
            throw EncodingError("component '" + c.name + "' has no factors");
        }
        unsigned __int128 size = 1;
        for (const auto &f : c.factors) {
            if (f.size == 0) {
                throw EncodingError("factor '" + f.name + "' is empty");
            }
            size *= f.size;
            if (size >> 62) {
                throw EncodingError("universe too large to encode");
            }
        }
        total += size;
        if (total >> 62) {
            throw EncodingError("universe too large to encode");
        }
        offsets_.push_back(static_cast<std::uint64_t>(total));
        std::uint64_t bs = c.factors.back().size;
        block_sizes_.push_back(bs);
        block_offsets_.push_back(block_offsets_.back() + static_cast<std::uint64_t>(size) / bs);
    }
    cardinality_ = static_cast<std::uint64_t>(total);
}

UniverseSpec UniverseSpec::flat(std::uint64_t size, std::int64_t lo) {
    return UniverseSpec("flat", {Component{"x", {Factor::range("x", lo, size)}}});
}

ElementId UniverseSpec::encode(const Tuple &tuple) const {
    if (tuple.component >= components_.size()) {
        throw EncodingError("component index out of range");
    }
    const auto &factors = components_[tuple.component].factors;
    if (tuple.coords.size() != factors.size()) {
        throw EncodingError("tuple arity does not match component '" + components_[tuple.component].name + "'");
    }
    std::uint64_t local = 0;
    for (std::size_t i = 0; i < factors.size(); ++i) {
        const auto &f = factors[i];
        if (!f.holds(tuple.coords[i])) {
            throw EncodingError(
                "coordinate " + std::to_string(tuple.coords[i]) + " out of range for factor '" + f.name + "'");
        }
        local = local * f.size + static_cast<std::uint64_t>(tuple.coords[i] - f.lo);
    }
    return ElementId{offsets_[tuple.component] + local};
}

ElementId UniverseSpec::encode(std::size_t component, std::initializer_list<std::int64_t> coords) const {
    return encode(Tuple{component, std::vector<std::int64_t>(coords)});
}

std::size_t UniverseSpec::component_of(ElementId id) const {
    if (id.index >= cardinality_) {
        throw EncodingError("element id " + std::to_string(id.index) + " outside universe");
    }
    auto it = std::upper_bound(offsets_.begin(), offsets_.end(), id.index);
    return static_cast<std::size_t>(it - offsets_.begin()) - 1;
}

Tuple UniverseSpec::decode(ElementId id) const {
    std::size_t c = component_of(id);
    const auto &factors = components_[c].factors;
    Tuple t{c, std::vector<std::int64_t>(factors.size())};
    std::uint64_t local = id.index - offsets_[c];
    for (std::size_t i = factors.size(); i-- > 0;) {
        t.coords[i] = factors[i].lo + static_cast<std::int64_t>(local % factors[i].size);
        local /= factors[i].size;
    }
    return t;
}

std::int64_t UniverseSpec::label(std::size_t component, std::size_t factor, std::string_view label) const {
    const auto &labels = components_.at(component).factors.at(factor).labels;
    auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end()) {
        throw EncodingError("unknown label '" + std::string(label) + "'");
    }
    return it - labels.begin();
}

std::uint64_t UniverseSpec::stride(std::size_t component, std::size_t coordinate) const {
    const auto &factors = components_.at(component).factors;
    std::uint64_t s = 1;
    for (std::size_t i = factors.size(); i-- > coordinate + 1;) {
        s *= factors[i].size;
    }
    return s;
}

UniverseSpec::BlockPos UniverseSpec::block_of(ElementId id) const {
    std::size_t c = 0;
    if (components_.size() > 1) {
        c = component_of(id);
    } else if (id.index >= cardinality_) {
        throw EncodingError("element id " + std::to_string(id.index) + " outside universe");
    }
    std::uint64_t local = id.index - offsets_[c];
    std::uint64_t bs = block_sizes_[c];
    return {block_offsets_[c] + local / bs, local % bs};
}

ElementId UniverseSpec::block_start(std::uint64_t block) const {
    auto it = std::upper_bound(block_offsets_.begin(), block_offsets_.end(), block);
    std::size_t c = static_cast<std::size_t>(it - block_offsets_.begin()) - 1;
    return ElementId{offsets_[c] + (block - block_offsets_[c]) * block_sizes_[c]};
}

std::uint64_t UniverseSpec::block_size(std::uint64_t block) const {
    auto it = std::upper_bound(block_offsets_.begin(), block_offsets_.end(), block);
    return block_sizes_[static_cast<std::size_t>(it - block_offsets_.begin()) - 1];
}

std::string UniverseSpec::format(ElementId id) const {
    Tuple t = decode(id);
    const auto &c = components_[t.component];
    std::ostringstream out;
    out << c.name << '(';
    for (std::size_t i = 0; i < t.coords.size(); ++i) {
        if (i) {
            out << ',';
        }
        if (c.factors[i].is_alphabet()) {
            out << c.factors[i].labels[static_cast<std::size_t>(t.coords[i])];
        } else {
            out << t.coords[i];
        }
    }
    out << ')';
    return out.str();
}

}  // namespace pairsketch
