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

#ifndef PAIRSKETCH_GRAPH_HPP
#define PAIRSKETCH_GRAPH_HPP

#include <cstdint>
#include <vector>

namespace pairsketch {

/// Stream edge. For directed streams the edge is u -> v; u is called the
/// head and v the tail.
struct Edge {
    std::uint32_t u = 0;
    std::uint32_t v = 0;

    bool operator==(const Edge &) const = default;
};

/// Edges in arrival order over vertices {0, ..., n-1}.
struct EdgeStream {
    std::uint32_t n = 0;
    std::vector<Edge> edges;
    bool directed = false;

    std::size_t m() const { return edges.size(); }

    /// Throws ValidationError on self-loops, out-of-range endpoints or
    /// repeated edges (unordered pairs when undirected).
    void validate() const;
};

}  // namespace pairsketch

#endif
