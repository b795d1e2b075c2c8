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

#ifndef PAIRSKETCH_GRAPH_IO_HPP
#define PAIRSKETCH_GRAPH_IO_HPP

#include <cstdint>
#include <string>
#include <string_view>

#include "pairsketch/bhm.hpp"
#include "pairsketch/graph.hpp"

namespace pairsketch::io {

// Edge stream files: '#' starts a comment, blank lines are skipped, the
// first record is "n m", then m records "u v" with 0-based vertices, in
// arrival order.
//
// BHM files: first record "bhm n b alpha", then one record per update,
// "x v bit" for a vertex bit or "e u v z" for a labelled matching edge.

EdgeStream parse_stream_text(std::string_view text, bool directed, const std::string &source = "<text>");
EdgeStream parse_stream(const std::string &path, bool directed);
std::string format_stream(const EdgeStream &stream);
void write_stream(const std::string &path, const EdgeStream &stream);

bhm::BhmInstance parse_bhm_text(std::string_view text, const std::string &source = "<text>");
bhm::BhmInstance parse_bhm(const std::string &path);
std::string format_bhm(const bhm::BhmInstance &inst);
void write_bhm(const std::string &path, const bhm::BhmInstance &inst);

std::string read_file(const std::string &path);
void write_file(const std::string &path, const std::string &contents);

}  // namespace pairsketch::io

namespace pairsketch::gen {

/// Each pair (ordered when directed) independently with probability p, in
/// a seeded random arrival order.
EdgeStream gnp(std::uint32_t n, double p, std::uint64_t seed, bool directed = false);
/// m distinct pairs chosen uniformly, in random arrival order.
EdgeStream gnm(std::uint32_t n, std::uint64_t m, std::uint64_t seed, bool directed = false);
/// Center 0 joined to every other vertex, in vertex order.
EdgeStream star(std::uint32_t n);

struct PlantedTriangles {
    EdgeStream stream;
    std::uint64_t triangles = 0;
};
/// Star on center 0, then t edges between odd and even leaves. The leaf
/// edges form a bipartite graph, so every triangle uses the center and
/// there are exactly t.
PlantedTriangles planted_triangles(std::uint32_t n, std::uint64_t t, std::uint64_t seed);

bhm::BhmInstance matching(std::uint32_t n, double alpha, std::uint8_t b, std::uint64_t seed);

}  // namespace pairsketch::gen

#endif
