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

#include "pairsketch/graph_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <vector>

#include "pairsketch/errors.hpp"
#include "pairsketch/rng.hpp"

namespace pairsketch {

void EdgeStream::validate() const {
    std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
    for (std::size_t i = 0; i < edges.size(); ++i) {
        auto [u, v] = edges[i];
        std::string where = "edge " + std::to_string(i) + " (" + std::to_string(u) + "," + std::to_string(v) + "): ";
        if (u >= n || v >= n) {
            throw ValidationError(where + "endpoint outside [0, " + std::to_string(n) + ")");
        }
        if (u == v) {
            throw ValidationError(where + "self-loop");
        }
        auto key = directed ? std::pair{u, v} : std::pair{std::min(u, v), std::max(u, v)};
        if (!seen.insert(key).second) {
            throw ValidationError(where + "repeated edge");
        }
    }
}

namespace io {

namespace {

struct Record {
    std::size_t line;
    std::vector<std::string> tokens;
};

std::vector<Record> records(std::string_view text) {
    std::vector<Record> out;
    std::size_t line = 0, pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        ++line;
        std::string_view body = text.substr(pos, end - pos);
        if (auto hash = body.find('#'); hash != std::string_view::npos) {
            body = body.substr(0, hash);
        }
        std::istringstream in{std::string(body)};
        Record r{line, {}};
        for (std::string tok; in >> tok;) {
            r.tokens.push_back(tok);
        }
        if (!r.tokens.empty()) {
            out.push_back(std::move(r));
        }
        pos = end + 1;
    }
    return out;
}

[[noreturn]] void fail(const std::string &source, std::size_t line, const std::string &msg) {
    throw ParseError(source + ":" + std::to_string(line) + ": " + msg);
}

std::uint64_t to_uint(const std::string &tok, const std::string &source, std::size_t line) {
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || p != tok.data() + tok.size()) {
        fail(source, line, "expected a nonnegative integer, got '" + tok + "'");
    }
    return v;
}

std::uint32_t to_vertex(const std::string &tok, const std::string &source, std::size_t line) {
    std::uint64_t v = to_uint(tok, source, line);
    if (v > UINT32_MAX) {
        fail(source, line, "vertex id too large");
    }
    return static_cast<std::uint32_t>(v);
}

std::uint8_t to_bit(const std::string &tok, const std::string &source, std::size_t line) {
    std::uint64_t v = to_uint(tok, source, line);
    if (v > 1) {
        fail(source, line, "expected a bit, got '" + tok + "'");
    }
    return static_cast<std::uint8_t>(v);
}

void expect_arity(const Record &r, std::size_t k, const std::string &source) {
    if (r.tokens.size() != k) {
        fail(source, r.line, "expected " + std::to_string(k) + " fields, got " + std::to_string(r.tokens.size()));
    }
}

}  // namespace

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError(path + ": cannot open file");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string &path, const std::string &contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error(path + ": cannot open for writing");
    }
    out << contents;
    if (!out) {
        throw std::runtime_error(path + ": write failed");
    }
}

EdgeStream parse_stream_text(std::string_view text, bool directed, const std::string &source) {
    auto recs = records(text);
    if (recs.empty()) {
        fail(source, 1, "missing 'n m' header");
    }
    expect_arity(recs[0], 2, source);
    EdgeStream s;
    s.directed = directed;
    s.n = to_vertex(recs[0].tokens[0], source, recs[0].line);
    std::uint64_t m = to_uint(recs[0].tokens[1], source, recs[0].line);
    if (recs.size() - 1 != m) {
        fail(source, recs[0].line, "header declares " + std::to_string(m) + " edges, file has " + std::to_string(recs.size() - 1));
    }
    for (std::size_t i = 1; i < recs.size(); ++i) {
        expect_arity(recs[i], 2, source);
        Edge e{to_vertex(recs[i].tokens[0], source, recs[i].line), to_vertex(recs[i].tokens[1], source, recs[i].line)};
        if (e.u >= s.n || e.v >= s.n) {
            fail(source, recs[i].line, "vertex outside [0, " + std::to_string(s.n) + ")");
        }
        if (e.u == e.v) {
            fail(source, recs[i].line, "self-loop");
        }
        s.edges.push_back(e);
    }
    try {
        s.validate();
    } catch (const ValidationError &err) {
        throw ValidationError(source + ": " + err.what());
    }
    return s;
}

EdgeStream parse_stream(const std::string &path, bool directed) { return parse_stream_text(read_file(path), directed, path); }

std::string format_stream(const EdgeStream &stream) {
    std::ostringstream out;
    out << stream.n << ' ' << stream.m() << '\n';
    for (const Edge &e : stream.edges) {
        out << e.u << ' ' << e.v << '\n';
    }
    return out.str();
}

void write_stream(const std::string &path, const EdgeStream &stream) { write_file(path, format_stream(stream)); }

bhm::BhmInstance parse_bhm_text(std::string_view text, const std::string &source) {
    auto recs = records(text);
    if (recs.empty() || recs[0].tokens.empty() || recs[0].tokens[0] != "bhm") {
        fail(source, recs.empty() ? 1 : recs[0].line, "missing 'bhm n b alpha' header");
    }
    expect_arity(recs[0], 4, source);
    std::uint32_t n = to_vertex(recs[0].tokens[1], source, recs[0].line);
    std::uint8_t b = to_bit(recs[0].tokens[2], source, recs[0].line);
    double alpha = 0;
    try {
        std::size_t used = 0;
        alpha = std::stod(recs[0].tokens[3], &used);
        if (used != recs[0].tokens[3].size()) {
            throw std::invalid_argument("trailing characters");
        }
    } catch (const std::exception &) {
        fail(source, recs[0].line, "bad alpha '" + recs[0].tokens[3] + "'");
    }
    std::vector<bhm::BhmUpdate> stream;
    for (std::size_t i = 1; i < recs.size(); ++i) {
        const Record &r = recs[i];
        if (r.tokens[0] == "x") {
            expect_arity(r, 3, source);
            std::uint32_t v = to_vertex(r.tokens[1], source, r.line);
            if (v >= n) {
                fail(source, r.line, "vertex outside [0, " + std::to_string(n) + ")");
            }
            stream.push_back(bhm::BhmUpdate::vertex(v, to_bit(r.tokens[2], source, r.line)));
        } else if (r.tokens[0] == "e") {
            expect_arity(r, 4, source);
            std::uint32_t u = to_vertex(r.tokens[1], source, r.line), v = to_vertex(r.tokens[2], source, r.line);
            if (u >= n || v >= n) {
                fail(source, r.line, "vertex outside [0, " + std::to_string(n) + ")");
            }
            stream.push_back(bhm::BhmUpdate::edge(u, v, to_bit(r.tokens[3], source, r.line)));
        } else {
            fail(source, r.line, "unknown record '" + r.tokens[0] + "'");
        }
    }
    try {
        return bhm::instance_from_stream(n, alpha, b, std::move(stream));
    } catch (const ValidationError &err) {
        throw ValidationError(source + ": " + err.what());
    }
}

bhm::BhmInstance parse_bhm(const std::string &path) { return parse_bhm_text(read_file(path), path); }

std::string format_bhm(const bhm::BhmInstance &inst) {
    std::ostringstream out;
    out.precision(17);
    out << "bhm " << inst.n << ' ' << int(inst.b) << ' ' << inst.alpha << '\n';
    for (const auto &up : inst.stream) {
        if (up.kind == bhm::BhmUpdate::Kind::VertexBit) {
            out << "x " << up.u << ' ' << int(up.bit) << '\n';
        } else {
            out << "e " << up.u << ' ' << up.v << ' ' << int(up.bit) << '\n';
        }
    }
    return out.str();
}

void write_bhm(const std::string &path, const bhm::BhmInstance &inst) { write_file(path, format_bhm(inst)); }

}  // namespace io

namespace gen {

namespace {

template <class T>
void shuffle(std::vector<T> &xs, CounterRng &rng) {
    for (std::size_t i = xs.size(); i > 1; --i) {
        std::swap(xs[i - 1], xs[rng.below(i)]);
    }
}

std::vector<Edge> all_pairs(std::uint32_t n, bool directed) {
    std::vector<Edge> out;
    for (std::uint32_t u = 0; u < n; ++u) {
        for (std::uint32_t v = directed ? 0 : u + 1; v < n; ++v) {
            if (u != v) {
                out.push_back({u, v});
            }
        }
    }
    return out;
}

}  // namespace

EdgeStream gnp(std::uint32_t n, double p, std::uint64_t seed, bool directed) {
    if (!(p >= 0 && p <= 1)) {
        throw InvalidParamsError("p must lie in [0, 1]");
    }
    CounterRng rng(derive_seed(seed, 0x676E70));
    EdgeStream s{n, {}, directed};
    for (const Edge &e : all_pairs(n, directed)) {
        if (rng.uniform01() < p) {
            s.edges.push_back(e);
        }
    }
    shuffle(s.edges, rng);
    return s;
}

EdgeStream gnm(std::uint32_t n, std::uint64_t m, std::uint64_t seed, bool directed) {
    auto pairs = all_pairs(n, directed);
    if (m > pairs.size()) {
        throw InvalidParamsError("m exceeds the number of available pairs");
    }
    CounterRng rng(derive_seed(seed, 0x676E6D));
    shuffle(pairs, rng);
    pairs.resize(m);
    return EdgeStream{n, std::move(pairs), directed};
}

EdgeStream star(std::uint32_t n) {
    if (n < 2) {
        throw InvalidParamsError("star needs n >= 2");
    }
    EdgeStream s{n, {}, false};
    for (std::uint32_t v = 1; v < n; ++v) {
        s.edges.push_back({0, v});
    }
    return s;
}

PlantedTriangles planted_triangles(std::uint32_t n, std::uint64_t t, std::uint64_t seed) {
    if (n < 3) {
        throw InvalidParamsError("planted triangles need n >= 3");
    }
    std::vector<Edge> leaf_pairs;
    for (std::uint32_t a = 1; a < n; a += 2) {
        for (std::uint32_t b = 2; b < n; b += 2) {
            leaf_pairs.push_back({std::min(a, b), std::max(a, b)});
        }
    }
    if (t > leaf_pairs.size()) {
        throw InvalidParamsError("cannot plant " + std::to_string(t) + " triangles on " + std::to_string(n) + " vertices");
    }
    CounterRng rng(derive_seed(seed, 0x747269));
    shuffle(leaf_pairs, rng);
    leaf_pairs.resize(t);
    PlantedTriangles out{star(n), t};
    out.stream.edges.insert(out.stream.edges.end(), leaf_pairs.begin(), leaf_pairs.end());
    return out;
}

bhm::BhmInstance matching(std::uint32_t n, double alpha, std::uint8_t b, std::uint64_t seed) {
    return bhm::generate_instance(n, alpha, b, seed, bhm::StreamOrder::Shuffle);
}

}  // namespace gen

}  // namespace pairsketch
