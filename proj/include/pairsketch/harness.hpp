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

#ifndef PAIRSKETCH_HARNESS_HPP
#define PAIRSKETCH_HARNESS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "pairsketch/sketch.hpp"
#include "pairsketch/stats.hpp"

namespace pairsketch::harness {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// One experiment. `instance` is {"file": path} or {"generator": kind, ...};
/// `params` holds the algorithm parameters. A fixed seed fixes every byte of
/// the report.
struct ExperimentConfig {
    std::string algorithm;  // bhm, triangle, heavy, snapshot or equivalence
    Json instance = Json::object();
    Json params = Json::object();
    std::uint64_t trials = 1000;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    std::string output;  // JSON report path, empty for none
    std::string csv;     // CSV summary path, empty for none

    /// Throws ConfigError on unknown keys, missing fields or bad values.
    static ExperimentConfig from_json(const Json &j);
    Json to_json() const;
    void validate() const;
};

struct Verdict {
    std::string name;
    bool pass = false;
    double observed = 0;
    double expected = 0;
    double sigma = 0;
    std::string detail;
};

struct Report {
    Json config;
    stats::Summary aggregate;
    Json oracle = Json::object();
    Json extra = Json::object();
    std::vector<Verdict> verdicts;

    bool pass() const;
    Json to_json() const;
    /// Sorted keys, two-space indent, trailing newline.
    std::string canonical() const;
    static std::string csv_header();
    std::string csv_row() const;
};

Report run_experiment(const ExperimentConfig &config);

/// Writes the canonical JSON to `path` and appends the CSV row to `csv_path`
/// (header first when the file is new). Empty paths are skipped.
void emit_report(const Report &report, const std::string &path, const std::string &csv_path = {});

/// Random script over a flat universe of `size` elements with `length`
/// operations mixing updates (swaps, block swaps, window rotations),
/// query_one and query_pair.
Script random_script(std::uint64_t size, std::size_t length, CounterRng &rng);

struct EquivalenceResult {
    std::uint64_t initial_sets = 0;
    std::uint64_t scripts = 0;
    double max_tv = 0;
    double max_mass_error = 0;
};

/// Compares the stochastic and state-vector laws of `scripts_per_set`
/// random scripts (length 1..max_length) on every initial set T of [size]
/// with 1 <= |T| <= max_initial.
EquivalenceResult check_equivalence(
    std::uint64_t size, std::uint64_t max_initial, std::uint64_t scripts_per_set, std::size_t max_length, std::uint64_t seed);

}  // namespace pairsketch::harness

#endif
