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

#ifndef PAIRSKETCH_STATS_HPP
#define PAIRSKETCH_STATS_HPP

#include <cstdint>
#include <span>
#include <vector>

namespace pairsketch::stats {

struct Summary {
    std::uint64_t count = 0;
    double mean = 0;
    double variance = 0;  // sample variance
    double std_error = 0;
    double half_width = 0;  // 4 standard errors
};

/// Welford accumulator; merge() combines partial results in a fixed order.
class Running {
   public:
    void add(double x);
    void merge(const Running &other);
    Summary summary(double sigmas = 4) const;

   private:
    std::uint64_t n_ = 0;
    double mean_ = 0;
    double m2_ = 0;
};

Summary summarize(std::span<const double> xs, double sigmas = 4);

/// |observed - expected| <= sigmas * std_error, with std_error floored at
/// `floor` so that exact runs do not need exact floating equality.
bool within_sigma(double observed, double expected, double std_error, double sigmas = 4, double floor = 1e-12);

/// Standard error of a frequency estimate of p over n trials.
double binomial_std_error(double p, std::uint64_t n);

/// Upper tail p-value of Pearson's chi-square statistic of counts against
/// probabilities; cells with zero probability must have zero count.
double chi_square_p_value(std::span<const std::uint64_t> counts, std::span<const double> probabilities);

}  // namespace pairsketch::stats

#endif
