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

#include "pairsketch/stats.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>

#include "pairsketch/errors.hpp"

namespace pairsketch::stats {

void Running::add(double x) {
    ++n_;
    double d = x - mean_;
    mean_ += d / static_cast<double>(n_);
    m2_ += d * (x - mean_);
}

void Running::merge(const Running &o) {
    if (o.n_ == 0) {
        return;
    }
    std::uint64_t n = n_ + o.n_;
    double d = o.mean_ - mean_;
    mean_ += d * static_cast<double>(o.n_) / static_cast<double>(n);
    m2_ += o.m2_ + d * d * static_cast<double>(n_) * static_cast<double>(o.n_) / static_cast<double>(n);
    n_ = n;
}

Summary Running::summary(double sigmas) const {
    Summary s;
    s.count = n_;
    s.mean = mean_;
    s.variance = n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0;
    s.std_error = n_ > 0 ? std::sqrt(s.variance / static_cast<double>(n_)) : 0.0;
    s.half_width = sigmas * s.std_error;
    return s;
}

Summary summarize(std::span<const double> xs, double sigmas) {
    Running r;
    for (double x : xs) {
        r.add(x);
    }
    return r.summary(sigmas);
}

bool within_sigma(double observed, double expected, double std_error, double sigmas, double floor) {
    return std::abs(observed - expected) <= sigmas * std::max(std_error, floor);
}

double binomial_std_error(double p, std::uint64_t n) {
    if (n == 0) {
        throw InvalidParamsError("no trials");
    }
    return std::sqrt(p * (1 - p) / static_cast<double>(n));
}

double chi_square_p_value(std::span<const std::uint64_t> counts, std::span<const double> probabilities) {
    if (counts.size() != probabilities.size()) {
        throw InvalidParamsError("counts and probabilities differ in length");
    }
    std::uint64_t total = 0;
    for (auto c : counts) {
        total += c;
    }
    double stat = 0;
    int cells = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        double expected = probabilities[i] * static_cast<double>(total);
        if (expected <= 0) {
            if (counts[i] != 0) {
                return 0.0;
            }
            continue;
        }
        double d = static_cast<double>(counts[i]) - expected;
        stat += d * d / expected;
        ++cells;
    }
    if (cells < 2) {
        return 1.0;
    }
    boost::math::chi_squared dist(cells - 1);
    return boost::math::cdf(boost::math::complement(dist, stat));
}

}  // namespace pairsketch::stats
