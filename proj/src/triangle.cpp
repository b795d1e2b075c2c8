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

#include "pairsketch/triangle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>

#include "pairsketch/errors.hpp"
#include "pairsketch/parallel.hpp"

namespace pairsketch::triangle {

namespace {

std::uint64_t pair_key(std::uint32_t a, std::uint32_t b) {
    if (a > b) {
        std::swap(a, b);
    }
    return (std::uint64_t{a} << 32) | b;
}

}  // namespace

TriangleOracleReport oracle_t_split(const EdgeStream &stream, std::uint64_t k) {
    if (k == 0) {
        throw InvalidParamsError("k must be at least 1");
    }
    stream.validate();
    std::map<std::uint64_t, std::size_t> arrival;
    std::vector<std::vector<std::size_t>> incident(stream.n);
    std::vector<std::set<std::uint32_t>> adj(stream.n);
    for (std::size_t i = 0; i < stream.edges.size(); ++i) {
        const Edge &e = stream.edges[i];
        arrival[pair_key(e.u, e.v)] = i;
        incident[e.u].push_back(i);
        incident[e.v].push_back(i);
        adj[e.u].insert(e.v);
        adj[e.v].insert(e.u);
    }
    auto between = [&](std::uint32_t x, std::size_t lo, std::size_t hi) {
        const auto &list = incident[x];
        auto a = std::upper_bound(list.begin(), list.end(), lo);
        auto b = std::lower_bound(list.begin(), list.end(), hi);
        return static_cast<std::uint64_t>(b > a ? b - a : 0);
    };
    Rational keep(static_cast<long long>(k - 1), static_cast<long long>(k));
    TriangleOracleReport report;
    for (std::uint32_t a = 0; a < stream.n; ++a) {
        for (std::uint32_t b : adj[a]) {
            if (b <= a) {
                continue;
            }
            for (std::uint32_t c : adj[b]) {
                if (c <= b || !adj[a].count(c)) {
                    continue;
                }
                std::array<std::pair<std::size_t, std::pair<std::uint32_t, std::uint32_t>>, 3> es{{
                    {arrival[pair_key(a, b)], {a, b}},
                    {arrival[pair_key(a, c)], {a, c}},
                    {arrival[pair_key(b, c)], {b, c}},
                }};
                std::sort(es.begin(), es.end());
                auto [x1, y1] = es[0].second;
                auto [x2, y2] = es[1].second;
                std::uint32_t u = (x1 == x2 || x1 == y2) ? x1 : y1;
                std::uint32_t v = x1 == u ? y1 : x1;
                std::uint32_t w = x2 == u ? y2 : x2;
                TriangleRecord rec;
                rec.u = u;
                rec.v = v;
                rec.w = w;
                rec.degb_uvw = between(v, es[0].first, es[2].first);
                rec.degb_uwv = between(w, es[1].first, es[2].first);
                auto e = static_cast<unsigned>(rec.degb_uvw + rec.degb_uwv);
                rec.t_less = Rational(boost::multiprecision::pow(numerator(keep), e), boost::multiprecision::pow(denominator(keep), e));
                report.T_less += rec.t_less;
                report.per_triangle.push_back(rec);
            }
        }
    }
    report.T = report.per_triangle.size();
    report.T_greater = Rational(report.T) - report.T_less;
    return report;
}

void TriangleParams::validate() const {
    if (k < 1) {
        throw InvalidParamsError("k must be at least 1");
    }
    if (!(eps > 0 && eps <= 1) || !(delta > 0 && delta <= 1)) {
        throw InvalidParamsError("eps and delta must lie in (0, 1]");
    }
    if (!(T_prime > 0) || !(Delta_E > 0)) {
        throw InvalidParamsError("T' and Delta_E must be positive");
    }
}

EstimatePlan plan_estimate(const TriangleParams &params, std::uint64_t m) {
    params.validate();
    EstimatePlan plan;
    plan.copies = params.copies;
    if (plan.copies == 0) {
        // Var <= (k m)^2 per run; Chebyshev at eps T' with failure 1/3.
        double ratio = static_cast<double>(params.k) * static_cast<double>(m) / (params.T_prime * params.eps);
        plan.copies = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(3 * ratio * ratio)));
    }
    plan.groups = params.groups;
    if (plan.groups == 0) {
        // Hoeffding: P[median fails] <= exp(-g/18).
        auto g = static_cast<std::uint64_t>(std::ceil(18 * std::log(1 / params.delta)));
        plan.groups = std::max<std::uint64_t>(1, g | 1);
    }
    return plan;
}

std::uint64_t choose_k(double T_prime, std::uint64_t m, double Delta_E) {
    if (!(T_prime > 0) || !(Delta_E > 0) || m == 0) {
        throw InvalidParamsError("choose_k needs positive inputs");
    }
    double k = std::pow(T_prime, 0.4) * std::pow(Delta_E, 0.4) / std::pow(static_cast<double>(m), 0.2);
    return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::llround(k)));
}

UniversePtr make_universe(std::uint32_t n, std::uint64_t m) {
    if (n == 0) {
        throw InvalidParamsError("n must be positive");
    }
    std::vector<Component> parts{
        Component{"P", {Factor::range("w", 0, n), Factor::range("u", 0, n)}},
    };
    if (m > 0) {
        parts.push_back(Component{"S", {Factor::range("i", 1, 2 * m)}});
    }
    return std::make_shared<const UniverseSpec>(UniverseSpec("triangle", std::move(parts)));
}

std::vector<ElementRange> initial_members(std::uint32_t n, std::uint64_t m) {
    return {ElementRange{scratch_element(n, 1), 2 * m}};
}

std::int64_t run_single(const EdgeStream &stream, std::uint64_t k, std::uint64_t seed) {
    if (k == 0) {
        throw InvalidParamsError("k must be at least 1");
    }
    if (stream.m() == 0) {
        return 0;
    }
    auto universe = make_universe(stream.n, stream.m());
    auto initial = initial_members(stream.n, stream.m());
    auto sketch = SketchHandle::create(universe, std::span<const ElementRange>(initial), derive_seed(seed, 0));
    CounterRng classical(derive_seed(seed, 1));
    return run_on(sketch, stream, k, classical);
}

double estimate(const EdgeStream &stream, const TriangleParams &params, std::uint64_t seed, unsigned threads) {
    EstimatePlan plan = plan_estimate(params, stream.m());
    if (stream.m() == 0) {
        return 0;
    }
    auto outputs = run_trials<std::int64_t>(plan.copies * plan.groups, threads, [&](std::uint64_t i) {
        return run_single(stream, params.k, derive_seed(seed, i));
    });
    std::vector<double> means;
    for (std::uint64_t g = 0; g < plan.groups; ++g) {
        double sum = 0;
        for (std::uint64_t c = 0; c < plan.copies; ++c) {
            sum += static_cast<double>(outputs[g * plan.copies + c]);
        }
        means.push_back(sum / static_cast<double>(plan.copies));
    }
    std::sort(means.begin(), means.end());
    std::size_t mid = means.size() / 2;
    return means.size() % 2 ? means[mid] : (means[mid - 1] + means[mid]) / 2;
}

}  // namespace pairsketch::triangle
