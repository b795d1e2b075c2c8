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

#include <cmath>

#include "doctest.h"
#include "pairsketch/errors.hpp"
#include "pairsketch/qsim.hpp"
#include "test_util.hpp"

using namespace pairsketch;
using namespace pairsketch::qsim;
using pairsketch::testing::e;
using pairsketch::testing::one_based;

namespace {

std::vector<ElementId> els(std::initializer_list<std::uint64_t> labels) {
    std::vector<ElementId> out;
    for (auto v : labels) {
        out.push_back(e(v));
    }
    return out;
}

void check_uniform_on(const StateVector &psi, const std::vector<ElementId> &support) {
    double a = 1 / std::sqrt(static_cast<double>(support.size()));
    auto amps = psi.amplitudes();
    for (std::uint64_t i = 0; i < amps.size(); ++i) {
        bool in = std::find(support.begin(), support.end(), ElementId{i}) != support.end();
        CHECK(std::abs(amps[i] - Amplitude(in ? a : 0.0)) < 1e-9);
    }
}

using Matrix = std::vector<std::vector<Amplitude>>;

Matrix projector_matrix(std::size_t dim, Projector p, ElementId x, ElementId y) {
    Matrix m(dim, std::vector<Amplitude>(dim));
    for (std::size_t c = 0; c < dim; ++c) {
        std::vector<Amplitude> v(dim);
        v[c] = 1;
        apply_projector(v, p, x, y);
        for (std::size_t r = 0; r < dim; ++r) {
            m[r][c] = v[r];
        }
    }
    return m;
}

Matrix mul(const Matrix &a, const Matrix &b) {
    std::size_t n = a.size();
    Matrix c(n, std::vector<Amplitude>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            for (std::size_t j = 0; j < n; ++j) {
                c[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    return c;
}

double max_diff(const Matrix &a, const Matrix &b) {
    double d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < a.size(); ++j) {
            d = std::max(d, std::abs(a[i][j] - b[i][j]));
        }
    }
    return d;
}

}  // namespace

TEST_SUITE("qsim") {
    TEST_CASE("qs_create gives the uniform superposition") {
        auto u = one_based(4);
        auto psi = qs_create(u, els({1, 2, 3}));
        check_uniform_on(psi, els({1, 2, 3}));
        check_uniform_on(qs_create(u, els({2})), els({2}));
        auto full = qs_create(u, els({1, 2, 3, 4}));
        CHECK(full.norm() == doctest::Approx(1.0));
        CHECK_THROWS_AS(qs_create(u, std::vector<ElementId>{}), InvalidInitError);
    }

    TEST_CASE("qs_apply_permutation") {
        auto u = one_based(4);
        auto psi = qs_create(u, els({1, 2, 3}));
        PermutationSpec cycle;
        cycle.rotate({0, 0, {0}, 1, 4, 1});
        qs_apply_permutation(psi, cycle);
        check_uniform_on(psi, els({2, 3, 4}));
        qs_apply_permutation(psi, PermutationSpec{});
        check_uniform_on(psi, els({2, 3, 4}));

        auto a = qs_create(one_based(6), els({1, 3, 5}));
        auto b = qs_create(one_based(6), els({1, 3, 5}));
        PermutationSpec s1, s2;
        s1.swap(e(1), e(2));
        s2.swap(e(3), e(6));
        qs_apply_permutation(a, s1);
        qs_apply_permutation(a, s2);
        qs_apply_permutation(b, s2);
        qs_apply_permutation(b, s1);
        for (std::uint64_t i = 0; i < 6; ++i) {
            CHECK(a.amplitude(ElementId{i}) == b.amplitude(ElementId{i}));
        }
        PermutationSpec bad;
        bad.swap(e(1), e(2)).swap(e(2), e(3));
        CHECK_THROWS_AS(qs_apply_permutation(a, bad), PermutationError);
    }

    TEST_CASE("single-element measurement") {
        auto u = one_based(4);
        CounterRng rng(3);
        auto psi = qs_create(u, els({2, 3, 4}));
        CHECK(qs_measure_one(psi, e(1), rng) == QueryOutcome::Bot);
        check_uniform_on(psi, els({2, 3, 4}));
        CHECK(projector_weight(psi.amplitudes(), Projector::OneIn, e(4)) == doctest::Approx(1.0 / 3));
        for (int t = 0; t < 50; ++t) {
            auto p = qs_create(u, els({2, 3, 4}));
            if (qs_measure_one(p, e(4), rng) == QueryOutcome::Bot) {
                check_uniform_on(p, els({2, 3}));
            }
        }
        auto single = qs_create(u, els({3}));
        CHECK(qs_measure_one(single, e(3), rng) == QueryOutcome::In);
    }

    TEST_CASE("pair measurement") {
        auto u = one_based(4);
        CounterRng rng(4);
        auto both = qs_create(u, els({2, 3}));
        CHECK(qs_measure_pair(both, e(2), e(3), rng) == QueryOutcome::Plus);
        auto psi = qs_create(u, els({1, 2, 4}));
        CHECK(projector_weight(psi.amplitudes(), Projector::PairPlus, e(2), e(3)) == doctest::Approx(1.0 / 6));
        CHECK(projector_weight(psi.amplitudes(), Projector::PairMinus, e(2), e(3)) == doctest::Approx(1.0 / 6));
        for (int t = 0; t < 50; ++t) {
            auto p = qs_create(u, els({1, 2, 4}));
            if (qs_measure_pair(p, e(2), e(3), rng) == QueryOutcome::Bot) {
                check_uniform_on(p, els({1, 4}));
            }
        }
        auto miss = qs_create(u, els({1, 4}));
        CHECK(qs_measure_pair(miss, e(2), e(3), rng) == QueryOutcome::Bot);
        check_uniform_on(miss, els({1, 4}));
        CHECK_THROWS_AS(qs_measure_pair(miss, e(2), e(2), rng), InvalidQueryError);
    }

    TEST_CASE("projector algebra") {
        CounterRng rng(8);
        std::size_t dim = 8;
        Matrix id(dim, std::vector<Amplitude>(dim));
        for (std::size_t i = 0; i < dim; ++i) {
            id[i][i] = 1;
        }
        for (int t = 0; t < 10; ++t) {
            ElementId x{rng.below(dim)};
            ElementId y{(x.index + 1 + rng.below(dim - 1)) % dim};
            auto in = projector_matrix(dim, Projector::OneIn, x, y);
            auto out = projector_matrix(dim, Projector::OneBot, x, y);
            auto plus = projector_matrix(dim, Projector::PairPlus, x, y);
            auto minus = projector_matrix(dim, Projector::PairMinus, x, y);
            auto bot = projector_matrix(dim, Projector::PairBot, x, y);
            for (const auto *p : {&in, &out, &plus, &minus, &bot}) {
                CHECK(max_diff(mul(*p, *p), *p) < 1e-12);
            }
            Matrix zero(dim, std::vector<Amplitude>(dim));
            CHECK(max_diff(mul(in, out), zero) < 1e-12);
            CHECK(max_diff(mul(plus, minus), zero) < 1e-12);
            CHECK(max_diff(mul(plus, bot), zero) < 1e-12);
            CHECK(max_diff(mul(minus, bot), zero) < 1e-12);
            Matrix sum1(dim, std::vector<Amplitude>(dim)), sum2 = sum1;
            for (std::size_t i = 0; i < dim; ++i) {
                for (std::size_t j = 0; j < dim; ++j) {
                    sum1[i][j] = in[i][j] + out[i][j];
                    sum2[i][j] = plus[i][j] + minus[i][j] + bot[i][j];
                }
            }
            CHECK(max_diff(sum1, id) < 1e-12);
            CHECK(max_diff(sum2, id) < 1e-12);
        }
    }

    TEST_CASE("enumerate_distribution examples on both backends") {
        const auto &u = *one_based(4);
        for (Backend b : {Backend::Stochastic, Backend::Quantum}) {
            auto d = enumerate_distribution(u, els({1, 2, 3, 4}), {ScriptOp::query_pair(e(1), e(2))}, b);
            CHECK(d.probability({QueryOutcome::Plus}) == doctest::Approx(0.5).epsilon(1e-12));
            CHECK(d.probability({QueryOutcome::Bot}) == doctest::Approx(0.5).epsilon(1e-12));
            CHECK(d.entries.size() == 2);

            auto empty = enumerate_distribution(u, els({1, 2}), {}, b);
            CHECK(empty.entries.size() == 1);
            CHECK(empty.probability({}) == 1.0);

            auto sixth = enumerate_distribution(u, els({1, 2, 4}), {ScriptOp::query_pair(e(2), e(3))}, b);
            CHECK(std::abs(sixth.probability({QueryOutcome::Plus}) - 1.0 / 6) < 1e-12);
            CHECK(std::abs(sixth.probability({QueryOutcome::Minus}) - 1.0 / 6) < 1e-12);
            CHECK(std::abs(sixth.probability({QueryOutcome::Bot}) - 2.0 / 3) < 1e-12);
        }
        EnumerationLimits tight{1 << 16, 1};
        CHECK_THROWS_AS(
            enumerate_distribution(
                u, els({1}), {ScriptOp::query_one(e(1)), ScriptOp::query_one(e(2))}, Backend::Quantum, tight),
            TooLargeError);
        auto big = UniverseSpec::flat((1 << 16) + 1);
        CHECK_THROWS_AS(enumerate_distribution(big, ids({0}), {}, Backend::Stochastic), TooLargeError);
    }

    TEST_CASE("quantum sketch keeps unit norm and uniform support") {
        auto u = one_based(8);
        QuantumSketch q(u, els({1, 2, 3, 5, 8}), 12);
        PermutationSpec pi;
        pi.rotate({0, 0, {0}, 2, 5, 2});
        q.update(pi);
        CHECK(std::abs(q.state().norm() - 1) < 1e-9);
        if (q.query_pair(e(1), e(4)) == QueryOutcome::Bot) {
            CHECK(std::abs(q.state().norm() - 1) < 1e-9);
            auto amps = q.state().amplitudes();
            double a = 0;
            for (auto v : amps) {
                if (std::abs(v) > 1e-12) {
                    if (a == 0) {
                        a = std::abs(v);
                    }
                    CHECK(std::abs(std::abs(v) - a) < 1e-9);
                }
            }
            CHECK(std::abs(amps[0]) < 1e-12);
        }
    }
}
