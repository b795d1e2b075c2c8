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


#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "pairsketch/bhm.hpp"
#include "pairsketch/errors.hpp"
#include "pairsketch/graph_io.hpp"
#include "test_util.hpp"

using namespace pairsketch;
using namespace pairsketch::bhm;
using pairsketch::testing::within_4sigma;

namespace {

std::vector<ElementId> sorted(std::vector<ElementId> v) {
    std::sort(v.begin(), v.end());
    return v;
}

}  // namespace

TEST_SUITE("bhm") {
    TEST_CASE("generated instances satisfy the promise") {
        for (auto order : {StreamOrder::Shuffle, StreamOrder::EdgesFirst, StreamOrder::BitsFirst}) {
            for (std::uint8_t b : {0, 1}) {
                auto inst = generate_instance(16, 0.25, b, 9, order);
                CHECK_NOTHROW(inst.validate());
                CHECK(inst.matching.size() == 4);
                CHECK(inst.stream.size() == 20);
            }
        }
        auto first = generate_instance(16, 0.25, 1, 9, StreamOrder::EdgesFirst);
        CHECK(first.stream.front().kind == BhmUpdate::Kind::EdgeLabel);
        CHECK_THROWS_AS(generate_instance(8, 0.3, 1, 1, StreamOrder::Shuffle), InvalidParamsError);
        CHECK_THROWS_AS(generate_instance(8, 0.75, 1, 1, StreamOrder::Shuffle), InvalidParamsError);
        CHECK_THROWS_AS(generate_instance(8, 0.25, 2, 1, StreamOrder::Shuffle), InvalidParamsError);
    }

    TEST_CASE("validation names the offending update") {
        auto inst = generate_instance(8, 0.25, 1, 3, StreamOrder::BitsFirst);
        auto broken = inst;
        for (auto &up : broken.stream) {
            if (up.kind == BhmUpdate::Kind::EdgeLabel) {
                up.bit ^= 1;
                break;
            }
        }
        CHECK_THROWS_WITH_AS(broken.validate(), doctest::Contains("promise violated"), ValidationError);
        broken = inst;
        broken.stream.push_back(broken.stream.front());
        CHECK_THROWS_WITH_AS(broken.validate(), doctest::Contains("duplicate bit"), ValidationError);
        broken = inst;
        broken.stream.pop_back();
        CHECK_THROWS_AS(broken.validate(), ValidationError);
        CHECK_THROWS_AS(instance_from_stream(8, 0.5, 1, inst.stream), ValidationError);
        CHECK_NOTHROW(instance_from_stream(8, 0.25, 1, inst.stream));
    }

    TEST_CASE("edge queries cover the four label pairs with parity a xor b") {
        auto qs = edge_queries(2, 5);
        std::set<std::pair<int, int>> ab;
        for (const auto &q : qs) {
            ab.insert({q.a, q.b});
            CHECK(q.x == element(2, q.a, q.a ^ q.b));
            CHECK(q.y == element(5, q.b, q.a ^ q.b));
        }
        CHECK(ab.size() == 4);
        auto u = make_universe(6);
        CHECK(element(3, 1, 0) == u->encode(0, {3, 1, 0}));
        CHECK(element(5, 1, 1) == u->encode(0, {5, 1, 1}));
    }

    TEST_CASE("exact law on the two-vertex instance") {
        // One edge: answer correct w.p. 1/2, wrong w.p. 1/4, Bot w.p. 1/4.
        for (auto order : {StreamOrder::BitsFirst, StreamOrder::EdgesFirst}) {
            for (std::uint8_t b : {0, 1}) {
                auto inst = generate_instance(2, 0.5, b, 4, order);
                for (bool quantum : {false, true}) {
                    OutputLaw law = exact_output_law(inst, quantum);
                    double correct = b ? law.p1 : law.p0, wrong = b ? law.p0 : law.p1;
                    CHECK(correct == doctest::Approx(0.5).epsilon(1e-12));
                    CHECK(wrong == doctest::Approx(0.25).epsilon(1e-12));
                    CHECK(law.bot == doctest::Approx(0.25).epsilon(1e-12));
                }
            }
        }
    }

    TEST_CASE("exact law backends agree on larger instances") {
        for (std::uint64_t seed = 0; seed < 4; ++seed) {
            auto inst = generate_instance(6, 1.0 / 3, static_cast<std::uint8_t>(seed & 1), seed, StreamOrder::Shuffle);
            OutputLaw s = exact_output_law(inst, false);
            OutputLaw q = exact_output_law(inst, true);
            CHECK(s.p0 == doctest::Approx(q.p0).epsilon(1e-9));
            CHECK(s.p1 == doctest::Approx(q.p1).epsilon(1e-9));
            CHECK(s.p0 + s.p1 + s.bot == doctest::Approx(1.0).epsilon(1e-12));
            double correct = inst.b ? s.p1 : s.p0, wrong = inst.b ? s.p0 : s.p1;
            CHECK(correct == doctest::Approx(inst.alpha).epsilon(1e-9));
            CHECK(wrong <= inst.alpha / 2 + 1e-9);
        }
    }

    TEST_CASE("surviving sketch holds the labelled vertex set") {
        for (std::uint64_t seed = 0; seed < 200; ++seed) {
            auto inst = generate_instance(10, 0.2, 1, seed, StreamOrder::Shuffle);
            auto universe = make_universe(inst.n);
            auto sketch = SketchHandle::create(universe, initial_members(*universe, inst.n), derive_seed(3, seed));
            bool ok = true;
            run_on(sketch, inst, [&](std::size_t i, const SketchHandle &s) {
                ok = ok && s.debug_members() == sorted(lemma_members(*universe, inst, i + 1));
            });
            CHECK(ok);
        }
    }

    TEST_CASE("single-run frequencies") {
        auto inst = generate_instance(16, 0.25, 0, 12, StreamOrder::Shuffle);
        std::uint64_t right = 0, wrong = 0, trials = 20000;
        for (std::uint64_t t = 0; t < trials; ++t) {
            auto r = run_single(inst, derive_seed(8, t));
            right += r && *r == inst.b;
            wrong += r && *r != inst.b;
        }
        CHECK(within_4sigma(right, trials, 0.25));
        double sigma = std::sqrt(0.125 * 0.875 / trials);
        CHECK(static_cast<double>(wrong) / trials <= 0.125 + 4 * sigma);
    }

    TEST_CASE("majority vote") {
        CHECK(default_copies(0.25) == 192);
        CHECK(default_copies(0.5) == 96);
        CHECK_THROWS_AS(default_copies(0), InvalidParamsError);
        auto inst = generate_instance(8, 0.5, 1, 2, StreamOrder::Shuffle);
        int wins = 0;
        for (std::uint64_t t = 0; t < 30; ++t) {
            wins += run_majority(inst, default_copies(0.5), derive_seed(4, t)) == inst.b;
        }
        CHECK(wins >= 25);
        CHECK_THROWS_AS(run_majority(inst, 0, 1), InvalidParamsError);
    }
}
