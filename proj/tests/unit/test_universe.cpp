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

#include <random>
#include <set>

#include "doctest.h"
#include "pairsketch/errors.hpp"
#include "pairsketch/member_set.hpp"
#include "pairsketch/permutation.hpp"
#include "pairsketch/rng.hpp"
#include "pairsketch/universe.hpp"

using namespace pairsketch;

TEST_SUITE("universe") {
    TEST_CASE("encode follows the mixed-radix order") {
        UniverseSpec four("four", {Component{"x", {Factor::range("x", 1, 4)}}});
        CHECK(four.encode(0, {3}).index == 2);

        UniverseSpec ht("ht", {Component{"v", {Factor::range("v", 0, 2), Factor::alphabet("q", {"H", "T"})}}});
        CHECK(ht.encode(0, {1, ht.label(0, 1, "T")}).index == 3);

        std::int64_t n = 2, m = 1;
        UniverseSpec stacks(
            "stacks",
            {Component{"w", {Factor::range("w", 0, n), Factor::range("j", 1, 2 * n), Factor::alphabet("q", {"H", "T"})}},
             Component{"S", {Factor::range("i", 0, 4 * m)}}});
        CHECK(stacks.cardinality() == 20);
        CHECK(stacks.encode(1, {0}).index == 16);
    }

    TEST_CASE("decode inverts encode") {
        UniverseSpec u(
            "u",
            {Component{"a", {Factor::range("v", 3, 5), Factor::alphabet("q", {"A", "B", "C"})}},
             Component{"b", {Factor::range("i", -2, 7)}}});
        for (std::uint64_t i = 0; i < u.cardinality(); ++i) {
            CHECK(u.encode(u.decode(ElementId{i})).index == i);
        }
        CHECK_THROWS_AS(u.encode(0, {8, 0}), EncodingError);
        CHECK_THROWS_AS(u.encode(0, {3}), EncodingError);
        CHECK_THROWS_AS(u.decode(ElementId{u.cardinality()}), EncodingError);
        CHECK(u.format(u.encode(0, {4, 2})) == "a(4,C)");
    }

    TEST_CASE("blocks group elements that differ only in the last coordinate") {
        UniverseSpec u(
            "u",
            {Component{"s", {Factor::range("i", 0, 5)}},
             Component{"w", {Factor::range("v", 0, 3), Factor::range("p", 0, 4)}}});
        CHECK(u.block_count() == 1 + 3);
        auto b = u.block_of(u.encode(1, {2, 3}));
        CHECK(b.block == 3);
        CHECK(b.offset == 3);
        CHECK(u.block_start(3).index == 5 + 8);
        CHECK(u.block_size(0) == 5);
    }

    TEST_CASE("member set agrees with std::set under random operations") {
        auto u = std::make_shared<const UniverseSpec>(UniverseSpec(
            "u",
            {Component{"s", {Factor::range("i", 0, 40)}},
             Component{"w", {Factor::range("v", 0, 3), Factor::range("p", 0, 30)}}}));
        MemberSet ms(u);
        std::set<std::uint64_t> ref;
        CounterRng rng(11);
        std::uint64_t n = u->cardinality();
        for (int step = 0; step < 5000; ++step) {
            std::uint64_t kind = rng.below(5);
            std::uint64_t a = rng.below(n);
            if (kind == 0) {
                CHECK(ms.insert(ElementId{a}) == ref.insert(a).second);
            } else if (kind == 1) {
                CHECK(ms.erase(ElementId{a}) == (ref.erase(a) == 1));
            } else if (kind == 2) {
                std::uint64_t len = rng.below(std::min<std::uint64_t>(n - a, 12) + 1);
                ms.insert_range(ElementId{a}, len);
                for (std::uint64_t x = a; x < a + len; ++x) {
                    ref.insert(x);
                }
            } else if (kind == 3) {
                std::uint64_t len = rng.below(std::min<std::uint64_t>(n - a, 12) + 1);
                std::vector<ElementRange> out;
                ms.extract_range(ElementId{a}, len, out);
                std::set<std::uint64_t> got;
                for (auto r : out) {
                    for (std::uint64_t x = 0; x < r.count; ++x) {
                        got.insert(r.first.index + x);
                    }
                }
                std::set<std::uint64_t> want;
                for (std::uint64_t x = a; x < a + len; ++x) {
                    if (ref.erase(x)) {
                        want.insert(x);
                    }
                }
                CHECK(got == want);
            } else {
                std::uint64_t block = 1 + rng.below(3);
                std::uint64_t lo = rng.below(30);
                std::uint64_t width = 1 + rng.below(30 - lo);
                std::uint64_t shift = rng.below(3 * width);
                ms.rotate_window(block, lo, width, shift);
                std::uint64_t base = u->block_start(block).index + lo;
                std::set<std::uint64_t> next;
                for (auto x : ref) {
                    if (x >= base && x < base + width) {
                        next.insert(base + (x - base + shift) % width);
                    } else {
                        next.insert(x);
                    }
                }
                ref = next;
            }
            REQUIRE(ms.size() == ref.size());
        }
        std::vector<ElementId> els = ms.elements();
        REQUIRE(els.size() == ref.size());
        auto it = ref.begin();
        for (auto x : els) {
            CHECK(x.index == *it++);
        }
    }

    TEST_CASE("permutation validation rejects overlapping pieces") {
        UniverseSpec u(
            "u",
            {Component{"w", {Factor::range("v", 0, 3), Factor::range("r", 0, 2), Factor::range("p", 0, 6)}}});
        PermutationSpec overlap;
        overlap.swap_blocks(ElementId{0}, ElementId{2}, 3);
        CHECK_THROWS_AS(overlap.validate(u), PermutationError);

        PermutationSpec shared;
        shared.swap(ElementId{0}, ElementId{5}).swap(ElementId{5}, ElementId{7});
        CHECK_THROWS_AS(shared.validate(u), PermutationError);

        PermutationSpec lines;
        lines.rotate({0, 2, {1, 0, 0}, 0, 4, 1}).rotate({0, 2, {1, 0, 0}, 3, 3, 1});
        CHECK_THROWS_AS(lines.validate(u), PermutationError);

        PermutationSpec crossing;
        crossing.rotate({0, 2, {1, 1, 0}, 0, 6, 1}).rotate({0, 0, {0, 1, 2}, 0, 3, 1});
        CHECK_THROWS_AS(crossing.validate(u), PermutationError);

        PermutationSpec ok;
        ok.rotate({0, 2, {1, 1, 0}, 0, 6, 1}).rotate({0, 0, {0, 0, 2}, 0, 3, 1}).swap(ElementId{0}, ElementId{35});
        CHECK_NOTHROW(ok.validate(u));
        CHECK(ok.materialize(u).size() == u.cardinality());

        PermutationSpec window;
        window.rotate({0, 2, {0, 0, 0}, 4, 3, 1});
        CHECK_THROWS_AS(window.validate(u), PermutationError);
    }

    TEST_CASE("rotation moves only its line") {
        UniverseSpec u("u", {Component{"w", {Factor::range("v", 0, 2), Factor::range("p", 1, 5)}}});
        PermutationSpec pi;
        pi.rotate({0, 1, {1, 0}, 1, 3, 1});
        CHECK(pi.apply(u, u.encode(0, {1, 1})) == u.encode(0, {1, 2}));
        CHECK(pi.apply(u, u.encode(0, {1, 3})) == u.encode(0, {1, 1}));
        CHECK(pi.apply(u, u.encode(0, {1, 4})) == u.encode(0, {1, 4}));
        CHECK(pi.apply(u, u.encode(0, {0, 1})) == u.encode(0, {0, 1}));
    }
}
