# Copyright 2026 The pairsketch Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.


import json

import pytest

import pairsketch as ps


def test_worked_examples_both_backends():
    for backend in ("stochastic", "quantum"):
        one = ps.enumerate_distribution(5, [2, 3, 4], [ps.ScriptOp.query_one(4)], backend)
        assert one["I"] == pytest.approx(1 / 3, abs=1e-12)
        assert one["B"] == pytest.approx(2 / 3, abs=1e-12)
        both = ps.enumerate_distribution(5, [2, 3], [ps.ScriptOp.query_pair(2, 3)], backend)
        assert both == pytest.approx({"+": 1.0}, abs=1e-12)
        one_side = ps.enumerate_distribution(5, [1, 2, 4], [ps.ScriptOp.query_pair(2, 3)], backend)
        assert one_side == pytest.approx({"+": 1 / 6, "-": 1 / 6, "B": 2 / 3}, abs=1e-12)


def test_backends_agree_after_an_update():
    pi = ps.Permutation().swap(0, 3).rotate_flat(4, 3, 1)
    script = [ps.ScriptOp.update(pi), ps.ScriptOp.query_one(3), ps.ScriptOp.query_pair(0, 5)]
    a = ps.enumerate_distribution(8, [0, 1, 5], script, "stochastic")
    b = ps.enumerate_distribution(8, [0, 1, 5], script, "quantum")
    assert ps.total_variation(a, b) < 1e-9
    assert sum(a.values()) == pytest.approx(1.0)
    with pytest.raises(Exception):
        ps.enumerate_distribution(8, [0], script, "classical")


def test_sketch_is_destroyed_by_a_result():
    s = ps.Sketch(4, [1], seed=3)
    assert s.alive
    assert s.query_one(1) == ps.Outcome.IN
    assert not s.alive
    with pytest.raises(Exception):
        s.query_one(1)


def test_failed_query_deletes_the_element():
    for seed in range(50):
        s = ps.Sketch(4, [0, 1], seed=seed)
        assert s.query_one(3) == ps.Outcome.BOT
        assert s.debug_members() == [0, 1]
        if s.query_one(0) == ps.Outcome.BOT:
            assert s.debug_members() == [1]
            return
    pytest.fail("query_one(0) never missed")


def test_oracles():
    k3 = [(0, 1), (0, 2), (1, 2)]
    rep = ps.triangle.oracle(3, k3, 1)
    assert rep["T"] == 1 and rep["T_less_exact"] == "1"
    assert ps.heavy.oracle(3, ps.gen.star(3), 1, 1) == 2
    assert ps.snapshot.grid(12, 0.5) == [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12]
    law = ps.bhm.exact_law(2, 0.5, 1, 4)
    assert law["p1"] == pytest.approx(0.5)
    assert law["p0"] == pytest.approx(0.25)


def test_snapshot_expected_is_bounded_by_restricted():
    edges = ps.gen.gnm(12, 30, 1, True)
    rep = ps.snapshot.expected(12, edges, 2, 0.5, [-1.0, 0.0], 0, 0, 7)
    for row_e, row_r in zip(rep["expected"], rep["restricted"]):
        for e, r in zip(row_e, row_r):
            assert e <= r
    assert rep["expected"] == [[0, 0], [3, 1]]


def test_run_experiment_is_deterministic():
    config = json.dumps({
        "algorithm": "heavy",
        "instance": {"generator": "star", "n": 5, "directed": True},
        "params": {"d_H": 2, "d_T": 1},
        "trials": 400,
        "seed": 3,
    })
    a = ps.run_experiment(config)
    assert a == ps.run_experiment(config)
    report = json.loads(a)
    assert report["schema_version"] == 1
    assert report["oracle"]["heavy_edges"] == 3
    assert {v["name"] for v in report["verdicts"]} == {"mean"}
