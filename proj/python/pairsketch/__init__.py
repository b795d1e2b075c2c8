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

"""Pair-sampling sketch and the streaming estimators built on it."""

from ._core import (
    Outcome,
    Permutation,
    Sketch,
    ScriptOp,
    enumerate_distribution,
    total_variation,
    bhm,
    triangle,
    heavy,
    snapshot,
    gen,
    run_experiment,
)

__all__ = [
    "Outcome",
    "Permutation",
    "Sketch",
    "ScriptOp",
    "enumerate_distribution",
    "total_variation",
    "bhm",
    "triangle",
    "heavy",
    "snapshot",
    "gen",
    "run_experiment",
]
