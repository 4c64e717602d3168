#!/usr/bin/env python3
# Copyright 2026 The Campaign MPE Authors
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

"""Regenerates the bundled scenario files.

Probabilities are synthetic. Attack odds stay at or below 0.5 after all
improvements, which keeps the defence-advantage assumption satisfied for
any reinforcement odds.
"""

import json
import pathlib
import random

HERE = pathlib.Path(__file__).resolve().parent
SCHEMA = "campaign-mpe/1"


def synthetic(name, axis_sizes, commander_axes, seed, discount=0.9):
    rng = random.Random(seed)
    n = sum(axis_sizes)
    objectives = [
        {"id": o, "label": f"O{o + 1}", "loss": rng.choice([1.0, 1.5, 2.0, 2.5, 3.0])}
        for o in range(n)
    ]
    axes, start = [], 0
    for x, size in enumerate(axis_sizes):
        axes.append({"id": x, "objectives": list(range(start, start + size))})
        start += size
    commanders = [{"id": c, "axes": list(a)} for c, a in enumerate(commander_axes)]

    def draw(lo, hi):
        return round(rng.uniform(lo, hi), 3)

    model = {
        "initial_attack": {
            "player1": [draw(0.1, 0.3) for _ in range(n)],
            "player2": [draw(0.1, 0.3) for _ in range(n)],
        },
        "initial_reinforce": {
            "player1": [draw(0.2, 0.35) for _ in range(n)],
            "player2": [draw(0.2, 0.35) for _ in range(n)],
        },
        "improvements": [],
        "overrides": [],
    }
    # Support from up to two other objectives per target; at most two attack
    # boosts of 0.1 keep attack odds at or below 1 - 0.7 * 0.81 < 0.5.
    for target in range(n):
        for player in (1, 2):
            others = [o for o in range(n) if o != target]
            for _ in range(rng.randint(1, 2)):
                cond = sorted(rng.sample(others, rng.randint(1, min(2, len(others)))))
                model["improvements"].append({
                    "player": player, "target": target, "kind": "attack",
                    "condition": cond, "boost": draw(0.02, 0.1)})
            cond = sorted(rng.sample(others, 1))
            model["improvements"].append({
                "player": player, "target": target, "kind": "reinforce",
                "condition": cond, "boost": draw(0.02, 0.1)})

    # Pure fronts halfway along every axis.
    state = []
    for size in axis_sizes:
        k = max(1, size // 2)
        state += ["1"] * k + ["2"] * (size - k)
    return {
        "schema_version": SCHEMA,
        "name": name,
        "discount": discount,
        "objectives": objectives,
        "axes": axes,
        "commanders": commanders,
        "probability_model": model,
        "initial_state": "".join(state),
    }


def fig1():
    sc = synthetic("six-objective example", [2, 2, 2], [[0], [1, 2]], seed=1)
    sc["initial_state"] = "221211"
    return sc


def counterexample():
    objectives = [{"id": o, "label": f"O{o + 1}", "loss": 1.0} for o in range(3)]
    overrides = []
    for state, player, objective in [
        ("112", 2, 0), ("112", 2, 1), ("112", 1, 2),
        ("212", 1, 0), ("212", 1, 2), ("212", 2, 1),
    ]:
        overrides.append({"state": state, "player": player, "objective": objective, "alpha": 1.0})
    zeros = [0.0, 0.0, 0.0]
    return {
        "schema_version": SCHEMA,
        "name": "non-isotone counterexample",
        "discount": 0.9,
        "objectives": objectives,
        "axes": [{"id": x, "objectives": [x]} for x in range(3)],
        "commanders": [{"id": c, "axes": [c]} for c in range(3)],
        "probability_model": {
            "initial_attack": {"player1": zeros, "player2": zeros},
            "initial_reinforce": {"player1": zeros, "player2": zeros},
            "improvements": [],
            "overrides": overrides,
        },
        "initial_state": "112",
    }


SCENARIOS = {
    "campaign06.json": lambda: synthetic("6 objectives", [2, 4], [[0, 1]], seed=6),
    "campaign10.json": lambda: synthetic("10 objectives", [2, 4, 4], [[0], [1, 2]], seed=10),
    "campaign14.json": lambda: synthetic("14 objectives", [3, 3, 4, 4], [[0, 1], [2], [3]], seed=14),
    "campaign18.json": lambda: synthetic("18 objectives", [4, 4, 5, 5], [[0, 1], [2], [3]], seed=18),
    "campaign22.json": lambda: synthetic("22 objectives", [4, 4, 4, 5, 5], [[0], [1, 2], [3, 4]],
                                         seed=22),
    "fig1.json": fig1,
    "counterexample.json": counterexample,
}


def main():
    for name, build in SCENARIOS.items():
        text = json.dumps(build(), indent=2, sort_keys=True) + "\n"
        (HERE / name).write_text(text)
        print("wrote", name)


if __name__ == "__main__":
    main()
