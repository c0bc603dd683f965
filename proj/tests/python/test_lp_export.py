# Copyright 2026 The Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Solves exported pattern ILPs with an external MILP solver."""

import random
import re

import pytest

ca = pytest.importorskip("couponalloc")
np = pytest.importorskip("numpy")
optimize = pytest.importorskip("scipy.optimize")

_TERM = re.compile(r"\+\s*([-0-9.eE+]+)\s+(w_\d+_\d+)")
_VAR = re.compile(r"w_\d+_\d+")


def parse_lp(text):
    objective, budget, convex, binaries = {}, {}, [], []
    sense, rhs, section = None, None, None
    for line in text.splitlines():
        if line in ("Maximize", "Subject To", "Binaries", "End"):
            section = line
            continue
        if line.startswith("\\"):
            continue
        if section == "Maximize":
            m = _TERM.search(line)
            if m:
                objective[m.group(2)] = float(m.group(1))
        elif section == "Subject To":
            if "convex_" in line:
                convex.append(_VAR.findall(line))
            elif _TERM.search(line):
                m = _TERM.search(line)
                budget[m.group(2)] = float(m.group(1))
            elif "=" in line:
                sense, value = line.split()
                rhs = float(value)
        elif section == "Binaries" and line.strip():
            binaries.append(line.strip())
    return objective, budget, sense, rhs, convex, binaries


def solve_with_milp(text):
    objective, budget, sense, rhs, convex, binaries = parse_lp(text)
    names = binaries
    index = {v: i for i, v in enumerate(names)}
    c = -np.array([objective[v] for v in names])
    rows, lo, hi = [], [], []
    row = np.zeros(len(names))
    for v, coef in budget.items():
        row[index[v]] = coef
    rows.append(row)
    lo.append(rhs if sense == "=" else -np.inf)
    hi.append(rhs)
    for group in convex:
        row = np.zeros(len(names))
        for v in group:
            row[index[v]] = 1.0
        rows.append(row)
        lo.append(1.0)
        hi.append(1.0)
    res = optimize.milp(
        c,
        constraints=optimize.LinearConstraint(np.array(rows), lo, hi),
        integrality=np.ones(len(names)),
        bounds=optimize.Bounds(0, 1),
    )
    assert res.success
    return -res.fun


def random_dataset(rng, providers, max_items):
    records, next_id = [], 0
    for s in range(providers):
        for _ in range(rng.randint(1, max_items)):
            f0 = rng.uniform(0.0, 0.6)
            records.append(ca.ItemRecord(next_id, s, [0.0], f0, rng.uniform(f0, 1.0)))
            next_id += 1
    return ca.validate_dataset(records)


def test_smallest_lp():
    d = ca.validate_dataset([ca.ItemRecord(0, 0, [0.0], 0.1, 0.5)])
    curves = ca.build_pattern_curves(d, ca.score_oracle(d), [1])
    objective, budget, sense, rhs, convex, binaries = parse_lp(ca.write_ilp(curves, 1))
    assert binaries == ["w_0_0", "w_0_1"]
    assert len(convex) == 1 and sense == "=" and rhs == 1
    assert objective["w_0_1"] == pytest.approx(0.4, abs=1e-12)


@pytest.mark.parametrize("seed", range(12))
def test_milp_optimum_matches_dp(seed):
    rng = random.Random(seed)
    d = random_dataset(rng, providers=rng.randint(2, 12), max_items=6)
    scores = ca.score_oracle(d)
    ordering = ca.OrderingPolicy.PI_DESC if seed % 2 else ca.OrderingPolicy.SURVIVAL_RATIO
    curves = ca.build_pattern_curves(d, scores, [1] * d.num_items, ordering)
    n = rng.randint(0, d.num_items)
    mode = ca.BudgetMode.EXACT if seed % 3 else ca.BudgetMode.AT_MOST
    _, dp = ca.solve_mckp(curves, n, mode)
    assert solve_with_milp(ca.write_ilp(curves, n, mode)) == pytest.approx(dp, abs=1e-9)
