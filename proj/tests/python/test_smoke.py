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

import json

import pytest

ca = pytest.importorskip("couponalloc")


def _worked():
    items = [
        ca.ItemRecord(0, 0, [0.0], 0.1, 0.6),
        ca.ItemRecord(1, 0, [0.0], 0.1, 0.55),
        ca.ItemRecord(2, 1, [0.0], 0.1, 0.5),
    ]
    return ca.validate_dataset(items)


def test_worked_instance():
    d = _worked()
    scores = ca.score_oracle(d)
    curves = ca.build_pattern_curves(d, scores, [1, 1, 1])
    plan = ca.allocate_ser(d, curves, 2)
    assert plan.couponed == [0, 2]
    assert plan.objective_value == pytest.approx(0.85, abs=1e-12)
    greedy = ca.allocate_item_greedy(scores, [1, 1, 1], 2)
    assert greedy.couponed == [0, 1]


def test_ser_values():
    p = ca.ProviderPortfolio(0, [ca.ItemScore(0, 0.2, 0.6), ca.ItemScore(1, 0.5, 0.5)])
    assert ca.ser(p, [1, 0]) == pytest.approx(0.8)
    q = ca.ProviderPortfolio(0, [ca.ItemScore(0, 0.1, 0.5), ca.ItemScore(1, 0.1, 0.4)])
    assert ca.ser_delta(q, [1, 0]) == pytest.approx(0.36)
    assert ca.build_pattern_curve(q).deltas == pytest.approx([0.0, 0.36, 0.51])


def test_errors_carry_code_names():
    d = _worked()
    curves = ca.build_pattern_curves(d, ca.score_oracle(d), [1, 1, 1])
    with pytest.raises(ca.CouponAllocError, match="^InfeasibleBudget"):
        ca.allocate_ser(d, curves, 4)
    with pytest.raises(ca.CouponAllocError, match="^DuplicateItemId"):
        ca.validate_dataset([ca.ItemRecord(1, 0), ca.ItemRecord(1, 1)])
    with pytest.raises(ca.CouponAllocError, match="^ProbabilityOutOfRange"):
        ca.ItemScore(0, 0.1, 1.2)


def test_market_rct_and_evaluation():
    cfg = ca.MarketConfig()
    cfg.n_providers = 300
    cfg.seed = 5
    d = ca.generate_market(cfg)
    assert d == ca.generate_market(cfg)
    scores = ca.score_oracle(d, 0.1, 3)
    assert all(abs(s.pi - (s.f1 - s.f0)) == 0.0 for s in scores)
    eligible = ca.compute_eligibility(scores, 10)
    n = 50
    plans = [
        ca.allocate_random(d, eligible, n, seed=1),
        ca.allocate_item_greedy(scores, eligible, n),
        ca.allocate_nsw(scores, eligible, n),
        ca.allocate_provider_greedy(d, ca.build_pattern_curves(d, scores, eligible), n),
        ca.allocate_ser(d, ca.build_pattern_curves(d, scores, eligible), n),
    ]
    log = ca.run_rct(d, 0.5, 7)
    for plan in plans:
        assert plan.num_coupons == n
        assert all(eligible[i] for i, f in enumerate(plan.coupon) if f)
        report = ca.evaluate_strategy(d, log, plan)
        assert report["n_coupons"] == n
        assert report["uplift_successful_providers"] == pytest.approx(
            report["ser_lift"] * report["n_treated_providers"] / 2)
    assert ca.true_uplift_items(d, plans[1]) >= ca.true_uplift_items(d, plans[0])


def test_binned_scorer_and_csv_round_trip(tmp_path):
    cfg = ca.MarketConfig()
    cfg.n_providers = 120
    d = ca.generate_market(cfg)
    log = ca.run_rct(d, 0.5, 2)
    scorer = ca.fit_t_learner(log, d, 16)
    scores = ca.score_binned(scorer, d)
    assert all(0.0 <= s.f0 <= 1.0 and 0.0 <= s.f1 <= 1.0 for s in scores)
    ca.write_items_csv(d, tmp_path / "items.csv")
    assert ca.read_items_csv(tmp_path / "items.csv") == d
    ca.write_rct_csv(log, tmp_path / "rct.csv")
    back = ca.read_rct_csv(tmp_path / "rct.csv")
    assert back.assignment == log.assignment and back.sold == log.sold


def test_run_pipeline_is_deterministic(tmp_path):
    config = json.dumps({
        "market": {"n_providers": 60, "seed": 3},
        "strategies": [{"name": "i-greedy"}, {"name": "ser", "q": 10}],
        "allocation": {"budget_n": 20},
    })
    a = ca.run_pipeline(config, str(tmp_path / "a"))
    b = ca.run_pipeline(config, str(tmp_path / "b"))
    assert a == b
    assert [r["strategy"] for r in a] == ["i-greedy", "ser-q10"]
    assert (tmp_path / "a" / "report.csv").read_bytes() == (
        tmp_path / "b" / "report.csv").read_bytes()
