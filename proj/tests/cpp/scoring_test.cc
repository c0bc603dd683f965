// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "couponalloc/scoring.h"

#include <gtest/gtest.h>

#include <set>

#include "couponalloc/error.h"
#include "couponalloc/simulate.h"
#include "test_util.h"

namespace couponalloc {
namespace {

using testing::Item;
using testing::MakeDataset;

Dataset TwoFeatureDataset(int n) {
  std::vector<ItemRecord> records;
  for (int i = 0; i < n; ++i) {
    ItemRecord r;
    r.item_id = ItemId(i);
    r.provider_id = ProviderId(i % 3);
    r.features = {static_cast<double>(i % 7), static_cast<double>((i * 13) % 11)};
    r.true_p0 = 0.1;
    r.true_p1 = 0.4;
    records.push_back(r);
  }
  return ValidateDataset(std::move(records));
}

RctLog LogFor(const Dataset& d, std::vector<std::uint8_t> a,
              std::vector<std::uint8_t> y) {
  return RctLog{d.item_ids(), std::move(a), std::move(y)};
}

TEST(FitTLearnerTest, AllUntreatedIsEmptyArm) {
  const Dataset d = TwoFeatureDataset(10);
  const RctLog log = LogFor(d, std::vector<std::uint8_t>(10, 0),
                            std::vector<std::uint8_t>(10, 0));
  try {
    FitTLearner(log, d, 4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyArm);
  }
}

TEST(FitTLearnerTest, SingleBinLaplace) {
  const Dataset d = TwoFeatureDataset(20);
  std::vector<std::uint8_t> a(20, 0), y(20, 0);
  for (int i = 10; i < 20; ++i) a[i] = 1;
  y[0] = y[3] = y[7] = 1;        // control: 3 of 10 sold
  y[10] = y[11] = 1;             // treatment: 2 of 10 sold
  const auto scorer = FitTLearner(LogFor(d, a, y), d, 1);
  for (const auto& item : d.items()) {
    const RatePair r = scorer.Predict(item);
    EXPECT_DOUBLE_EQ(r.f0, 4.0 / 12.0);
    EXPECT_DOUBLE_EQ(r.f1, 3.0 / 12.0);
  }
}

TEST(FitTLearnerTest, DeterministicAndInRange) {
  MarketConfig cfg;
  cfg.n_providers = 200;
  cfg.seed = 4;
  const Dataset d = GenerateMarket(cfg);
  const RctLog log = RunRct(d, 0.5, 9);
  const auto s1 = FitTLearner(log, d, 32);
  const auto s2 = FitTLearner(log, d, 32);
  const auto a = ScoreItems(s1, d);
  const auto b = ScoreItems(s2, d);
  EXPECT_EQ(a, b);
  for (const auto& s : a) {
    EXPECT_GE(s.f0, 0.0);
    EXPECT_LE(s.f0, 1.0);
    EXPECT_GE(s.f1, 0.0);
    EXPECT_LE(s.f1, 1.0);
    EXPECT_EQ(s.pi, s.f1 - s.f0);
  }
}

TEST(FitTLearnerTest, ArmsAreSeparated) {
  MarketConfig cfg;
  cfg.n_providers = 150;
  cfg.seed = 5;
  const Dataset d = GenerateMarket(cfg);
  RctLog log = RunRct(d, 0.5, 3);
  const auto base = FitTLearner(log, d, 16);
  RctLog treated_flipped = log;
  RctLog control_flipped = log;
  for (std::size_t i = 0; i < log.size(); ++i) {
    if (log.assignment[i]) {
      treated_flipped.sold[i] ^= 1;
    } else {
      control_flipped.sold[i] ^= 1;
    }
  }
  const auto t = FitTLearner(treated_flipped, d, 16);
  const auto c = FitTLearner(control_flipped, d, 16);
  EXPECT_EQ(t.control().rate, base.control().rate);
  EXPECT_EQ(t.control().edges, base.control().edges);
  EXPECT_NE(t.treatment().rate, base.treatment().rate);
  EXPECT_EQ(c.treatment().rate, base.treatment().rate);
  EXPECT_NE(c.control().rate, base.control().rate);
}

TEST(FitTLearnerTest, CellRatesMatchTrainingCounts) {
  MarketConfig cfg;
  cfg.n_providers = 300;
  cfg.seed = 8;
  const Dataset d = GenerateMarket(cfg);
  const RctLog log = RunRct(d, 0.5, 21);
  const auto scorer = FitTLearner(log, d, 8);
  for (int arm = 0; arm < 2; ++arm) {
    const auto& surface = arm ? scorer.treatment() : scorer.control();
    ASSERT_EQ(surface.rate.size(), 8u);
    std::vector<double> hits(8, 0.0), trials(8, 0.0);
    for (std::size_t r = 0; r < log.size(); ++r) {
      if (log.assignment[r] != arm) continue;
      const auto& item = d.items()[*d.item_index(log.item_ids[r])];
      const std::size_t c = surface.Cell(item.features);
      trials[c] += 1.0;
      hits[c] += log.sold[r];
    }
    int populated = 0;
    for (int c = 0; c < 8; ++c) {
      populated += trials[c] > 0.0;
      EXPECT_DOUBLE_EQ(surface.rate[c], (hits[c] + 1.0) / (trials[c] + 2.0));
    }
    EXPECT_GT(populated, 1);
  }
}

TEST(FitTLearnerTest, BadInputs) {
  const Dataset d = TwoFeatureDataset(4);
  RctLog log = LogFor(d, {0, 1, 0, 1}, {0, 0, 1, 1});
  EXPECT_THROW(FitTLearner(log, d, 0), Error);
  log.item_ids[0] = ItemId(77);
  try {
    FitTLearner(log, d, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kPopulationMismatch);
  }
}

TEST(NoisyOracleTest, NoiseZeroIsIdentity) {
  const Dataset d = MakeDataset({{{0.1, 0.5}}, {{0.3, 0.35}}});
  const auto scores = ScoreItems(NoisyOracleScorer(0.0, 1), d);
  ASSERT_EQ(scores.size(), 2u);
  EXPECT_EQ(scores[0].f0, 0.1);
  EXPECT_EQ(scores[0].f1, 0.5);
  EXPECT_EQ(scores[0].pi, 0.5 - 0.1);
  EXPECT_DOUBLE_EQ(scores[0].pi, 0.4);
  EXPECT_EQ(scores[1].f0, 0.3);
}

TEST(NoisyOracleTest, SeedDeterminismAndClamping) {
  MarketConfig cfg;
  cfg.n_providers = 100;
  const Dataset d = GenerateMarket(cfg);
  const auto a = ScoreItems(NoisyOracleScorer(0.1, 42), d);
  const auto b = ScoreItems(NoisyOracleScorer(0.1, 42), d);
  const auto c = ScoreItems(NoisyOracleScorer(0.1, 43), d);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
  for (const auto& s : ScoreItems(NoisyOracleScorer(50.0, 1), d)) {
    EXPECT_GE(s.f0, 0.0);
    EXPECT_LE(s.f0, 1.0);
    EXPECT_GE(s.f1, 0.0);
    EXPECT_LE(s.f1, 1.0);
    EXPECT_EQ(s.pi, s.f1 - s.f0);
  }
}

TEST(NoisyOracleTest, MissingGroundTruth) {
  ItemRecord r;
  r.item_id = ItemId(1);
  r.features = {0.0};
  const Dataset d = ValidateDataset({r});
  try {
    ScoreItems(NoisyOracleScorer(0.0, 1), d);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingGroundTruth);
  }
}

std::vector<ItemScore> RankedScores(int n) {
  std::vector<ItemScore> s;
  for (int i = 1; i <= n; ++i) {
    s.push_back(ItemScore::Make(ItemId(i), 0.0, 0.01 * i));
  }
  return s;
}

TEST(QualityFilterTest, QZeroKeepsEverything) {
  const auto s = RankedScores(37);
  const auto mask = ApplyQualityFilter(s, QualityThreshold(0));
  EXPECT_EQ(std::count(mask.begin(), mask.end(), 1), 37);
}

TEST(QualityFilterTest, TenthPercentileOfHundred) {
  const auto s = RankedScores(100);
  const auto mask = ApplyQualityFilter(s, QualityThreshold(10));
  EXPECT_EQ(std::count(mask.begin(), mask.end(), 0), 10);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(mask[i], 0) << i;
  for (int i = 10; i < 100; ++i) EXPECT_EQ(mask[i], 1) << i;
}

TEST(QualityFilterTest, SingleItemEligible) {
  const auto s = RankedScores(1);
  for (double q : {0.0, 1.0, 10.0, 50.0, 99.9}) {
    EXPECT_EQ(ApplyQualityFilter(s, QualityThreshold(q))[0], 1) << q;
  }
}

TEST(QualityFilterTest, MonotoneInQ) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<ItemScore> s;
  for (int i = 0; i < 300; ++i) {
    // Coarse values force ties.
    s.push_back(ItemScore::Make(ItemId(i), 0.0, std::round(u(rng) * 20) / 20));
  }
  EligibilityMask prev = ApplyQualityFilter(s, QualityThreshold(0));
  for (double q = 0.5; q <= 100.0; q += 0.5) {
    const auto cur = ApplyQualityFilter(s, QualityThreshold(q));
    for (std::size_t i = 0; i < s.size(); ++i) {
      EXPECT_LE(cur[i], prev[i]) << "q=" << q;
    }
    prev = cur;
  }
}

TEST(QualityFilterTest, ThresholdRange) {
  EXPECT_THROW(QualityThreshold(-1), Error);
  EXPECT_THROW(QualityThreshold(100.5), Error);
  EXPECT_NO_THROW(QualityThreshold(100));
}

TEST(EligibilityTest, NonPositiveUpliftBarred) {
  std::vector<ItemScore> s = {ItemScore::Make(ItemId(1), 0.2, 0.5),
                              ItemScore::Make(ItemId(2), 0.3, 0.3),
                              ItemScore::Make(ItemId(3), 0.4, 0.2)};
  EXPECT_EQ(ComputeEligibility(s, QualityThreshold(0)),
            (EligibilityMask{1, 0, 0}));
  EXPECT_EQ(ComputeEligibility(s, QualityThreshold(0), true),
            (EligibilityMask{1, 1, 1}));
  const auto ids = EligibleIds(s, ComputeEligibility(s, QualityThreshold(0)));
  EXPECT_EQ(ids, std::vector<ItemId>{ItemId(1)});
}

}  // namespace
}  // namespace couponalloc
