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

#include "couponalloc/ser.h"

#include <gtest/gtest.h>

#include <cmath>

#include "couponalloc/error.h"
#include "test_util.h"

namespace couponalloc {
namespace {

using testing::Item;

ProviderPortfolio Portfolio(const std::vector<Item>& items,
                            OrderingPolicy ordering = OrderingPolicy::kPiDesc,
                            EligibilityMask eligible = {}) {
  std::vector<ItemScore> scores;
  for (std::size_t i = 0; i < items.size(); ++i) {
    scores.push_back(ItemScore::Make(ItemId(i), items[i].f0, items[i].f1));
  }
  if (eligible.empty()) eligible.assign(items.size(), 1);
  return ProviderPortfolio::Make(ProviderId(0), std::move(scores),
                                 std::move(eligible), ordering);
}

using Z = std::vector<std::uint8_t>;

TEST(SerTest, SingleItemIdentity) {
  EXPECT_DOUBLE_EQ(Ser(Portfolio({{0.2, 0.7}}), Z{0}), 0.2);
}

TEST(SerTest, TwoItemProduct) {
  EXPECT_NEAR(Ser(Portfolio({{0.2, 0.6}, {0.5, 0.5}}), Z{1, 0}), 0.8, 1e-12);
}

TEST(SerTest, NoEffectSymmetry) {
  const auto p = Portfolio({{0.2, 0.2}, {0.4, 0.4}, {0.7, 0.7}});
  EXPECT_NEAR(Ser(p, Z{1, 1, 1}), Ser(p, Z{0, 0, 0}), 1e-12);
  EXPECT_NEAR(Ser(p, Z{0, 0, 0}), 1.0 - p.base_survival, 1e-15);
}

TEST(SerTest, DimensionMismatch) {
  const auto p = Portfolio({{0.2, 0.6}, {0.5, 0.5}});
  try {
    Ser(p, Z{1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionMismatch);
  }
  EXPECT_THROW(SerDelta(p, Z{1, 0, 0}), Error);
}

TEST(SerDeltaTest, Examples) {
  const auto p = Portfolio({{0.1, 0.5}, {0.1, 0.4}});
  EXPECT_EQ(SerDelta(p, Z{0, 0}), 0.0);
  EXPECT_NEAR(SerDelta(p, Z{1, 0}), 0.36, 1e-12);
  const auto saturated = Portfolio({{1.0, 1.0}, {0.2, 0.9}});
  for (const Z& z : {Z{0, 0}, Z{1, 0}, Z{0, 1}, Z{1, 1}}) {
    EXPECT_EQ(SerDelta(saturated, z), 0.0);
  }
}

TEST(SerTest, BaseSurvivalCoversIneligibleItems) {
  const auto p = Portfolio({{0.1, 0.5}, {0.3, 0.4}}, OrderingPolicy::kPiDesc,
                           {1, 0});
  EXPECT_NEAR(p.base_survival, 0.9 * 0.7, 1e-15);
}

TEST(SerTest, RangeAndMonotonicity) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    auto inst = testing::RandomInstance(rng, 1, 8)[0];
    const auto p = Portfolio(inst);
    const std::size_t n = inst.size();
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      Z z(n);
      for (std::size_t i = 0; i < n; ++i) z[i] = (mask >> i) & 1;
      const double v = Ser(p, z);
      ASSERT_GE(v, 0.0);
      ASSERT_LE(v, 1.0);
      for (std::size_t i = 0; i < n; ++i) {
        if (z[i]) continue;
        Z up = z;
        up[i] = 1;
        ASSERT_GE(Ser(p, up), v - 1e-15);
      }
    }
  }
}

TEST(SerTest, LogSpaceMatchesDirectProduct) {
  std::vector<Item> items;
  for (int i = 0; i < 150; ++i) items.push_back({0.01 + 0.002 * (i % 50), 0.3});
  const auto p = Portfolio(items);
  Z z(items.size(), 0);
  for (std::size_t i = 0; i < z.size(); i += 3) z[i] = 1;
  std::vector<int> zi(z.begin(), z.end());
  const double ref = 1.0 - testing::RefSurvival(items, zi);
  EXPECT_NEAR(Ser(p, z), ref, 1e-12);
  EXPECT_NEAR(SerDelta(p, z), testing::RefDelta(items, zi), 1e-12);
}

TEST(PatternCurveTest, PiDescExample) {
  const auto curve = BuildPatternCurve(Portfolio({{0.1, 0.5}, {0.1, 0.4}}));
  ASSERT_EQ(curve.item_order.size(), 2u);
  EXPECT_EQ(curve.item_order[0], ItemId(0));
  EXPECT_EQ(curve.item_order[1], ItemId(1));
  ASSERT_EQ(curve.deltas.size(), 3u);
  EXPECT_EQ(curve.deltas[0], 0.0);
  EXPECT_NEAR(curve.deltas[1], 0.36, 1e-12);
  EXPECT_NEAR(curve.deltas[2], 0.51, 1e-12);
}

TEST(PatternCurveTest, CertainSaleFirstUnderSurvivalRatio) {
  const auto p = Portfolio({{0.3, 0.9}, {0.2, 1.0}, {0.1, 0.8}},
                           OrderingPolicy::kSurvivalRatio);
  const auto curve = BuildPatternCurve(p);
  EXPECT_EQ(curve.item_order[0], ItemId(1));
  EXPECT_NEAR(curve.deltas[1], p.base_survival, 1e-15);
}

TEST(PatternCurveTest, TiesByItemId) {
  const auto curve = BuildPatternCurve(
      Portfolio({{0.25, 0.5}, {0.5, 0.75}, {0.0, 0.25}}));
  EXPECT_EQ(curve.item_order,
            (std::vector<ItemId>{ItemId(0), ItemId(1), ItemId(2)}));
  const auto sr = BuildPatternCurve(Portfolio(
      {{0.5, 0.75}, {0.0, 0.5}, {0.75, 0.875}}, OrderingPolicy::kSurvivalRatio));
  // Ratios 0.5, 0.5, 0.5.
  EXPECT_EQ(sr.item_order, (std::vector<ItemId>{ItemId(0), ItemId(1), ItemId(2)}));
}

TEST(PatternCurveTest, ZeroBaseRateRatioIsOne) {
  const auto curve = BuildPatternCurve(Portfolio(
      {{1.0, 1.0}, {0.2, 0.6}}, OrderingPolicy::kSurvivalRatio,
      EligibilityMask{1, 1}));
  EXPECT_EQ(curve.item_order[0], ItemId(1));
}

TEST(PatternCurveTest, IneligibleItemsSkipped) {
  const auto curve = BuildPatternCurve(Portfolio(
      {{0.1, 0.5}, {0.1, 0.9}, {0.1, 0.4}}, OrderingPolicy::kPiDesc,
      EligibilityMask{1, 0, 1}));
  EXPECT_EQ(curve.item_order, (std::vector<ItemId>{ItemId(0), ItemId(2)}));
  EXPECT_EQ(curve.deltas.size(), 3u);
  const auto empty = BuildPatternCurve(
      Portfolio({{0.1, 0.5}}, OrderingPolicy::kPiDesc, EligibilityMask{0}));
  EXPECT_EQ(empty.deltas, std::vector<double>{0.0});
  EXPECT_EQ(empty.max_coupons(), 0u);
}

TEST(PatternCurveTest, PiDescWitness) {
  const std::vector<Item> items = {{0.9, 0.99}, {0.1, 0.3}};
  const auto pi = BuildPatternCurve(Portfolio(items, OrderingPolicy::kPiDesc));
  const auto sr =
      BuildPatternCurve(Portfolio(items, OrderingPolicy::kSurvivalRatio));
  EXPECT_EQ(pi.item_order[0], ItemId(1));
  EXPECT_EQ(sr.item_order[0], ItemId(0));
  EXPECT_NEAR(pi.deltas[1], 0.09 - 0.07, 1e-12);
  EXPECT_NEAR(sr.deltas[1], 0.09 - 0.009, 1e-12);
  EXPECT_NEAR(sr.deltas[1] - pi.deltas[1], 0.061, 1e-12);
}

TEST(PatternCurveTest, SurvivalRatioOptimalForEveryK) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 400; ++trial) {
    const auto items = testing::RandomInstance(rng, 1, 12)[0];
    const auto curve =
        BuildPatternCurve(Portfolio(items, OrderingPolicy::kSurvivalRatio));
    const auto pi_curve = BuildPatternCurve(Portfolio(items));
    for (std::size_t k = 0; k <= items.size(); ++k) {
      const double best = testing::RefBestKSubset(items, static_cast<int>(k));
      ASSERT_NEAR(curve.deltas[k], best, 1e-12) << trial << " k=" << k;
      ASSERT_LE(pi_curve.deltas[k], best + 1e-12);
    }
  }
}

TEST(PatternCurveTest, SurvivalRatioConcaveAndNondecreasing) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto items = testing::RandomInstance(rng, 1, 30)[0];
    const auto curve =
        BuildPatternCurve(Portfolio(items, OrderingPolicy::kSurvivalRatio));
    for (std::size_t k = 1; k < curve.deltas.size(); ++k) {
      const double gain = curve.deltas[k] - curve.deltas[k - 1];
      ASSERT_GE(gain, -1e-15);
      if (k + 1 < curve.deltas.size()) {
        ASSERT_LE(curve.deltas[k + 1] - curve.deltas[k], gain + 1e-15);
      }
    }
  }
}

TEST(PortfolioTest, BuildsPerProviderInIndexOrder) {
  const std::vector<std::vector<Item>> inst = {{{0.1, 0.5}, {0.2, 0.3}},
                                               {{0.4, 0.9}}};
  const Dataset d = testing::MakeDataset(inst);
  const auto scores = testing::MakeScores(inst);
  const auto ports = BuildPortfolios(d, scores, EligibilityMask{1, 1, 1},
                                     OrderingPolicy::kPiDesc);
  ASSERT_EQ(ports.size(), 2u);
  EXPECT_EQ(ports[1].provider_id, ProviderId(1));
  EXPECT_EQ(ports[0].item_scores.size(), 2u);
  EXPECT_NEAR(ports[1].base_survival, 0.6, 1e-15);
  EXPECT_THROW(BuildPortfolios(d, scores, EligibilityMask{1, 1},
                               OrderingPolicy::kPiDesc),
               Error);
}

TEST(OrderingPolicyTest, Names) {
  EXPECT_EQ(ParseOrderingPolicy("pi-desc"), OrderingPolicy::kPiDesc);
  EXPECT_EQ(ParseOrderingPolicy("survival-ratio"),
            OrderingPolicy::kSurvivalRatio);
  EXPECT_EQ(OrderingPolicyName(OrderingPolicy::kSurvivalRatio),
            "survival-ratio");
  EXPECT_THROW(ParseOrderingPolicy("bogus"), Error);
}

}  // namespace
}  // namespace couponalloc
