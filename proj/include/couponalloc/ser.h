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

// Sales Experience Rate (SER): the probability that a provider sells at
// least one item, given which of its items carry a coupon. Items are assumed
// to sell independently, so
//
//   SER(s, z) = 1 - prod_i (1 - (z_i ? f1_i : f0_i))
//
// and the coupon effect on the provider is delta(s, z) = SER(s, z) - SER(s, 0).
// A PatternCurve tabulates delta for "coupon the first k items" along a fixed
// intervention order, which turns allocation into a multiple-choice knapsack.

#ifndef COUPONALLOC_SER_H_
#define COUPONALLOC_SER_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "couponalloc/domain.h"

namespace couponalloc {

enum class OrderingPolicy {
  // Descending item uplift pi, the ordering heuristic of the original method.
  kPiDesc,
  // Ascending survival ratio (1 - f1) / (1 - f0). Optimal for every k.
  kSurvivalRatio,
};

std::string_view OrderingPolicyName(OrderingPolicy policy);
// Accepts "pi-desc" and "survival-ratio". Throws kInvalidConfig.
OrderingPolicy ParseOrderingPolicy(std::string_view name);

// Portfolios with more items than this compute products in log space.
inline constexpr std::size_t kLogSpaceThreshold = 64;

struct ProviderPortfolio {
  ProviderId provider_id;
  std::vector<ItemScore> item_scores;
  EligibilityMask eligible;
  // prod over all items, eligible or not, of (1 - f0).
  double base_survival = 1.0;
  OrderingPolicy ordering = OrderingPolicy::kPiDesc;

  static ProviderPortfolio Make(ProviderId provider_id,
                                std::vector<ItemScore> item_scores,
                                EligibilityMask eligible,
                                OrderingPolicy ordering);
};

// prod_i (1 - (z_i ? f1_i : f0_i)). Throws kDimensionMismatch.
double Survival(std::span<const ItemScore> items, std::span<const std::uint8_t> z);

double Ser(const ProviderPortfolio& portfolio, std::span<const std::uint8_t> z);
double SerDelta(const ProviderPortfolio& portfolio,
                std::span<const std::uint8_t> z);

// Positions (into item_scores) of the eligible items in intervention order.
// Ties are broken by ascending ItemId.
std::vector<std::size_t> InterventionOrder(const ProviderPortfolio& portfolio);

struct PatternCurve {
  ProviderId provider_id;
  // deltas[k] = delta with coupons on the first k items of item_order.
  std::vector<double> deltas{0.0};
  std::vector<ItemId> item_order;
  // pi of each item in item_order.
  std::vector<double> item_uplift;

  std::size_t max_coupons() const { return item_order.size(); }
};

PatternCurve BuildPatternCurve(const ProviderPortfolio& portfolio);

// One portfolio per provider of the dataset, in provider index order.
// `scores` and `eligible` are aligned with dataset items.
std::vector<ProviderPortfolio> BuildPortfolios(const Dataset& dataset,
                                               std::span<const ItemScore> scores,
                                               const EligibilityMask& eligible,
                                               OrderingPolicy ordering);

std::vector<PatternCurve> BuildPatternCurves(const Dataset& dataset,
                                             std::span<const ItemScore> scores,
                                             const EligibilityMask& eligible,
                                             OrderingPolicy ordering);

}  // namespace couponalloc

#endif  // COUPONALLOC_SER_H_
