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

// RCT-based evaluation of an allocation plan. Each item falls into one of
// eight cells by (RCT assignment a, algorithm decision d, sold). Only items
// whose RCT assignment agrees with the algorithm inform the estimates.
//
//   Uplift-ItemsSold = [ |I^S_11| / |I_11| - |I^S_01| / |I_01| ] * |I_*1| / 2
//
// The provider estimator applies the same construction to providers with at
// least one algorithm-couponed item, counting organic sales (items no arm
// couponed) as successes.

#ifndef COUPONALLOC_EVAL_H_
#define COUPONALLOC_EVAL_H_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "couponalloc/domain.h"

namespace couponalloc {

struct ItemSegment {
  static constexpr int CellIndex(int assignment, int decision, int sold) {
    return (assignment << 2) | (decision << 1) | sold;
  }
  // "I^S_11" style label.
  static std::string CellName(int cell);

  // Per dataset item.
  std::vector<std::uint8_t> cell;
  std::vector<std::size_t> provider;
  std::size_t num_providers = 0;
  std::array<std::int64_t, 8> counts{};

  std::int64_t count(int assignment, int decision, int sold) const {
    return counts[CellIndex(assignment, decision, sold)];
  }
  // |I^*_{*1}|: items the algorithm coupons.
  std::int64_t num_algorithm_treated() const;
};

// Throws kPopulationMismatch unless log and plan cover the dataset's items.
ItemSegment SegmentItems(const Dataset& dataset, const RctLog& log,
                         const AllocationPlan& plan);

// Returns 0 when the plan coupons nothing. Throws kEmptyCell when a
// consistent arm is empty.
double UpliftItemsSold(const ItemSegment& segment);

struct ProviderUplift {
  double value = 0.0;
  // Bracketed success-rate difference before scaling.
  double ser_lift = 0.0;
  std::int64_t n_treated = 0;
  // Providers whose couponed items were all RCT-treated / all RCT-untreated.
  std::int64_t n_consistent_treat = 0;
  std::int64_t n_consistent_control = 0;
  // Providers with couponed items on both sides of the RCT; excluded.
  std::int64_t n_mixed = 0;
  std::int64_t n_success_treat = 0;
  std::int64_t n_success_control = 0;
};

// A consistent provider is successful when any of its couponed items sold or
// any item that neither the RCT nor the algorithm couponed sold. Returns all
// zeros when nothing is couponed; throws kEmptyGroup when either consistent
// group is empty.
ProviderUplift UpliftSuccessfulProviders(const ItemSegment& segment);

struct UpliftReport {
  std::string strategy_name;
  double uplift_items_sold = 0.0;
  double uplift_successful_providers = 0.0;
  std::int64_t n_treated_providers = 0;
  double ser_lift = 0.0;
  std::int64_t n_consistent_treat = 0;
  std::int64_t n_consistent_control = 0;
  std::int64_t n_mixed_excluded = 0;
  std::int64_t n_coupons = 0;
  std::vector<std::string> warnings;

  bool operator==(const UpliftReport&) const = default;
};

// Errors from the estimators propagate.
UpliftReport EvaluateStrategy(const Dataset& dataset, const RctLog& log,
                              const AllocationPlan& plan);

}  // namespace couponalloc

#endif  // COUPONALLOC_EVAL_H_
