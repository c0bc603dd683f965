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

#include "couponalloc/eval.h"

#include <string>

#include "couponalloc/error.h"

namespace couponalloc {

std::string ItemSegment::CellName(int cell) {
  const int a = (cell >> 2) & 1;
  const int d = (cell >> 1) & 1;
  const bool sold = cell & 1;
  return std::string("I^") + (sold ? "S" : "N") + "_" + std::to_string(a) +
         std::to_string(d);
}

std::int64_t ItemSegment::num_algorithm_treated() const {
  std::int64_t n = 0;
  for (int a = 0; a < 2; ++a) {
    for (int y = 0; y < 2; ++y) n += count(a, 1, y);
  }
  return n;
}

ItemSegment SegmentItems(const Dataset& dataset, const RctLog& log,
                         const AllocationPlan& plan) {
  const RctLog aligned = AlignLog(dataset, log);
  const auto decision = AlignPlan(dataset, plan);
  ItemSegment seg;
  seg.num_providers = dataset.num_providers();
  seg.cell.resize(dataset.num_items());
  seg.provider.resize(dataset.num_items());
  for (std::size_t i = 0; i < dataset.num_items(); ++i) {
    const int cell = ItemSegment::CellIndex(aligned.assignment[i], decision[i],
                                            aligned.sold[i]);
    seg.cell[i] = static_cast<std::uint8_t>(cell);
    seg.provider[i] = dataset.provider_of(i);
    ++seg.counts[cell];
  }
  return seg;
}

double UpliftItemsSold(const ItemSegment& seg) {
  const std::int64_t couponed = seg.num_algorithm_treated();
  if (couponed == 0) return 0.0;
  const std::int64_t treat = seg.count(1, 1, 1) + seg.count(1, 1, 0);
  const std::int64_t control = seg.count(0, 1, 1) + seg.count(0, 1, 0);
  if (treat == 0 || control == 0) {
    throw Error(ErrorCode::kEmptyCell,
                treat == 0 ? "no couponed item was RCT-treated"
                           : "no couponed item was RCT-untreated");
  }
  const double rate_treat =
      static_cast<double>(seg.count(1, 1, 1)) / static_cast<double>(treat);
  const double rate_control =
      static_cast<double>(seg.count(0, 1, 1)) / static_cast<double>(control);
  return (rate_treat - rate_control) * static_cast<double>(couponed) / 2.0;
}

ProviderUplift UpliftSuccessfulProviders(const ItemSegment& seg) {
  struct State {
    bool has_treated_coupon = false;
    bool has_control_coupon = false;
    bool success = false;
  };
  std::vector<State> state(seg.num_providers);
  for (std::size_t i = 0; i < seg.cell.size(); ++i) {
    const int cell = seg.cell[i];
    const int a = (cell >> 2) & 1;
    const int d = (cell >> 1) & 1;
    const bool sold = cell & 1;
    State& st = state[seg.provider[i]];
    if (d == 1) {
      (a == 1 ? st.has_treated_coupon : st.has_control_coupon) = true;
      if (sold) st.success = true;
    } else if (a == 0 && sold) {
      // Organic conversion: sold with no coupon from either side.
      st.success = true;
    }
  }

  ProviderUplift out;
  for (const State& st : state) {
    if (!st.has_treated_coupon && !st.has_control_coupon) continue;
    ++out.n_treated;
    if (st.has_treated_coupon && st.has_control_coupon) {
      ++out.n_mixed;
    } else if (st.has_treated_coupon) {
      ++out.n_consistent_treat;
      out.n_success_treat += st.success ? 1 : 0;
    } else {
      ++out.n_consistent_control;
      out.n_success_control += st.success ? 1 : 0;
    }
  }
  if (out.n_treated == 0) return out;
  if (out.n_consistent_treat == 0 || out.n_consistent_control == 0) {
    throw Error(ErrorCode::kEmptyGroup,
                out.n_consistent_treat == 0
                    ? "no consistently treated provider"
                    : "no consistently untreated provider");
  }
  out.ser_lift = static_cast<double>(out.n_success_treat) /
                     static_cast<double>(out.n_consistent_treat) -
                 static_cast<double>(out.n_success_control) /
                     static_cast<double>(out.n_consistent_control);
  out.value = out.ser_lift * static_cast<double>(out.n_treated) / 2.0;
  return out;
}

UpliftReport EvaluateStrategy(const Dataset& dataset, const RctLog& log,
                              const AllocationPlan& plan) {
  const ItemSegment seg = SegmentItems(dataset, log, plan);
  UpliftReport report;
  report.strategy_name = plan.strategy_name;
  report.n_coupons = seg.num_algorithm_treated();
  if (report.n_coupons == 0) {
    report.warnings.push_back("EmptyCell: plan coupons no item");
  }
  report.uplift_items_sold = UpliftItemsSold(seg);
  const ProviderUplift providers = UpliftSuccessfulProviders(seg);
  report.uplift_successful_providers = providers.value;
  report.ser_lift = providers.ser_lift;
  report.n_treated_providers = providers.n_treated;
  report.n_consistent_treat = providers.n_consistent_treat;
  report.n_consistent_control = providers.n_consistent_control;
  report.n_mixed_excluded = providers.n_mixed;
  return report;
}

}  // namespace couponalloc
