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

#include "couponalloc/domain.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <string>
#include <string_view>
#include <utility>

#include "couponalloc/error.h"

namespace couponalloc {
namespace {

bool IsProbability(double p) { return p >= 0.0 && p <= 1.0; }

}  // namespace

ItemScore ItemScore::Make(ItemId id, double f0, double f1) {
  if (!IsProbability(f0) || !IsProbability(f1)) {
    throw Error(ErrorCode::kProbabilityOutOfRange,
                "item " + std::to_string(id.value) + " has f0=" +
                    std::to_string(f0) + " f1=" + std::to_string(f1));
  }
  return ItemScore{id, f0, f1, f1 - f0};
}

std::optional<std::size_t> Dataset::item_index(ItemId id) const {
  auto it = item_lookup_.find(id);
  if (it == item_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> Dataset::provider_index(ProviderId id) const {
  auto it = provider_lookup_.find(id);
  if (it == provider_lookup_.end()) return std::nullopt;
  return it->second;
}

std::vector<ItemId> Dataset::item_ids() const {
  std::vector<ItemId> ids;
  ids.reserve(items_.size());
  for (const auto& item : items_) ids.push_back(item.item_id);
  return ids;
}

Dataset ValidateDataset(std::vector<ItemRecord> raw_items) {
  std::vector<ValidationError::Violation> violations;
  Dataset ds;
  ds.item_lookup_.reserve(raw_items.size());

  const std::size_t feature_width =
      raw_items.empty() ? 0 : raw_items.front().features.size();
  bool all_truth = !raw_items.empty();
  for (std::size_t i = 0; i < raw_items.size(); ++i) {
    const ItemRecord& item = raw_items[i];
    const std::string tag = "item " + std::to_string(item.item_id.value);
    if (!ds.item_lookup_.emplace(item.item_id, i).second) {
      violations.push_back({ErrorCode::kDuplicateItemId, tag});
    }
    for (const auto& p : {item.true_p0, item.true_p1}) {
      if (p.has_value() && !IsProbability(*p)) {
        violations.push_back({ErrorCode::kProbabilityOutOfRange,
                              tag + " has probability " + std::to_string(*p)});
      }
    }
    if (item.features.size() != feature_width) {
      violations.push_back(
          {ErrorCode::kInconsistentFeatures,
           tag + " has " + std::to_string(item.features.size()) +
               " features, expected " + std::to_string(feature_width)});
    }
    all_truth = all_truth && item.true_p0.has_value() && item.true_p1.has_value();
  }
  if (!violations.empty()) throw ValidationError(std::move(violations));

  std::map<ProviderId, std::vector<std::size_t>> by_provider;
  for (std::size_t i = 0; i < raw_items.size(); ++i) {
    by_provider[raw_items[i].provider_id].push_back(i);
  }
  ds.provider_ids_.reserve(by_provider.size());
  ds.provider_items_.reserve(by_provider.size());
  ds.item_provider_.assign(raw_items.size(), 0);
  for (auto& [pid, members] : by_provider) {
    const std::size_t index = ds.provider_ids_.size();
    ds.provider_lookup_.emplace(pid, index);
    for (std::size_t i : members) ds.item_provider_[i] = index;
    ds.provider_ids_.push_back(pid);
    ds.provider_items_.push_back(std::move(members));
  }
  ds.items_ = std::move(raw_items);
  ds.has_ground_truth_ = all_truth;
  return ds;
}

std::int64_t AllocationPlan::num_coupons() const {
  std::int64_t n = 0;
  for (auto c : coupon) n += c ? 1 : 0;
  return n;
}

AllocationPlan AllocationPlan::Empty(std::vector<ItemId> population,
                                     std::string strategy_name) {
  AllocationPlan plan;
  plan.coupon.assign(population.size(), 0);
  plan.item_ids = std::move(population);
  plan.strategy_name = std::move(strategy_name);
  return plan;
}

namespace {

// Dataset position of every id, checking the population matches exactly.
std::vector<std::size_t> Positions(const Dataset& dataset,
                                   std::span<const ItemId> ids,
                                   std::string_view what) {
  if (ids.size() != dataset.num_items()) {
    throw Error(ErrorCode::kPopulationMismatch,
                std::string(what) + " has " + std::to_string(ids.size()) +
                    " items, dataset has " +
                    std::to_string(dataset.num_items()));
  }
  std::vector<std::size_t> positions(ids.size());
  std::vector<std::uint8_t> seen(ids.size(), 0);
  for (std::size_t r = 0; r < ids.size(); ++r) {
    const auto index = dataset.item_index(ids[r]);
    if (!index || seen[*index]) {
      throw Error(ErrorCode::kPopulationMismatch,
                  std::string(what) + " item " + std::to_string(ids[r].value) +
                      (index ? " is repeated" : " is not in the dataset"));
    }
    seen[*index] = 1;
    positions[r] = *index;
  }
  return positions;
}

}  // namespace

std::vector<std::uint8_t> AlignPlan(const Dataset& dataset,
                                    const AllocationPlan& plan) {
  if (plan.coupon.size() != plan.item_ids.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "plan flags and ids differ");
  }
  const auto positions = Positions(dataset, plan.item_ids, "plan");
  std::vector<std::uint8_t> flags(dataset.num_items(), 0);
  for (std::size_t r = 0; r < positions.size(); ++r) {
    flags[positions[r]] = plan.coupon[r] ? 1 : 0;
  }
  return flags;
}

RctLog AlignLog(const Dataset& dataset, const RctLog& log) {
  if (log.assignment.size() != log.size() || log.sold.size() != log.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "RCT log columns differ");
  }
  const auto positions = Positions(dataset, log.item_ids, "RCT log");
  RctLog aligned;
  aligned.item_ids = dataset.item_ids();
  aligned.assignment.assign(dataset.num_items(), 0);
  aligned.sold.assign(dataset.num_items(), 0);
  for (std::size_t r = 0; r < positions.size(); ++r) {
    aligned.assignment[positions[r]] = log.assignment[r] ? 1 : 0;
    aligned.sold[positions[r]] = log.sold[r] ? 1 : 0;
  }
  return aligned;
}

double Quantize(double value) {
  if (!std::isfinite(value)) return value;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return std::strtod(buf, nullptr);
}

}  // namespace couponalloc
