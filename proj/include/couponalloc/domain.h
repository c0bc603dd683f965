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

// Core marketplace types shared by every stage of the pipeline: items,
// providers, per-item scores, allocation plans and RCT logs.

#ifndef COUPONALLOC_DOMAIN_H_
#define COUPONALLOC_DOMAIN_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace couponalloc {

template <typename Tag>
struct StrongId {
  std::uint64_t value = 0;

  constexpr StrongId() = default;
  constexpr explicit StrongId(std::uint64_t v) : value(v) {}

  friend constexpr auto operator<=>(StrongId, StrongId) = default;
};

struct ItemIdTag {};
struct ProviderIdTag {};
using ItemId = StrongId<ItemIdTag>;
using ProviderId = StrongId<ProviderIdTag>;

struct StrongIdHash {
  template <typename Tag>
  std::size_t operator()(StrongId<Tag> id) const {
    return std::hash<std::uint64_t>{}(id.value);
  }
};

struct ItemRecord {
  ItemId item_id;
  ProviderId provider_id;
  std::vector<double> features;
  // Ground-truth sale probabilities without / with a coupon. Only synthetic
  // data carries them.
  std::optional<double> true_p0;
  std::optional<double> true_p1;

  bool operator==(const ItemRecord&) const = default;
};

// Estimated sale rate without (f0) and with (f1) a coupon; pi is the uplift.
struct ItemScore {
  ItemId item_id;
  double f0 = 0.0;
  double f1 = 0.0;
  double pi = 0.0;

  // Builds a score with pi = f1 - f0. Throws kProbabilityOutOfRange.
  static ItemScore Make(ItemId id, double f0, double f1);

  bool operator==(const ItemScore&) const = default;
};

// Immutable, validated item population with a provider index. Providers are
// indexed densely in ascending ProviderId order; items keep input order.
class Dataset {
 public:
  Dataset() = default;

  std::span<const ItemRecord> items() const { return items_; }
  std::size_t num_items() const { return items_.size(); }
  std::size_t num_providers() const { return provider_ids_.size(); }

  ProviderId provider_id(std::size_t provider_index) const {
    return provider_ids_[provider_index];
  }
  // Dense item indices of a provider, in item input order.
  std::span<const std::size_t> provider_items(std::size_t provider_index) const {
    return provider_items_[provider_index];
  }
  // Dense provider index of each item.
  std::size_t provider_of(std::size_t item_index) const {
    return item_provider_[item_index];
  }

  std::optional<std::size_t> item_index(ItemId id) const;
  std::optional<std::size_t> provider_index(ProviderId id) const;

  // True when every item carries both ground-truth probabilities.
  bool has_ground_truth() const { return has_ground_truth_; }

  std::vector<ItemId> item_ids() const;

  bool operator==(const Dataset& other) const { return items_ == other.items_; }

 private:
  friend Dataset ValidateDataset(std::vector<ItemRecord> raw_items);

  std::vector<ItemRecord> items_;
  std::vector<ProviderId> provider_ids_;
  std::vector<std::vector<std::size_t>> provider_items_;
  std::vector<std::size_t> item_provider_;
  std::unordered_map<ItemId, std::size_t, StrongIdHash> item_lookup_;
  std::unordered_map<ProviderId, std::size_t, StrongIdHash> provider_lookup_;
  bool has_ground_truth_ = false;
};

// Builds a Dataset, or throws ValidationError enumerating every duplicate id,
// out-of-range probability and inconsistent feature width.
Dataset ValidateDataset(std::vector<ItemRecord> raw_items);

// Per-item coupon eligibility, aligned with a score or item list.
using EligibilityMask = std::vector<std::uint8_t>;

// 0/1 coupon decision for every item of a population.
struct AllocationPlan {
  std::vector<ItemId> item_ids;
  std::vector<std::uint8_t> coupon;
  std::int64_t budget_n = 0;
  std::string strategy_name;
  std::optional<double> objective_value;
  bool infeasible = false;

  std::int64_t num_coupons() const;
  // Empty plan over the given population.
  static AllocationPlan Empty(std::vector<ItemId> population,
                              std::string strategy_name);
};

// Outcome of one randomized coupon experiment: per item, whether the RCT
// gave it a coupon and whether it sold.
struct RctLog {
  std::vector<ItemId> item_ids;
  std::vector<std::uint8_t> assignment;
  std::vector<std::uint8_t> sold;

  std::size_t size() const { return item_ids.size(); }
  bool operator==(const RctLog&) const = default;
};

// Coupon flags of `plan` reordered to dataset item order. Throws
// kPopulationMismatch unless the plan covers exactly the dataset's items.
std::vector<std::uint8_t> AlignPlan(const Dataset& dataset,
                                    const AllocationPlan& plan);

// Same for an RCT log; the result is indexed by dataset item.
RctLog AlignLog(const Dataset& dataset, const RctLog& log);

// Rounds to the 12 significant digits used by every emitted CSV, so values
// that went through Quantize survive a text round trip bit-exactly.
double Quantize(double value);

}  // namespace couponalloc

#endif  // COUPONALLOC_DOMAIN_H_
