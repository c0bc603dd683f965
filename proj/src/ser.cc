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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "couponalloc/error.h"

namespace couponalloc {
namespace {

double SurvivalRatio(const ItemScore& s) {
  const double denom = 1.0 - s.f0;
  // A certain baseline sale leaves nothing to gain.
  if (denom <= 0.0) return 1.0;
  return (1.0 - s.f1) / denom;
}

}  // namespace

std::string_view OrderingPolicyName(OrderingPolicy policy) {
  switch (policy) {
    case OrderingPolicy::kPiDesc: return "pi-desc";
    case OrderingPolicy::kSurvivalRatio: return "survival-ratio";
  }
  return "unknown";
}

OrderingPolicy ParseOrderingPolicy(std::string_view name) {
  if (name == "pi-desc" || name == "pi_desc") return OrderingPolicy::kPiDesc;
  if (name == "survival-ratio" || name == "survival_ratio") {
    return OrderingPolicy::kSurvivalRatio;
  }
  throw Error(ErrorCode::kInvalidConfig,
              "unknown ordering policy '" + std::string(name) + "'");
}

ProviderPortfolio ProviderPortfolio::Make(ProviderId provider_id,
                                          std::vector<ItemScore> item_scores,
                                          EligibilityMask eligible,
                                          OrderingPolicy ordering) {
  if (eligible.size() != item_scores.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "eligibility mask does not match portfolio size");
  }
  ProviderPortfolio p;
  p.provider_id = provider_id;
  p.item_scores = std::move(item_scores);
  p.eligible = std::move(eligible);
  p.ordering = ordering;
  const std::vector<std::uint8_t> none(p.item_scores.size(), 0);
  p.base_survival = Survival(p.item_scores, none);
  return p;
}

double Survival(std::span<const ItemScore> items,
                std::span<const std::uint8_t> z) {
  if (items.size() != z.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "assignment has " + std::to_string(z.size()) +
                    " entries for " + std::to_string(items.size()) + " items");
  }
  if (items.size() > kLogSpaceThreshold) {
    double log_sum = 0.0;
    for (std::size_t i = 0; i < items.size(); ++i) {
      log_sum += std::log1p(-(z[i] ? items[i].f1 : items[i].f0));
    }
    return std::exp(log_sum);
  }
  double product = 1.0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    product *= 1.0 - (z[i] ? items[i].f1 : items[i].f0);
  }
  return product;
}

double Ser(const ProviderPortfolio& portfolio, std::span<const std::uint8_t> z) {
  return 1.0 - Survival(portfolio.item_scores, z);
}

double SerDelta(const ProviderPortfolio& portfolio,
                std::span<const std::uint8_t> z) {
  return portfolio.base_survival - Survival(portfolio.item_scores, z);
}

std::vector<std::size_t> InterventionOrder(const ProviderPortfolio& portfolio) {
  const auto& items = portfolio.item_scores;
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (portfolio.eligible[i]) order.push_back(i);
  }
  if (portfolio.ordering == OrderingPolicy::kPiDesc) {
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (items[a].pi != items[b].pi) return items[a].pi > items[b].pi;
      return items[a].item_id < items[b].item_id;
    });
  } else {
    std::vector<double> ratio(items.size());
    for (std::size_t i : order) ratio[i] = SurvivalRatio(items[i]);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (ratio[a] != ratio[b]) return ratio[a] < ratio[b];
      return items[a].item_id < items[b].item_id;
    });
  }
  return order;
}

PatternCurve BuildPatternCurve(const ProviderPortfolio& portfolio) {
  PatternCurve curve;
  curve.provider_id = portfolio.provider_id;
  const std::vector<std::size_t> order = InterventionOrder(portfolio);
  curve.deltas.reserve(order.size() + 1);
  std::vector<std::uint8_t> z(portfolio.item_scores.size(), 0);
  for (std::size_t pos : order) {
    z[pos] = 1;
    curve.deltas.push_back(SerDelta(portfolio, z));
    curve.item_order.push_back(portfolio.item_scores[pos].item_id);
    curve.item_uplift.push_back(portfolio.item_scores[pos].pi);
  }
  return curve;
}

std::vector<ProviderPortfolio> BuildPortfolios(const Dataset& dataset,
                                               std::span<const ItemScore> scores,
                                               const EligibilityMask& eligible,
                                               OrderingPolicy ordering) {
  if (scores.size() != dataset.num_items() ||
      eligible.size() != dataset.num_items()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "scores and eligibility must cover every dataset item");
  }
  const auto items = dataset.items();
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (scores[i].item_id != items[i].item_id) {
      throw Error(ErrorCode::kPopulationMismatch,
                  "score " + std::to_string(i) + " is for item " +
                      std::to_string(scores[i].item_id.value) +
                      ", dataset has " + std::to_string(items[i].item_id.value));
    }
  }
  std::vector<ProviderPortfolio> portfolios;
  portfolios.reserve(dataset.num_providers());
  for (std::size_t p = 0; p < dataset.num_providers(); ++p) {
    std::vector<ItemScore> item_scores;
    EligibilityMask mask;
    for (std::size_t i : dataset.provider_items(p)) {
      item_scores.push_back(scores[i]);
      mask.push_back(eligible[i]);
    }
    portfolios.push_back(ProviderPortfolio::Make(
        dataset.provider_id(p), std::move(item_scores), std::move(mask),
        ordering));
  }
  return portfolios;
}

std::vector<PatternCurve> BuildPatternCurves(const Dataset& dataset,
                                             std::span<const ItemScore> scores,
                                             const EligibilityMask& eligible,
                                             OrderingPolicy ordering) {
  std::vector<PatternCurve> curves;
  curves.reserve(dataset.num_providers());
  for (const auto& portfolio :
       BuildPortfolios(dataset, scores, eligible, ordering)) {
    curves.push_back(BuildPatternCurve(portfolio));
  }
  return curves;
}

}  // namespace couponalloc
