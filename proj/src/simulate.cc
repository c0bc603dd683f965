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

#include "couponalloc/simulate.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "couponalloc/error.h"
#include "couponalloc/rng.h"
#include "couponalloc/ser.h"

namespace couponalloc {
namespace {

void Require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::kInvalidConfig, what);
}

void RequireGroundTruth(const Dataset& dataset) {
  if (!dataset.has_ground_truth()) {
    throw Error(ErrorCode::kMissingGroundTruth,
                "dataset lacks true_p0/true_p1");
  }
}

double Logit(double p) {
  const double q = std::clamp(p, 1e-6, 1.0 - 1e-6);
  return std::log(q / (1.0 - q));
}

}  // namespace

void ValidateMarketConfig(const MarketConfig& c) {
  Require(c.n_providers > 0, "n_providers must be positive");
  Require(c.zipf_exponent > 0.0 && std::isfinite(c.zipf_exponent),
          "zipf_exponent must be positive");
  Require(c.max_items >= 1, "max_items must be >= 1");
  Require(c.p0_alpha > 0.0 && c.p0_beta > 0.0,
          "p0 beta shape parameters must be positive");
  Require(std::isfinite(c.lift_log_mean), "lift_log_mean must be finite");
  Require(c.lift_log_sd >= 0.0 && std::isfinite(c.lift_log_sd),
          "lift_log_sd must be >= 0");
  Require(c.negative_uplift_fraction >= 0.0 && c.negative_uplift_fraction <= 1.0,
          "negative_uplift_fraction must lie in [0, 1]");
  Require(c.n_features >= 0, "n_features must be >= 0");
}

Dataset GenerateMarket(const MarketConfig& config) {
  ValidateMarketConfig(config);

  std::vector<double> cdf(static_cast<std::size_t>(config.max_items));
  double acc = 0.0;
  for (int k = 1; k <= config.max_items; ++k) {
    acc += std::pow(static_cast<double>(k), -config.zipf_exponent);
    cdf[k - 1] = acc;
  }
  for (double& c : cdf) c /= acc;

  std::vector<ItemRecord> items;
  std::uint64_t next_item = 0;
  for (std::int64_t s = 0; s < config.n_providers; ++s) {
    Rng rng(DeriveSeed(config.seed, static_cast<std::uint64_t>(s)));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::gamma_distribution<double> gamma_a(config.p0_alpha, 1.0);
    std::gamma_distribution<double> gamma_b(config.p0_beta, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);

    const auto count = static_cast<std::size_t>(
        std::lower_bound(cdf.begin(), cdf.end(), unit(rng)) - cdf.begin() + 1);
    for (std::size_t j = 0; j < std::min(count, cdf.size()); ++j) {
      const double ga = gamma_a(rng);
      const double gb = gamma_b(rng);
      const double p0 = ga / (ga + gb);
      double lift;
      if (unit(rng) < config.negative_uplift_fraction) {
        lift = 0.5 + 0.5 * unit(rng);
      } else {
        lift = 1.0 + std::exp(config.lift_log_mean +
                              config.lift_log_sd * normal(rng));
      }
      const double p1 = std::min(1.0, p0 * lift);

      ItemRecord item;
      item.item_id = ItemId(next_item++);
      item.provider_id = ProviderId(static_cast<std::uint64_t>(s));
      for (int f = 0; f < config.n_features; ++f) {
        double x = normal(rng);
        if (f == 0) x = Logit(p0) + 0.3 * x;
        if (f == 1) x = std::log(lift) + 0.3 * x;
        item.features.push_back(Quantize(x));
      }
      item.true_p0 = Quantize(p0);
      item.true_p1 = Quantize(p1);
      items.push_back(std::move(item));
    }
  }
  return ValidateDataset(std::move(items));
}

RctLog RunRct(const Dataset& dataset, double treat_prob, std::uint64_t seed) {
  if (!(treat_prob >= 0.0 && treat_prob <= 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "treat_prob must lie in [0, 1]");
  }
  if (dataset.num_items() > 0) RequireGroundTruth(dataset);
  Rng rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  RctLog log;
  log.item_ids.reserve(dataset.num_items());
  log.assignment.reserve(dataset.num_items());
  log.sold.reserve(dataset.num_items());
  for (const ItemRecord& item : dataset.items()) {
    const bool treated = unit(rng) < treat_prob;
    const double p = treated ? *item.true_p1 : *item.true_p0;
    log.item_ids.push_back(item.item_id);
    log.assignment.push_back(treated ? 1 : 0);
    log.sold.push_back(unit(rng) < p ? 1 : 0);
  }
  return log;
}

double TrueUpliftItems(const Dataset& dataset, const AllocationPlan& plan) {
  RequireGroundTruth(dataset);
  const auto flags = AlignPlan(dataset, plan);
  double total = 0.0;
  const auto items = dataset.items();
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (flags[i]) total += *items[i].true_p1 - *items[i].true_p0;
  }
  return total;
}

double TrueUpliftProviders(const Dataset& dataset, const AllocationPlan& plan) {
  RequireGroundTruth(dataset);
  const auto flags = AlignPlan(dataset, plan);
  const auto items = dataset.items();
  double total = 0.0;
  std::vector<ItemScore> truth;
  std::vector<std::uint8_t> z;
  for (std::size_t p = 0; p < dataset.num_providers(); ++p) {
    truth.clear();
    z.clear();
    bool any = false;
    for (std::size_t i : dataset.provider_items(p)) {
      truth.push_back(ItemScore::Make(items[i].item_id, *items[i].true_p0,
                                      *items[i].true_p1));
      z.push_back(flags[i]);
      any = any || flags[i];
    }
    if (!any) continue;
    const std::vector<std::uint8_t> none(z.size(), 0);
    total += Survival(truth, none) - Survival(truth, z);
  }
  return total;
}

}  // namespace couponalloc
