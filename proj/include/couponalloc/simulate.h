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

// Synthetic marketplaces with known ground truth, and randomized coupon
// experiments run against them.

#ifndef COUPONALLOC_SIMULATE_H_
#define COUPONALLOC_SIMULATE_H_

#include <cstdint>

#include "couponalloc/domain.h"

namespace couponalloc {

struct MarketConfig {
  std::int64_t n_providers = 1000;
  // Items per provider follow P(k) ~ k^-zipf_exponent on 1..max_items.
  double zipf_exponent = 1.5;
  int max_items = 200;
  // Baseline sale rate p0 ~ Beta(p0_alpha, p0_beta).
  double p0_alpha = 1.0;
  double p0_beta = 6.0;
  // Positive-uplift items get p1 = min(1, p0 * (1 + L)) with
  // L ~ LogNormal(lift_log_mean, lift_log_sd).
  double lift_log_mean = 0.0;
  double lift_log_sd = 0.75;
  // Share of items whose coupon lowers the sale rate: p1 = p0 * U(0.5, 1).
  double negative_uplift_fraction = 0.05;
  int n_features = 3;
  std::uint64_t seed = 0;
};

// Throws kInvalidConfig describing the first bad field.
void ValidateMarketConfig(const MarketConfig& config);

// Deterministic given config.seed. Provider s draws from its own seed
// stream; provider ids are 0..n-1 and item ids are assigned in provider
// order. Probabilities and features are quantized to 12 significant digits.
Dataset GenerateMarket(const MarketConfig& config);

// Independent per-item assignment a ~ Bernoulli(treat_prob) and sale
// y ~ Bernoulli(a ? true_p1 : true_p0). Throws kMissingGroundTruth.
RctLog RunRct(const Dataset& dataset, double treat_prob, std::uint64_t seed);

// sum over couponed items of (true_p1 - true_p0).
double TrueUpliftItems(const Dataset& dataset, const AllocationPlan& plan);

// sum over providers of SER_true(s, z_s) - SER_true(s, 0).
double TrueUpliftProviders(const Dataset& dataset, const AllocationPlan& plan);

}  // namespace couponalloc

#endif  // COUPONALLOC_SIMULATE_H_
