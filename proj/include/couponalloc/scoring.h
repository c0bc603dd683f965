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

// Per-item sale-rate estimation (a T-learner with one response surface per
// RCT arm) and the coupon-eligibility rules applied before allocation.

#ifndef COUPONALLOC_SCORING_H_
#define COUPONALLOC_SCORING_H_

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "couponalloc/domain.h"

namespace couponalloc {

struct RatePair {
  double f0 = 0.0;
  double f1 = 0.0;
};

class Scorer {
 public:
  virtual ~Scorer() = default;

  // Estimated sale rates without and with a coupon, both in [0, 1].
  virtual RatePair Predict(const ItemRecord& item) const = 0;
};

// Empirical sale rates per feature cell, one table per arm. Each feature is
// cut into quantile bins fitted on that arm's training rows; the per-feature
// bin indices are hashed into `bins` cells. Rates are Laplace smoothed
// ((sold + 1) / (n + 2)).
class BinnedFrequencyScorer : public Scorer {
 public:
  struct Surface {
    // edges[j] holds the bin boundaries of feature j.
    std::vector<std::vector<double>> edges;
    std::vector<double> rate;

    std::size_t Cell(std::span<const double> features) const;
    double Predict(std::span<const double> features) const;
  };

  BinnedFrequencyScorer(Surface control, Surface treatment)
      : control_(std::move(control)), treatment_(std::move(treatment)) {}

  RatePair Predict(const ItemRecord& item) const override;

  const Surface& control() const { return control_; }
  const Surface& treatment() const { return treatment_; }

 private:
  Surface control_;
  Surface treatment_;
};

// Reads the ground truth and multiplies each rate by (1 + noise * eps) with
// eps ~ N(0, 1), then clamps to [0, 1]. The draw for an item depends only on
// (seed, item id), so results do not depend on scoring order.
class NoisyOracleScorer : public Scorer {
 public:
  NoisyOracleScorer(double noise, std::uint64_t seed);

  RatePair Predict(const ItemRecord& item) const override;

  double noise() const { return noise_; }

 private:
  double noise_;
  std::uint64_t seed_;
};

// Fits the control surface on RCT-untreated rows only and the treatment
// surface on RCT-treated rows only. Throws kEmptyArm, kPopulationMismatch
// (log item not in dataset) or kInvalidConfig (bins < 1).
BinnedFrequencyScorer FitTLearner(const RctLog& training_log,
                                  const Dataset& dataset, int bins);

// One score per dataset item, in dataset order.
std::vector<ItemScore> ScoreItems(const Scorer& scorer, const Dataset& dataset);

class QualityThreshold {
 public:
  // Throws kInvalidConfig unless 0 <= percentile_q <= 100.
  explicit QualityThreshold(double percentile_q);

  double percentile_q() const { return percentile_q_; }

 private:
  double percentile_q_;
};

// f1 value at the q-th percentile: the value at sorted position
// floor(q * n / 100), clamped to the last element. Items strictly below it
// are low quality.
double QualityCutoff(std::span<const ItemScore> scores, QualityThreshold q);

// Mask (aligned with `scores`) of items whose f1 is at or above the cutoff.
EligibilityMask ApplyQualityFilter(std::span<const ItemScore> scores,
                                   QualityThreshold q);

// Quality filter plus the non-positive-uplift bar (f1 <= f0 is ineligible
// unless allow_negative_uplift is set).
EligibilityMask ComputeEligibility(std::span<const ItemScore> scores,
                                   QualityThreshold q,
                                   bool allow_negative_uplift = false);

std::vector<ItemId> EligibleIds(std::span<const ItemScore> scores,
                                const EligibilityMask& mask);

}  // namespace couponalloc

#endif  // COUPONALLOC_SCORING_H_
