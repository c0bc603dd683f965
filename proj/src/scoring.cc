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

#include "couponalloc/scoring.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "couponalloc/error.h"
#include "couponalloc/rng.h"

namespace couponalloc {
namespace {

double Clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

BinnedFrequencyScorer::Surface FitSurface(
    const std::vector<const ItemRecord*>& rows,
    const std::vector<std::uint8_t>& sold, int bins) {
  BinnedFrequencyScorer::Surface surface;
  const std::size_t width = rows.front()->features.size();
  const std::size_t n = rows.size();
  surface.edges.resize(width);
  std::vector<double> column(n);
  for (std::size_t j = 0; j < width; ++j) {
    for (std::size_t r = 0; r < n; ++r) column[r] = rows[r]->features[j];
    std::sort(column.begin(), column.end());
    auto& edges = surface.edges[j];
    for (int k = 1; k < bins; ++k) {
      edges.push_back(column[static_cast<std::size_t>(k) * n /
                             static_cast<std::size_t>(bins)]);
    }
  }

  surface.rate.assign(bins, 0.0);
  std::vector<double> hits(bins, 0.0);
  std::vector<double> trials(bins, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t cell = surface.Cell(rows[r]->features);
    trials[cell] += 1.0;
    hits[cell] += sold[r];
  }
  for (int c = 0; c < bins; ++c) {
    surface.rate[c] = (hits[c] + 1.0) / (trials[c] + 2.0);
  }
  return surface;
}

}  // namespace

std::size_t BinnedFrequencyScorer::Surface::Cell(
    std::span<const double> features) const {
  const std::size_t n_cells = rate.empty() ? 1 : rate.size();
  if (n_cells == 1) return 0;
  std::uint64_t h = 0xcbf29ce484222325ULL;
  const std::size_t width = std::min(features.size(), edges.size());
  for (std::size_t j = 0; j < width; ++j) {
    const auto& e = edges[j];
    const auto bin = static_cast<std::uint64_t>(
        std::upper_bound(e.begin(), e.end(), features[j]) - e.begin());
    h = Mix64(h ^ (bin + (static_cast<std::uint64_t>(j) << 32)));
  }
  return static_cast<std::size_t>(h % n_cells);
}

double BinnedFrequencyScorer::Surface::Predict(
    std::span<const double> features) const {
  return rate[Cell(features)];
}

RatePair BinnedFrequencyScorer::Predict(const ItemRecord& item) const {
  return {control_.Predict(item.features), treatment_.Predict(item.features)};
}

NoisyOracleScorer::NoisyOracleScorer(double noise, std::uint64_t seed)
    : noise_(noise), seed_(seed) {
  if (!(noise >= 0.0) || !std::isfinite(noise)) {
    throw Error(ErrorCode::kInvalidConfig, "noise must be a finite value >= 0");
  }
}

RatePair NoisyOracleScorer::Predict(const ItemRecord& item) const {
  if (!item.true_p0 || !item.true_p1) {
    throw Error(ErrorCode::kMissingGroundTruth,
                "item " + std::to_string(item.item_id.value));
  }
  if (noise_ == 0.0) return {*item.true_p0, *item.true_p1};
  Rng rng(DeriveSeed(seed_, item.item_id.value));
  std::normal_distribution<double> eps(0.0, 1.0);
  const double e0 = eps(rng);
  const double e1 = eps(rng);
  return {Clamp01(*item.true_p0 * (1.0 + noise_ * e0)),
          Clamp01(*item.true_p1 * (1.0 + noise_ * e1))};
}

BinnedFrequencyScorer FitTLearner(const RctLog& training_log,
                                  const Dataset& dataset, int bins) {
  if (bins < 1) throw Error(ErrorCode::kInvalidConfig, "bins must be >= 1");
  std::vector<const ItemRecord*> rows[2];
  std::vector<std::uint8_t> sold[2];
  const auto items = dataset.items();
  for (std::size_t r = 0; r < training_log.size(); ++r) {
    const auto index = dataset.item_index(training_log.item_ids[r]);
    if (!index) {
      throw Error(ErrorCode::kPopulationMismatch,
                  "training item " +
                      std::to_string(training_log.item_ids[r].value) +
                      " is not in the dataset");
    }
    const int arm = training_log.assignment[r] ? 1 : 0;
    rows[arm].push_back(&items[*index]);
    sold[arm].push_back(training_log.sold[r] ? 1 : 0);
  }
  if (rows[0].empty() || rows[1].empty()) {
    throw Error(ErrorCode::kEmptyArm,
                rows[0].empty() ? "no untreated training rows"
                                : "no treated training rows");
  }
  return BinnedFrequencyScorer(FitSurface(rows[0], sold[0], bins),
                               FitSurface(rows[1], sold[1], bins));
}

std::vector<ItemScore> ScoreItems(const Scorer& scorer, const Dataset& dataset) {
  std::vector<ItemScore> scores;
  scores.reserve(dataset.num_items());
  for (const ItemRecord& item : dataset.items()) {
    const RatePair rates = scorer.Predict(item);
    scores.push_back(ItemScore::Make(item.item_id, rates.f0, rates.f1));
  }
  return scores;
}

QualityThreshold::QualityThreshold(double percentile_q)
    : percentile_q_(percentile_q) {
  if (!(percentile_q >= 0.0 && percentile_q <= 100.0)) {
    throw Error(ErrorCode::kInvalidConfig,
                "quality percentile must lie in [0, 100]");
  }
}

double QualityCutoff(std::span<const ItemScore> scores, QualityThreshold q) {
  if (scores.empty()) return 0.0;
  std::vector<double> f1;
  f1.reserve(scores.size());
  for (const auto& s : scores) f1.push_back(s.f1);
  std::sort(f1.begin(), f1.end());
  const auto n = f1.size();
  auto rank = static_cast<std::size_t>(
      std::floor(q.percentile_q() * static_cast<double>(n) / 100.0));
  rank = std::min(rank, n - 1);
  return f1[rank];
}

EligibilityMask ApplyQualityFilter(std::span<const ItemScore> scores,
                                   QualityThreshold q) {
  EligibilityMask mask(scores.size(), 1);
  if (q.percentile_q() == 0.0 || scores.empty()) return mask;
  const double cutoff = QualityCutoff(scores, q);
  for (std::size_t i = 0; i < scores.size(); ++i) {
    mask[i] = scores[i].f1 >= cutoff ? 1 : 0;
  }
  return mask;
}

EligibilityMask ComputeEligibility(std::span<const ItemScore> scores,
                                   QualityThreshold q,
                                   bool allow_negative_uplift) {
  EligibilityMask mask = ApplyQualityFilter(scores, q);
  if (!allow_negative_uplift) {
    for (std::size_t i = 0; i < scores.size(); ++i) {
      if (scores[i].f1 <= scores[i].f0) mask[i] = 0;
    }
  }
  return mask;
}

std::vector<ItemId> EligibleIds(std::span<const ItemScore> scores,
                                const EligibilityMask& mask) {
  std::vector<ItemId> ids;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (mask[i]) ids.push_back(scores[i].item_id);
  }
  return ids;
}

}  // namespace couponalloc
