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

// Coupon allocation strategies. Item-level baselines (Random, I-Greedy, NSW)
// rank single items; provider-level strategies (P-Greedy, SER) work on
// PatternCurves. SER selection is a multiple-choice knapsack: pick one
// coupon count k_s per provider maximizing sum_s deltas_s[k_s] under the
// budget, which is exactly the pattern ILP once patterns are restricted to
// prefixes of the intervention order.

#ifndef COUPONALLOC_ALLOC_H_
#define COUPONALLOC_ALLOC_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "couponalloc/domain.h"
#include "couponalloc/ser.h"

namespace couponalloc {

enum class BudgetMode { kExact, kAtMost };

struct BudgetSpec {
  std::int64_t n_coupons = 0;
  BudgetMode mode = BudgetMode::kExact;
};

enum class SolverChoice { kDpExact, kGreedyMarginal, kBruteForce };

std::string_view SolverChoiceName(SolverChoice solver);
// Accepts "dp", "greedy" and "brute-force". Throws kInvalidConfig.
SolverChoice ParseSolverChoice(std::string_view name);
BudgetMode ParseBudgetMode(std::string_view name);

inline constexpr std::size_t kBruteForceMaxItems = 20;

// Uniform random subset of the eligible items, deterministic given seed.
AllocationPlan AllocateRandom(const Dataset& dataset,
                              const EligibilityMask& eligible,
                              BudgetSpec budget, std::uint64_t seed);

// Top-N eligible items by pi, ties by ascending ItemId.
AllocationPlan AllocateItemGreedy(std::span<const ItemScore> scores,
                                  const EligibilityMask& eligible,
                                  BudgetSpec budget);

// Round-robin over providers: each round hands every provider that still
// has items its next item in curve order. Providers are visited by
// descending best-item pi, ties by ascending ProviderId.
AllocationPlan AllocateProviderGreedy(const Dataset& dataset,
                                      std::span<const PatternCurve> curves,
                                      BudgetSpec budget);

// Maximizes prod_i (z_i ? f1_i : f0_i), which separates into picking the
// N largest log(f1 / f0). An item with f0 = 0 < f1 ranks first; f0 = f1 = 0
// raises kZeroBaseRate.
AllocationPlan AllocateNsw(std::span<const ItemScore> scores,
                           const EligibilityMask& eligible, BudgetSpec budget);

struct MckpSolution {
  // Coupon count per curve.
  std::vector<std::size_t> counts;
  // sum of deltas[counts[s]], accumulated in curve order.
  double objective = 0.0;
};

// DP_EXACT is optimal for any curves. GREEDY_MARGINAL is optimal when every
// curve is concave. BRUTE_FORCE enumerates all count vectors and refuses
// more than kBruteForceMaxItems items in total.
// Throws kInfeasibleBudget (EXACT budget above the total item count) and
// kBruteForceTooLarge.
MckpSolution SolveMckp(std::span<const PatternCurve> curves, BudgetSpec budget,
                       SolverChoice solver);

AllocationPlan AllocateSer(const Dataset& dataset,
                           std::span<const PatternCurve> curves,
                           BudgetSpec budget, SolverChoice solver);

// Writes the pattern ILP in CPLEX LP format: one binary w_<provider>_<t> per
// pattern t = 0..K_s, objective sum delta_s(t) w_s(t), budget row
// sum t * w_s(t) (= or <=) N and one convexity row per provider.
void WriteIlp(std::ostream& out, std::span<const PatternCurve> curves,
              BudgetSpec budget);
void ExportIlp(std::span<const PatternCurve> curves, BudgetSpec budget,
               const std::filesystem::path& path);

}  // namespace couponalloc

#endif  // COUPONALLOC_ALLOC_H_
