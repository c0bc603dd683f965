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

#include "couponalloc/alloc.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <ostream>
#include <queue>
#include <string>
#include <utility>

#include "couponalloc/error.h"
#include "couponalloc/rng.h"

namespace couponalloc {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void CheckBudget(BudgetSpec budget) {
  if (budget.n_coupons < 0) {
    throw Error(ErrorCode::kInvalidConfig, "coupon budget must be >= 0");
  }
}

// Number of coupons to place when `available` candidates exist.
std::size_t CouponsToPlace(BudgetSpec budget, std::size_t available) {
  CheckBudget(budget);
  const auto n = static_cast<std::size_t>(budget.n_coupons);
  if (n > available) {
    if (budget.mode == BudgetMode::kExact) {
      throw Error(ErrorCode::kInsufficientEligibleItems,
                  "budget " + std::to_string(n) + " exceeds " +
                      std::to_string(available) + " eligible items");
    }
    return available;
  }
  return n;
}

void CheckMask(std::size_t population, const EligibilityMask& eligible) {
  if (eligible.size() != population) {
    throw Error(ErrorCode::kDimensionMismatch,
                "eligibility mask does not match the item population");
  }
}

std::vector<ItemId> ScoreIds(std::span<const ItemScore> scores) {
  std::vector<ItemId> ids;
  ids.reserve(scores.size());
  for (const auto& s : scores) ids.push_back(s.item_id);
  return ids;
}

// Coupons the `n` best candidates under `better`, a strict weak order on
// score positions.
template <typename Better>
AllocationPlan TakeTop(std::span<const ItemScore> scores,
                       const EligibilityMask& eligible, BudgetSpec budget,
                       std::string name, Better better) {
  CheckMask(scores.size(), eligible);
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (eligible[i]) candidates.push_back(i);
  }
  const std::size_t n = CouponsToPlace(budget, candidates.size());
  std::partial_sort(candidates.begin(),
                    candidates.begin() + static_cast<std::ptrdiff_t>(n),
                    candidates.end(), better);
  AllocationPlan plan = AllocationPlan::Empty(ScoreIds(scores), std::move(name));
  plan.budget_n = budget.n_coupons;
  for (std::size_t j = 0; j < n; ++j) plan.coupon[candidates[j]] = 1;
  return plan;
}

double FoldObjective(std::span<const PatternCurve> curves,
                     const std::vector<std::size_t>& counts) {
  double total = 0.0;
  for (std::size_t s = 0; s < curves.size(); ++s) {
    total += curves[s].deltas[counts[s]];
  }
  return total;
}

std::size_t TotalItems(std::span<const PatternCurve> curves) {
  std::size_t total = 0;
  for (const auto& c : curves) {
    if (c.deltas.size() != c.item_order.size() + 1) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "pattern curve of provider " +
                      std::to_string(c.provider_id.value) +
                      " has inconsistent length");
    }
    total += c.max_coupons();
  }
  return total;
}

// One DP layer: next[b] = max_k prev[b - k] + deltas[k]. `prev_cap` and
// `next_cap` bound the reachable budgets before and after this curve.
void DpLayer(const std::vector<double>& prev, std::size_t prev_cap,
             const PatternCurve& curve, std::size_t next_cap,
             std::vector<double>& next) {
  const std::size_t max_k = curve.max_coupons();
  const double* deltas = curve.deltas.data();
  for (std::size_t b = 0; b <= next_cap; ++b) {
    double best = kNegInf;
    const std::size_t k_hi = std::min(max_k, b);
    const std::size_t k_lo = b > prev_cap ? b - prev_cap : 0;
    for (std::size_t k = k_lo; k <= k_hi; ++k) {
      const double v = prev[b - k] + deltas[k];
      if (v > best) best = v;
    }
    next[b] = best;
  }
  for (std::size_t b = next_cap + 1; b < next.size(); ++b) next[b] = kNegInf;
}

// Smallest k reproducing next[b]; matches the forward pass tie-break.
std::size_t DpChoice(const std::vector<double>& prev, std::size_t prev_cap,
                     const PatternCurve& curve, std::size_t b, double target) {
  const std::size_t k_hi = std::min(curve.max_coupons(), b);
  const std::size_t k_lo = b > prev_cap ? b - prev_cap : 0;
  for (std::size_t k = k_lo; k <= k_hi; ++k) {
    if (prev[b - k] + curve.deltas[k] == target) return k;
  }
  throw Error(ErrorCode::kInfeasibleBudget, "DP reconstruction failed");
}

// Multiple-choice knapsack DP over (provider, budget). Only every
// kCheckpointStride-th value row is kept; backtracking recomputes one block
// of rows at a time, so memory stays O(N * (|S| / stride + stride)).
MckpSolution SolveDp(std::span<const PatternCurve> curves, BudgetSpec budget,
                     std::size_t total) {
  constexpr std::size_t kCheckpointStride = 256;
  const auto n = static_cast<std::size_t>(budget.n_coupons);
  const std::size_t cap = std::min(n, total);

  std::vector<std::size_t> active;
  for (std::size_t s = 0; s < curves.size(); ++s) {
    if (curves[s].max_coupons() > 0) active.push_back(s);
  }
  // caps[j] = reachable budget before active curve j.
  std::vector<std::size_t> caps(active.size() + 1, 0);
  for (std::size_t j = 0; j < active.size(); ++j) {
    caps[j + 1] = std::min(cap, caps[j] + curves[active[j]].max_coupons());
  }

  std::vector<double> row(cap + 1, kNegInf);
  row[0] = 0.0;
  std::vector<std::vector<double>> checkpoints;
  std::vector<double> next(cap + 1);
  for (std::size_t j = 0; j < active.size(); ++j) {
    if (j % kCheckpointStride == 0) checkpoints.push_back(row);
    DpLayer(row, caps[j], curves[active[j]], caps[j + 1], next);
    row.swap(next);
  }

  std::size_t b = cap;
  if (budget.mode == BudgetMode::kAtMost) {
    for (std::size_t c = 0; c <= cap; ++c) {
      if (row[c] > row[b] || (row[c] == row[b] && c < b)) b = c;
    }
  }
  if (row[b] == kNegInf) {
    throw Error(ErrorCode::kInfeasibleBudget, "no feasible coupon split");
  }

  MckpSolution solution;
  solution.counts.assign(curves.size(), 0);
  double target = row[b];
  for (std::size_t block = checkpoints.size(); block-- > 0;) {
    const std::size_t first = block * kCheckpointStride;
    const std::size_t last = std::min(first + kCheckpointStride, active.size());
    std::vector<std::vector<double>> rows;
    rows.reserve(last - first + 1);
    rows.push_back(checkpoints[block]);
    for (std::size_t j = first; j < last; ++j) {
      std::vector<double> layer(cap + 1);
      DpLayer(rows.back(), caps[j], curves[active[j]], caps[j + 1], layer);
      rows.push_back(std::move(layer));
    }
    for (std::size_t j = last; j-- > first;) {
      const std::vector<double>& prev = rows[j - first];
      const std::size_t k = DpChoice(prev, caps[j], curves[active[j]], b, target);
      solution.counts[active[j]] = k;
      b -= k;
      target = prev[b];
    }
  }
  solution.objective = FoldObjective(curves, solution.counts);
  return solution;
}

MckpSolution SolveGreedy(std::span<const PatternCurve> curves,
                         BudgetSpec budget, std::size_t total) {
  const std::size_t n =
      std::min(static_cast<std::size_t>(budget.n_coupons), total);
  struct Candidate {
    double gain;
    std::size_t curve;
    bool operator<(const Candidate& o) const {
      if (gain != o.gain) return gain < o.gain;
      return curve > o.curve;
    }
  };
  MckpSolution solution;
  solution.counts.assign(curves.size(), 0);
  std::priority_queue<Candidate> heap;
  for (std::size_t s = 0; s < curves.size(); ++s) {
    if (curves[s].max_coupons() > 0) {
      heap.push({curves[s].deltas[1] - curves[s].deltas[0], s});
    }
  }
  for (std::size_t placed = 0; placed < n && !heap.empty(); ++placed) {
    const Candidate top = heap.top();
    if (budget.mode == BudgetMode::kAtMost && top.gain <= 0.0) break;
    heap.pop();
    const PatternCurve& curve = curves[top.curve];
    const std::size_t k = ++solution.counts[top.curve];
    if (k < curve.max_coupons()) {
      heap.push({curve.deltas[k + 1] - curve.deltas[k], top.curve});
    }
  }
  solution.objective = FoldObjective(curves, solution.counts);
  return solution;
}

MckpSolution SolveBruteForce(std::span<const PatternCurve> curves,
                             BudgetSpec budget, std::size_t total) {
  if (total > kBruteForceMaxItems) {
    throw Error(ErrorCode::kBruteForceTooLarge,
                std::to_string(total) + " items exceed the brute-force limit of " +
                    std::to_string(kBruteForceMaxItems));
  }
  const auto n = static_cast<std::size_t>(budget.n_coupons);
  MckpSolution best;
  best.objective = kNegInf;
  std::vector<std::size_t> counts(curves.size(), 0);
  // Odometer over all count vectors.
  while (true) {
    const std::size_t used = std::accumulate(counts.begin(), counts.end(),
                                             std::size_t{0});
    const bool feasible =
        budget.mode == BudgetMode::kExact ? used == n : used <= n;
    if (feasible) {
      const double value = FoldObjective(curves, counts);
      if (value > best.objective) {
        best.objective = value;
        best.counts = counts;
      }
    }
    std::size_t s = 0;
    while (s < curves.size() && counts[s] == curves[s].max_coupons()) {
      counts[s++] = 0;
    }
    if (s == curves.size()) break;
    ++counts[s];
  }
  if (best.objective == kNegInf) {
    throw Error(ErrorCode::kInfeasibleBudget, "no feasible coupon split");
  }
  return best;
}

}  // namespace

std::string_view SolverChoiceName(SolverChoice solver) {
  switch (solver) {
    case SolverChoice::kDpExact: return "dp";
    case SolverChoice::kGreedyMarginal: return "greedy";
    case SolverChoice::kBruteForce: return "brute-force";
  }
  return "unknown";
}

SolverChoice ParseSolverChoice(std::string_view name) {
  if (name == "dp" || name == "dp-exact") return SolverChoice::kDpExact;
  if (name == "greedy" || name == "greedy-marginal") {
    return SolverChoice::kGreedyMarginal;
  }
  if (name == "brute-force" || name == "brute") return SolverChoice::kBruteForce;
  throw Error(ErrorCode::kInvalidConfig,
              "unknown solver '" + std::string(name) + "'");
}

BudgetMode ParseBudgetMode(std::string_view name) {
  if (name == "exact") return BudgetMode::kExact;
  if (name == "at-most" || name == "at_most") return BudgetMode::kAtMost;
  throw Error(ErrorCode::kInvalidConfig,
              "unknown budget mode '" + std::string(name) + "'");
}

AllocationPlan AllocateRandom(const Dataset& dataset,
                              const EligibilityMask& eligible,
                              BudgetSpec budget, std::uint64_t seed) {
  CheckMask(dataset.num_items(), eligible);
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < eligible.size(); ++i) {
    if (eligible[i]) candidates.push_back(i);
  }
  const std::size_t n = CouponsToPlace(budget, candidates.size());
  std::vector<std::size_t> chosen;
  chosen.reserve(n);
  Rng rng(seed);
  std::sample(candidates.begin(), candidates.end(), std::back_inserter(chosen),
              n, rng);
  AllocationPlan plan = AllocationPlan::Empty(dataset.item_ids(), "random");
  plan.budget_n = budget.n_coupons;
  for (std::size_t i : chosen) plan.coupon[i] = 1;
  return plan;
}

AllocationPlan AllocateItemGreedy(std::span<const ItemScore> scores,
                                  const EligibilityMask& eligible,
                                  BudgetSpec budget) {
  return TakeTop(scores, eligible, budget, "i-greedy",
                 [&](std::size_t a, std::size_t b) {
                   if (scores[a].pi != scores[b].pi) {
                     return scores[a].pi > scores[b].pi;
                   }
                   return scores[a].item_id < scores[b].item_id;
                 });
}

AllocationPlan AllocateNsw(std::span<const ItemScore> scores,
                           const EligibilityMask& eligible, BudgetSpec budget) {
  CheckMask(scores.size(), eligible);
  std::vector<double> log_ratio(scores.size(), 0.0);
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!eligible[i]) continue;
    const ItemScore& s = scores[i];
    if (s.f0 == 0.0) {
      if (s.f1 == 0.0) {
        throw Error(ErrorCode::kZeroBaseRate,
                    "item " + std::to_string(s.item_id.value) +
                        " has f0 = f1 = 0");
      }
      log_ratio[i] = std::numeric_limits<double>::infinity();
    } else {
      log_ratio[i] = std::log(s.f1) - std::log(s.f0);
    }
  }
  return TakeTop(scores, eligible, budget, "nsw",
                 [&](std::size_t a, std::size_t b) {
                   if (log_ratio[a] != log_ratio[b]) {
                     return log_ratio[a] > log_ratio[b];
                   }
                   return scores[a].item_id < scores[b].item_id;
                 });
}

AllocationPlan AllocateProviderGreedy(const Dataset& dataset,
                                      std::span<const PatternCurve> curves,
                                      BudgetSpec budget) {
  const std::size_t n = CouponsToPlace(budget, TotalItems(curves));
  std::vector<std::size_t> providers;
  std::vector<double> best_pi(curves.size(), 0.0);
  std::size_t max_rounds = 0;
  for (std::size_t s = 0; s < curves.size(); ++s) {
    const auto& c = curves[s];
    if (c.max_coupons() == 0) continue;
    providers.push_back(s);
    best_pi[s] = *std::max_element(c.item_uplift.begin(), c.item_uplift.end());
    max_rounds = std::max(max_rounds, c.max_coupons());
  }
  std::sort(providers.begin(), providers.end(),
            [&](std::size_t a, std::size_t b) {
              if (best_pi[a] != best_pi[b]) return best_pi[a] > best_pi[b];
              return curves[a].provider_id < curves[b].provider_id;
            });

  AllocationPlan plan = AllocationPlan::Empty(dataset.item_ids(), "p-greedy");
  plan.budget_n = budget.n_coupons;
  std::size_t placed = 0;
  for (std::size_t round = 0; round < max_rounds && placed < n; ++round) {
    for (std::size_t s : providers) {
      if (placed == n) break;
      if (round >= curves[s].max_coupons()) continue;
      const auto index = dataset.item_index(curves[s].item_order[round]);
      if (!index) {
        throw Error(ErrorCode::kPopulationMismatch,
                    "curve item not in dataset");
      }
      plan.coupon[*index] = 1;
      ++placed;
    }
  }
  return plan;
}

MckpSolution SolveMckp(std::span<const PatternCurve> curves, BudgetSpec budget,
                       SolverChoice solver) {
  CheckBudget(budget);
  const std::size_t total = TotalItems(curves);
  if (budget.mode == BudgetMode::kExact &&
      static_cast<std::size_t>(budget.n_coupons) > total) {
    throw Error(ErrorCode::kInfeasibleBudget,
                "budget " + std::to_string(budget.n_coupons) + " exceeds " +
                    std::to_string(total) + " eligible items");
  }
  switch (solver) {
    case SolverChoice::kDpExact: return SolveDp(curves, budget, total);
    case SolverChoice::kGreedyMarginal:
      return SolveGreedy(curves, budget, total);
    case SolverChoice::kBruteForce:
      return SolveBruteForce(curves, budget, total);
  }
  throw Error(ErrorCode::kInvalidConfig, "unknown solver");
}

AllocationPlan AllocateSer(const Dataset& dataset,
                           std::span<const PatternCurve> curves,
                           BudgetSpec budget, SolverChoice solver) {
  const MckpSolution solution = SolveMckp(curves, budget, solver);
  AllocationPlan plan = AllocationPlan::Empty(dataset.item_ids(), "ser");
  plan.budget_n = budget.n_coupons;
  plan.objective_value = solution.objective;
  for (std::size_t s = 0; s < curves.size(); ++s) {
    for (std::size_t k = 0; k < solution.counts[s]; ++k) {
      const auto index = dataset.item_index(curves[s].item_order[k]);
      if (!index) {
        throw Error(ErrorCode::kPopulationMismatch,
                    "curve item not in dataset");
      }
      plan.coupon[*index] = 1;
    }
  }
  return plan;
}

void WriteIlp(std::ostream& out, std::span<const PatternCurve> curves,
              BudgetSpec budget) {
  CheckBudget(budget);
  TotalItems(curves);
  auto var = [&](std::size_t s, std::size_t t) {
    return "w_" + std::to_string(curves[s].provider_id.value) + "_" +
           std::to_string(t);
  };
  char coef[64];
  out << "\\ Provider sales-experience coupon allocation (pattern ILP)\n";
  out << "Maximize\n obj:";
  for (std::size_t s = 0; s < curves.size(); ++s) {
    for (std::size_t t = 0; t < curves[s].deltas.size(); ++t) {
      std::snprintf(coef, sizeof(coef), "%.12f", curves[s].deltas[t]);
      out << "\n    + " << coef << ' ' << var(s, t);
    }
  }
  out << "\nSubject To\n budget:";
  for (std::size_t s = 0; s < curves.size(); ++s) {
    for (std::size_t t = 0; t < curves[s].deltas.size(); ++t) {
      out << "\n    + " << t << ' ' << var(s, t);
    }
  }
  out << "\n    " << (budget.mode == BudgetMode::kExact ? "=" : "<=") << ' '
      << budget.n_coupons << '\n';
  for (std::size_t s = 0; s < curves.size(); ++s) {
    out << " convex_" << curves[s].provider_id.value << ':';
    for (std::size_t t = 0; t < curves[s].deltas.size(); ++t) {
      out << " + " << var(s, t);
    }
    out << " = 1\n";
  }
  out << "Binaries\n";
  for (std::size_t s = 0; s < curves.size(); ++s) {
    for (std::size_t t = 0; t < curves[s].deltas.size(); ++t) {
      out << ' ' << var(s, t) << '\n';
    }
  }
  out << "End\n";
}

void ExportIlp(std::span<const PatternCurve> curves, BudgetSpec budget,
               const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  }
  WriteIlp(out, curves, budget);
  if (!out) throw Error(ErrorCode::kIoError, "write failed: " + path.string());
}

}  // namespace couponalloc
