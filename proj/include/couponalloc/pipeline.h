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

// File-to-file pipeline stages behind the command-line tool, and the
// declarative RunConfig that chains them.

#ifndef COUPONALLOC_PIPELINE_H_
#define COUPONALLOC_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "couponalloc/alloc.h"
#include "couponalloc/error.h"
#include "couponalloc/io.h"
#include "couponalloc/ser.h"
#include "couponalloc/simulate.h"

namespace couponalloc {

namespace fs = std::filesystem;

// Process exit code for an error: 2 validation, 3 solver infeasibility,
// 4 I/O.
int ExitCodeFor(ErrorCode code);

// Default output directory: $COUPONALLOC_OUT_DIR, else "out".
fs::path DefaultOutputDir();

struct SimulateOptions {
  MarketConfig market;
  double treat_prob = 0.5;
  std::uint64_t rct_seed = 1;
  std::string rct_file = "rct.csv";
};

// Writes items.csv and the RCT log into out_dir (created if missing).
void SimulateStage(const SimulateOptions& options, const fs::path& out_dir);

struct ScoreOptions {
  // "oracle" or "binned".
  std::string scorer = "oracle";
  double noise = 0.0;
  std::uint64_t seed = 0;
  int bins = 32;
  // Required by the binned scorer.
  std::optional<fs::path> training_log;
};

// Writes scores.csv and scores.jsonl.
void ScoreStage(const fs::path& items, const ScoreOptions& options,
                const fs::path& out_dir);

inline const std::vector<std::string>& StrategyNames() {
  static const std::vector<std::string> names = {"random", "i-greedy",
                                                 "p-greedy", "nsw", "ser"};
  return names;
}

struct AllocateOptions {
  std::string strategy = "ser";
  // Plan file is plan_<label>.csv; defaults to the strategy name.
  std::string label;
  std::int64_t n_coupons = 0;
  BudgetMode budget_mode = BudgetMode::kExact;
  double quality_q = 0.0;
  OrderingPolicy ordering = OrderingPolicy::kPiDesc;
  SolverChoice solver = SolverChoice::kDpExact;
  bool allow_negative_uplift = false;
  std::uint64_t seed = 0;
  std::optional<fs::path> export_lp;
  std::optional<fs::path> export_curves;
};

struct AllocateResult {
  fs::path plan_path;
  AllocationPlan plan;
};

AllocateResult AllocateStage(const fs::path& items, const fs::path& scores,
                             const AllocateOptions& options,
                             const fs::path& out_dir);

// Evaluates every plan against the RCT log. A row whose estimator is
// undefined records the error in its status. Writes report.csv and
// report.json. Throws the first row error if every row failed.
std::vector<ReportRow> EvaluateStage(const fs::path& items,
                                     const fs::path& rct,
                                     const std::vector<fs::path>& plans,
                                     const fs::path& out_dir);

// Strategy label from a plan_<label>.csv file name.
std::string PlanLabel(const fs::path& plan);

std::vector<fs::path> ReportStage(const fs::path& report_csv,
                                  const fs::path& out_dir);

struct StrategySpec {
  std::string name;
  std::string label;
  double quality_q = 0.0;
};

struct RunConfig {
  MarketConfig market;
  double treat_prob = 0.5;
  std::uint64_t rct_seed = 1;
  std::uint64_t train_rct_seed = 2;
  ScoreOptions scoring;
  std::vector<StrategySpec> strategies;
  // Exactly one of budget_n / budget_fraction is used; the fraction is of
  // the items eligible without a quality filter.
  std::optional<std::int64_t> budget_n;
  double budget_fraction = 0.05;
  BudgetMode budget_mode = BudgetMode::kExact;
  OrderingPolicy ordering = OrderingPolicy::kPiDesc;
  SolverChoice solver = SolverChoice::kDpExact;
  bool allow_negative_uplift = false;
  std::uint64_t allocation_seed = 3;
  fs::path output_dir = "out";
};

// Parses a JSON RunConfig. Unknown strategies, negative budgets and bad
// enum names raise kInvalidConfig.
RunConfig ParseRunConfig(const std::string& json_text);
RunConfig LoadRunConfig(const fs::path& path);

// Full simulate -> score -> allocate -> evaluate -> report chain through the
// same files the individual stages write.
std::vector<ReportRow> RunPipeline(const RunConfig& config);

}  // namespace couponalloc

#endif  // COUPONALLOC_PIPELINE_H_
