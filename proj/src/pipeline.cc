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

#include "couponalloc/pipeline.h"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <sstream>
#include <utility>

#include "couponalloc/eval.h"
#include "couponalloc/report.h"
#include "couponalloc/scoring.h"
#include "json.hpp"

namespace couponalloc {
namespace {

using json = nlohmann::json;

void EnsureDir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw Error(ErrorCode::kIoError,
                "cannot create " + dir.string() + ": " + ec.message());
  }
}

// Scores reordered to dataset item order.
std::vector<ItemScore> AlignScores(const Dataset& dataset,
                                   std::vector<ItemScore> scores) {
  if (scores.size() != dataset.num_items()) {
    throw Error(ErrorCode::kPopulationMismatch,
                "scores cover " + std::to_string(scores.size()) +
                    " items, dataset has " +
                    std::to_string(dataset.num_items()));
  }
  std::vector<ItemScore> aligned(scores.size());
  std::vector<std::uint8_t> seen(scores.size(), 0);
  for (const ItemScore& s : scores) {
    const auto index = dataset.item_index(s.item_id);
    if (!index || seen[*index]) {
      throw Error(ErrorCode::kPopulationMismatch,
                  "score for unknown or repeated item " +
                      std::to_string(s.item_id.value));
    }
    seen[*index] = 1;
    aligned[*index] = s;
  }
  return aligned;
}

bool IsStrategy(const std::string& name) {
  for (const auto& s : StrategyNames()) {
    if (s == name) return true;
  }
  return false;
}

std::string DefaultLabel(const StrategySpec& spec) {
  if (!spec.label.empty()) return spec.label;
  if (spec.name != "ser") return spec.name;
  std::ostringstream os;
  os << "ser-q" << spec.quality_q;
  return os.str();
}

template <typename T>
T Get(const json& obj, const char* key, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidConfig,
                std::string("field '") + key + "': " + e.what());
  }
}

}  // namespace

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInsufficientEligibleItems:
    case ErrorCode::kInfeasibleBudget:
    case ErrorCode::kBruteForceTooLarge:
      return 3;
    case ErrorCode::kIoError:
      return 4;
    default:
      return 2;
  }
}

fs::path DefaultOutputDir() {
  if (const char* env = std::getenv("COUPONALLOC_OUT_DIR"); env && *env) {
    return env;
  }
  return "out";
}

void SimulateStage(const SimulateOptions& options, const fs::path& out_dir) {
  EnsureDir(out_dir);
  const Dataset dataset = GenerateMarket(options.market);
  WriteItemsCsv(dataset, out_dir / "items.csv");
  WriteRctCsv(RunRct(dataset, options.treat_prob, options.rct_seed),
              out_dir / options.rct_file);
}

void ScoreStage(const fs::path& items, const ScoreOptions& options,
                const fs::path& out_dir) {
  EnsureDir(out_dir);
  const Dataset dataset = ReadItemsCsv(items);
  std::unique_ptr<Scorer> scorer;
  if (options.scorer == "oracle") {
    scorer = std::make_unique<NoisyOracleScorer>(options.noise, options.seed);
  } else if (options.scorer == "binned") {
    if (!options.training_log) {
      throw Error(ErrorCode::kInvalidConfig,
                  "the binned scorer needs a training RCT log");
    }
    scorer = std::make_unique<BinnedFrequencyScorer>(
        FitTLearner(ReadRctCsv(*options.training_log), dataset, options.bins));
  } else {
    throw Error(ErrorCode::kInvalidConfig,
                "unknown scorer '" + options.scorer + "'");
  }
  std::vector<ItemScore> scores = ScoreItems(*scorer, dataset);
  WriteScoresCsv(scores, out_dir / "scores.csv");
  WriteScoresJsonl(scores, out_dir / "scores.jsonl");
}

AllocateResult AllocateStage(const fs::path& items, const fs::path& scores_path,
                             const AllocateOptions& options,
                             const fs::path& out_dir) {
  if (!IsStrategy(options.strategy)) {
    throw Error(ErrorCode::kInvalidConfig,
                "unknown strategy '" + options.strategy + "'");
  }
  EnsureDir(out_dir);
  const Dataset dataset = ReadItemsCsv(items);
  const std::vector<ItemScore> scores =
      AlignScores(dataset, ReadScoresCsv(scores_path));
  const EligibilityMask mask =
      ComputeEligibility(scores, QualityThreshold(options.quality_q),
                         options.allow_negative_uplift);
  const BudgetSpec budget{options.n_coupons, options.budget_mode};

  AllocationPlan plan;
  if (options.strategy == "random") {
    plan = AllocateRandom(dataset, mask, budget, options.seed);
  } else if (options.strategy == "i-greedy") {
    plan = AllocateItemGreedy(scores, mask, budget);
  } else if (options.strategy == "nsw") {
    plan = AllocateNsw(scores, mask, budget);
  } else if (options.strategy == "p-greedy") {
    const auto curves =
        BuildPatternCurves(dataset, scores, mask, OrderingPolicy::kPiDesc);
    plan = AllocateProviderGreedy(dataset, curves, budget);
  } else {
    const auto curves =
        BuildPatternCurves(dataset, scores, mask, options.ordering);
    if (options.export_lp) ExportIlp(curves, budget, *options.export_lp);
    if (options.export_curves) WriteCurvesJsonl(curves, *options.export_curves);
    plan = AllocateSer(dataset, curves, budget, options.solver);
  }
  plan.strategy_name = options.label.empty() ? options.strategy : options.label;

  AllocateResult result;
  result.plan_path = out_dir / ("plan_" + plan.strategy_name + ".csv");
  WritePlanCsv(plan, result.plan_path);
  WritePlanJson(plan, out_dir / ("plan_" + plan.strategy_name + ".json"));
  result.plan = std::move(plan);
  return result;
}

std::string PlanLabel(const fs::path& plan) {
  std::string stem = plan.stem().string();
  if (stem.rfind("plan_", 0) == 0) stem = stem.substr(5);
  return stem;
}

std::vector<ReportRow> EvaluateStage(const fs::path& items, const fs::path& rct,
                                     const std::vector<fs::path>& plans,
                                     const fs::path& out_dir) {
  EnsureDir(out_dir);
  const Dataset dataset = ReadItemsCsv(items);
  const RctLog log = ReadRctCsv(rct);
  std::vector<ReportRow> rows;
  std::optional<Error> first_error;
  std::size_t failures = 0;
  for (const fs::path& plan_path : plans) {
    const AllocationPlan plan = ReadPlanCsv(plan_path, PlanLabel(plan_path));
    ReportRow row;
    try {
      row.report = EvaluateStrategy(dataset, log, plan);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kIoError ||
          e.code() == ErrorCode::kPopulationMismatch) {
        throw;
      }
      row.report.strategy_name = plan.strategy_name;
      row.report.n_coupons = plan.num_coupons();
      row.status = e.what();
      ++failures;
      if (!first_error) first_error = e;
    }
    rows.push_back(std::move(row));
  }
  WriteReportCsv(rows, out_dir / "report.csv");
  WriteReportJson(rows, out_dir / "report.json");
  if (!rows.empty() && failures == rows.size()) throw *first_error;
  return rows;
}

std::vector<fs::path> ReportStage(const fs::path& report_csv,
                                  const fs::path& out_dir) {
  return WriteReportCharts(ReadReportCsv(report_csv), out_dir);
}

RunConfig ParseRunConfig(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidConfig, e.what());
  }
  if (!root.is_object()) {
    throw Error(ErrorCode::kInvalidConfig, "run config must be an object");
  }
  RunConfig c;
  c.output_dir = Get<std::string>(root, "output_dir", DefaultOutputDir());

  const json market = root.value("market", json::object());
  MarketConfig& m = c.market;
  m.n_providers = Get(market, "n_providers", m.n_providers);
  m.zipf_exponent = Get(market, "zipf_exponent", m.zipf_exponent);
  m.max_items = Get(market, "max_items", m.max_items);
  m.p0_alpha = Get(market, "p0_alpha", m.p0_alpha);
  m.p0_beta = Get(market, "p0_beta", m.p0_beta);
  m.lift_log_mean = Get(market, "lift_log_mean", m.lift_log_mean);
  m.lift_log_sd = Get(market, "lift_log_sd", m.lift_log_sd);
  m.negative_uplift_fraction =
      Get(market, "negative_uplift_fraction", m.negative_uplift_fraction);
  m.n_features = Get(market, "n_features", m.n_features);
  m.seed = Get(market, "seed", m.seed);
  ValidateMarketConfig(m);

  const json rct = root.value("rct", json::object());
  c.treat_prob = Get(rct, "treat_prob", c.treat_prob);
  c.rct_seed = Get(rct, "seed", c.rct_seed);
  c.train_rct_seed = Get(rct, "train_seed", c.train_rct_seed);

  const json scoring = root.value("scoring", json::object());
  c.scoring.scorer = Get(scoring, "scorer", c.scoring.scorer);
  c.scoring.noise = Get(scoring, "noise", c.scoring.noise);
  c.scoring.seed = Get(scoring, "seed", c.scoring.seed);
  c.scoring.bins = Get(scoring, "bins", c.scoring.bins);
  if (c.scoring.scorer != "oracle" && c.scoring.scorer != "binned") {
    throw Error(ErrorCode::kInvalidConfig,
                "unknown scorer '" + c.scoring.scorer + "'");
  }

  const json alloc = root.value("allocation", json::object());
  if (alloc.contains("budget_n")) {
    c.budget_n = Get<std::int64_t>(alloc, "budget_n", 0);
    if (*c.budget_n < 0) {
      throw Error(ErrorCode::kInvalidConfig, "budget_n must be >= 0");
    }
  }
  c.budget_fraction = Get(alloc, "budget_fraction", c.budget_fraction);
  if (!(c.budget_fraction >= 0.0 && c.budget_fraction <= 1.0)) {
    throw Error(ErrorCode::kInvalidConfig,
                "budget_fraction must lie in [0, 1]");
  }
  c.budget_mode =
      ParseBudgetMode(Get<std::string>(alloc, "budget_mode", "exact"));
  c.ordering = ParseOrderingPolicy(Get<std::string>(alloc, "ordering", "pi-desc"));
  c.solver = ParseSolverChoice(Get<std::string>(alloc, "solver", "dp"));
  c.allow_negative_uplift =
      Get(alloc, "allow_negative_uplift", c.allow_negative_uplift);
  c.allocation_seed = Get(alloc, "seed", c.allocation_seed);

  const json strategies = root.value("strategies", json::array());
  if (!strategies.is_array()) {
    throw Error(ErrorCode::kInvalidConfig, "strategies must be an array");
  }
  for (const json& s : strategies) {
    StrategySpec spec;
    spec.name = Get<std::string>(s, "name", "");
    spec.quality_q = Get(s, "q", 0.0);
    spec.label = Get<std::string>(s, "label", "");
    if (!IsStrategy(spec.name)) {
      throw Error(ErrorCode::kInvalidConfig,
                  "unknown strategy '" + spec.name + "'");
    }
    QualityThreshold check(spec.quality_q);
    (void)check;
    spec.label = DefaultLabel(spec);
    c.strategies.push_back(std::move(spec));
  }
  return c;
}

RunConfig LoadRunConfig(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return ParseRunConfig(text.str());
}

std::vector<ReportRow> RunPipeline(const RunConfig& config) {
  const fs::path& out = config.output_dir;
  SimulateStage({config.market, config.treat_prob, config.rct_seed, "rct.csv"},
                out);
  ScoreOptions scoring = config.scoring;
  if (scoring.scorer == "binned") {
    const Dataset dataset = ReadItemsCsv(out / "items.csv");
    WriteRctCsv(RunRct(dataset, config.treat_prob, config.train_rct_seed),
                out / "rct_train.csv");
    scoring.training_log = out / "rct_train.csv";
  }
  ScoreStage(out / "items.csv", scoring, out);

  std::int64_t n_coupons = 0;
  if (config.budget_n) {
    n_coupons = *config.budget_n;
  } else {
    const auto scores = ReadScoresCsv(out / "scores.csv");
    const auto mask = ComputeEligibility(scores, QualityThreshold(0.0),
                                         config.allow_negative_uplift);
    std::int64_t eligible = 0;
    for (auto m : mask) eligible += m;
    n_coupons = static_cast<std::int64_t>(
        std::llround(config.budget_fraction * static_cast<double>(eligible)));
  }

  std::vector<fs::path> plans;
  for (const StrategySpec& spec : config.strategies) {
    AllocateOptions options;
    options.strategy = spec.name;
    options.label = spec.label;
    options.n_coupons = n_coupons;
    options.budget_mode = config.budget_mode;
    options.quality_q = spec.quality_q;
    options.ordering = config.ordering;
    options.solver = config.solver;
    options.allow_negative_uplift = config.allow_negative_uplift;
    options.seed = config.allocation_seed;
    plans.push_back(
        AllocateStage(out / "items.csv", out / "scores.csv", options, out)
            .plan_path);
  }
  auto rows = EvaluateStage(out / "items.csv", out / "rct.csv", plans, out);
  ReportStage(out / "report.csv", out);
  return rows;
}

}  // namespace couponalloc
