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

// couponalloc: simulate, score, allocate, evaluate and report coupon
// allocation experiments.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "couponalloc/pipeline.h"

namespace ca = couponalloc;

int main(int argc, char** argv) {
  CLI::App app{"Coupon allocation for provider sales experience"};
  app.require_subcommand(1);
  const std::string default_out = ca::DefaultOutputDir().string();

  // simulate
  ca::SimulateOptions sim;
  std::string sim_out = default_out;
  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic market and an RCT log");
  simulate->add_option("--out", sim_out, "Output directory");
  simulate->add_option("--n-providers", sim.market.n_providers)->capture_default_str();
  simulate->add_option("--zipf-exponent", sim.market.zipf_exponent)->capture_default_str();
  simulate->add_option("--max-items", sim.market.max_items)->capture_default_str();
  simulate->add_option("--p0-alpha", sim.market.p0_alpha)->capture_default_str();
  simulate->add_option("--p0-beta", sim.market.p0_beta)->capture_default_str();
  simulate->add_option("--lift-log-mean", sim.market.lift_log_mean)->capture_default_str();
  simulate->add_option("--lift-log-sd", sim.market.lift_log_sd)->capture_default_str();
  simulate->add_option("--negative-uplift-fraction", sim.market.negative_uplift_fraction)
      ->capture_default_str();
  simulate->add_option("--features", sim.market.n_features)->capture_default_str();
  simulate->add_option("--seed", sim.market.seed, "Market seed")->capture_default_str();
  simulate->add_option("--treat-prob", sim.treat_prob)->capture_default_str();
  simulate->add_option("--rct-seed", sim.rct_seed)->capture_default_str();
  simulate->add_option("--rct-file", sim.rct_file, "RCT log file name")->capture_default_str();

  // score
  ca::ScoreOptions score;
  std::string score_items;
  std::string score_log;
  std::string score_out = default_out;
  auto* score_cmd = app.add_subcommand("score", "Estimate per-item sale rates");
  score_cmd->add_option("--items", score_items)->required();
  score_cmd->add_option("--training-log", score_log, "RCT log used to fit the binned scorer");
  score_cmd->add_option("--scorer", score.scorer)
      ->check(CLI::IsMember({"oracle", "binned"}))
      ->capture_default_str();
  score_cmd->add_option("--noise", score.noise)->capture_default_str();
  score_cmd->add_option("--bins", score.bins)->capture_default_str();
  score_cmd->add_option("--seed", score.seed)->capture_default_str();
  score_cmd->add_option("--out", score_out);

  // allocate
  ca::AllocateOptions alloc;
  std::string alloc_items;
  std::string alloc_scores;
  std::string alloc_out = default_out;
  std::string budget_mode = "exact";
  std::string ordering = "pi-desc";
  std::string solver = "dp";
  std::string export_lp;
  std::string export_curves;
  auto* allocate = app.add_subcommand("allocate", "Allocate coupons with one strategy");
  allocate->add_option("--items", alloc_items)->required();
  allocate->add_option("--scores", alloc_scores)->required();
  allocate->add_option("--strategy", alloc.strategy)
      ->check(CLI::IsMember(ca::StrategyNames()))
      ->capture_default_str();
  allocate->add_option("-n,--n", alloc.n_coupons, "Coupon budget N")->required();
  allocate->add_option("--budget-mode", budget_mode)
      ->check(CLI::IsMember({"exact", "at-most"}))
      ->capture_default_str();
  allocate->add_option("--q", alloc.quality_q, "Quality percentile in [0, 100]")
      ->capture_default_str();
  allocate->add_option("--ordering", ordering)
      ->check(CLI::IsMember({"pi-desc", "survival-ratio"}))
      ->capture_default_str();
  allocate->add_option("--solver", solver)
      ->check(CLI::IsMember({"dp", "greedy", "brute-force"}))
      ->capture_default_str();
  allocate->add_flag("--allow-negative-uplift", alloc.allow_negative_uplift);
  allocate->add_option("--seed", alloc.seed)->capture_default_str();
  allocate->add_option("--label", alloc.label, "Plan label (default: strategy)");
  allocate->add_option("--export-lp", export_lp, "Also write the pattern ILP (ser only)");
  allocate->add_option("--export-curves", export_curves,
                       "Also write pattern curves as JSON lines (ser only)");
  allocate->add_option("--out", alloc_out);

  // evaluate
  std::string eval_items;
  std::string eval_rct;
  std::vector<std::string> eval_plans;
  std::string eval_out = default_out;
  auto* evaluate = app.add_subcommand("evaluate", "Estimate uplifts of plans from an RCT log");
  evaluate->add_option("--items", eval_items)->required();
  evaluate->add_option("--rct", eval_rct)->required();
  evaluate->add_option("plans", eval_plans, "plan_<strategy>.csv files")->required();
  evaluate->add_option("--out", eval_out);

  // report
  std::string report_csv;
  std::string report_out = default_out;
  auto* report = app.add_subcommand("report", "Render report charts as SVG");
  report->add_option("--report", report_csv, "report.csv")->required();
  report->add_option("--out", report_out);

  // run
  std::string run_config;
  std::string run_out;
  auto* run = app.add_subcommand("run", "Execute a full JSON run config");
  run->add_option("--config", run_config)->required();
  run->add_option("--out", run_out, "Override the config's output_dir");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*simulate) {
      ca::SimulateStage(sim, sim_out);
    } else if (*score_cmd) {
      if (!score_log.empty()) score.training_log = score_log;
      ca::ScoreStage(score_items, score, score_out);
    } else if (*allocate) {
      alloc.budget_mode = ca::ParseBudgetMode(budget_mode);
      alloc.ordering = ca::ParseOrderingPolicy(ordering);
      alloc.solver = ca::ParseSolverChoice(solver);
      if (!export_lp.empty()) alloc.export_lp = export_lp;
      if (!export_curves.empty()) alloc.export_curves = export_curves;
      const auto result = ca::AllocateStage(alloc_items, alloc_scores, alloc, alloc_out);
      std::cout << "plan: " << result.plan_path.string() << "\n";
      std::cout << "coupons: " << result.plan.num_coupons() << "\n";
      if (result.plan.objective_value) {
        std::cout << "objective_value: " << ca::FormatReal(*result.plan.objective_value)
                  << "\n";
      }
    } else if (*evaluate) {
      std::vector<ca::fs::path> plans(eval_plans.begin(), eval_plans.end());
      const auto rows = ca::EvaluateStage(eval_items, eval_rct, plans, eval_out);
      for (const auto& row : rows) {
        if (row.status != "ok") {
          std::cerr << "warning: " << row.report.strategy_name << ": " << row.status << "\n";
        }
      }
    } else if (*report) {
      for (const auto& path : ca::ReportStage(report_csv, report_out)) {
        std::cout << path.string() << "\n";
      }
    } else if (*run) {
      ca::RunConfig config = ca::LoadRunConfig(run_config);
      if (!run_out.empty()) config.output_dir = run_out;
      const auto rows = ca::RunPipeline(config);
      for (const auto& row : rows) {
        std::printf("%-16s items=%s providers=%s treated=%lld status=%s\n",
                    row.report.strategy_name.c_str(),
                    ca::FormatReal(row.report.uplift_items_sold).c_str(),
                    ca::FormatReal(row.report.uplift_successful_providers).c_str(),
                    static_cast<long long>(row.report.n_treated_providers),
                    row.status.c_str());
      }
    }
  } catch (const ca::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ca::ExitCodeFor(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
