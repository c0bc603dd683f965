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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "couponalloc/alloc.h"
#include "couponalloc/domain.h"
#include "couponalloc/error.h"
#include "couponalloc/eval.h"
#include "couponalloc/io.h"
#include "couponalloc/pipeline.h"
#include "couponalloc/scoring.h"
#include "couponalloc/ser.h"
#include "couponalloc/simulate.h"

namespace py = pybind11;
namespace ca = couponalloc;

namespace {

std::vector<std::uint64_t> Ids(const std::vector<ca::ItemId>& ids) {
  std::vector<std::uint64_t> out;
  out.reserve(ids.size());
  for (auto id : ids) out.push_back(id.value);
  return out;
}

std::vector<ca::ItemId> ToIds(const std::vector<std::uint64_t>& raw) {
  std::vector<ca::ItemId> out;
  out.reserve(raw.size());
  for (auto v : raw) out.emplace_back(v);
  return out;
}

ca::BudgetSpec Budget(std::int64_t n, ca::BudgetMode mode) { return {n, mode}; }

py::dict ReportDict(const ca::UpliftReport& r) {
  py::dict d;
  d["strategy"] = r.strategy_name;
  d["uplift_items_sold"] = r.uplift_items_sold;
  d["uplift_successful_providers"] = r.uplift_successful_providers;
  d["n_treated_providers"] = r.n_treated_providers;
  d["ser_lift"] = r.ser_lift;
  d["n_consistent_treat"] = r.n_consistent_treat;
  d["n_consistent_control"] = r.n_consistent_control;
  d["n_mixed_excluded"] = r.n_mixed_excluded;
  d["n_coupons"] = r.n_coupons;
  d["warnings"] = r.warnings;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Coupon allocation for provider sales experience";

  // Messages start with the error code name, e.g. "InfeasibleBudget: ...".
  py::register_exception<ca::Error>(m, "CouponAllocError", PyExc_ValueError);

  py::enum_<ca::OrderingPolicy>(m, "OrderingPolicy")
      .value("PI_DESC", ca::OrderingPolicy::kPiDesc)
      .value("SURVIVAL_RATIO", ca::OrderingPolicy::kSurvivalRatio);
  py::enum_<ca::BudgetMode>(m, "BudgetMode")
      .value("EXACT", ca::BudgetMode::kExact)
      .value("AT_MOST", ca::BudgetMode::kAtMost);
  py::enum_<ca::SolverChoice>(m, "SolverChoice")
      .value("DP_EXACT", ca::SolverChoice::kDpExact)
      .value("GREEDY_MARGINAL", ca::SolverChoice::kGreedyMarginal)
      .value("BRUTE_FORCE", ca::SolverChoice::kBruteForce);

  py::class_<ca::ItemRecord>(m, "ItemRecord")
      .def(py::init([](std::uint64_t item_id, std::uint64_t provider_id,
                       std::vector<double> features, std::optional<double> p0,
                       std::optional<double> p1) {
             return ca::ItemRecord{ca::ItemId(item_id), ca::ProviderId(provider_id),
                                   std::move(features), p0, p1};
           }),
           py::arg("item_id"), py::arg("provider_id"),
           py::arg("features") = std::vector<double>{},
           py::arg("true_p0") = py::none(), py::arg("true_p1") = py::none())
      .def_property_readonly("item_id",
                             [](const ca::ItemRecord& r) { return r.item_id.value; })
      .def_property_readonly(
          "provider_id", [](const ca::ItemRecord& r) { return r.provider_id.value; })
      .def_readonly("features", &ca::ItemRecord::features)
      .def_readonly("true_p0", &ca::ItemRecord::true_p0)
      .def_readonly("true_p1", &ca::ItemRecord::true_p1);

  py::class_<ca::ItemScore>(m, "ItemScore")
      .def(py::init([](std::uint64_t id, double f0, double f1) {
             return ca::ItemScore::Make(ca::ItemId(id), f0, f1);
           }),
           py::arg("item_id"), py::arg("f0"), py::arg("f1"))
      .def_property_readonly("item_id",
                             [](const ca::ItemScore& s) { return s.item_id.value; })
      .def_readonly("f0", &ca::ItemScore::f0)
      .def_readonly("f1", &ca::ItemScore::f1)
      .def_readonly("pi", &ca::ItemScore::pi)
      .def("__repr__", [](const ca::ItemScore& s) {
        std::ostringstream os;
        os << "ItemScore(" << s.item_id.value << ", f0=" << s.f0 << ", f1=" << s.f1
           << ")";
        return os.str();
      });

  py::class_<ca::Dataset>(m, "Dataset")
      .def_property_readonly("num_items", &ca::Dataset::num_items)
      .def_property_readonly("num_providers", &ca::Dataset::num_providers)
      .def_property_readonly("items",
                             [](const ca::Dataset& d) {
                               return std::vector<ca::ItemRecord>(d.items().begin(),
                                                                  d.items().end());
                             })
      .def_property_readonly("item_ids",
                             [](const ca::Dataset& d) { return Ids(d.item_ids()); })
      .def("provider_id",
           [](const ca::Dataset& d, std::size_t p) { return d.provider_id(p).value; })
      .def("provider_items",
           [](const ca::Dataset& d, std::size_t p) {
             return std::vector<std::size_t>(d.provider_items(p).begin(),
                                             d.provider_items(p).end());
           })
      .def_property_readonly("has_ground_truth", &ca::Dataset::has_ground_truth)
      .def("__eq__", [](const ca::Dataset& a, const ca::Dataset& b) { return a == b; });
  m.def("validate_dataset", &ca::ValidateDataset, py::arg("items"));

  py::class_<ca::RctLog>(m, "RctLog")
      .def(py::init([](const std::vector<std::uint64_t>& ids,
                       std::vector<std::uint8_t> a, std::vector<std::uint8_t> y) {
             return ca::RctLog{ToIds(ids), std::move(a), std::move(y)};
           }),
           py::arg("item_ids"), py::arg("assignment"), py::arg("sold"))
      .def_property_readonly("item_ids",
                             [](const ca::RctLog& l) { return Ids(l.item_ids); })
      .def_readonly("assignment", &ca::RctLog::assignment)
      .def_readonly("sold", &ca::RctLog::sold)
      .def("__len__", &ca::RctLog::size);

  py::class_<ca::AllocationPlan>(m, "AllocationPlan")
      .def(py::init([](const std::vector<std::uint64_t>& ids,
                       std::vector<std::uint8_t> coupon, std::string name) {
             ca::AllocationPlan p;
             p.item_ids = ToIds(ids);
             p.coupon = std::move(coupon);
             p.budget_n = std::count(p.coupon.begin(), p.coupon.end(), 1);
             p.strategy_name = std::move(name);
             return p;
           }),
           py::arg("item_ids"), py::arg("coupon"), py::arg("strategy_name") = "")
      .def_property_readonly("item_ids",
                             [](const ca::AllocationPlan& p) { return Ids(p.item_ids); })
      .def_readonly("coupon", &ca::AllocationPlan::coupon)
      .def_readonly("budget_n", &ca::AllocationPlan::budget_n)
      .def_readwrite("strategy_name", &ca::AllocationPlan::strategy_name)
      .def_readonly("objective_value", &ca::AllocationPlan::objective_value)
      .def_property_readonly("num_coupons", &ca::AllocationPlan::num_coupons)
      .def_property_readonly("couponed", [](const ca::AllocationPlan& p) {
        std::vector<std::uint64_t> out;
        for (std::size_t i = 0; i < p.item_ids.size(); ++i) {
          if (p.coupon[i]) out.push_back(p.item_ids[i].value);
        }
        return out;
      });

  py::class_<ca::MarketConfig>(m, "MarketConfig")
      .def(py::init<>())
      .def_readwrite("n_providers", &ca::MarketConfig::n_providers)
      .def_readwrite("zipf_exponent", &ca::MarketConfig::zipf_exponent)
      .def_readwrite("max_items", &ca::MarketConfig::max_items)
      .def_readwrite("p0_alpha", &ca::MarketConfig::p0_alpha)
      .def_readwrite("p0_beta", &ca::MarketConfig::p0_beta)
      .def_readwrite("lift_log_mean", &ca::MarketConfig::lift_log_mean)
      .def_readwrite("lift_log_sd", &ca::MarketConfig::lift_log_sd)
      .def_readwrite("negative_uplift_fraction",
                     &ca::MarketConfig::negative_uplift_fraction)
      .def_readwrite("n_features", &ca::MarketConfig::n_features)
      .def_readwrite("seed", &ca::MarketConfig::seed);
  m.def("generate_market", &ca::GenerateMarket, py::arg("config"));
  m.def("run_rct", &ca::RunRct, py::arg("dataset"), py::arg("treat_prob") = 0.5,
        py::arg("seed") = 0);
  m.def("true_uplift_items", &ca::TrueUpliftItems);
  m.def("true_uplift_providers", &ca::TrueUpliftProviders);

  py::class_<ca::BinnedFrequencyScorer>(m, "BinnedFrequencyScorer")
      .def("predict", [](const ca::BinnedFrequencyScorer& s, const ca::ItemRecord& r) {
        const auto p = s.Predict(r);
        return py::make_tuple(p.f0, p.f1);
      });
  m.def("fit_t_learner", &ca::FitTLearner, py::arg("training_log"),
        py::arg("dataset"), py::arg("bins"));
  m.def("score_binned",
        [](const ca::BinnedFrequencyScorer& s, const ca::Dataset& d) {
          return ca::ScoreItems(s, d);
        });
  m.def("score_oracle",
        [](const ca::Dataset& d, double noise, std::uint64_t seed) {
          return ca::ScoreItems(ca::NoisyOracleScorer(noise, seed), d);
        },
        py::arg("dataset"), py::arg("noise") = 0.0, py::arg("seed") = 0);
  m.def("compute_eligibility",
        [](const std::vector<ca::ItemScore>& scores, double q, bool allow_negative) {
          return ca::ComputeEligibility(scores, ca::QualityThreshold(q),
                                        allow_negative);
        },
        py::arg("scores"), py::arg("q") = 0.0,
        py::arg("allow_negative_uplift") = false);

  py::class_<ca::ProviderPortfolio>(m, "ProviderPortfolio")
      .def(py::init([](std::uint64_t provider, std::vector<ca::ItemScore> scores,
                       ca::EligibilityMask eligible, ca::OrderingPolicy ordering) {
             if (eligible.empty()) eligible.assign(scores.size(), 1);
             return ca::ProviderPortfolio::Make(ca::ProviderId(provider),
                                                std::move(scores),
                                                std::move(eligible), ordering);
           }),
           py::arg("provider_id"), py::arg("item_scores"),
           py::arg("eligible") = ca::EligibilityMask{},
           py::arg("ordering") = ca::OrderingPolicy::kPiDesc)
      .def_readonly("base_survival", &ca::ProviderPortfolio::base_survival);
  m.def("ser", [](const ca::ProviderPortfolio& p, const std::vector<std::uint8_t>& z) {
    return ca::Ser(p, z);
  });
  m.def("ser_delta",
        [](const ca::ProviderPortfolio& p, const std::vector<std::uint8_t>& z) {
          return ca::SerDelta(p, z);
        });

  py::class_<ca::PatternCurve>(m, "PatternCurve")
      .def_property_readonly("provider_id",
                             [](const ca::PatternCurve& c) { return c.provider_id.value; })
      .def_readonly("deltas", &ca::PatternCurve::deltas)
      .def_property_readonly("item_order",
                             [](const ca::PatternCurve& c) { return Ids(c.item_order); });
  m.def("build_pattern_curve", &ca::BuildPatternCurve);
  m.def("build_pattern_curves",
        [](const ca::Dataset& d, const std::vector<ca::ItemScore>& scores,
           const ca::EligibilityMask& eligible, ca::OrderingPolicy ordering) {
          return ca::BuildPatternCurves(d, scores, eligible, ordering);
        },
        py::arg("dataset"), py::arg("scores"), py::arg("eligible"),
        py::arg("ordering") = ca::OrderingPolicy::kPiDesc);

  m.def("solve_mckp",
        [](const std::vector<ca::PatternCurve>& curves, std::int64_t n,
           ca::BudgetMode mode, ca::SolverChoice solver) {
          const auto sol = ca::SolveMckp(curves, Budget(n, mode), solver);
          return py::make_tuple(sol.counts, sol.objective);
        },
        py::arg("curves"), py::arg("n"), py::arg("mode") = ca::BudgetMode::kExact,
        py::arg("solver") = ca::SolverChoice::kDpExact);
  m.def("allocate_random",
        [](const ca::Dataset& d, const ca::EligibilityMask& e, std::int64_t n,
           std::uint64_t seed, ca::BudgetMode mode) {
          return ca::AllocateRandom(d, e, Budget(n, mode), seed);
        },
        py::arg("dataset"), py::arg("eligible"), py::arg("n"), py::arg("seed") = 0,
        py::arg("mode") = ca::BudgetMode::kExact);
  m.def("allocate_item_greedy",
        [](const std::vector<ca::ItemScore>& s, const ca::EligibilityMask& e,
           std::int64_t n, ca::BudgetMode mode) {
          return ca::AllocateItemGreedy(s, e, Budget(n, mode));
        },
        py::arg("scores"), py::arg("eligible"), py::arg("n"),
        py::arg("mode") = ca::BudgetMode::kExact);
  m.def("allocate_nsw",
        [](const std::vector<ca::ItemScore>& s, const ca::EligibilityMask& e,
           std::int64_t n, ca::BudgetMode mode) {
          return ca::AllocateNsw(s, e, Budget(n, mode));
        },
        py::arg("scores"), py::arg("eligible"), py::arg("n"),
        py::arg("mode") = ca::BudgetMode::kExact);
  m.def("allocate_provider_greedy",
        [](const ca::Dataset& d, const std::vector<ca::PatternCurve>& c,
           std::int64_t n, ca::BudgetMode mode) {
          return ca::AllocateProviderGreedy(d, c, Budget(n, mode));
        },
        py::arg("dataset"), py::arg("curves"), py::arg("n"),
        py::arg("mode") = ca::BudgetMode::kExact);
  m.def("allocate_ser",
        [](const ca::Dataset& d, const std::vector<ca::PatternCurve>& c,
           std::int64_t n, ca::BudgetMode mode, ca::SolverChoice solver) {
          return ca::AllocateSer(d, c, Budget(n, mode), solver);
        },
        py::arg("dataset"), py::arg("curves"), py::arg("n"),
        py::arg("mode") = ca::BudgetMode::kExact,
        py::arg("solver") = ca::SolverChoice::kDpExact);
  m.def("write_ilp",
        [](const std::vector<ca::PatternCurve>& curves, std::int64_t n,
           ca::BudgetMode mode) {
          std::ostringstream out;
          ca::WriteIlp(out, curves, Budget(n, mode));
          return out.str();
        },
        py::arg("curves"), py::arg("n"), py::arg("mode") = ca::BudgetMode::kExact);

  m.def("evaluate_strategy",
        [](const ca::Dataset& d, const ca::RctLog& log, const ca::AllocationPlan& p) {
          return ReportDict(ca::EvaluateStrategy(d, log, p));
        },
        py::arg("dataset"), py::arg("log"), py::arg("plan"));

  m.def("read_items_csv", &ca::ReadItemsCsv);
  m.def("write_items_csv", &ca::WriteItemsCsv);
  m.def("read_rct_csv", &ca::ReadRctCsv);
  m.def("write_rct_csv", &ca::WriteRctCsv);
  m.def("read_scores_csv", &ca::ReadScoresCsv);
  m.def("write_scores_csv",
        [](const std::vector<ca::ItemScore>& s, const std::filesystem::path& p) {
          ca::WriteScoresCsv(s, p);
        });

  m.def("run_pipeline",
        [](const std::string& config_json, std::optional<std::string> output_dir) {
          ca::RunConfig config = ca::ParseRunConfig(config_json);
          if (output_dir) config.output_dir = *output_dir;
          py::list rows;
          for (const auto& row : ca::RunPipeline(config)) {
            py::dict d = ReportDict(row.report);
            d["status"] = row.status;
            rows.append(d);
          }
          return rows;
        },
        py::arg("config_json"), py::arg("output_dir") = py::none());
}
