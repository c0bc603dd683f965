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

#include "couponalloc/io.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string_view>
#include <utility>

#include "couponalloc/error.h"
#include "json.hpp"

namespace couponalloc {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

std::ofstream OpenOut(const fs::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  return out;
}

void Finish(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw Error(ErrorCode::kIoError, "write failed: " + path.string());
}

std::vector<std::string_view> Split(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

class CsvReader {
 public:
  explicit CsvReader(const fs::path& path) : path_(path), in_(path) {
    if (!in_) throw Error(ErrorCode::kIoError, "cannot read " + path.string());
    if (!Next()) Fail("missing header");
    header_.assign(fields_.begin(), fields_.end());
  }

  const std::vector<std::string>& header() const { return header_; }

  bool Next() {
    while (std::getline(in_, line_)) {
      ++line_no_;
      if (!line_.empty() && line_.back() == '\r') line_.pop_back();
      if (line_.empty()) continue;
      fields_ = Split(line_);
      return true;
    }
    return false;
  }

  std::size_t width() const { return fields_.size(); }
  std::string_view field(std::size_t i) const { return fields_[i]; }

  void ExpectWidth(std::size_t n) const {
    if (fields_.size() != n) {
      Fail("expected " + std::to_string(n) + " fields, got " +
           std::to_string(fields_.size()));
    }
  }

  void ExpectHeader(const std::vector<std::string>& expected) const {
    if (header_ != expected) Fail("unexpected header");
  }

  std::uint64_t U64(std::size_t i) const {
    std::uint64_t v = 0;
    const auto f = field(i);
    const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
    if (ec != std::errc() || ptr != f.data() + f.size()) {
      Fail("bad integer '" + std::string(f) + "'");
    }
    return v;
  }

  double Real(std::size_t i) const {
    double v = 0;
    const auto f = field(i);
    const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
    if (ec != std::errc() || ptr != f.data() + f.size()) {
      Fail("bad number '" + std::string(f) + "'");
    }
    return v;
  }

  std::optional<double> OptReal(std::size_t i) const {
    if (field(i).empty()) return std::nullopt;
    return Real(i);
  }

  std::uint8_t Flag(std::size_t i) const {
    const auto f = field(i);
    if (f == "0") return 0;
    if (f == "1") return 1;
    Fail("bad flag '" + std::string(f) + "'");
  }

  [[noreturn]] void Fail(const std::string& what,
                         ErrorCode code = ErrorCode::kParseError) const {
    throw Error(code,
                path_.string() + ":" + std::to_string(line_no_) + ": " + what);
  }

 private:
  fs::path path_;
  std::ifstream in_;
  std::string line_;
  std::vector<std::string_view> fields_;
  std::vector<std::string> header_;
  std::size_t line_no_ = 0;
};

std::string OptReal(const std::optional<double>& v) {
  return v ? FormatReal(*v) : std::string();
}

}  // namespace

std::string FormatReal(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

void WriteItemsCsv(const Dataset& dataset, const fs::path& path) {
  auto out = OpenOut(path);
  const auto items = dataset.items();
  const std::size_t width = items.empty() ? 0 : items.front().features.size();
  out << "item_id,provider_id";
  for (std::size_t j = 0; j < width; ++j) out << ",x" << j;
  out << ",true_p0,true_p1\n";
  for (const ItemRecord& item : items) {
    out << item.item_id.value << ',' << item.provider_id.value;
    for (double x : item.features) out << ',' << FormatReal(x);
    out << ',' << OptReal(item.true_p0) << ',' << OptReal(item.true_p1) << '\n';
  }
  Finish(out, path);
}

Dataset ReadItemsCsv(const fs::path& path) {
  CsvReader csv(path);
  const auto& header = csv.header();
  if (header.size() < 4 || header[0] != "item_id" ||
      header[1] != "provider_id" || header[header.size() - 2] != "true_p0" ||
      header.back() != "true_p1") {
    csv.Fail("unexpected header");
  }
  const std::size_t width = header.size() - 4;
  std::vector<ItemRecord> items;
  while (csv.Next()) {
    csv.ExpectWidth(header.size());
    ItemRecord item;
    item.item_id = ItemId(csv.U64(0));
    item.provider_id = ProviderId(csv.U64(1));
    for (std::size_t j = 0; j < width; ++j) {
      item.features.push_back(csv.Real(2 + j));
    }
    item.true_p0 = csv.OptReal(2 + width);
    item.true_p1 = csv.OptReal(3 + width);
    items.push_back(std::move(item));
  }
  return ValidateDataset(std::move(items));
}

void WriteRctCsv(const RctLog& log, const fs::path& path) {
  auto out = OpenOut(path);
  out << "item_id,assignment,sold\n";
  for (std::size_t r = 0; r < log.size(); ++r) {
    out << log.item_ids[r].value << ',' << int{log.assignment[r]} << ','
        << int{log.sold[r]} << '\n';
  }
  Finish(out, path);
}

RctLog ReadRctCsv(const fs::path& path) {
  CsvReader csv(path);
  csv.ExpectHeader({"item_id", "assignment", "sold"});
  RctLog log;
  while (csv.Next()) {
    csv.ExpectWidth(3);
    log.item_ids.push_back(ItemId(csv.U64(0)));
    log.assignment.push_back(csv.Flag(1));
    log.sold.push_back(csv.Flag(2));
  }
  return log;
}

void WriteScoresCsv(std::span<const ItemScore> scores, const fs::path& path) {
  auto out = OpenOut(path);
  out << "item_id,f0,f1,pi\n";
  for (const ItemScore& s : scores) {
    out << s.item_id.value << ',' << FormatReal(s.f0) << ',' << FormatReal(s.f1)
        << ',' << FormatReal(s.pi) << '\n';
  }
  Finish(out, path);
}

std::vector<ItemScore> ReadScoresCsv(const fs::path& path) {
  CsvReader csv(path);
  csv.ExpectHeader({"item_id", "f0", "f1", "pi"});
  std::vector<ItemScore> scores;
  while (csv.Next()) {
    csv.ExpectWidth(4);
    const double f0 = csv.Real(1);
    const double f1 = csv.Real(2);
    const double pi = csv.Real(3);
    ItemScore s;
    try {
      s = ItemScore::Make(ItemId(csv.U64(0)), f0, f1);
    } catch (const Error& e) {
      csv.Fail(e.what(), e.code());
    }
    if (std::abs(s.pi - pi) > 1e-9) csv.Fail("pi does not equal f1 - f0");
    scores.push_back(s);
  }
  return scores;
}

void WriteScoresJsonl(std::span<const ItemScore> scores, const fs::path& path) {
  auto out = OpenOut(path);
  for (const ItemScore& s : scores) {
    json j;
    j["item_id"] = s.item_id.value;
    j["f0"] = s.f0;
    j["f1"] = s.f1;
    j["pi"] = s.pi;
    out << j.dump() << '\n';
  }
  Finish(out, path);
}

void WritePlanCsv(const AllocationPlan& plan, const fs::path& path) {
  auto out = OpenOut(path);
  out << "item_id,coupon_flag\n";
  for (std::size_t i = 0; i < plan.item_ids.size(); ++i) {
    out << plan.item_ids[i].value << ',' << int{plan.coupon[i]} << '\n';
  }
  Finish(out, path);
}

AllocationPlan ReadPlanCsv(const fs::path& path, std::string strategy_name) {
  CsvReader csv(path);
  csv.ExpectHeader({"item_id", "coupon_flag"});
  AllocationPlan plan;
  plan.strategy_name = std::move(strategy_name);
  while (csv.Next()) {
    csv.ExpectWidth(2);
    plan.item_ids.push_back(ItemId(csv.U64(0)));
    plan.coupon.push_back(csv.Flag(1));
  }
  plan.budget_n = plan.num_coupons();
  return plan;
}

void WritePlanJson(const AllocationPlan& plan, const fs::path& path) {
  auto out = OpenOut(path);
  json j;
  j["strategy"] = plan.strategy_name;
  j["budget_n"] = plan.budget_n;
  j["n_coupons"] = plan.num_coupons();
  j["infeasible"] = plan.infeasible;
  j["objective_value"] =
      plan.objective_value ? json(*plan.objective_value) : json(nullptr);
  json couponed = json::array();
  for (std::size_t i = 0; i < plan.item_ids.size(); ++i) {
    if (plan.coupon[i]) couponed.push_back(plan.item_ids[i].value);
  }
  j["couponed_items"] = std::move(couponed);
  out << j.dump(2) << '\n';
  Finish(out, path);
}

void WriteCurvesJsonl(std::span<const PatternCurve> curves,
                      const fs::path& path) {
  auto out = OpenOut(path);
  for (const PatternCurve& c : curves) {
    json j;
    j["provider_id"] = c.provider_id.value;
    json order = json::array();
    for (ItemId id : c.item_order) order.push_back(id.value);
    j["item_order"] = std::move(order);
    j["deltas"] = c.deltas;
    out << j.dump() << '\n';
  }
  Finish(out, path);
}

namespace {

const std::vector<std::string>& ReportHeader() {
  static const std::vector<std::string> header = {
      "strategy",           "uplift_items_sold",    "uplift_successful_providers",
      "n_treated_providers", "ser_lift",            "n_consistent_treat",
      "n_consistent_control", "n_mixed_excluded",   "n_coupons",
      "status"};
  return header;
}

std::string CsvSafe(std::string text) {
  for (char& c : text) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return text;
}

}  // namespace

void WriteReportCsv(std::span<const ReportRow> rows, const fs::path& path) {
  auto out = OpenOut(path);
  const auto& header = ReportHeader();
  for (std::size_t i = 0; i < header.size(); ++i) {
    out << (i ? "," : "") << header[i];
  }
  out << '\n';
  for (const ReportRow& row : rows) {
    const UpliftReport& r = row.report;
    out << r.strategy_name << ',' << FormatReal(r.uplift_items_sold) << ','
        << FormatReal(r.uplift_successful_providers) << ','
        << r.n_treated_providers << ',' << FormatReal(r.ser_lift) << ','
        << r.n_consistent_treat << ',' << r.n_consistent_control << ','
        << r.n_mixed_excluded << ',' << r.n_coupons << ','
        << CsvSafe(row.status) << '\n';
  }
  Finish(out, path);
}

std::vector<ReportRow> ReadReportCsv(const fs::path& path) {
  CsvReader csv(path);
  csv.ExpectHeader(ReportHeader());
  std::vector<ReportRow> rows;
  while (csv.Next()) {
    csv.ExpectWidth(ReportHeader().size());
    ReportRow row;
    UpliftReport& r = row.report;
    r.strategy_name = std::string(csv.field(0));
    r.uplift_items_sold = csv.Real(1);
    r.uplift_successful_providers = csv.Real(2);
    r.n_treated_providers = static_cast<std::int64_t>(csv.U64(3));
    r.ser_lift = csv.Real(4);
    r.n_consistent_treat = static_cast<std::int64_t>(csv.U64(5));
    r.n_consistent_control = static_cast<std::int64_t>(csv.U64(6));
    r.n_mixed_excluded = static_cast<std::int64_t>(csv.U64(7));
    r.n_coupons = static_cast<std::int64_t>(csv.U64(8));
    row.status = std::string(csv.field(9));
    rows.push_back(std::move(row));
  }
  return rows;
}

void WriteReportJson(std::span<const ReportRow> rows, const fs::path& path) {
  auto out = OpenOut(path);
  json all = json::array();
  for (const ReportRow& row : rows) {
    const UpliftReport& r = row.report;
    json j;
    j["strategy"] = r.strategy_name;
    j["status"] = row.status;
    j["uplift_items_sold"] = r.uplift_items_sold;
    j["uplift_successful_providers"] = r.uplift_successful_providers;
    j["n_treated_providers"] = r.n_treated_providers;
    j["ser_lift"] = r.ser_lift;
    j["n_consistent_treat"] = r.n_consistent_treat;
    j["n_consistent_control"] = r.n_consistent_control;
    j["n_mixed_excluded"] = r.n_mixed_excluded;
    j["n_coupons"] = r.n_coupons;
    j["warnings"] = r.warnings;
    all.push_back(std::move(j));
  }
  out << all.dump(2) << '\n';
  Finish(out, path);
}

}  // namespace couponalloc
