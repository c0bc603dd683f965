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

// CSV and JSON interchange files. CSVs have a mandatory header, use '.' as
// the decimal separator and print reals with 12 significant digits.

#ifndef COUPONALLOC_IO_H_
#define COUPONALLOC_IO_H_

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "couponalloc/domain.h"
#include "couponalloc/eval.h"
#include "couponalloc/ser.h"

namespace couponalloc {

std::string FormatReal(double value);

// items.csv: item_id,provider_id,x0..x{d-1},true_p0,true_p1. Ground-truth
// fields may be empty.
void WriteItemsCsv(const Dataset& dataset, const std::filesystem::path& path);
Dataset ReadItemsCsv(const std::filesystem::path& path);

// rct.csv: item_id,assignment,sold.
void WriteRctCsv(const RctLog& log, const std::filesystem::path& path);
RctLog ReadRctCsv(const std::filesystem::path& path);

// scores.csv: item_id,f0,f1,pi. On read, pi is recomputed from f0 and f1 and
// must agree with the file to 1e-9.
void WriteScoresCsv(std::span<const ItemScore> scores,
                    const std::filesystem::path& path);
std::vector<ItemScore> ReadScoresCsv(const std::filesystem::path& path);
void WriteScoresJsonl(std::span<const ItemScore> scores,
                      const std::filesystem::path& path);

// plan csv: item_id,coupon_flag. The JSON mirror also carries the metadata.
void WritePlanCsv(const AllocationPlan& plan, const std::filesystem::path& path);
AllocationPlan ReadPlanCsv(const std::filesystem::path& path,
                           std::string strategy_name);
void WritePlanJson(const AllocationPlan& plan,
                   const std::filesystem::path& path);

// One JSON object per line: provider_id, item_order, deltas.
void WriteCurvesJsonl(std::span<const PatternCurve> curves,
                      const std::filesystem::path& path);

struct ReportRow {
  UpliftReport report;
  // "ok", or the error that made the row's estimates undefined.
  std::string status = "ok";

  bool operator==(const ReportRow&) const = default;
};

void WriteReportCsv(std::span<const ReportRow> rows,
                    const std::filesystem::path& path);
std::vector<ReportRow> ReadReportCsv(const std::filesystem::path& path);
void WriteReportJson(std::span<const ReportRow> rows,
                     const std::filesystem::path& path);

}  // namespace couponalloc

#endif  // COUPONALLOC_IO_H_
