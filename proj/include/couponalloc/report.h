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

// Static SVG bar charts for evaluation reports.

#ifndef COUPONALLOC_REPORT_H_
#define COUPONALLOC_REPORT_H_

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "couponalloc/io.h"

namespace couponalloc {

struct Bar {
  std::string label;
  double value = 0.0;
};

// One bar per entry, drawn against a zero baseline. Output is a pure
// function of the arguments.
std::string RenderBarChart(const std::string& title, std::span<const Bar> bars);

// Writes uplift_items_sold.svg, uplift_successful_providers.svg,
// n_treated_providers.svg and ser_lift.svg; returns their paths. Rows whose
// status is not "ok" are drawn as zero.
std::vector<std::filesystem::path> WriteReportCharts(
    std::span<const ReportRow> rows, const std::filesystem::path& out_dir);

}  // namespace couponalloc

#endif  // COUPONALLOC_REPORT_H_
