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

#include "couponalloc/report.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "couponalloc/error.h"

namespace couponalloc {
namespace {

constexpr double kWidth = 640;
constexpr double kHeight = 400;
constexpr double kLeft = 70;
constexpr double kRight = 20;
constexpr double kTop = 40;
constexpr double kBottom = 70;

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string Label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

std::string Escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string RenderBarChart(const std::string& title, std::span<const Bar> bars) {
  double lo = 0.0;
  double hi = 0.0;
  for (const Bar& b : bars) {
    lo = std::min(lo, b.value);
    hi = std::max(hi, b.value);
  }
  if (hi == lo) hi = lo + 1.0;
  const double plot_h = kHeight - kTop - kBottom;
  const double plot_w = kWidth - kLeft - kRight;
  auto y_of = [&](double v) { return kTop + (hi - v) / (hi - lo) * plot_h; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' '
      << kHeight << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << Num(kWidth / 2) << "\" y=\"24\" text-anchor=\"middle\""
      << " font-family=\"sans-serif\" font-size=\"16\">" << Escape(title)
      << "</text>\n";

  constexpr int kTicks = 5;
  for (int t = 0; t <= kTicks; ++t) {
    const double v = lo + (hi - lo) * t / kTicks;
    const double y = y_of(v);
    svg << "<line class=\"grid\" x1=\"" << Num(kLeft) << "\" y1=\"" << Num(y)
        << "\" x2=\"" << Num(kWidth - kRight) << "\" y2=\"" << Num(y)
        << "\" stroke=\"#dddddd\"/>\n";
    svg << "<text x=\"" << Num(kLeft - 6) << "\" y=\"" << Num(y + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << Label(v) << "</text>\n";
  }
  svg << "<line class=\"axis\" x1=\"" << Num(kLeft) << "\" y1=\"" << Num(kTop)
      << "\" x2=\"" << Num(kLeft) << "\" y2=\"" << Num(kTop + plot_h)
      << "\" stroke=\"black\"/>\n";
  const double zero_y = y_of(0.0);
  svg << "<line class=\"axis\" x1=\"" << Num(kLeft) << "\" y1=\"" << Num(zero_y)
      << "\" x2=\"" << Num(kWidth - kRight) << "\" y2=\"" << Num(zero_y)
      << "\" stroke=\"black\"/>\n";

  const double slot = bars.empty() ? plot_w : plot_w / bars.size();
  const double bar_w = slot * 0.6;
  for (std::size_t i = 0; i < bars.size(); ++i) {
    const double x = kLeft + slot * i + (slot - bar_w) / 2;
    const double y = y_of(std::max(bars[i].value, 0.0));
    const double h = std::abs(y_of(bars[i].value) - zero_y);
    svg << "<rect class=\"bar\" data-strategy=\"" << Escape(bars[i].label)
        << "\" data-value=\"" << FormatReal(bars[i].value) << "\" x=\""
        << Num(x) << "\" y=\"" << Num(y) << "\" width=\"" << Num(bar_w)
        << "\" height=\"" << Num(h) << "\" fill=\"#4c72b0\"/>\n";
    svg << "<text x=\"" << Num(x + bar_w / 2) << "\" y=\""
        << Num(kTop + plot_h + 18) << "\" text-anchor=\"middle\""
        << " font-family=\"sans-serif\" font-size=\"11\">"
        << Escape(bars[i].label) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::vector<std::filesystem::path> WriteReportCharts(
    std::span<const ReportRow> rows, const std::filesystem::path& out_dir) {
  struct Metric {
    const char* file;
    const char* title;
    std::function<double(const UpliftReport&)> get;
  };
  const Metric metrics[] = {
      {"uplift_items_sold.svg", "Uplift in the number of items sold",
       [](const UpliftReport& r) { return r.uplift_items_sold; }},
      {"uplift_successful_providers.svg",
       "Uplift in the number of successful providers",
       [](const UpliftReport& r) { return r.uplift_successful_providers; }},
      {"n_treated_providers.svg", "Number of treated providers",
       [](const UpliftReport& r) {
         return static_cast<double>(r.n_treated_providers);
       }},
      {"ser_lift.svg", "Sales experience rate lift",
       [](const UpliftReport& r) { return r.ser_lift; }},
  };
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  std::vector<std::filesystem::path> paths;
  for (const Metric& m : metrics) {
    std::vector<Bar> bars;
    for (const ReportRow& row : rows) {
      bars.push_back({row.report.strategy_name,
                      row.status == "ok" ? m.get(row.report) : 0.0});
    }
    const auto path = out_dir / m.file;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
    out << RenderBarChart(m.title, bars);
    if (!out) throw Error(ErrorCode::kIoError, "write failed: " + path.string());
    paths.push_back(path);
  }
  return paths;
}

}  // namespace couponalloc
