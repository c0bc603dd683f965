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

// Test fixtures and independent reference implementations. Nothing here
// calls into the solver or SER code under test.

#ifndef COUPONALLOC_TESTS_TEST_UTIL_H_
#define COUPONALLOC_TESTS_TEST_UTIL_H_

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "couponalloc/domain.h"
#include "couponalloc/ser.h"

namespace couponalloc::testing {

struct Item {
  double f0;
  double f1;
};

// One provider per inner vector. Provider s gets id s, items get ids in
// reading order starting at 0.
inline Dataset MakeDataset(const std::vector<std::vector<Item>>& providers) {
  std::vector<ItemRecord> records;
  std::uint64_t next = 0;
  for (std::size_t s = 0; s < providers.size(); ++s) {
    for (const Item& it : providers[s]) {
      ItemRecord r;
      r.item_id = ItemId(next++);
      r.provider_id = ProviderId(s);
      r.features = {0.0};
      r.true_p0 = it.f0;
      r.true_p1 = it.f1;
      records.push_back(r);
    }
  }
  return ValidateDataset(std::move(records));
}

inline std::vector<ItemScore> MakeScores(
    const std::vector<std::vector<Item>>& providers) {
  std::vector<ItemScore> scores;
  std::uint64_t next = 0;
  for (const auto& items : providers) {
    for (const Item& it : items) {
      scores.push_back(ItemScore::Make(ItemId(next++), it.f0, it.f1));
    }
  }
  return scores;
}

inline std::vector<PatternCurve> MakeCurves(
    const std::vector<std::vector<Item>>& providers, OrderingPolicy ordering) {
  const Dataset dataset = MakeDataset(providers);
  const auto scores = MakeScores(providers);
  const EligibilityMask all(scores.size(), 1);
  return BuildPatternCurves(dataset, scores, all, ordering);
}

// Random instance with f1 > f0 everywhere.
inline std::vector<std::vector<Item>> RandomInstance(std::mt19937_64& rng,
                                                     int max_providers,
                                                     int max_items) {
  std::uniform_int_distribution<int> np(1, max_providers);
  std::uniform_int_distribution<int> ni(1, max_items);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::vector<Item>> out(np(rng));
  for (auto& items : out) {
    const int n = ni(rng);
    for (int i = 0; i < n; ++i) {
      double a = u(rng);
      double b = u(rng);
      if (a > b) std::swap(a, b);
      if (b - a < 1e-6) b = std::min(1.0, a + 1e-3);
      if (b <= a) a = b - 1e-3;
      items.push_back({a, b});
    }
  }
  return out;
}

// prod over items of (1 - chosen rate), as a plain loop.
inline double RefSurvival(const std::vector<Item>& items,
                          const std::vector<int>& z) {
  double s = 1.0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    s *= 1.0 - (z[i] ? items[i].f1 : items[i].f0);
  }
  return s;
}

inline double RefDelta(const std::vector<Item>& items,
                       const std::vector<int>& z) {
  const std::vector<int> none(items.size(), 0);
  return RefSurvival(items, none) - RefSurvival(items, z);
}

// Best delta over every k-subset of a provider's items.
inline double RefBestKSubset(const std::vector<Item>& items, int k) {
  const int n = static_cast<int>(items.size());
  double best = -std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (__builtin_popcount(mask) != k) continue;
    std::vector<int> z(n);
    for (int i = 0; i < n; ++i) z[i] = (mask >> i) & 1;
    best = std::max(best, RefDelta(items, z));
  }
  return best;
}

// Best total delta over all 0/1 assignments of the whole instance with
// exactly n coupons (or at most n when at_most is set).
inline double RefBestAssignment(const std::vector<std::vector<Item>>& providers,
                                int n, bool at_most = false) {
  std::vector<std::pair<int, int>> where;
  for (int s = 0; s < static_cast<int>(providers.size()); ++s) {
    for (int i = 0; i < static_cast<int>(providers[s].size()); ++i) {
      where.emplace_back(s, i);
    }
  }
  const int total = static_cast<int>(where.size());
  double best = -std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 0; mask < (1u << total); ++mask) {
    const int c = __builtin_popcount(mask);
    if (at_most ? c > n : c != n) continue;
    std::vector<std::vector<int>> z(providers.size());
    for (std::size_t s = 0; s < providers.size(); ++s) {
      z[s].assign(providers[s].size(), 0);
    }
    for (int b = 0; b < total; ++b) {
      if ((mask >> b) & 1) z[where[b].first][where[b].second] = 1;
    }
    double sum = 0.0;
    for (std::size_t s = 0; s < providers.size(); ++s) {
      sum += RefDelta(providers[s], z[s]);
    }
    best = std::max(best, sum);
  }
  return best;
}

// Best objective over every vector of prefix lengths, summed in curve order.
inline double RefBestSplit(const std::vector<PatternCurve>& curves, int n,
                           bool at_most = false) {
  double best = -std::numeric_limits<double>::infinity();
  std::vector<std::size_t> k(curves.size(), 0);
  while (true) {
    std::size_t used = 0;
    double sum = 0.0;
    for (std::size_t s = 0; s < curves.size(); ++s) {
      used += k[s];
      sum += curves[s].deltas[k[s]];
    }
    if (at_most ? used <= static_cast<std::size_t>(n)
                : used == static_cast<std::size_t>(n)) {
      best = std::max(best, sum);
    }
    std::size_t s = 0;
    while (s < curves.size() && k[s] == curves[s].max_coupons()) k[s++] = 0;
    if (s == curves.size()) break;
    ++k[s];
  }
  return best;
}

inline std::filesystem::path TempDir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() /
             ("couponalloc_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string Slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void WriteText(const std::filesystem::path& path,
                      const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

}  // namespace couponalloc::testing

#endif  // COUPONALLOC_TESTS_TEST_UTIL_H_
