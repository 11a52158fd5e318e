// Copyright 2026 The moment-bench Authors.
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

#ifndef MOMENT_BENCH_TESTS_TEST_UTIL_H_
#define MOMENT_BENCH_TESTS_TEST_UTIL_H_

// Synthetic data generators and brute-force oracles shared by the unit and
// acceptance suites. The oracles restate the definitions literally and do not
// call into the library code they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "moment_bench/annotations.h"
#include "moment_bench/metrics.h"

namespace moment_bench::testing {

inline MomentAnnotation NormPair(const std::string& id,
                                 const std::string& video, double s, double e,
                                 std::string query = "someone does something",
                                 double duration = 30.0) {
  MomentAnnotation pair;
  pair.pair_id = id;
  pair.video_id = video;
  pair.duration_s = duration;
  pair.start_s = s * duration;
  pair.end_s = e * duration;
  pair.start_norm = s;
  pair.end_norm = e;
  pair.query = std::move(query);
  return pair;
}

// Video-coherent synthetic dataset: every video picks a moment style (short
// near the start, short near the end, long, or a rare central style) and
// draws most of its pairs from it, the rest from a random other style.
inline DatasetTable SyntheticTable(std::size_t videos, std::uint64_t seed,
                                   double rare_share = 0.2,
                                   double mix_share = 0.03) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::uniform_int_distribution<int> pairs_per_video(1, 6);
  const auto draw = [&](int style) -> std::pair<double, double> {
    for (;;) {
      double s = 0.0, e = 0.0;
      switch (style) {
        case 0:  // short, at the beginning
          s = std::abs(0.03 * noise(rng));
          e = s + 0.15 + 0.05 * noise(rng);
          break;
        case 1:  // short, at the end
          e = 1.0 - std::abs(0.03 * noise(rng));
          s = e - 0.2 - 0.05 * noise(rng);
          break;
        case 2:  // long, covering most of the video
          s = std::abs(0.03 * noise(rng));
          e = 1.0 - std::abs(0.05 * noise(rng));
          break;
        default:  // rare, central
          s = 0.25 + 0.3 * unit(rng);
          e = s + 0.1 + 0.25 * unit(rng);
          break;
      }
      s = std::round(s * 1e6) / 1e6;
      e = std::round(e * 1e6) / 1e6;
      if (s >= 0.0 && s < e && e <= 1.0) return {s, e};
    }
  };
  DatasetTable table;
  for (std::size_t v = 0; v < videos; ++v) {
    const std::string video = "vid" + std::to_string(v);
    // Styles are stratified over videos so the rare share is exact.
    const bool rare = std::floor((v + 1) * rare_share) > std::floor(v * rare_share);
    const int style = rare ? 3 : static_cast<int>(unit(rng) * 3.0) % 3;
    const int count = pairs_per_video(rng);
    for (int k = 0; k < count; ++k) {
      int pair_style = style;
      if (unit(rng) < mix_share) pair_style = static_cast<int>(unit(rng) * 4) % 4;
      const auto [s, e] = draw(pair_style);
      table.pairs.push_back(NormPair(video + "#" + std::to_string(k), video, s,
                                     e, "person opens the door", 60.0));
    }
  }
  return table;
}

// Literal Gaussian product-kernel KDE value.
inline double BruteDensity(const std::vector<Interval>& points, double h_s,
                           double h_e, Interval q) {
  double total = 0.0;
  for (const auto& p : points) {
    total += 1.0 / (2.0 * std::numbers::pi * h_s * h_e) *
             std::exp(-(q.start - p.start) * (q.start - p.start) /
                          (2.0 * h_s * h_s) -
                      (q.end - p.end) * (q.end - p.end) / (2.0 * h_e * h_e));
  }
  return total / static_cast<double>(points.size());
}

inline double BruteIou(Interval a, Interval b) {
  const double lo = std::max(a.start, b.start);
  const double hi = std::min(a.end, b.end);
  const double inter = hi > lo ? hi - lo : 0.0;
  const double uni = (a.end - a.start) + (b.end - b.start) - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

// Recall and discounted recall in percent, iterating the definitions one query
// at a time. Missing predictions are misses.
inline std::pair<double, double> BruteScore(
    const std::map<std::string, std::vector<Interval>>& predictions,
    const std::vector<std::pair<std::string, Interval>>& ground_truth, int n,
    double m) {
  double r_sum = 0.0, dr_sum = 0.0;
  for (const auto& [id, gt] : ground_truth) {
    const auto it = predictions.find(id);
    if (it == predictions.end()) continue;
    bool hit = false;
    double best = 0.0;
    for (int k = 0; k < n && k < static_cast<int>(it->second.size()); ++k) {
      const Interval p = it->second[k];
      if (BruteIou(p, gt) < m) continue;
      hit = true;
      best = std::max(best, (1.0 - std::abs(p.start - gt.start)) *
                                (1.0 - std::abs(p.end - gt.end)));
    }
    if (hit) {
      r_sum += 1.0;
      dr_sum += best;
    }
  }
  const double nq = static_cast<double>(ground_truth.size());
  return {100.0 * r_sum / nq, 100.0 * dr_sum / nq};
}

}  // namespace moment_bench::testing

#endif  // MOMENT_BENCH_TESTS_TEST_UTIL_H_
