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

#ifndef MOMENT_BENCH_METRICS_H_
#define MOMENT_BENCH_METRICS_H_

// Recall at top-n with an IoU threshold (R@n,IoU@m) and its boundary-discounted
// variant (dR@n,IoU@m), where every hit is weighted by
// (1 - |p_s - g_s|) * (1 - |p_e - g_e|) on normalized boundaries.

#include <compare>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "moment_bench/annotations.h"
#include "moment_bench/common.h"
#include "moment_bench/resplit.h"

namespace moment_bench {

double Iou(Interval a, Interval b);

enum class TimeUnit { kNormalized, kSeconds };

struct RankedCandidates {
  std::vector<Interval> candidates;  // rank 1 first
  TimeUnit unit = TimeUnit::kNormalized;

  friend bool operator==(const RankedCandidates&,
                         const RankedCandidates&) = default;
};

struct PredictionSet {
  std::map<std::string, RankedCandidates> entries;

  friend bool operator==(const PredictionSet&, const PredictionSet&) = default;
};

// One JSON object per line:
//   {"pair_id": ..., "candidates": [[s, e], ...], "unit": "norm"|"seconds"}
// sorted by pair id.
void WritePredictions(const PredictionSet& predictions, std::ostream& out);
PredictionSet ReadPredictions(std::istream& in);

struct HitResult {
  bool hit = false;
  double alpha_start = 0.0;
  double alpha_end = 0.0;
  int rank = 0;  // 1-based rank of the qualifying candidate, 0 on a miss
};

// r = 1 iff one of the first n candidates has IoU >= m with gt. The discount
// factors come from the qualifying candidate with the largest product
// alpha_start * alpha_end, the higher rank winning ties; a miss yields (0, 0).
// Taking the best rather than the first qualifying candidate keeps dR
// non-increasing in m for n > 1.
HitResult HitAndDiscount(std::span<const Interval> ranked, Interval gt, int n,
                         double m);

enum class Metric { kRecall, kDiscountedRecall };

struct MetricKey {
  Metric metric = Metric::kRecall;
  int n = 1;
  double m = 0.5;
  std::string split;

  auto operator<=>(const MetricKey&) const = default;
};

// "R@1,IoU=0.5" / "dR@5,IoU=0.7".
std::string MetricLabel(Metric metric, int n, double m);

struct SplitDiagnostics {
  std::size_t num_queries = 0;
  std::size_t missing_predictions = 0;
};

struct ScoreReport {
  std::map<MetricKey, double> values;  // percentages in [0, 100]
  std::map<std::string, SplitDiagnostics> splits;
  std::size_t unknown_predictions = 0;
  std::vector<std::string> warnings;

  double Value(Metric metric, int n, double m,
               std::string_view split = "all") const;
};

// Scores every ground-truth pair of `ground_truth` under the label `split`.
// Pairs without predictions count as misses; predictions for pair ids absent
// from the table are ignored and reported as a warning.
ScoreReport Evaluate(const PredictionSet& predictions,
                     const DatasetTable& ground_truth,
                     std::span<const int> n_list, std::span<const double> m_list,
                     std::string_view split = "all");

// Scores each non-empty split of `assignment` separately. Splits without a
// single prediction are left out and named in the warnings.
ScoreReport EvaluateSplits(const PredictionSet& predictions,
                           const DatasetTable& ground_truth,
                           const SplitAssignment& assignment,
                           std::span<const int> n_list,
                           std::span<const double> m_list);

// Report document; values rounded to 2 decimals.
nlohmann::json ReportToJson(const ScoreReport& report);
void WriteReport(const ScoreReport& report, std::ostream& out);

// Human-readable table, one row per split.
void PrintReport(const ScoreReport& report, std::ostream& out);

}  // namespace moment_bench

#endif  // MOMENT_BENCH_METRICS_H_
