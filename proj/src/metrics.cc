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

#include "moment_bench/metrics.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <istream>
#include <ostream>
#include <set>

namespace moment_bench {
namespace {

using nlohmann::json;

std::string FormatThreshold(double m) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%g", m);
  return buffer;
}

double RoundToHundredths(double value) {
  return std::round(value * 100.0) / 100.0;
}

Interval Normalize(Interval candidate, TimeUnit unit, double duration_s) {
  if (unit == TimeUnit::kNormalized) return candidate;
  return {std::clamp(candidate.start / duration_s, 0.0, 1.0),
          std::clamp(candidate.end / duration_s, 0.0, 1.0)};
}

void ValidateThresholds(std::span<const int> n_list,
                        std::span<const double> m_list) {
  if (n_list.empty() || m_list.empty()) {
    throw ValueError("at least one n and one IoU threshold are required");
  }
  for (int n : n_list) {
    if (n < 1) throw ValueError("n must be >= 1");
  }
  for (double m : m_list) {
    if (!(m >= 0.0 && m <= 1.0)) {
      throw ValueError("IoU threshold must lie in [0, 1]");
    }
  }
}

// Adds the entries of one split to `report`; returns nothing, the report
// owns the aggregates.
void ScoreSplit(const PredictionSet& predictions,
                std::span<const MomentAnnotation* const> pairs,
                std::span<const int> n_list, std::span<const double> m_list,
                const std::string& split, ScoreReport& report) {
  struct Sums {
    double recall = 0.0;
    double discounted = 0.0;
  };
  std::vector<Sums> sums(n_list.size() * m_list.size());
  SplitDiagnostics diagnostics;
  diagnostics.num_queries = pairs.size();

  std::vector<Interval> normalized;
  for (const MomentAnnotation* pair : pairs) {
    const auto it = predictions.entries.find(pair->pair_id);
    if (it == predictions.entries.end()) {
      ++diagnostics.missing_predictions;
      continue;
    }
    normalized.clear();
    for (const auto& c : it->second.candidates) {
      normalized.push_back(Normalize(c, it->second.unit, pair->duration_s));
    }
    for (std::size_t a = 0; a < n_list.size(); ++a) {
      for (std::size_t b = 0; b < m_list.size(); ++b) {
        const auto hit = HitAndDiscount(normalized, pair->normalized(),
                                        n_list[a], m_list[b]);
        if (!hit.hit) continue;
        auto& s = sums[a * m_list.size() + b];
        s.recall += 1.0;
        s.discounted += hit.alpha_start * hit.alpha_end;
      }
    }
  }
  const double nq = static_cast<double>(pairs.size());
  for (std::size_t a = 0; a < n_list.size(); ++a) {
    for (std::size_t b = 0; b < m_list.size(); ++b) {
      const auto& s = sums[a * m_list.size() + b];
      const double recall = nq > 0 ? 100.0 * (s.recall / nq) : 0.0;
      const double discounted = nq > 0 ? 100.0 * (s.discounted / nq) : 0.0;
      report.values[{Metric::kRecall, n_list[a], m_list[b], split}] = recall;
      report.values[{Metric::kDiscountedRecall, n_list[a], m_list[b], split}] =
          discounted;
    }
  }
  report.splits[split] = diagnostics;
}

std::vector<const MomentAnnotation*> SortedPairs(const DatasetTable& table) {
  std::vector<const MomentAnnotation*> pairs;
  pairs.reserve(table.pairs.size());
  for (const auto& pair : table.pairs) pairs.push_back(&pair);
  std::sort(pairs.begin(), pairs.end(),
            [](const auto* a, const auto* b) { return a->pair_id < b->pair_id; });
  return pairs;
}

std::size_t CountUnknown(const PredictionSet& predictions,
                         const DatasetTable& table) {
  const auto index = IndexByPairId(table);
  std::size_t unknown = 0;
  for (const auto& [id, ranked] : predictions.entries) {
    if (!index.count(id)) ++unknown;
  }
  return unknown;
}

void NoteUnknown(ScoreReport& report) {
  if (report.unknown_predictions > 0) {
    report.warnings.push_back(std::to_string(report.unknown_predictions) +
                              " predictions reference unknown pair ids and "
                              "were ignored");
  }
}

}  // namespace

double Iou(Interval a, Interval b) {
  const double inter =
      std::max(0.0, std::min(a.end, b.end) - std::max(a.start, b.start));
  const double uni = std::max(a.end, b.end) - std::min(a.start, b.start);
  if (!(uni > 0.0)) return 0.0;
  return inter / uni;
}

HitResult HitAndDiscount(std::span<const Interval> ranked, Interval gt, int n,
                         double m) {
  const std::size_t limit =
      std::min(ranked.size(), static_cast<std::size_t>(std::max(n, 0)));
  HitResult best;
  for (std::size_t k = 0; k < limit; ++k) {
    if (Iou(ranked[k], gt) < m) continue;
    const double alpha_start = 1.0 - std::abs(ranked[k].start - gt.start);
    const double alpha_end = 1.0 - std::abs(ranked[k].end - gt.end);
    if (!best.hit ||
        alpha_start * alpha_end > best.alpha_start * best.alpha_end) {
      best = {true, alpha_start, alpha_end, static_cast<int>(k) + 1};
    }
  }
  return best;
}

std::string MetricLabel(Metric metric, int n, double m) {
  return std::string(metric == Metric::kRecall ? "R@" : "dR@") +
         std::to_string(n) + ",IoU=" + FormatThreshold(m);
}

double ScoreReport::Value(Metric metric, int n, double m,
                          std::string_view split) const {
  const auto it = values.find({metric, n, m, std::string(split)});
  if (it == values.end()) {
    throw LookupError("no score for " + MetricLabel(metric, n, m) +
                      " on split '" + std::string(split) + "'");
  }
  return it->second;
}

void WritePredictions(const PredictionSet& predictions, std::ostream& out) {
  for (const auto& [id, ranked] : predictions.entries) {
    json candidates = json::array();
    for (const auto& c : ranked.candidates) candidates.push_back({c.start, c.end});
    json record = {
        {"pair_id", id},
        {"candidates", std::move(candidates)},
        {"unit", ranked.unit == TimeUnit::kNormalized ? "norm" : "seconds"},
    };
    out << record.dump() << '\n';
  }
}

PredictionSet ReadPredictions(std::istream& in) {
  PredictionSet predictions;
  std::string line;
  std::size_t record = 0;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "prediction record " + std::to_string(record);
    try {
      const json doc = json::parse(line);
      const auto id = doc.at("pair_id").get<std::string>();
      RankedCandidates ranked;
      const auto unit = doc.value("unit", std::string("norm"));
      if (unit == "seconds") {
        ranked.unit = TimeUnit::kSeconds;
      } else if (unit != "norm") {
        throw IoError(where + ": unknown unit '" + unit + "'");
      }
      for (const auto& c : doc.at("candidates")) {
        const Interval interval{c.at(0).get<double>(), c.at(1).get<double>()};
        const bool valid =
            ranked.unit == TimeUnit::kNormalized
                ? interval.start >= 0.0 && interval.start <= interval.end &&
                      interval.end <= 1.0
                : interval.start >= 0.0 && interval.start <= interval.end;
        if (!valid) throw IoError(where + ": invalid candidate for '" + id + "'");
        ranked.candidates.push_back(interval);
      }
      if (!predictions.entries.emplace(id, std::move(ranked)).second) {
        throw IoError(where + ": duplicate pair id '" + id + "'");
      }
    } catch (const json::exception& e) {
      throw IoError(where + ": unreadable (" + e.what() + ")");
    }
    ++record;
  }
  return predictions;
}

ScoreReport Evaluate(const PredictionSet& predictions,
                     const DatasetTable& ground_truth,
                     std::span<const int> n_list, std::span<const double> m_list,
                     std::string_view split) {
  ValidateThresholds(n_list, m_list);
  ScoreReport report;
  const auto pairs = SortedPairs(ground_truth);
  ScoreSplit(predictions, pairs, n_list, m_list, std::string(split), report);
  report.unknown_predictions = CountUnknown(predictions, ground_truth);
  NoteUnknown(report);
  return report;
}

ScoreReport EvaluateSplits(const PredictionSet& predictions,
                           const DatasetTable& ground_truth,
                           const SplitAssignment& assignment,
                           std::span<const int> n_list,
                           std::span<const double> m_list) {
  ValidateThresholds(n_list, m_list);
  std::map<Split, std::vector<const MomentAnnotation*>> groups;
  for (const MomentAnnotation* pair : SortedPairs(ground_truth)) {
    const auto it = assignment.assignment.find(pair->pair_id);
    if (it == assignment.assignment.end()) {
      throw LookupError("pair '" + pair->pair_id +
                        "' is not assigned to any split");
    }
    groups[it->second].push_back(pair);
  }
  ScoreReport report;
  for (const auto& [split, pairs] : groups) {
    const bool any = std::any_of(pairs.begin(), pairs.end(), [&](const auto* p) {
      return predictions.entries.count(p->pair_id) > 0;
    });
    if (!any) {
      report.warnings.push_back("split " + std::string(SplitName(split)) +
                                " has no predictions; not scored");
      continue;
    }
    ScoreSplit(predictions, pairs, n_list, m_list, std::string(SplitName(split)),
               report);
  }
  report.unknown_predictions = CountUnknown(predictions, ground_truth);
  NoteUnknown(report);
  return report;
}

json ReportToJson(const ScoreReport& report) {
  json splits = json::object();
  for (const auto& [name, diag] : report.splits) {
    splits[name] = {{"N_q", diag.num_queries},
                    {"missing_predictions", diag.missing_predictions}};
  }
  for (const auto& [key, value] : report.values) {
    splits[key.split][MetricLabel(key.metric, key.n, key.m)] =
        RoundToHundredths(value);
  }
  return {
      {"version", std::string(kToolkitVersion)},
      {"splits", std::move(splits)},
      {"unknown_predictions", report.unknown_predictions},
      {"warnings", report.warnings},
  };
}

void WriteReport(const ScoreReport& report, std::ostream& out) {
  out << ReportToJson(report).dump(2) << '\n';
}

void PrintReport(const ScoreReport& report, std::ostream& out) {
  std::set<std::tuple<int, double, Metric>> columns;
  for (const auto& [key, value] : report.values) {
    columns.insert({key.n, key.m, key.metric});
  }
  out << std::left << std::setw(10) << "split" << std::right << std::setw(8)
      << "N_q";
  for (const auto& [n, m, metric] : columns) {
    out << std::setw(16) << MetricLabel(metric, n, m);
  }
  out << '\n';
  for (const auto& [name, diag] : report.splits) {
    out << std::left << std::setw(10) << name << std::right << std::setw(8)
        << diag.num_queries;
    for (const auto& [n, m, metric] : columns) {
      out << std::setw(16) << std::fixed << std::setprecision(2)
          << report.values.at({metric, n, m, name});
    }
    out << '\n';
  }
  for (const auto& warning : report.warnings) out << "warning: " << warning << '\n';
}

}  // namespace moment_bench
