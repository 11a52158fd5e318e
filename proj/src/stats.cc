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

#include "moment_bench/stats.h"

#include <algorithm>
#include <cmath>
#include <map>

namespace moment_bench {
namespace {

using nlohmann::json;

std::vector<Interval> NormalizedPoints(const DatasetTable& table) {
  std::vector<Interval> points;
  points.reserve(table.pairs.size());
  for (const auto& pair : table.pairs) points.push_back(pair.normalized());
  return points;
}

int BinOf(double value, int bins) {
  const int bin = static_cast<int>(std::floor(value * bins));
  return std::clamp(bin, 0, bins - 1);
}

void CheckResolution(int resolution) {
  if (resolution < 1) throw ValueError("grid resolution must be >= 1");
}

}  // namespace

Histogram DurationHistogram(const DatasetTable& table, int bin_count) {
  if (bin_count < 2) throw ValueError("histogram needs at least 2 bins");
  Histogram histogram;
  histogram.counts.assign(static_cast<std::size_t>(bin_count), 0);
  for (int k = 0; k <= bin_count; ++k) {
    histogram.edges.push_back(static_cast<double>(k) / bin_count);
  }
  for (const auto& pair : table.pairs) {
    ++histogram.counts[BinOf(pair.normalized_duration(), bin_count)];
  }
  return histogram;
}

std::vector<double> DurationShareOver(const DatasetTable& table,
                                      std::span<const double> thresholds) {
  std::vector<double> shares;
  shares.reserve(thresholds.size());
  for (double t : thresholds) {
    std::size_t over = 0;
    for (const auto& pair : table.pairs) {
      if (pair.normalized_duration() > t) ++over;
    }
    shares.push_back(table.pairs.empty()
                         ? 0.0
                         : static_cast<double>(over) /
                               static_cast<double>(table.pairs.size()));
  }
  return shares;
}

DensityGrid DensityGridFromModel(const KdeModel& model, int resolution,
                                 int threads) {
  CheckResolution(resolution);
  DensityGrid grid;
  grid.resolution = resolution;
  grid.bandwidth = model.bandwidth();
  std::vector<Interval> centers;
  centers.reserve(static_cast<std::size_t>(resolution) * resolution);
  for (int i = 0; i < resolution; ++i) {
    for (int j = 0; j < resolution; ++j) {
      centers.push_back({grid.center(i), grid.center(j)});
    }
  }
  grid.values = model.Density(centers, threads);
  return grid;
}

DensityGrid JointDensityGrid(const DatasetTable& table, int resolution,
                             BandwidthRule rule, int threads) {
  CheckResolution(resolution);
  const auto points = NormalizedPoints(table);
  return DensityGridFromModel(KdeModel::Fit(points, rule), resolution, threads);
}

VerbLexicon::VerbLexicon(std::set<std::string> lemmas)
    : lemmas_(lemmas.begin(), lemmas.end()) {}

bool VerbLexicon::Contains(std::string_view lemma) const {
  return lemmas_.find(lemma) != lemmas_.end();
}

std::optional<std::string> VerbLexicon::Match(std::string_view token) const {
  if (Contains(token)) return std::string(token);
  const auto ends_with = [&](std::string_view suffix) {
    return token.size() > suffix.size() + 1 &&
           token.substr(token.size() - suffix.size()) == suffix;
  };
  for (std::string_view suffix : {"ies", "ied"}) {
    if (ends_with(suffix)) {
      std::string stem(token.substr(0, token.size() - suffix.size()));
      stem += 'y';
      if (Contains(stem)) return stem;
    }
  }
  for (std::string_view suffix : {"ing", "ed", "es", "s"}) {
    if (!ends_with(suffix)) continue;
    const std::string stem(token.substr(0, token.size() - suffix.size()));
    if (Contains(stem)) return stem;
    if (Contains(stem + "e")) return stem + "e";
    if (stem.size() >= 3 && stem.back() == stem[stem.size() - 2]) {
      const std::string undoubled = stem.substr(0, stem.size() - 1);
      if (Contains(undoubled)) return undoubled;
    }
  }
  return std::nullopt;
}

std::set<std::string> VerbsOf(const MomentAnnotation& pair,
                              const VerbLexicon& lexicon) {
  std::set<std::string> verbs;
  const auto tokens = pair.tokens ? *pair.tokens : Tokenize(pair.query);
  for (const auto& token : tokens) {
    if (auto lemma = lexicon.Match(token)) verbs.insert(std::move(*lemma));
  }
  return verbs;
}

VerbTable VerbFrequencies(const DatasetTable& table, const VerbLexicon& lexicon,
                          int top_k) {
  if (lexicon.empty()) throw ValueError("verb lexicon is empty");
  if (top_k < 1) throw ValueError("top_k must be >= 1");
  std::vector<std::set<std::string>> verbs_per_pair;
  verbs_per_pair.reserve(table.pairs.size());
  std::map<std::string, std::size_t> counts;
  for (const auto& pair : table.pairs) {
    verbs_per_pair.push_back(VerbsOf(pair, lexicon));
    for (const auto& verb : verbs_per_pair.back()) ++counts[verb];
  }
  VerbTable out;
  out.counts.assign(counts.begin(), counts.end());
  std::sort(out.counts.begin(), out.counts.end(),
            [](const auto& a, const auto& b) {
              if (a.second != b.second) return a.second > b.second;
              return a.first < b.first;
            });
  if (out.counts.size() > static_cast<std::size_t>(top_k)) {
    out.counts.resize(static_cast<std::size_t>(top_k));
  }
  std::set<std::string> top;
  for (const auto& [verb, count] : out.counts) top.insert(verb);
  std::size_t covered = 0;
  for (const auto& verbs : verbs_per_pair) {
    if (std::any_of(verbs.begin(), verbs.end(),
                    [&](const auto& v) { return top.count(v) > 0; })) {
      ++covered;
    }
  }
  out.coverage = table.pairs.empty()
                     ? 0.0
                     : static_cast<double>(covered) /
                           static_cast<double>(table.pairs.size());
  return out;
}

DensityGrid ActionConditionedGrid(const DatasetTable& table,
                                  std::string_view verb,
                                  const VerbLexicon& lexicon, int resolution,
                                  BandwidthRule rule, int threads) {
  if (!lexicon.Contains(verb)) {
    throw LookupError("verb '" + std::string(verb) + "' is not in the lexicon");
  }
  DatasetTable subset;
  subset.source = table.source;
  for (const auto& pair : table.pairs) {
    if (VerbsOf(pair, lexicon).count(std::string(verb))) {
      subset.pairs.push_back(pair);
    }
  }
  if (subset.pairs.size() < 2) {
    throw FitError("verb '" + std::string(verb) + "' matches only " +
                   std::to_string(subset.pairs.size()) +
                   " pairs; need at least 2");
  }
  return JointDensityGrid(subset, resolution, rule, threads);
}

std::vector<double> JointHistogram(const DatasetTable& table, int bins) {
  if (bins < 1) throw ValueError("histogram needs at least 1 bin per axis");
  std::vector<double> mass(static_cast<std::size_t>(bins) * bins, 0.0);
  if (table.pairs.empty()) return mass;
  const double weight = 1.0 / static_cast<double>(table.pairs.size());
  for (const auto& pair : table.pairs) {
    mass[static_cast<std::size_t>(BinOf(pair.start_norm, bins)) * bins +
         BinOf(pair.end_norm, bins)] += weight;
  }
  return mass;
}

double JensenShannonDivergence(std::span<const double> p,
                               std::span<const double> q) {
  if (p.size() != q.size()) {
    throw ValueError("histograms must have the same number of bins");
  }
  double sum_p = 0.0, sum_q = 0.0;
  for (double v : p) sum_p += v;
  for (double v : q) sum_q += v;
  if (!(sum_p > 0.0) || !(sum_q > 0.0)) {
    throw ValueError("histograms must have positive mass");
  }
  double divergence = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double a = p[k] / sum_p;
    const double b = q[k] / sum_q;
    const double mid = 0.5 * (a + b);
    if (a > 0.0) divergence += 0.5 * a * std::log2(a / mid);
    if (b > 0.0) divergence += 0.5 * b * std::log2(b / mid);
  }
  return divergence;
}

json HistogramToJson(const Histogram& histogram) {
  return {
      {"kind", "duration_histogram"},
      {"axis", "normalized_duration"},
      {"edges", histogram.edges},
      {"counts", histogram.counts},
  };
}

json GridToJson(const DensityGrid& grid) {
  std::vector<double> centers;
  for (int k = 0; k < grid.resolution; ++k) centers.push_back(grid.center(k));
  json rows = json::array();
  for (int i = 0; i < grid.resolution; ++i) {
    rows.push_back(std::vector<double>(
        grid.values.begin() + static_cast<std::ptrdiff_t>(i) * grid.resolution,
        grid.values.begin() +
            static_cast<std::ptrdiff_t>(i + 1) * grid.resolution));
  }
  return {
      {"kind", "density_grid"},
      {"resolution", grid.resolution},
      {"rows", "start_norm"},
      {"columns", "end_norm"},
      {"centers", std::move(centers)},
      {"bandwidth",
       {{"start", grid.bandwidth.start}, {"end", grid.bandwidth.end}}},
      {"values", std::move(rows)},
  };
}

json VerbTableToJson(const VerbTable& table) {
  json counts = json::array();
  for (const auto& [verb, count] : table.counts) {
    counts.push_back({{"verb", verb}, {"count", count}});
  }
  return {{"kind", "verb_table"},
          {"counts", std::move(counts)},
          {"coverage", table.coverage}};
}

}  // namespace moment_bench
