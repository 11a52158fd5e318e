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

#ifndef MOMENT_BENCH_STATS_H_
#define MOMENT_BENCH_STATS_H_

// Dataset-bias diagnostics: moment-duration histograms, joint (start, end)
// density grids, verb frequency tables and verb-conditioned grids.

#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "moment_bench/annotations.h"
#include "moment_bench/kde.h"

namespace moment_bench {

struct Histogram {
  std::vector<double> edges;  // bin_count + 1 equal-width edges over [0, 1]
  std::vector<std::size_t> counts;
};

// Equal-width bins over normalized duration; a duration of exactly 1 falls in
// the last bin. Throws ValueError when bin_count < 2.
Histogram DurationHistogram(const DatasetTable& table, int bin_count);

// Fraction of pairs with normalized duration strictly above each threshold.
std::vector<double> DurationShareOver(const DatasetTable& table,
                                      std::span<const double> thresholds);

// KDE values on the cell centers of an R x R lattice over [0, 1]^2. Row index
// is the start coordinate, column index the end coordinate.
struct DensityGrid {
  int resolution = 0;
  std::vector<double> values;  // row-major, resolution * resolution
  Bandwidth bandwidth;

  double at(int start_cell, int end_cell) const {
    return values[static_cast<std::size_t>(start_cell) * resolution + end_cell];
  }
  // Center of cell k along either axis.
  double center(int k) const { return (k + 0.5) / resolution; }
};

inline constexpr int kDefaultGridResolution = 100;

DensityGrid DensityGridFromModel(const KdeModel& model, int resolution,
                                 int threads = 1);
DensityGrid JointDensityGrid(const DatasetTable& table, int resolution,
                             BandwidthRule rule, int threads = 1);

// Lemma set with naive inflection stripping.
class VerbLexicon {
 public:
  VerbLexicon() = default;
  explicit VerbLexicon(std::set<std::string> lemmas);

  // The lemma `token` inflects, trying the token itself, then the token with
  // -ing/-ed/-es/-s (and -ies/-ied -> y) removed, allowing a restored final
  // "e" or an undoubled final consonant.
  std::optional<std::string> Match(std::string_view token) const;

  bool Contains(std::string_view lemma) const;
  bool empty() const { return lemmas_.empty(); }
  const std::set<std::string, std::less<>>& lemmas() const { return lemmas_; }

 private:
  std::set<std::string, std::less<>> lemmas_;
};

// Everyday-action verbs common in Charades-STA and ActivityNet-Captions
// queries.
const VerbLexicon& DefaultVerbLexicon();

// One lemma per line; blank lines and '#' comments ignored.
VerbLexicon ReadVerbLexicon(std::istream& in);

// Distinct lexicon lemmas appearing in a pair's query.
std::set<std::string> VerbsOf(const MomentAnnotation& pair,
                              const VerbLexicon& lexicon);

struct VerbTable {
  std::vector<std::pair<std::string, std::size_t>> counts;  // top-k, desc
  double coverage = 0.0;  // pairs with >= 1 top-k verb / all pairs
};

// Counts the pairs whose query contains each lemma (once per pair) and keeps
// the top_k, ties broken alphabetically. Throws ValueError on an empty
// lexicon.
VerbTable VerbFrequencies(const DatasetTable& table, const VerbLexicon& lexicon,
                          int top_k);

// Joint grid over the pairs whose query contains `verb`. Throws LookupError
// when the verb is not in the lexicon and FitError when fewer than two pairs
// match.
DensityGrid ActionConditionedGrid(const DatasetTable& table,
                                  std::string_view verb,
                                  const VerbLexicon& lexicon, int resolution,
                                  BandwidthRule rule, int threads = 1);

// Normalized 2D histogram of (start_norm, end_norm) on a bins x bins lattice.
std::vector<double> JointHistogram(const DatasetTable& table, int bins);

// Jensen-Shannon divergence (base 2, in [0, 1]) of two histograms with equal
// support size. Inputs are normalized internally.
double JensenShannonDivergence(std::span<const double> p,
                               std::span<const double> q);

nlohmann::json HistogramToJson(const Histogram& histogram);
nlohmann::json GridToJson(const DensityGrid& grid);
nlohmann::json VerbTableToJson(const VerbTable& table);

}  // namespace moment_bench

#endif  // MOMENT_BENCH_STATS_H_
