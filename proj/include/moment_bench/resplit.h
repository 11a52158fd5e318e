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

#ifndef MOMENT_BENCH_RESPLIT_H_
#define MOMENT_BENCH_RESPLIT_H_

// Changing-distribution re-splitting: the lowest-density pairs under a KDE fit
// of the whole dataset become the out-of-distribution test set, and the
// remaining videos are partitioned into train / val / test-iid.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "moment_bench/annotations.h"
#include "moment_bench/kde.h"

namespace moment_bench {

enum class Split { kTrain, kVal, kTestIid, kTestOod };

inline constexpr std::array<Split, 4> kAllSplits = {
    Split::kTrain, Split::kVal, Split::kTestIid, Split::kTestOod};

// "train", "val", "test-iid", "test-ood".
std::string_view SplitName(Split split);
Split SplitFromName(std::string_view name);

struct ResplitConfig {
  double ood_fraction = 0.20;
  double train_fraction = 0.70;
  double val_fraction = 0.05;
  double iid_fraction = 0.05;
  // Pairs whose normalized duration is strictly above this never enter
  // test-ood. Set for ActivityNet, unset for Charades.
  std::optional<double> long_moment_threshold;
  std::uint64_t seed = 0;
  BandwidthRule bandwidth_rule = BandwidthRule::Scott();
  // Allowed drift of the final test-ood fraction before a warning is attached.
  double ood_tolerance = 0.03;

  // Fractions sum to 1 within 1e-9; threshold in (0, 1]. Throws ValueError.
  void Validate() const;

  // Defaults for a dataset convention: activitynet turns on the 0.5 rule.
  static ResplitConfig ForSource(DatasetSource source, std::uint64_t seed);
};

// The two preliminary sets produced by density ranking.
struct PreliminarySplit {
  std::set<std::string> ood;
  std::set<std::string> train;
};

struct SplitCounts {
  std::size_t pairs = 0;
  std::size_t videos = 0;
};

struct SplitAssignment {
  std::map<std::string, Split> assignment;
  ResplitConfig config;
  Bandwidth bandwidth;
  std::map<Split, SplitCounts> counts;
  double ood_fraction_final = 0.0;
  std::vector<std::string> warnings;
  std::string version{kToolkitVersion};

  // Pair ids of one split, sorted.
  std::vector<std::string> Members(Split split) const;
};

// Pair ids sorted by ascending KDE density (lowest first), ties broken by pair
// id.
std::vector<std::string> RankByDensity(const DatasetTable& table,
                                       const KdeModel& model, int threads = 1);

// The first round(ood_fraction * N) ranked ids (half away from zero) become
// preliminary test-ood. Throws SplitError when N < 10.
PreliminarySplit PreliminaryOod(const std::vector<std::string>& ranked_ids,
                                double ood_fraction);

// Moves every pair with normalized duration > threshold into the
// preliminary training set. No-op without a threshold.
PreliminarySplit ApplyLongMomentRule(PreliminarySplit sets,
                                     const DatasetTable& table,
                                     std::optional<double> threshold);

// Moves each video that spans both sets wholly into the set holding most of
// its pairs; ties go to training. A video owning a pair longer than
// `long_threshold` always resolves to training so the long-moment rule
// survives elimination.
PreliminarySplit EliminateConflicts(PreliminarySplit sets,
                                    const DatasetTable& table,
                                    std::optional<double> long_threshold = {});

struct RemainderPartition {
  std::set<std::string> train;
  std::set<std::string> val;
  std::set<std::string> test_iid;
};

// Shuffles the remainder's videos with `seed`, then fills val and test-iid
// whole-video until each reaches round(fraction * total_pairs); the rest is
// training. Throws SplitError with fewer than 3 videos.
RemainderPartition PartitionRemainder(const std::set<std::string>& remainder,
                                      const DatasetTable& table,
                                      double val_fraction, double iid_fraction,
                                      std::size_t total_pairs,
                                      std::uint64_t seed);

// Full pipeline: fit, rank, preliminary split, long-moment rule, conflict
// elimination, remainder partition.
SplitAssignment Resplit(const DatasetTable& table, const ResplitConfig& config,
                        int threads = 1);

// Split file: the four pair-id arrays plus config, bandwidth, counts and
// version. Output is byte-stable for equal inputs.
nlohmann::json SplitToJson(const SplitAssignment& split);
SplitAssignment SplitFromJson(const nlohmann::json& doc);
void WriteSplitFile(const SplitAssignment& split, std::ostream& out);
SplitAssignment ReadSplitFile(std::istream& in);

// The pairs of `table` that the assignment puts in `split`.
DatasetTable SelectSplit(const DatasetTable& table,
                         const SplitAssignment& assignment, Split split);

}  // namespace moment_bench

#endif  // MOMENT_BENCH_RESPLIT_H_
