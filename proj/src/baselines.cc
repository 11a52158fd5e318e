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

#include "moment_bench/baselines.h"

#include <algorithm>
#include <vector>

namespace moment_bench {

PredictionSet PredictAll(const DatasetTable& test_table) {
  PredictionSet predictions;
  for (const auto& pair : test_table.pairs) {
    predictions.entries[pair.pair_id] = {{{0.0, 1.0}}, TimeUnit::kNormalized};
  }
  return predictions;
}

PredictionSet BiasBased(const DatasetTable& train_table,
                        const DatasetTable& test_table, int n,
                        std::uint64_t seed, BandwidthRule rule, int threads) {
  std::vector<Interval> points;
  points.reserve(train_table.pairs.size());
  for (const auto& pair : train_table.pairs) points.push_back(pair.normalized());
  return BiasBased(KdeModel::Fit(points, rule), test_table, n, seed, threads);
}

PredictionSet BiasBased(const KdeModel& model, const DatasetTable& test_table,
                        int n, std::uint64_t seed, int threads) {
  if (n < 1) throw ValueError("candidate count n must be >= 1");
  std::vector<RankedCandidates> ranked(test_table.pairs.size());
  ParallelFor(test_table.pairs.size(), threads, [&](std::size_t i) {
    const auto& pair = test_table.pairs[i];
    auto samples = model.Sample(static_cast<std::size_t>(n),
                                seed ^ StableHash(pair.pair_id));
    const auto density = model.Density(samples);
    std::vector<std::size_t> order(samples.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (density[a] != density[b]) return density[a] > density[b];
      if (samples[a].start != samples[b].start) {
        return samples[a].start < samples[b].start;
      }
      return samples[a].end < samples[b].end;
    });
    auto& out = ranked[i];
    for (std::size_t k : order) out.candidates.push_back(samples[k]);
  });
  PredictionSet predictions;
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    predictions.entries[test_table.pairs[i].pair_id] = std::move(ranked[i]);
  }
  return predictions;
}

}  // namespace moment_bench
