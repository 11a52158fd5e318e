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

#ifndef MOMENT_BENCH_BASELINES_H_
#define MOMENT_BENCH_BASELINES_H_

#include <cstdint>

#include "moment_bench/annotations.h"
#include "moment_bench/kde.h"
#include "moment_bench/metrics.h"

namespace moment_bench {

// The whole video, [0, 1], as the single candidate of every query.
PredictionSet PredictAll(const DatasetTable& test_table);

// Fits a KDE on the training moments, draws n valid samples per test query
// and ranks them by fitted density, highest first. Each query uses its own
// stream seeded with seed ^ StableHash(pair_id), so output does not depend on
// query order or thread count.
PredictionSet BiasBased(const DatasetTable& train_table,
                        const DatasetTable& test_table, int n,
                        std::uint64_t seed, BandwidthRule rule,
                        int threads = 1);

// Same as above with an already fitted model.
PredictionSet BiasBased(const KdeModel& model, const DatasetTable& test_table,
                        int n, std::uint64_t seed, int threads = 1);

}  // namespace moment_bench

#endif  // MOMENT_BENCH_BASELINES_H_
