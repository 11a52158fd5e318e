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

// Usage:
//   moment-bench convert  --format charades --in sta_train.txt --in sta_test.txt
//                         --durations durations.tsv --out pairs.canon
//   moment-bench resplit  --in pairs.canon --mode activitynet --seed 42
//                         --out splits.json
//   moment-bench stats    --in pairs.canon --kind shares --thresholds 0.3,0.5,0.7
//   moment-bench baseline bias --gt pairs.canon --split splits.json --n 5
//                         --out preds.jsonl
//   moment-bench score    --gt pairs.canon --pred preds.jsonl
//                         --split splits.json --n 1,5 --m 0.1,0.3,0.5,0.7

#include <iostream>
#include <string>
#include <vector>

#include "moment_bench/cli.h"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return moment_bench::cli::Run(args, std::cout, std::cerr);
}
