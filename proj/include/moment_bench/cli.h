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

#ifndef MOMENT_BENCH_CLI_H_
#define MOMENT_BENCH_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace moment_bench::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

// Runs one invocation of the moment-bench tool. `args` excludes the program
// name. Artifacts go to --out (written via temp file + rename) or to `out`
// when --out is omitted; diagnostics go to `err`.
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace moment_bench::cli

#endif  // MOMENT_BENCH_CLI_H_
