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

#ifndef MOMENT_BENCH_COMMON_H_
#define MOMENT_BENCH_COMMON_H_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace moment_bench {

inline constexpr std::string_view kToolkitVersion = "moment-bench 0.1.0";

// Base class of every data error raised by the library. The CLI maps these to
// exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text (bad line shape, non-numeric field).
class ParseError : public Error {
 public:
  using Error::Error;
};

// Reference to an unknown key (video id without duration, unknown split).
class LookupError : public Error {
 public:
  using Error::Error;
};

// Well-formed input with inconsistent structure (length mismatch).
class StructuralError : public Error {
 public:
  using Error::Error;
};

// Out-of-domain numeric value.
class ValueError : public Error {
 public:
  using Error::Error;
};

class FitError : public Error {
 public:
  using Error::Error;
};

class SamplingError : public Error {
 public:
  using Error::Error;
};

class SplitError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// A temporal segment. Normalized moments live in [0, 1]; the same type carries
// raw second offsets before normalization.
struct Interval {
  double start = 0.0;
  double end = 0.0;

  double length() const { return end - start; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

// 64-bit FNV-1a. Stable across platforms and runs, unlike std::hash.
inline std::uint64_t StableHash(std::string_view text) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

// Runs fn(i) for i in [0, count) over at most `threads` workers. Each index is
// processed exactly once; callers write results into per-index slots so the
// outcome does not depend on the thread count.
inline void ParallelFor(std::size_t count, int threads,
                        const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(
      count, static_cast<std::size_t>(std::max(threads, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  const std::size_t chunk = (count + workers - 1) / workers;
  std::vector<std::exception_ptr> failures(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(count, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back([begin, end, &fn, &failure = failures[w]] {
        try {
          for (std::size_t i = begin; i < end; ++i) fn(i);
        } catch (...) {
          failure = std::current_exception();
        }
      });
    }
  }
  // Rethrow the failure of the lowest chunk so errors are reproducible.
  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }
}

}  // namespace moment_bench

#endif  // MOMENT_BENCH_COMMON_H_
