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

#ifndef MOMENT_BENCH_KDE_H_
#define MOMENT_BENCH_KDE_H_

// Two-dimensional Gaussian kernel density estimate over normalized
// (start, end) moment points, with a diagonal bandwidth.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "moment_bench/common.h"

namespace moment_bench {

// Per-coordinate kernel standard deviations.
struct Bandwidth {
  double start = 0.0;
  double end = 0.0;

  friend bool operator==(const Bandwidth&, const Bandwidth&) = default;
};

// Scott's rule (h_d = sigma_d * n^(-1/6) in two dimensions) or a fixed
// bandwidth.
struct BandwidthRule {
  enum class Kind { kScott, kExplicit };

  Kind kind = Kind::kScott;
  Bandwidth value;

  static BandwidthRule Scott() { return {}; }
  static BandwidthRule Explicit(double h_start, double h_end) {
    return {Kind::kExplicit, {h_start, h_end}};
  }

  // "scott" or "explicit".
  std::string tag() const;
  // Accepts "scott" or "<h_start>,<h_end>".
  static BandwidthRule Parse(std::string_view text);

  friend bool operator==(const BandwidthRule&, const BandwidthRule&) = default;
};

// Sample standard deviation (n - 1 denominator).
double SampleStdDev(std::span<const double> values);

// Scott's bandwidth for one coordinate.
double ScottBandwidth(double std_dev, std::size_t n);

class KdeModel {
 public:
  // Requires at least two points, all inside 0 <= s < e <= 1, and nonzero
  // variance per coordinate when the Scott rule is used. Throws FitError.
  static KdeModel Fit(std::span<const Interval> points, BandwidthRule rule);

  // Kernel sum at `query`. Points are summed in their canonical sorted order,
  // so the value does not depend on the order they were supplied in.
  double Density(Interval query) const;

  // Density at many query points, fanned out over `threads` workers.
  std::vector<double> Density(std::span<const Interval> queries,
                              int threads = 1) const;

  // Smoothed-bootstrap draws restricted to 0 <= s < e <= 1 by rejection.
  // Deterministic given `seed`. Throws SamplingError when more than 99.9% of
  // the most recent 10,000 proposals were rejected.
  std::vector<Interval> Sample(std::size_t count, std::uint64_t seed) const;

  const std::vector<Interval>& points() const { return points_; }
  const Bandwidth& bandwidth() const { return bandwidth_; }
  const BandwidthRule& rule() const { return rule_; }
  std::size_t size() const { return points_.size(); }

  nlohmann::json ToJson() const;
  static KdeModel FromJson(const nlohmann::json& doc);

 private:
  KdeModel(std::vector<Interval> points, Bandwidth bandwidth,
           BandwidthRule rule);

  std::vector<Interval> points_;
  Bandwidth bandwidth_;
  BandwidthRule rule_;
  double inv_two_var_start_ = 0.0;
  double inv_two_var_end_ = 0.0;
  double norm_ = 0.0;
};

}  // namespace moment_bench

#endif  // MOMENT_BENCH_KDE_H_
