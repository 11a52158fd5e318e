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

#include "moment_bench/kde.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <vector>

#include "moment_bench/random.h"

namespace moment_bench {
namespace {

constexpr std::size_t kRejectionWindow = 10000;
constexpr std::size_t kMaxRejectsInWindow = 9990;  // 99.9% of the window

bool InTriangle(Interval p) {
  return p.start >= 0.0 && p.start < p.end && p.end <= 1.0;
}

bool PointLess(const Interval& a, const Interval& b) {
  if (a.start != b.start) return a.start < b.start;
  return a.end < b.end;
}

void CheckBandwidth(const Bandwidth& h) {
  if (!(h.start > 0.0) || !(h.end > 0.0) || !std::isfinite(h.start) ||
      !std::isfinite(h.end)) {
    throw FitError("bandwidth must be positive and finite");
  }
}

}  // namespace

std::string BandwidthRule::tag() const {
  return kind == Kind::kScott ? "scott" : "explicit";
}

BandwidthRule BandwidthRule::Parse(std::string_view text) {
  if (text == "scott") return Scott();
  const auto comma = text.find(',');
  if (comma != std::string_view::npos) {
    double h_start = 0.0, h_end = 0.0;
    const auto a = text.substr(0, comma);
    const auto b = text.substr(comma + 1);
    const auto ra = std::from_chars(a.data(), a.data() + a.size(), h_start);
    const auto rb = std::from_chars(b.data(), b.data() + b.size(), h_end);
    if (ra.ec == std::errc() && ra.ptr == a.data() + a.size() &&
        rb.ec == std::errc() && rb.ptr == b.data() + b.size() &&
        h_start > 0.0 && h_end > 0.0) {
      return Explicit(h_start, h_end);
    }
  }
  throw ValueError("bandwidth must be 'scott' or '<h_start>,<h_end>', got '" +
                   std::string(text) + "'");
}

double SampleStdDev(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double sum_sq = 0.0;
  for (double v : values) sum_sq += (v - mean) * (v - mean);
  return std::sqrt(sum_sq / static_cast<double>(values.size() - 1));
}

double ScottBandwidth(double std_dev, std::size_t n) {
  return std_dev * std::pow(static_cast<double>(n), -1.0 / 6.0);
}

KdeModel::KdeModel(std::vector<Interval> points, Bandwidth bandwidth,
                   BandwidthRule rule)
    : points_(std::move(points)), bandwidth_(bandwidth), rule_(rule) {
  inv_two_var_start_ = 1.0 / (2.0 * bandwidth_.start * bandwidth_.start);
  inv_two_var_end_ = 1.0 / (2.0 * bandwidth_.end * bandwidth_.end);
  norm_ = 1.0 / (static_cast<double>(points_.size()) * 2.0 * std::numbers::pi *
                 bandwidth_.start * bandwidth_.end);
}

KdeModel KdeModel::Fit(std::span<const Interval> points, BandwidthRule rule) {
  if (points.size() < 2) {
    throw FitError("KDE fit needs at least 2 points, got " +
                   std::to_string(points.size()));
  }
  for (const auto& p : points) {
    if (!InTriangle(p)) {
      throw FitError("KDE point outside 0 <= s < e <= 1");
    }
  }
  std::vector<Interval> sorted(points.begin(), points.end());
  std::sort(sorted.begin(), sorted.end(), PointLess);

  std::vector<double> starts, ends;
  starts.reserve(sorted.size());
  ends.reserve(sorted.size());
  for (const auto& p : sorted) {
    starts.push_back(p.start);
    ends.push_back(p.end);
  }
  const double sd_start = SampleStdDev(starts);
  const double sd_end = SampleStdDev(ends);
  if (!(sd_start > 0.0) || !(sd_end > 0.0)) {
    throw FitError("KDE fit needs nonzero variance in both coordinates");
  }

  Bandwidth bandwidth = rule.value;
  if (rule.kind == BandwidthRule::Kind::kScott) {
    bandwidth = {ScottBandwidth(sd_start, sorted.size()),
                 ScottBandwidth(sd_end, sorted.size())};
    rule.value = {};
  }
  CheckBandwidth(bandwidth);
  return KdeModel(std::move(sorted), bandwidth, rule);
}

double KdeModel::Density(Interval query) const {
  double sum = 0.0;
  for (const auto& p : points_) {
    const double ds = query.start - p.start;
    const double de = query.end - p.end;
    sum += std::exp(-(ds * ds * inv_two_var_start_ + de * de * inv_two_var_end_));
  }
  return sum * norm_;
}

std::vector<double> KdeModel::Density(std::span<const Interval> queries,
                                      int threads) const {
  std::vector<double> values(queries.size());
  ParallelFor(queries.size(), threads,
              [&](std::size_t i) { values[i] = Density(queries[i]); });
  return values;
}

std::vector<Interval> KdeModel::Sample(std::size_t count,
                                       std::uint64_t seed) const {
  Rng rng(seed);
  std::vector<Interval> samples;
  samples.reserve(count);
  std::vector<bool> window(kRejectionWindow, false);
  std::size_t proposals = 0;
  std::size_t rejects_in_window = 0;
  while (samples.size() < count) {
    const auto& center = points_[rng.Index(points_.size())];
    const Interval proposal{center.start + bandwidth_.start * rng.Normal(),
                            center.end + bandwidth_.end * rng.Normal()};
    const bool rejected = !InTriangle(proposal);
    const std::size_t slot = proposals % kRejectionWindow;
    if (proposals >= kRejectionWindow && window[slot]) --rejects_in_window;
    window[slot] = rejected;
    if (rejected) ++rejects_in_window;
    ++proposals;
    if (rejected) {
      if (proposals >= kRejectionWindow &&
          rejects_in_window > kMaxRejectsInWindow) {
        throw SamplingError(
            "KDE sampling rejected more than 99.9% of the last " +
            std::to_string(kRejectionWindow) + " proposals");
      }
      continue;
    }
    samples.push_back(proposal);
  }
  return samples;
}

nlohmann::json KdeModel::ToJson() const {
  nlohmann::json points = nlohmann::json::array();
  for (const auto& p : points_) points.push_back({p.start, p.end});
  return {
      {"rule", rule_.tag()},
      {"bandwidth", {{"start", bandwidth_.start}, {"end", bandwidth_.end}}},
      {"n", points_.size()},
      {"points", std::move(points)},
  };
}

KdeModel KdeModel::FromJson(const nlohmann::json& doc) {
  try {
    std::vector<Interval> points;
    for (const auto& p : doc.at("points")) {
      points.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    }
    if (doc.at("n").get<std::size_t>() != points.size()) {
      throw IoError("KDE export: n does not match the point count");
    }
    const auto& h = doc.at("bandwidth");
    Bandwidth bandwidth{h.at("start").get<double>(), h.at("end").get<double>()};
    CheckBandwidth(bandwidth);
    BandwidthRule rule;
    const auto tag = doc.at("rule").get<std::string>();
    if (tag == "explicit") {
      rule = BandwidthRule::Explicit(bandwidth.start, bandwidth.end);
    } else if (tag != "scott") {
      throw IoError("KDE export: unknown rule '" + tag + "'");
    }
    for (const auto& p : points) {
      if (!InTriangle(p)) throw IoError("KDE export: point outside triangle");
    }
    if (points.size() < 2) throw IoError("KDE export: fewer than 2 points");
    std::sort(points.begin(), points.end(), PointLess);
    return KdeModel(std::move(points), bandwidth, rule);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("KDE export: ") + e.what());
  }
}

}  // namespace moment_bench
