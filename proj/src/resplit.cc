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

#include "moment_bench/resplit.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <utility>

#include "moment_bench/random.h"

namespace moment_bench {
namespace {

using nlohmann::json;

constexpr std::size_t kMinPairs = 10;
constexpr std::size_t kMinRemainderVideos = 3;

// Round half away from zero.
std::size_t RoundCount(double value) {
  return static_cast<std::size_t>(std::llround(value));
}


json RuleToJson(const BandwidthRule& rule) {
  if (rule.kind == BandwidthRule::Kind::kScott) return "scott";
  return {{"explicit", {rule.value.start, rule.value.end}}};
}

BandwidthRule RuleFromJson(const json& doc) {
  if (doc.is_string()) return BandwidthRule::Parse(doc.get<std::string>());
  const auto& h = doc.at("explicit");
  return BandwidthRule::Explicit(h.at(0).get<double>(), h.at(1).get<double>());
}

}  // namespace

std::string_view SplitName(Split split) {
  switch (split) {
    case Split::kTrain:
      return "train";
    case Split::kVal:
      return "val";
    case Split::kTestIid:
      return "test-iid";
    case Split::kTestOod:
      return "test-ood";
  }
  return "train";
}

Split SplitFromName(std::string_view name) {
  for (Split split : kAllSplits) {
    if (SplitName(split) == name) return split;
  }
  throw LookupError("unknown split '" + std::string(name) + "'");
}

void ResplitConfig::Validate() const {
  const double total =
      ood_fraction + train_fraction + val_fraction + iid_fraction;
  if (std::abs(total - 1.0) > 1e-9) {
    throw ValueError("split fractions must sum to 1, got " +
                     std::to_string(total));
  }
  for (double f : {ood_fraction, train_fraction, val_fraction, iid_fraction}) {
    if (f < 0.0 || f > 1.0) throw ValueError("split fraction outside [0, 1]");
  }
  if (long_moment_threshold &&
      !(*long_moment_threshold > 0.0 && *long_moment_threshold <= 1.0)) {
    throw ValueError("long-moment threshold must lie in (0, 1]");
  }
  if (!(ood_tolerance >= 0.0)) throw ValueError("ood tolerance must be >= 0");
}

ResplitConfig ResplitConfig::ForSource(DatasetSource source,
                                       std::uint64_t seed) {
  ResplitConfig config;
  config.seed = seed;
  if (source == DatasetSource::kActivityNet) config.long_moment_threshold = 0.5;
  return config;
}

std::vector<std::string> SplitAssignment::Members(Split split) const {
  std::vector<std::string> ids;
  for (const auto& [id, s] : assignment) {
    if (s == split) ids.push_back(id);
  }
  return ids;
}

std::vector<std::string> RankByDensity(const DatasetTable& table,
                                       const KdeModel& model, int threads) {
  std::vector<Interval> points;
  points.reserve(table.pairs.size());
  for (const auto& pair : table.pairs) points.push_back(pair.normalized());
  const auto density = model.Density(points, threads);

  std::vector<std::size_t> order(table.pairs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (density[a] != density[b]) return density[a] < density[b];
    return table.pairs[a].pair_id < table.pairs[b].pair_id;
  });
  std::vector<std::string> ranked;
  ranked.reserve(order.size());
  for (std::size_t i : order) ranked.push_back(table.pairs[i].pair_id);
  return ranked;
}

PreliminarySplit PreliminaryOod(const std::vector<std::string>& ranked_ids,
                                double ood_fraction) {
  if (ranked_ids.size() < kMinPairs) {
    throw SplitError("dataset too small to split: " +
                     std::to_string(ranked_ids.size()) + " pairs");
  }
  const std::size_t ood_count = std::min(
      ranked_ids.size(),
      RoundCount(ood_fraction * static_cast<double>(ranked_ids.size())));
  PreliminarySplit sets;
  sets.ood.insert(ranked_ids.begin(), ranked_ids.begin() + ood_count);
  sets.train.insert(ranked_ids.begin() + ood_count, ranked_ids.end());
  return sets;
}

PreliminarySplit ApplyLongMomentRule(PreliminarySplit sets,
                                     const DatasetTable& table,
                                     std::optional<double> threshold) {
  if (!threshold) return sets;
  for (const auto& pair : table.pairs) {
    if (pair.normalized_duration() > *threshold &&
        sets.ood.erase(pair.pair_id) > 0) {
      sets.train.insert(pair.pair_id);
    }
  }
  return sets;
}

PreliminarySplit EliminateConflicts(PreliminarySplit sets,
                                    const DatasetTable& table,
                                    std::optional<double> long_threshold) {
  struct VideoTally {
    std::vector<std::string> ids;
    std::size_t ood = 0;
    std::size_t train = 0;
    bool pinned = false;
  };
  std::map<std::string, VideoTally> videos;
  for (const auto& pair : table.pairs) {
    auto& tally = videos[pair.video_id];
    tally.ids.push_back(pair.pair_id);
    if (sets.ood.count(pair.pair_id)) ++tally.ood;
    if (sets.train.count(pair.pair_id)) ++tally.train;
    if (long_threshold && pair.normalized_duration() > *long_threshold) {
      tally.pinned = true;
    }
  }
  for (const auto& [video, tally] : videos) {
    const bool spans = tally.ood > 0 && tally.train > 0;
    const bool pinned_in_ood = tally.pinned && tally.ood > 0;
    if (!spans && !pinned_in_ood) continue;
    const bool to_ood = !tally.pinned && tally.ood > tally.train;
    for (const auto& id : tally.ids) {
      if (!sets.ood.count(id) && !sets.train.count(id)) continue;
      if (to_ood) {
        sets.train.erase(id);
        sets.ood.insert(id);
      } else {
        sets.ood.erase(id);
        sets.train.insert(id);
      }
    }
  }
  return sets;
}

RemainderPartition PartitionRemainder(const std::set<std::string>& remainder,
                                      const DatasetTable& table,
                                      double val_fraction, double iid_fraction,
                                      std::size_t total_pairs,
                                      std::uint64_t seed) {
  std::map<std::string, std::vector<std::string>> by_video;
  for (const auto& pair : table.pairs) {
    if (remainder.count(pair.pair_id)) {
      by_video[pair.video_id].push_back(pair.pair_id);
    }
  }
  if (by_video.size() < kMinRemainderVideos) {
    throw SplitError("remainder has " + std::to_string(by_video.size()) +
                     " videos; need at least " +
                     std::to_string(kMinRemainderVideos));
  }
  std::vector<std::string> videos;
  videos.reserve(by_video.size());
  for (const auto& [video, ids] : by_video) videos.push_back(video);
  Rng rng(seed);
  rng.Shuffle(videos);

  const std::size_t val_target =
      RoundCount(val_fraction * static_cast<double>(total_pairs));
  const std::size_t iid_target =
      RoundCount(iid_fraction * static_cast<double>(total_pairs));
  RemainderPartition out;
  for (const auto& video : videos) {
    const auto& ids = by_video[video];
    std::set<std::string>* target = &out.train;
    if (out.val.size() < val_target) {
      target = &out.val;
    } else if (out.test_iid.size() < iid_target) {
      target = &out.test_iid;
    }
    target->insert(ids.begin(), ids.end());
  }
  return out;
}

SplitAssignment Resplit(const DatasetTable& table, const ResplitConfig& config,
                        int threads) {
  config.Validate();
  ValidateTable(table);
  if (table.pairs.size() < kMinPairs) {
    throw SplitError("dataset too small to split: " +
                     std::to_string(table.pairs.size()) + " pairs");
  }
  std::vector<Interval> points;
  points.reserve(table.pairs.size());
  for (const auto& pair : table.pairs) points.push_back(pair.normalized());
  const auto model = KdeModel::Fit(points, config.bandwidth_rule);

  auto sets = PreliminaryOod(RankByDensity(table, model, threads),
                             config.ood_fraction);
  sets = ApplyLongMomentRule(std::move(sets), table,
                             config.long_moment_threshold);
  sets = EliminateConflicts(std::move(sets), table,
                            config.long_moment_threshold);
  const auto remainder =
      PartitionRemainder(sets.train, table, config.val_fraction,
                         config.iid_fraction, table.pairs.size(), config.seed);

  SplitAssignment out;
  out.config = config;
  out.bandwidth = model.bandwidth();
  for (const auto& id : sets.ood) out.assignment[id] = Split::kTestOod;
  for (const auto& id : remainder.train) out.assignment[id] = Split::kTrain;
  for (const auto& id : remainder.val) out.assignment[id] = Split::kVal;
  for (const auto& id : remainder.test_iid) out.assignment[id] = Split::kTestIid;

  std::map<Split, std::set<std::string>> videos;
  for (Split split : kAllSplits) out.counts[split] = {};
  for (const auto& pair : table.pairs) {
    const Split split = out.assignment.at(pair.pair_id);
    ++out.counts[split].pairs;
    videos[split].insert(pair.video_id);
  }
  for (const auto& [split, ids] : videos) out.counts[split].videos = ids.size();

  out.ood_fraction_final =
      static_cast<double>(out.counts[Split::kTestOod].pairs) /
      static_cast<double>(table.pairs.size());
  if (std::abs(out.ood_fraction_final - config.ood_fraction) >
      config.ood_tolerance) {
    out.warnings.push_back(
        "final test-ood fraction " + std::to_string(out.ood_fraction_final) +
        " drifted more than " + std::to_string(config.ood_tolerance) +
        " from " + std::to_string(config.ood_fraction));
  }
  return out;
}

json SplitToJson(const SplitAssignment& split) {
  json config = {
      {"ood_fraction", split.config.ood_fraction},
      {"remainder_fractions",
       {{"train", split.config.train_fraction},
        {"val", split.config.val_fraction},
        {"test-iid", split.config.iid_fraction}}},
      {"long_moment_threshold", nullptr},
      {"seed", split.config.seed},
      {"bandwidth_rule", RuleToJson(split.config.bandwidth_rule)},
      {"ood_tolerance", split.config.ood_tolerance},
  };
  if (split.config.long_moment_threshold) {
    config["long_moment_threshold"] = *split.config.long_moment_threshold;
  }
  json counts = json::object();
  json splits = json::object();
  for (Split s : kAllSplits) {
    const std::string name(SplitName(s));
    const auto it = split.counts.find(s);
    const SplitCounts c = it == split.counts.end() ? SplitCounts{} : it->second;
    counts[name] = {{"pairs", c.pairs}, {"videos", c.videos}};
    splits[name] = split.Members(s);
  }
  return {
      {"version", split.version},
      {"config", std::move(config)},
      {"bandwidth",
       {{"start", split.bandwidth.start}, {"end", split.bandwidth.end}}},
      {"counts", std::move(counts)},
      {"ood_fraction_final", split.ood_fraction_final},
      {"warnings", split.warnings},
      {"splits", std::move(splits)},
  };
}

SplitAssignment SplitFromJson(const json& doc) {
  try {
    SplitAssignment out;
    out.version = doc.at("version").get<std::string>();
    const auto& config = doc.at("config");
    out.config.ood_fraction = config.at("ood_fraction").get<double>();
    const auto& rem = config.at("remainder_fractions");
    out.config.train_fraction = rem.at("train").get<double>();
    out.config.val_fraction = rem.at("val").get<double>();
    out.config.iid_fraction = rem.at("test-iid").get<double>();
    if (!config.at("long_moment_threshold").is_null()) {
      out.config.long_moment_threshold =
          config.at("long_moment_threshold").get<double>();
    }
    out.config.seed = config.at("seed").get<std::uint64_t>();
    out.config.bandwidth_rule = RuleFromJson(config.at("bandwidth_rule"));
    out.config.ood_tolerance = config.value("ood_tolerance", 0.03);
    out.bandwidth = {doc.at("bandwidth").at("start").get<double>(),
                     doc.at("bandwidth").at("end").get<double>()};
    out.ood_fraction_final = doc.at("ood_fraction_final").get<double>();
    out.warnings = doc.at("warnings").get<std::vector<std::string>>();
    for (Split s : kAllSplits) {
      const std::string name(SplitName(s));
      const auto& c = doc.at("counts").at(name);
      out.counts[s] = {c.at("pairs").get<std::size_t>(),
                       c.at("videos").get<std::size_t>()};
      for (const auto& id : doc.at("splits").at(name)) {
        if (!out.assignment.emplace(id.get<std::string>(), s).second) {
          throw IoError("split file: pair '" + id.get<std::string>() +
                        "' assigned twice");
        }
      }
    }
    return out;
  } catch (const json::exception& e) {
    throw IoError(std::string("split file: ") + e.what());
  }
}

void WriteSplitFile(const SplitAssignment& split, std::ostream& out) {
  out << SplitToJson(split).dump(2) << '\n';
}

SplitAssignment ReadSplitFile(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw IoError(std::string("split file: ") + e.what());
  }
  return SplitFromJson(doc);
}

DatasetTable SelectSplit(const DatasetTable& table,
                         const SplitAssignment& assignment, Split split) {
  DatasetTable out;
  out.source = table.source;
  for (const auto& pair : table.pairs) {
    const auto it = assignment.assignment.find(pair.pair_id);
    if (it != assignment.assignment.end() && it->second == split) {
      out.pairs.push_back(pair);
    }
  }
  return out;
}

}  // namespace moment_bench
