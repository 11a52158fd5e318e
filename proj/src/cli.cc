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

#include "moment_bench/cli.h"

#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "moment_bench/annotations.h"
#include "moment_bench/baselines.h"
#include "moment_bench/kde.h"
#include "moment_bench/metrics.h"
#include "moment_bench/resplit.h"
#include "moment_bench/stats.h"

namespace moment_bench::cli {
namespace {

struct Options {
  int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::string out;

  // convert
  std::string format;
  std::vector<std::string> inputs;
  std::string durations;

  // shared dataset inputs
  std::string in;
  std::string gt;
  std::string pred;
  std::string split_file;
  std::string train;
  std::vector<std::string> which;

  // resplit
  std::string mode = "generic";
  std::uint64_t seed = 0;
  std::string bandwidth = "scott";
  double ood_fraction = 0.20;

  // stats
  std::string kind;
  int bins = 10;
  std::vector<double> thresholds = {0.3, 0.5, 0.7};
  int resolution = kDefaultGridResolution;
  std::string lexicon;
  int top_k = 30;
  std::string verb;

  // baseline / score
  int candidates = 5;
  std::vector<int> n_list = {1, 5};
  std::vector<double> m_list = {0.1, 0.3, 0.5, 0.7};
};

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("cannot read '" + path + "'");
  return buffer.str();
}

// Writes through a sibling temp file and renames it over `path`, or streams
// to `fallback` when no path was given.
void Emit(const std::string& path, std::ostream& fallback,
          const std::function<void(std::ostream&)>& write) {
  if (path.empty()) {
    write(fallback);
    fallback.flush();
    return;
  }
  const std::string tmp = path + ".tmp-" + std::to_string(::getpid());
  {
    std::ofstream file(tmp, std::ios::binary | std::ios::trunc);
    if (!file) throw IoError("cannot create '" + tmp + "'");
    write(file);
    file.flush();
    if (!file) {
      std::remove(tmp.c_str());
      throw IoError("failed writing '" + tmp + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::remove(tmp.c_str());
    throw IoError("cannot rename '" + tmp + "' to '" + path +
                  "': " + ec.message());
  }
}

DatasetTable LoadCanonical(const std::string& path) {
  std::istringstream in(ReadFile(path));
  return ReadCanonical(in);
}

SplitAssignment LoadSplit(const std::string& path) {
  std::istringstream in(ReadFile(path));
  return ReadSplitFile(in);
}

std::vector<Split> ParseSplits(const std::vector<std::string>& names) {
  std::vector<Split> splits;
  for (const auto& name : names) splits.push_back(SplitFromName(name));
  return splits;
}

DatasetTable Restrict(const DatasetTable& table, const SplitAssignment& split,
                      const std::vector<Split>& keep) {
  DatasetTable out;
  out.source = table.source;
  for (const auto& pair : table.pairs) {
    const auto it = split.assignment.find(pair.pair_id);
    if (it != split.assignment.end() &&
        std::find(keep.begin(), keep.end(), it->second) != keep.end()) {
      out.pairs.push_back(pair);
    }
  }
  return out;
}

void RunConvert(const Options& opt, std::ostream& out, std::ostream& err) {
  ParseResult result;
  if (opt.format == "charades") {
    if (opt.durations.empty()) {
      throw LookupError("--durations is required for --format charades");
    }
    std::istringstream durations_in(ReadFile(opt.durations));
    const auto durations = ParseDurations(durations_in);
    std::vector<std::string> lines;
    for (const auto& path : opt.inputs) {
      std::istringstream in(ReadFile(path));
      std::string line;
      while (std::getline(in, line)) lines.push_back(line);
    }
    result = ParseCharadesSta(lines, durations);
  } else {
    std::vector<std::string> documents;
    for (const auto& path : opt.inputs) documents.push_back(ReadFile(path));
    result = ParseActivityNetCaptions(documents);
  }
  err << "parsed " << result.table.pairs.size() << " pairs from "
      << VideoIds(result.table).size() << " videos; dropped "
      << result.dropped.size() << " degenerate records\n";
  for (const auto& d : result.dropped) {
    err << "  dropped " << d.video_id << "#" << d.index << " [" << d.start_s
        << ", " << d.end_s << "]\n";
  }
  Emit(opt.out, out, [&](std::ostream& o) { WriteCanonical(result.table, o); });
}

void RunResplit(const Options& opt, std::ostream& out, std::ostream& err) {
  const auto table = LoadCanonical(opt.in);
  auto config = ResplitConfig::ForSource(SourceFromName(opt.mode), opt.seed);
  config.bandwidth_rule = BandwidthRule::Parse(opt.bandwidth);
  const double remainder = 1.0 - opt.ood_fraction;
  const double scale = remainder / (1.0 - config.ood_fraction);
  config.train_fraction *= scale;
  config.val_fraction *= scale;
  config.iid_fraction *= scale;
  config.ood_fraction = opt.ood_fraction;
  const auto split = Resplit(table, config, opt.threads);
  for (Split s : kAllSplits) {
    const auto& c = split.counts.at(s);
    err << SplitName(s) << ": " << c.pairs << " pairs, " << c.videos
        << " videos\n";
  }
  for (const auto& warning : split.warnings) err << "warning: " << warning << '\n';
  Emit(opt.out, out, [&](std::ostream& o) { WriteSplitFile(split, o); });
}

void RunStats(const Options& opt, std::ostream& out, std::ostream&) {
  auto table = LoadCanonical(opt.in);
  if (!opt.split_file.empty()) {
    table = Restrict(table, LoadSplit(opt.split_file), ParseSplits(opt.which));
  }
  const auto rule = BandwidthRule::Parse(opt.bandwidth);
  VerbLexicon lexicon = DefaultVerbLexicon();
  if (!opt.lexicon.empty()) {
    std::istringstream in(ReadFile(opt.lexicon));
    lexicon = ReadVerbLexicon(in);
  }
  nlohmann::json doc;
  if (opt.kind == "histogram") {
    doc = HistogramToJson(DurationHistogram(table, opt.bins));
  } else if (opt.kind == "shares") {
    const auto shares = DurationShareOver(table, opt.thresholds);
    doc = {{"kind", "duration_shares"},
           {"thresholds", opt.thresholds},
           {"shares", shares}};
  } else if (opt.kind == "grid") {
    doc = GridToJson(JointDensityGrid(table, opt.resolution, rule, opt.threads));
  } else if (opt.kind == "verbs") {
    doc = VerbTableToJson(VerbFrequencies(table, lexicon, opt.top_k));
  } else {
    if (opt.verb.empty()) throw LookupError("--verb is required for --kind action");
    doc = GridToJson(ActionConditionedGrid(table, opt.verb, lexicon,
                                           opt.resolution, rule, opt.threads));
    doc["verb"] = opt.verb;
  }
  doc["N_q"] = table.pairs.size();
  Emit(opt.out, out, [&](std::ostream& o) { o << doc.dump(2) << '\n'; });
}

void RunBaseline(const Options& opt, bool bias, std::ostream& out,
                 std::ostream& err) {
  const auto table = LoadCanonical(opt.gt);
  std::optional<SplitAssignment> split;
  if (!opt.split_file.empty()) split = LoadSplit(opt.split_file);

  DatasetTable targets = table;
  if (split) {
    std::vector<Split> keep = ParseSplits(opt.which);
    if (keep.empty()) {
      keep = bias ? std::vector<Split>{Split::kVal, Split::kTestIid,
                                       Split::kTestOod}
                  : std::vector<Split>(kAllSplits.begin(), kAllSplits.end());
    }
    targets = Restrict(table, *split, keep);
  } else if (!opt.which.empty()) {
    throw LookupError("--which needs --split");
  }

  PredictionSet predictions;
  if (!bias) {
    predictions = PredictAll(targets);
  } else {
    DatasetTable train;
    if (!opt.train.empty()) {
      train = LoadCanonical(opt.train);
    } else if (split) {
      train = SelectSplit(table, *split, Split::kTrain);
    } else {
      throw LookupError("bias baseline needs --split or --train");
    }
    predictions = BiasBased(train, targets, opt.candidates, opt.seed,
                            BandwidthRule::Parse(opt.bandwidth), opt.threads);
  }
  err << "wrote predictions for " << predictions.entries.size()
      << " queries\n";
  Emit(opt.out, out, [&](std::ostream& o) { WritePredictions(predictions, o); });
}

void RunScore(const Options& opt, std::ostream& out, std::ostream& err) {
  const auto table = LoadCanonical(opt.gt);
  std::istringstream pred_in(ReadFile(opt.pred));
  const auto predictions = ReadPredictions(pred_in);
  const auto report =
      opt.split_file.empty()
          ? Evaluate(predictions, table, opt.n_list, opt.m_list)
          : EvaluateSplits(predictions, table, LoadSplit(opt.split_file),
                           opt.n_list, opt.m_list);
  PrintReport(report, err);
  Emit(opt.out, out, [&](std::ostream& o) { WriteReport(report, o); });
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  Options opt;
  CLI::App app{"Benchmark construction and evaluation for temporal sentence "
               "grounding",
               "moment-bench"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolkitVersion));
  app.add_option("--threads", opt.threads, "Worker thread cap")
      ->envname("MB_THREADS")
      ->check(CLI::PositiveNumber);

  auto* convert = app.add_subcommand("convert", "Raw annotations -> canonical pairs");
  convert->add_option("--format", opt.format, "Input convention")
      ->required()
      ->check(CLI::IsMember({"charades", "activitynet"}));
  convert->add_option("--in", opt.inputs, "Annotation file(s), merged in order")
      ->required();
  convert->add_option("--durations", opt.durations,
                      "Charades durations sidecar (video_id<TAB>seconds)");
  convert->add_option("--out", opt.out, "Canonical pair file");

  auto* resplit = app.add_subcommand("resplit", "Build train/val/test-iid/test-ood");
  resplit->add_option("--in", opt.in, "Canonical pair file")->required();
  resplit->add_option("--mode", opt.mode, "Dataset convention")
      ->check(CLI::IsMember({"charades", "activitynet", "generic"}));
  resplit->add_option("--seed", opt.seed, "Remainder shuffle seed");
  resplit->add_option("--bandwidth", opt.bandwidth, "'scott' or '<h_s>,<h_e>'");
  resplit->add_option("--ood-fraction", opt.ood_fraction, "Preliminary test-ood share")
      ->check(CLI::Range(0.0, 1.0));
  resplit->add_option("--out", opt.out, "Split file");

  auto* stats = app.add_subcommand("stats", "Dataset bias diagnostics");
  stats->add_option("--in", opt.in, "Canonical pair file")->required();
  stats->add_option("--kind", opt.kind, "Diagnostic")
      ->required()
      ->check(CLI::IsMember({"histogram", "shares", "grid", "verbs", "action"}));
  stats->add_option("--split", opt.split_file, "Split file to restrict by");
  stats->add_option("--which", opt.which, "Splits to keep")->delimiter(',');
  stats->add_option("--bins", opt.bins, "Histogram bins");
  stats->add_option("--thresholds", opt.thresholds, "Duration share thresholds")
      ->delimiter(',');
  stats->add_option("--resolution", opt.resolution, "Grid resolution");
  stats->add_option("--bandwidth", opt.bandwidth, "'scott' or '<h_s>,<h_e>'");
  stats->add_option("--lexicon", opt.lexicon, "Verb lemma file");
  stats->add_option("--top-k", opt.top_k, "Verbs to keep");
  stats->add_option("--verb", opt.verb, "Verb for --kind action");
  stats->add_option("--out", opt.out, "Output document");

  auto* baseline = app.add_subcommand("baseline", "Non-deep baseline predictions");
  baseline->require_subcommand(1);
  auto* bias = baseline->add_subcommand("bias", "Sample from training KDE");
  auto* predict_all = baseline->add_subcommand("predict-all", "Whole video");
  for (auto* sub : {bias, predict_all}) {
    sub->add_option("--gt", opt.gt, "Canonical pair file")->required();
    sub->add_option("--split", opt.split_file, "Split file");
    sub->add_option("--which", opt.which, "Splits to predict")->delimiter(',');
    sub->add_option("--out", opt.out, "Prediction file");
  }
  bias->add_option("--train", opt.train, "Training pairs (default: split train)");
  bias->add_option("--n", opt.candidates, "Candidates per query")
      ->check(CLI::PositiveNumber);
  bias->add_option("--seed", opt.seed, "Sampling seed");
  bias->add_option("--bandwidth", opt.bandwidth, "'scott' or '<h_s>,<h_e>'");

  auto* score = app.add_subcommand("score", "R@n,IoU@m and dR@n,IoU@m");
  score->add_option("--gt", opt.gt, "Canonical pair file")->required();
  score->add_option("--pred", opt.pred, "Prediction file")->required();
  score->add_option("--split", opt.split_file, "Split file (score per split)");
  score->add_option("--n", opt.n_list, "Top-n values")->delimiter(',');
  score->add_option("--m", opt.m_list, "IoU thresholds")->delimiter(',');
  score->add_option("--out", opt.out, "Report file");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (convert->parsed()) {
      RunConvert(opt, out, err);
    } else if (resplit->parsed()) {
      RunResplit(opt, out, err);
    } else if (stats->parsed()) {
      RunStats(opt, out, err);
    } else if (baseline->parsed()) {
      RunBaseline(opt, bias->parsed(), out, err);
    } else if (score->parsed()) {
      RunScore(opt, out, err);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}

}  // namespace moment_bench::cli
