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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "moment_bench/annotations.h"
#include "moment_bench/resplit.h"
#include "json.hpp"
#include "test_util.h"

namespace moment_bench {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome RunCli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::Run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string Slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("mb_cli_" + std::string(::testing::UnitTest::GetInstance()
                                        ->current_test_info()
                                        ->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Path(const std::string& name) const {
    return (dir_ / name).string();
  }

  void WriteFile(const std::string& name, const std::string& text) const {
    std::ofstream(dir_ / name, std::ios::binary) << text;
  }

  // A canonical pair file built from the synthetic generator.
  std::string WriteSynthetic(std::size_t videos, std::uint64_t seed) const {
    auto table = testing::SyntheticTable(videos, seed);
    table.source = DatasetSource::kActivityNet;
    std::ofstream out(dir_ / "pairs.jsonl", std::ios::binary);
    WriteCanonical(table, out);
    return Path("pairs.jsonl");
  }

  fs::path dir_;
};

TEST_F(CliTest, ConvertCharades) {
  WriteFile("sta.txt",
            "AO8RW 0.0 6.9##a person is putting a book on a shelf.\n"
            "AO8RW 5.0 12.0##person begins to play on a phone.\n"
            "Y6R7T 20.0 35.0##the person opens the door.\n");
  WriteFile("dur.tsv", "AO8RW\t33.67\nY6R7T\t30.0\n");
  const auto r = RunCli({"convert", "--format", "charades", "--in",
                         Path("sta.txt"), "--durations", Path("dur.tsv"),
                         "--out", Path("pairs.jsonl")});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream in(Path("pairs.jsonl"));
  const auto table = ReadCanonical(in, DatasetSource::kCharades);
  // The last moment overruns the video and is clamped to [20, 30].
  ASSERT_EQ(table.pairs.size(), 3u);
  const auto index = IndexByPairId(table);
  EXPECT_NEAR(table.pairs[index.at("Y6R7T#2")].end_norm, 1.0, 1e-12);
}

TEST_F(CliTest, ConvertActivityNetToStdout) {
  WriteFile("val_1.json",
            R"({"v_a": {"duration": 100.0, "timestamps": [[10, 30], [0, 100]],
                "sentences": ["A man walks in.", "He talks."]}})");
  const auto r = RunCli(
      {"convert", "--format", "activitynet", "--in", Path("val_1.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  const auto table = ReadCanonical(in, DatasetSource::kActivityNet);
  ASSERT_EQ(table.pairs.size(), 2u);
  EXPECT_NEAR(table.pairs[0].start_norm, 0.1, 1e-12);
}

TEST_F(CliTest, MissingRequiredFlagIsUsageError) {
  EXPECT_EQ(RunCli({"convert", "--format", "charades"}).code, cli::kExitUsage);
  EXPECT_EQ(RunCli({"score", "--gt", "x"}).code, cli::kExitUsage);
  EXPECT_EQ(RunCli({"resplit", "--in", "x", "--mode", "bogus"}).code,
            cli::kExitUsage);
  EXPECT_EQ(RunCli({}).code, cli::kExitUsage);
  EXPECT_EQ(RunCli({"--help"}).code, cli::kExitOk);
}

TEST_F(CliTest, DataErrorsExitTwo) {
  WriteFile("bad.txt", "AO8RW 0.0 6.9 no separator\n");
  WriteFile("dur.tsv", "AO8RW\t33.67\n");
  const auto r = RunCli({"convert", "--format", "charades", "--in",
                         Path("bad.txt"), "--durations", Path("dur.tsv")});
  EXPECT_EQ(r.code, cli::kExitData);
  EXPECT_NE(r.err.find("line 1"), std::string::npos) << r.err;
  EXPECT_EQ(RunCli({"resplit", "--in", Path("absent.jsonl")}).code,
            cli::kExitData);
}

TEST_F(CliTest, EndToEndPipeline) {
  const auto pairs = WriteSynthetic(120, 3);
  const std::string before = Slurp(pairs);

  auto r = RunCli({"resplit", "--in", pairs, "--mode", "activitynet", "--seed",
                   "42", "--out", Path("split.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream split_in(Path("split.json"));
  const auto split = ReadSplitFile(split_in);
  EXPECT_EQ(split.config.long_moment_threshold, 0.5);
  EXPECT_EQ(split.config.seed, 42u);

  r = RunCli({"baseline", "predict-all", "--gt", pairs, "--split",
              Path("split.json"), "--which", "test-iid,test-ood", "--out",
              Path("all.jsonl")});
  ASSERT_EQ(r.code, 0) << r.err;
  r = RunCli({"baseline", "bias", "--gt", pairs, "--split", Path("split.json"),
              "--seed", "1", "--out", Path("bias.jsonl")});
  ASSERT_EQ(r.code, 0) << r.err;

  r = RunCli({"score", "--gt", pairs, "--pred", Path("all.jsonl"), "--split",
              Path("split.json"), "--n", "1", "--m", "0.5,0.7", "--out",
              Path("report.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.err.find("R@1,IoU=0.5"), std::string::npos);
  const auto report = nlohmann::json::parse(Slurp(Path("report.json")));
  // No pair in test-ood is longer than 0.5, so the whole video never hits.
  EXPECT_EQ(report.at("splits").at("test-ood").at("dR@1,IoU=0.5"), 0.0);
  EXPECT_EQ(report.at("splits").at("test-ood").at("missing_predictions"), 0);
  EXPECT_GT(report.at("splits").at("test-iid").at("N_q"), 0);

  r = RunCli({"score", "--gt", pairs, "--pred", Path("bias.jsonl"), "--split",
              Path("split.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto bias_report = nlohmann::json::parse(r.out);
  EXPECT_TRUE(bias_report.at("splits").contains("val"));
  EXPECT_TRUE(bias_report.at("splits").at("val").contains("R@5,IoU=0.7"));

  EXPECT_EQ(Slurp(pairs), before);
}

TEST_F(CliTest, RerunsAreByteIdentical) {
  const auto pairs = WriteSynthetic(60, 4);
  for (const char* name : {"a.json", "b.json"}) {
    ASSERT_EQ(RunCli({"resplit", "--in", pairs, "--mode", "charades", "--seed",
                      "7", "--out", Path(name)})
                  .code,
              0);
  }
  EXPECT_EQ(Slurp(Path("a.json")), Slurp(Path("b.json")));
  const auto a = RunCli({"--threads", "1", "baseline", "bias", "--gt", pairs,
                         "--split", Path("a.json"), "--seed", "3"});
  const auto b = RunCli({"--threads", "3", "baseline", "bias", "--gt", pairs,
                         "--split", Path("a.json"), "--seed", "3"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
}

TEST_F(CliTest, StatsKinds) {
  const auto pairs = WriteSynthetic(40, 5);
  auto r = RunCli({"stats", "--in", pairs, "--kind", "histogram", "--bins", "5"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out).at("counts").size(), 5u);

  r = RunCli({"stats", "--in", pairs, "--kind", "shares", "--thresholds",
              "0,1"});
  ASSERT_EQ(r.code, 0) << r.err;
  r = RunCli({"stats", "--in", pairs, "--kind", "grid", "--resolution", "10",
              "--out", Path("grid.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(nlohmann::json::parse(Slurp(Path("grid.json"))).at("resolution"),
            10);

  r = RunCli({"stats", "--in", pairs, "--kind", "verbs", "--top-k", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("\"open\""), std::string::npos);

  r = RunCli({"stats", "--in", pairs, "--kind", "action", "--verb", "open",
              "--resolution", "8"});
  ASSERT_EQ(r.code, 0) << r.err;
  r = RunCli({"stats", "--in", pairs, "--kind", "action", "--verb", "cook"});
  EXPECT_EQ(r.code, cli::kExitData);
  r = RunCli({"stats", "--in", pairs, "--kind", "action"});
  EXPECT_NE(r.code, cli::kExitOk);
}

TEST_F(CliTest, ScoreRejectsDuplicatePredictions) {
  const auto pairs = WriteSynthetic(5, 6);
  WriteFile("dup.jsonl",
            R"({"pair_id":"vid0#0","candidates":[[0,1]],"unit":"norm"})" "\n"
            R"({"pair_id":"vid0#0","candidates":[[0,1]],"unit":"norm"})" "\n");
  const auto r =
      RunCli({"score", "--gt", pairs, "--pred", Path("dup.jsonl")});
  EXPECT_EQ(r.code, cli::kExitData);
}

}  // namespace
}  // namespace moment_bench
