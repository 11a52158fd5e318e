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

#include "moment_bench/metrics.h"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "test_util.h"

namespace moment_bench {
namespace {

using testing::NormPair;

const std::vector<int> kN = {1, 5};
const std::vector<double> kM = {0.1, 0.3, 0.5, 0.7};

TEST(IouTest, Identity) { EXPECT_EQ(Iou({0.2, 0.6}, {0.2, 0.6}), 1.0); }

TEST(IouTest, Disjoint) { EXPECT_EQ(Iou({0.0, 0.3}, {0.5, 0.9}), 0.0); }

TEST(IouTest, PartialOverlap) {
  EXPECT_NEAR(Iou({0.2, 0.6}, {0.4, 0.8}), 0.2 / 0.6, 1e-15);
}

TEST(IouTest, ZeroLengthUnion) {
  EXPECT_EQ(Iou({0.3, 0.3}, {0.3, 0.3}), 0.0);
}

TEST(HitTest, ExactPrediction) {
  const std::vector<Interval> preds = {{0.2, 0.6}};
  const auto hit = HitAndDiscount(preds, {0.2, 0.6}, 1, 0.7);
  EXPECT_TRUE(hit.hit);
  EXPECT_EQ(hit.alpha_start, 1.0);
  EXPECT_EQ(hit.alpha_end, 1.0);
}

TEST(HitTest, DiscountOfWholeVideoPrediction) {
  const std::vector<Interval> preds = {{0.0, 1.0}};
  const auto hit = HitAndDiscount(preds, {0.0, 0.4}, 1, 0.3);
  EXPECT_TRUE(hit.hit);
  EXPECT_EQ(hit.alpha_start, 1.0);
  EXPECT_NEAR(hit.alpha_end, 0.4, 1e-15);
  EXPECT_NEAR(hit.alpha_start * hit.alpha_end, 0.4, 1e-15);
}

TEST(HitTest, LowerRankedCandidateCanQualify) {
  const std::vector<Interval> preds = {{0.9, 1.0}, {0.1, 0.5}};
  const auto hit = HitAndDiscount(preds, {0.1, 0.5}, 2, 0.5);
  EXPECT_TRUE(hit.hit);
  EXPECT_EQ(hit.rank, 2);
  EXPECT_EQ(hit.alpha_start, 1.0);
  EXPECT_EQ(hit.alpha_end, 1.0);
  EXPECT_FALSE(HitAndDiscount(preds, {0.1, 0.5}, 1, 0.5).hit);
}

TEST(HitTest, BestDiscountAmongQualifying) {
  // Rank 1 qualifies with IoU 0.5 and alpha 0.8; rank 2 is exact.
  const std::vector<Interval> preds = {{0.2, 0.6}, {0.2, 0.4}};
  const auto hit = HitAndDiscount(preds, {0.2, 0.4}, 2, 0.5);
  EXPECT_EQ(hit.rank, 2);
  EXPECT_EQ(hit.alpha_end, 1.0);
  const auto top1 = HitAndDiscount(preds, {0.2, 0.4}, 1, 0.5);
  EXPECT_EQ(top1.rank, 1);
  EXPECT_NEAR(top1.alpha_end, 0.8, 1e-15);
}

TEST(HitTest, TiesKeepHigherRank) {
  // Both candidates are off by 1/8 at one boundary.
  const std::vector<Interval> preds = {{0.125, 0.75}, {0.25, 0.875}};
  EXPECT_EQ(HitAndDiscount(preds, {0.25, 0.75}, 2, 0.5).rank, 1);
}

TEST(HitTest, DiscountedRecallMonotoneInThreshold) {
  // A loose rank-1 hit must not make dR@2 at m=0.1 smaller than at m=0.5.
  DatasetTable table;
  table.pairs = {NormPair("q", "v", 0.2, 0.6)};
  PredictionSet preds;
  preds.entries["q"] = {{{0.0, 0.9}, {0.22, 0.6}}, TimeUnit::kNormalized};
  const std::vector<int> ns = {2};
  const std::vector<double> ms = {0.1, 0.5};
  const auto report = Evaluate(preds, table, ns, ms);
  EXPECT_GE(report.Value(Metric::kDiscountedRecall, 2, 0.1),
            report.Value(Metric::kDiscountedRecall, 2, 0.5));
  EXPECT_NEAR(report.Value(Metric::kDiscountedRecall, 2, 0.1), 98.0, 1e-9);
}

TEST(HitTest, ThresholdIsInclusive) {
  const std::vector<Interval> preds = {{0.0, 1.0}};
  EXPECT_TRUE(HitAndDiscount(preds, {0.0, 0.5}, 1, 0.5).hit);
}

TEST(HitTest, EmptyListIsMiss) {
  const auto hit = HitAndDiscount({}, {0.1, 0.2}, 5, 0.1);
  EXPECT_FALSE(hit.hit);
  EXPECT_EQ(hit.alpha_start, 0.0);
  EXPECT_EQ(hit.alpha_end, 0.0);
}

DatasetTable Table(const std::vector<std::pair<double, double>>& gts) {
  DatasetTable table;
  for (std::size_t i = 0; i < gts.size(); ++i) {
    table.pairs.push_back(NormPair("q" + std::to_string(i), "v" + std::to_string(i),
                                   gts[i].first, gts[i].second));
  }
  return table;
}

TEST(EvaluateTest, ExactPredictionsScoreHundred) {
  const auto table = Table({{0.1, 0.3}, {0.5, 0.9}, {0.0, 1.0}});
  PredictionSet preds;
  for (const auto& p : table.pairs) preds.entries[p.pair_id] = {{p.normalized()}};
  const auto report = Evaluate(preds, table, kN, kM);
  for (int n : kN) {
    for (double m : kM) {
      EXPECT_EQ(report.Value(Metric::kRecall, n, m), 100.0);
      EXPECT_EQ(report.Value(Metric::kDiscountedRecall, n, m), 100.0);
    }
  }
}

TEST(EvaluateTest, DisjointPredictionsScoreZero) {
  const auto table = Table({{0.1, 0.3}, {0.5, 0.6}});
  PredictionSet preds;
  for (const auto& p : table.pairs) preds.entries[p.pair_id] = {{{0.8, 0.95}}};
  preds.entries["q0"] = {{{0.7, 0.9}}};
  const auto report = Evaluate(preds, table, kN, kM);
  for (double m : kM) {
    EXPECT_EQ(report.Value(Metric::kRecall, 5, m), 0.0);
    EXPECT_EQ(report.Value(Metric::kDiscountedRecall, 5, m), 0.0);
  }
}

TEST(EvaluateTest, MixedQueriesMatchBruteForce) {
  const auto table =
      Table({{0.1, 0.3}, {0.2, 0.8}, {0.0, 0.25}, {0.6, 1.0}, {0.45, 0.55}});
  PredictionSet preds;
  preds.entries["q0"] = {{{0.12, 0.33}, {0.0, 1.0}}};
  preds.entries["q1"] = {{{0.0, 1.0}}};
  preds.entries["q2"] = {{{0.5, 0.9}, {0.4, 0.6}, {0.02, 0.2}}};
  preds.entries["q3"] = {{{0.1, 0.2}}};
  // q4 has no prediction.
  std::map<std::string, std::vector<Interval>> raw;
  for (const auto& [id, r] : preds.entries) raw[id] = r.candidates;
  std::vector<std::pair<std::string, Interval>> gts;
  for (const auto& p : table.pairs) gts.push_back({p.pair_id, p.normalized()});

  const auto report = Evaluate(preds, table, kN, kM);
  EXPECT_EQ(report.splits.at("all").missing_predictions, 1u);
  for (int n : kN) {
    for (double m : kM) {
      const auto [r, dr] = testing::BruteScore(raw, gts, n, m);
      EXPECT_NEAR(report.Value(Metric::kRecall, n, m), r, 1e-12);
      EXPECT_NEAR(report.Value(Metric::kDiscountedRecall, n, m), dr, 1e-12);
    }
  }
}

TEST(EvaluateTest, SecondsPredictionsAreNormalized) {
  auto table = Table({{0.2, 0.5}});  // duration 30 s
  PredictionSet preds;
  preds.entries["q0"] = {{{6.0, 15.0}}, TimeUnit::kSeconds};
  const auto report = Evaluate(preds, table, std::vector<int>{1},
                               std::vector<double>{0.7});
  EXPECT_NEAR(report.Value(Metric::kDiscountedRecall, 1, 0.7), 100.0, 1e-9);
}

TEST(EvaluateTest, UnknownPredictionsIgnoredWithWarning) {
  const auto table = Table({{0.2, 0.5}});
  PredictionSet preds;
  preds.entries["q0"] = {{{0.2, 0.5}}};
  preds.entries["ghost"] = {{{0.2, 0.5}}};
  const auto report = Evaluate(preds, table, std::vector<int>{1},
                               std::vector<double>{0.5});
  EXPECT_EQ(report.unknown_predictions, 1u);
  EXPECT_EQ(report.warnings.size(), 1u);
  EXPECT_EQ(report.Value(Metric::kRecall, 1, 0.5), 100.0);
}

TEST(EvaluateTest, RejectsBadThresholds) {
  const auto table = Table({{0.2, 0.5}});
  EXPECT_THROW(Evaluate({}, table, std::vector<int>{0}, kM), ValueError);
  EXPECT_THROW(Evaluate({}, table, kN, std::vector<double>{1.5}), ValueError);
}

TEST(EvaluateTest, PerSplitScoring) {
  const auto table = Table({{0.1, 0.3}, {0.5, 0.9}, {0.2, 0.4}, {0.0, 0.5}});
  SplitAssignment split;
  split.assignment = {{"q0", Split::kTestIid},
                      {"q1", Split::kTestOod},
                      {"q2", Split::kTestOod},
                      {"q3", Split::kTrain}};
  PredictionSet preds;
  preds.entries["q0"] = {{{0.1, 0.3}}};
  preds.entries["q2"] = {{{0.7, 0.8}}};
  const auto report = EvaluateSplits(preds, table, split, kN, kM);
  EXPECT_EQ(report.Value(Metric::kRecall, 1, 0.5, "test-iid"), 100.0);
  EXPECT_EQ(report.Value(Metric::kRecall, 1, 0.5, "test-ood"), 0.0);
  EXPECT_EQ(report.splits.at("test-ood").num_queries, 2u);
  EXPECT_EQ(report.splits.at("test-ood").missing_predictions, 1u);
  // Train has no predictions at all, so it is reported as skipped.
  EXPECT_THROW(report.Value(Metric::kRecall, 1, 0.5, "train"), LookupError);
  ASSERT_EQ(report.warnings.size(), 1u);
  EXPECT_NE(report.warnings[0].find("train"), std::string::npos);

  split.assignment.erase("q3");
  EXPECT_THROW(EvaluateSplits(preds, table, split, kN, kM), LookupError);
}

TEST(PredictionIoTest, RoundTripAndErrors) {
  PredictionSet preds;
  preds.entries["b"] = {{{0.1, 0.2}, {0.3, 0.9}}};
  preds.entries["a"] = {{{3.0, 7.5}}, TimeUnit::kSeconds};
  std::stringstream io;
  WritePredictions(preds, io);
  EXPECT_EQ(io.str().substr(0, 13), "{\"candidates\"");
  EXPECT_EQ(ReadPredictions(io), preds);

  std::stringstream bad(R"({"pair_id": "a", "candidates": [[0.5, 0.2]]})");
  EXPECT_THROW(ReadPredictions(bad), IoError);
  std::stringstream dup(
      "{\"pair_id\": \"a\", \"candidates\": []}\n{\"pair_id\": \"a\", "
      "\"candidates\": []}\n");
  EXPECT_THROW(ReadPredictions(dup), IoError);
}

TEST(ReportTest, KeysAndRounding) {
  const auto table = Table({{0.0, 0.4}, {0.5, 0.6}, {0.1, 0.2}});
  PredictionSet preds;
  preds.entries["q0"] = {{{0.0, 1.0}}};
  const auto doc = ReportToJson(Evaluate(preds, table, std::vector<int>{1},
                                         std::vector<double>{0.3}));
  const auto& all = doc.at("splits").at("all");
  EXPECT_EQ(all.at("N_q").get<int>(), 3);
  EXPECT_EQ(all.at("R@1,IoU=0.3").get<double>(), 33.33);
  EXPECT_EQ(all.at("dR@1,IoU=0.3").get<double>(), 13.33);
}

// ---------------------------------------------------------------------------
// Randomized properties.

struct Suite {
  DatasetTable table;
  PredictionSet preds;
};

Interval RandomInterval(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double a = unit(rng), b = unit(rng);
  if (a > b) std::swap(a, b);
  if (a == b) b = std::min(1.0, a + 0.01);
  return {a, b};
}

Suite RandomSuite(std::mt19937_64& rng, int queries) {
  Suite suite;
  std::uniform_int_distribution<int> count(0, 6);
  std::normal_distribution<double> jitter(0.0, 0.1);
  for (int q = 0; q < queries; ++q) {
    const auto gt = RandomInterval(rng);
    suite.table.pairs.push_back(NormPair("q" + std::to_string(q), "v",
                                         gt.start, gt.end));
    RankedCandidates ranked;
    const int k = count(rng);
    for (int c = 0; c < k; ++c) {
      // Mix of near-gt and random candidates.
      if (c % 2 == 0) {
        double s = std::clamp(gt.start + jitter(rng), 0.0, 1.0);
        double e = std::clamp(gt.end + jitter(rng), 0.0, 1.0);
        if (s > e) std::swap(s, e);
        ranked.candidates.push_back({s, e});
      } else {
        ranked.candidates.push_back(RandomInterval(rng));
      }
    }
    suite.preds.entries[suite.table.pairs.back().pair_id] = ranked;
  }
  return suite;
}

TEST(MetricPropertyTest, DiscountedNeverExceedsRecallAndMonotone) {
  std::mt19937_64 rng(2024);
  const std::vector<int> ns = {1, 2, 5};
  const std::vector<double> ms = {0.1, 0.3, 0.5, 0.7, 0.9};
  for (int trial = 0; trial < 300; ++trial) {
    const auto suite = RandomSuite(rng, 20);
    const auto report = Evaluate(suite.preds, suite.table, ns, ms);
    for (int n : ns) {
      for (std::size_t k = 0; k < ms.size(); ++k) {
        const double r = report.Value(Metric::kRecall, n, ms[k]);
        const double dr = report.Value(Metric::kDiscountedRecall, n, ms[k]);
        ASSERT_LE(dr, r + 1e-12);
        if (k + 1 < ms.size()) {
          ASSERT_GE(r, report.Value(Metric::kRecall, n, ms[k + 1]));
          ASSERT_GE(dr, report.Value(Metric::kDiscountedRecall, n, ms[k + 1]));
        }
      }
    }
    for (double m : ms) {
      for (Metric metric : {Metric::kRecall, Metric::kDiscountedRecall}) {
        ASSERT_LE(report.Value(metric, 1, m), report.Value(metric, 2, m));
        ASSERT_LE(report.Value(metric, 2, m), report.Value(metric, 5, m));
      }
    }
  }
}

TEST(MetricPropertyTest, DiscountGapShrinksAtHighThreshold) {
  std::mt19937_64 rng(99);
  const std::vector<int> ns = {1, 5};
  const std::vector<double> ms = {0.1, 0.9};
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const auto suite = RandomSuite(rng, 20);
    const auto report = Evaluate(suite.preds, suite.table, ns, ms);
    for (int n : ns) {
      if (report.Value(Metric::kRecall, n, 0.9) == 0.0) continue;
      const auto gap = [&](double m) {
        return report.Value(Metric::kRecall, n, m) -
               report.Value(Metric::kDiscountedRecall, n, m);
      };
      ASSERT_LE(gap(0.9), gap(0.1) + 1e-12) << "trial " << trial << " n=" << n;
      ++checked;
    }
  }
  EXPECT_GT(checked, 50);
}

TEST(MetricPropertyTest, TimeReversalInvariance) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    const auto suite = RandomSuite(rng, 15);
    Suite reversed = suite;
    for (auto& p : reversed.table.pairs) {
      const double s = 1.0 - p.end_norm, e = 1.0 - p.start_norm;
      p.start_norm = s;
      p.end_norm = e;
    }
    for (auto& [id, ranked] : reversed.preds.entries) {
      for (auto& c : ranked.candidates) c = {1.0 - c.end, 1.0 - c.start};
    }
    const auto a = Evaluate(suite.preds, suite.table, kN, kM);
    const auto b = Evaluate(reversed.preds, reversed.table, kN, kM);
    for (const auto& [key, value] : a.values) {
      ASSERT_NEAR(value, b.values.at(key), 1e-9);
    }
  }
}

}  // namespace
}  // namespace moment_bench
