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

#ifndef MOMENT_BENCH_ANNOTATIONS_H_
#define MOMENT_BENCH_ANNOTATIONS_H_

// Parsers for the public Charades-STA and ActivityNet-Captions annotation
// conventions, plus the canonical line-delimited pair table every other stage
// of the toolkit consumes.

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "moment_bench/common.h"

namespace moment_bench {

// One query-moment pair.
struct MomentAnnotation {
  std::string pair_id;
  std::string video_id;
  double duration_s = 0.0;
  double start_s = 0.0;
  double end_s = 0.0;
  double start_norm = 0.0;
  double end_norm = 0.0;
  std::string query;
  std::optional<std::vector<std::string>> tokens;

  Interval normalized() const { return {start_norm, end_norm}; }
  double normalized_duration() const { return end_norm - start_norm; }

  friend bool operator==(const MomentAnnotation&,
                         const MomentAnnotation&) = default;
};

enum class DatasetSource { kCharades, kActivityNet, kGeneric };

std::string_view SourceName(DatasetSource source);
DatasetSource SourceFromName(std::string_view name);

struct DatasetTable {
  std::vector<MomentAnnotation> pairs;
  DatasetSource source = DatasetSource::kGeneric;
};

// A raw record that sanitization discarded, kept for reporting.
struct DroppedRecord {
  std::string video_id;
  std::size_t index = 0;
  double start_s = 0.0;
  double end_s = 0.0;
};

struct ParseResult {
  DatasetTable table;
  std::vector<DroppedRecord> dropped;
};

// Swaps reversed boundaries, clamps them into [0, duration_s] and returns
// nullopt when the clamped moment has zero length. Requires duration_s > 0.
std::optional<Interval> SanitizePair(double start_s, double end_s,
                                     double duration_s);

// Lowercases and splits on runs of non-alphanumeric characters.
std::vector<std::string> Tokenize(std::string_view text);

// Builds a pair from sanitized second offsets; fills the normalized fields
// and tokens.
MomentAnnotation MakeAnnotation(std::string pair_id, std::string video_id,
                                double duration_s, Interval seconds,
                                std::string query);

// Reads the two-column "<video_id>\t<seconds>" durations sidecar.
std::map<std::string, double> ParseDurations(std::istream& in);

// Parses "<video_id> <start> <end>##<sentence>" lines. Blank lines are
// skipped but still advance the line index used in pair ids
// ("<video_id>#<line-index>", zero based). Throws ParseError naming the
// one-based line number, or LookupError naming a video without duration.
ParseResult ParseCharadesSta(std::span<const std::string> lines,
                             const std::map<std::string, double>& durations);
ParseResult ParseCharadesSta(std::istream& in,
                             const std::map<std::string, double>& durations);

// Parses one or more ActivityNet-Captions documents (e.g. train, val_1 and
// val_2). Pair ids are "<video_id>#<index>" where the index counts the
// video's timestamps across all documents in order, so merged files that
// annotate the same video do not collide.
ParseResult ParseActivityNetCaptions(std::span<const std::string> documents);
ParseResult ParseActivityNetCaptions(std::string_view document);

// Checks the table-level invariants: unique pair ids, one duration per video,
// and 0 <= start_norm < end_norm <= 1 for every pair.
void ValidateTable(const DatasetTable& table);

// Canonical form: one JSON object per line, sorted by pair id, reals rounded
// to 9 significant digits.
void WriteCanonical(const DatasetTable& table, std::ostream& out);
DatasetTable ReadCanonical(std::istream& in,
                           DatasetSource source = DatasetSource::kGeneric);

// Rounds to the 9 significant digits used by the canonical form.
double RoundToCanonical(double value);

// Index from pair id to position in table.pairs.
std::map<std::string, std::size_t, std::less<>> IndexByPairId(
    const DatasetTable& table);

// Distinct video ids in the table, sorted.
std::vector<std::string> VideoIds(const DatasetTable& table);

}  // namespace moment_bench

#endif  // MOMENT_BENCH_ANNOTATIONS_H_
