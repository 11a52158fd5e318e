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

#include "moment_bench/annotations.h"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <utility>

#include "json.hpp"

namespace moment_bench {
namespace {

using nlohmann::json;

std::string_view Trim(std::string_view text) {
  const auto is_space = [](char c) {
    return std::isspace(static_cast<unsigned char>(c)) != 0;
  };
  while (!text.empty() && is_space(text.front())) text.remove_prefix(1);
  while (!text.empty() && is_space(text.back())) text.remove_suffix(1);
  return text;
}

std::optional<double> ParseDouble(std::string_view text) {
  text = Trim(text);
  if (text.empty()) return std::nullopt;
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    return std::nullopt;
  }
  if (!std::isfinite(value)) return std::nullopt;
  return value;
}

std::vector<std::string_view> SplitWhitespace(std::string_view text) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() &&
           std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
    }
    const std::size_t begin = i;
    while (i < text.size() &&
           !std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
    }
    if (i > begin) fields.push_back(text.substr(begin, i - begin));
  }
  return fields;
}

std::vector<std::string> ReadLines(std::istream& in) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

json ToRecord(const MomentAnnotation& pair) {
  json record = {
      {"pair_id", pair.pair_id},
      {"video_id", pair.video_id},
      {"duration_s", RoundToCanonical(pair.duration_s)},
      {"start_s", RoundToCanonical(pair.start_s)},
      {"end_s", RoundToCanonical(pair.end_s)},
      {"start_norm", RoundToCanonical(pair.start_norm)},
      {"end_norm", RoundToCanonical(pair.end_norm)},
      {"query", pair.query},
  };
  if (pair.tokens) record["tokens"] = *pair.tokens;
  return record;
}

MomentAnnotation FromRecord(const json& record) {
  MomentAnnotation pair;
  pair.pair_id = record.at("pair_id").get<std::string>();
  pair.video_id = record.at("video_id").get<std::string>();
  pair.duration_s = record.at("duration_s").get<double>();
  pair.start_s = record.at("start_s").get<double>();
  pair.end_s = record.at("end_s").get<double>();
  pair.start_norm = record.at("start_norm").get<double>();
  pair.end_norm = record.at("end_norm").get<double>();
  pair.query = record.at("query").get<std::string>();
  if (auto it = record.find("tokens"); it != record.end() && !it->is_null()) {
    pair.tokens = it->get<std::vector<std::string>>();
  }
  return pair;
}

bool IsValidNormalized(const MomentAnnotation& pair) {
  return pair.start_norm >= 0.0 && pair.start_norm < pair.end_norm &&
         pair.end_norm <= 1.0;
}

}  // namespace

std::string_view SourceName(DatasetSource source) {
  switch (source) {
    case DatasetSource::kCharades:
      return "charades";
    case DatasetSource::kActivityNet:
      return "activitynet";
    case DatasetSource::kGeneric:
      return "generic";
  }
  return "generic";
}

DatasetSource SourceFromName(std::string_view name) {
  if (name == "charades") return DatasetSource::kCharades;
  if (name == "activitynet") return DatasetSource::kActivityNet;
  if (name == "generic") return DatasetSource::kGeneric;
  throw ValueError("unknown dataset source '" + std::string(name) + "'");
}

std::optional<Interval> SanitizePair(double start_s, double end_s,
                                     double duration_s) {
  if (start_s > end_s) std::swap(start_s, end_s);
  start_s = std::clamp(start_s, 0.0, duration_s);
  end_s = std::clamp(end_s, 0.0, duration_s);
  if (start_s == end_s) return std::nullopt;
  return Interval{start_s, end_s};
}

std::vector<std::string> Tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : text) {
    const auto u = static_cast<unsigned char>(c);
    if (std::isalnum(u)) {
      current.push_back(static_cast<char>(std::tolower(u)));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

MomentAnnotation MakeAnnotation(std::string pair_id, std::string video_id,
                                double duration_s, Interval seconds,
                                std::string query) {
  MomentAnnotation pair;
  pair.pair_id = std::move(pair_id);
  pair.video_id = std::move(video_id);
  pair.duration_s = duration_s;
  pair.start_s = seconds.start;
  pair.end_s = seconds.end;
  pair.start_norm = seconds.start / duration_s;
  pair.end_norm = seconds.end / duration_s;
  pair.tokens = Tokenize(query);
  pair.query = std::move(query);
  return pair;
}

std::map<std::string, double> ParseDurations(std::istream& in) {
  std::map<std::string, double> durations;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (Trim(line).empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw ParseError("durations line " + std::to_string(line_number) +
                       ": expected '<video_id>\\t<seconds>'");
    }
    const std::string video_id(Trim(std::string_view(line).substr(0, tab)));
    const auto seconds = ParseDouble(std::string_view(line).substr(tab + 1));
    if (video_id.empty() || !seconds) {
      throw ParseError("durations line " + std::to_string(line_number) +
                       ": expected '<video_id>\\t<seconds>'");
    }
    if (*seconds <= 0.0) {
      throw ValueError("durations line " + std::to_string(line_number) +
                       ": duration of '" + video_id + "' must be positive");
    }
    durations[video_id] = *seconds;
  }
  return durations;
}

ParseResult ParseCharadesSta(std::span<const std::string> lines,
                             const std::map<std::string, double>& durations) {
  ParseResult result;
  result.table.source = DatasetSource::kCharades;
  for (std::size_t index = 0; index < lines.size(); ++index) {
    std::string_view line = lines[index];
    if (Trim(line).empty()) continue;
    const std::string where = "line " + std::to_string(index + 1);
    const auto sep = line.find("##");
    if (sep == std::string_view::npos) {
      throw ParseError(where + ": missing '##' separator");
    }
    const auto header = SplitWhitespace(line.substr(0, sep));
    if (header.size() != 3) {
      throw ParseError(where + ": expected '<video_id> <start> <end>##'");
    }
    const auto start = ParseDouble(header[1]);
    const auto end = ParseDouble(header[2]);
    if (!start || !end) {
      throw ParseError(where + ": non-numeric boundary");
    }
    const std::string video_id(header[0]);
    const auto duration = durations.find(video_id);
    if (duration == durations.end()) {
      throw LookupError(where + ": no duration for video '" + video_id + "'");
    }
    const auto seconds = SanitizePair(*start, *end, duration->second);
    if (!seconds) {
      result.dropped.push_back({video_id, index, *start, *end});
      continue;
    }
    result.table.pairs.push_back(
        MakeAnnotation(video_id + "#" + std::to_string(index), video_id,
                       duration->second, *seconds,
                       std::string(Trim(line.substr(sep + 2)))));
  }
  return result;
}

ParseResult ParseCharadesSta(std::istream& in,
                             const std::map<std::string, double>& durations) {
  const auto lines = ReadLines(in);
  return ParseCharadesSta(lines, durations);
}

ParseResult ParseActivityNetCaptions(std::span<const std::string> documents) {
  ParseResult result;
  result.table.source = DatasetSource::kActivityNet;
  std::map<std::string, std::size_t> next_index;
  for (std::size_t doc = 0; doc < documents.size(); ++doc) {
    const std::string where_doc = "document " + std::to_string(doc + 1);
    json root;
    try {
      root = json::parse(documents[doc]);
    } catch (const json::parse_error& e) {
      throw ParseError(where_doc + ": " + e.what());
    }
    if (!root.is_object()) {
      throw StructuralError(where_doc + ": top level must be a map");
    }
    for (const auto& [video_id, entry] : root.items()) {
      const std::string where = where_doc + ", video '" + video_id + "'";
      if (!entry.is_object() || !entry.contains("duration") ||
          !entry.contains("timestamps") || !entry.contains("sentences")) {
        throw StructuralError(
            where + ": expected keys duration, timestamps, sentences");
      }
      const auto& timestamps = entry["timestamps"];
      const auto& sentences = entry["sentences"];
      if (!entry["duration"].is_number() || !timestamps.is_array() ||
          !sentences.is_array()) {
        throw StructuralError(where + ": wrong field types");
      }
      if (timestamps.size() != sentences.size()) {
        throw StructuralError(where + ": " +
                              std::to_string(timestamps.size()) +
                              " timestamps but " +
                              std::to_string(sentences.size()) + " sentences");
      }
      const double duration = entry["duration"].get<double>();
      if (!(duration > 0.0)) {
        throw ValueError(where + ": duration must be positive");
      }
      std::size_t& index = next_index[video_id];
      for (std::size_t k = 0; k < timestamps.size(); ++k, ++index) {
        const auto& stamp = timestamps[k];
        if (!stamp.is_array() || stamp.size() != 2 || !stamp[0].is_number() ||
            !stamp[1].is_number() || !sentences[k].is_string()) {
          throw StructuralError(where + ": malformed entry " +
                                std::to_string(k));
        }
        const double start = stamp[0].get<double>();
        const double end = stamp[1].get<double>();
        const auto seconds = SanitizePair(start, end, duration);
        if (!seconds) {
          result.dropped.push_back({video_id, index, start, end});
          continue;
        }
        result.table.pairs.push_back(MakeAnnotation(
            video_id + "#" + std::to_string(index), video_id, duration,
            *seconds, std::string(Trim(sentences[k].get<std::string>()))));
      }
    }
  }
  ValidateTable(result.table);
  return result;
}

ParseResult ParseActivityNetCaptions(std::string_view document) {
  const std::string copy(document);
  return ParseActivityNetCaptions(std::span<const std::string>(&copy, 1));
}

void ValidateTable(const DatasetTable& table) {
  std::set<std::string_view> ids;
  std::map<std::string_view, double> durations;
  for (const auto& pair : table.pairs) {
    if (!ids.insert(pair.pair_id).second) {
      throw StructuralError("duplicate pair id '" + pair.pair_id + "'");
    }
    const auto [it, inserted] =
        durations.emplace(pair.video_id, pair.duration_s);
    if (!inserted && it->second != pair.duration_s) {
      throw StructuralError("video '" + pair.video_id +
                            "' has inconsistent durations");
    }
    if (!IsValidNormalized(pair)) {
      throw ValueError("pair '" + pair.pair_id +
                       "' violates 0 <= start_norm < end_norm <= 1");
    }
  }
}

double RoundToCanonical(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.9g", value);
  return std::strtod(buffer, nullptr);
}

void WriteCanonical(const DatasetTable& table, std::ostream& out) {
  std::vector<const MomentAnnotation*> sorted;
  sorted.reserve(table.pairs.size());
  for (const auto& pair : table.pairs) sorted.push_back(&pair);
  std::sort(sorted.begin(), sorted.end(),
            [](const auto* a, const auto* b) { return a->pair_id < b->pair_id; });
  for (const auto* pair : sorted) out << ToRecord(*pair).dump() << '\n';
}

DatasetTable ReadCanonical(std::istream& in, DatasetSource source) {
  DatasetTable table;
  table.source = source;
  std::set<std::string> ids;
  std::string line;
  std::size_t record = 0;
  while (std::getline(in, line)) {
    if (Trim(line).empty()) continue;
    const std::string where = "record " + std::to_string(record);
    MomentAnnotation pair;
    try {
      pair = FromRecord(json::parse(line));
    } catch (const json::exception& e) {
      throw IoError(where + ": unreadable (" + e.what() + ")");
    }
    if (!IsValidNormalized(pair) || !(pair.duration_s > 0.0)) {
      throw IoError(where + ": invalid boundaries for '" + pair.pair_id + "'");
    }
    if (!ids.insert(pair.pair_id).second) {
      throw IoError(where + ": duplicate pair id '" + pair.pair_id + "'");
    }
    table.pairs.push_back(std::move(pair));
    ++record;
  }
  return table;
}

std::map<std::string, std::size_t, std::less<>> IndexByPairId(
    const DatasetTable& table) {
  std::map<std::string, std::size_t, std::less<>> index;
  for (std::size_t i = 0; i < table.pairs.size(); ++i) {
    index.emplace(table.pairs[i].pair_id, i);
  }
  return index;
}

std::vector<std::string> VideoIds(const DatasetTable& table) {
  std::set<std::string> ids;
  for (const auto& pair : table.pairs) ids.insert(pair.video_id);
  return {ids.begin(), ids.end()};
}

}  // namespace moment_bench
