// Copyright 2026 The imgeval Authors
// SPDX-License-Identifier: Apache-2.0

#include "imgeval/scores.h"

#include <cmath>
#include <optional>

#include <nlohmann/json.hpp>

#include "imgeval/csv.h"
#include "imgeval/error.h"
#include "imgeval/io.h"

namespace imgeval {

std::string_view ScoreKindName(ScoreKind kind) {
  switch (kind) {
    case ScoreKind::kClip:
      return "clip";
    case ScoreKind::kVqa:
      return "vqa";
    case ScoreKind::kDsg:
      return "dsg";
  }
  return "?";
}

ScoreTable ParseScoreCsv(std::string_view text, ScoreKind kind) {
  auto records = ParseCsv(text);
  if (records.empty() || records[0] != std::vector<std::string>{"index", "score"}) {
    throw FormatError("score csv must start with header 'index,score'");
  }
  const std::size_t n = records.size() - 1;
  std::vector<std::optional<double>> slots(n);
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& f = records[i];
    std::int64_t index;
    double score;
    if (f.size() != 2 || !ParseInt64(f[0], index) || !ParseDouble(f[1], score)) {
      throw DataError("score csv row " + std::to_string(i) + " is malformed");
    }
    if (index < 0 || static_cast<std::size_t>(index) >= n) {
      throw DataError("score csv row " + std::to_string(i) + ": index " + std::to_string(index) +
                      " out of range [0, " + std::to_string(n) + ")");
    }
    if (!std::isfinite(score)) {
      throw DataError("score csv row " + std::to_string(i) + ": non-finite score");
    }
    auto& slot = slots[static_cast<std::size_t>(index)];
    if (slot) throw DataError("score csv: duplicate index " + std::to_string(index));
    slot = score;
  }
  ScoreTable table{kind, {}};
  table.scores.reserve(n);
  for (const auto& s : slots) table.scores.push_back(*s);
  return table;
}

ScoreTable LoadScoreCsv(const std::filesystem::path& path, ScoreKind kind) {
  try {
    return ParseScoreCsv(ReadFile(path), kind);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::string EncodeScoreCsv(std::span<const double> scores) {
  std::string out = "index,score\n";
  for (std::size_t i = 0; i < scores.size(); ++i) {
    out += std::to_string(i);
    out.push_back(',');
    out += FormatRoundTrip(scores[i]);
    out.push_back('\n');
  }
  return out;
}

std::vector<DsgAnswerRow> ParseDsgAnswers(std::string_view text) {
  std::vector<DsgAnswerRow> rows;
  std::size_t pos = 0;
  std::size_t line = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line_text = text.substr(pos, end - pos);
    pos = end + 1;
    ++line;
    const std::string where = "dsg answers line " + std::to_string(line);
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line_text);
    } catch (const nlohmann::json::parse_error& e) {
      throw DataError(where + ": " + e.what());
    }
    if (!obj.is_object()) throw DataError(where + ": not an object");
    DsgAnswerRow row;
    row.index = line - 1;
    if (auto it = obj.find("index"); it != obj.end()) {
      if (!it->is_number_unsigned() || it->get<std::uint64_t>() != line - 1) {
        throw DataError(where + ": index must equal the row number " + std::to_string(line - 1));
      }
    }
    auto answers = obj.find("answers");
    if (answers == obj.end() || !answers->is_object()) {
      throw DataError(where + ": missing answers object");
    }
    for (const auto& [q, a] : answers->items()) {
      if (a == "yes") {
        row.answers[q] = true;
      } else if (a == "no") {
        row.answers[q] = false;
      } else {
        throw DataError(where + ": answer for '" + q + "' must be \"yes\" or \"no\"");
      }
    }
    if (auto probs = obj.find("probabilities"); probs != obj.end() && !probs->is_null()) {
      if (!probs->is_object()) throw DataError(where + ": probabilities must be an object");
      for (const auto& [q, p] : probs->items()) {
        if (!p.is_number() || !(p.get<double>() >= 0.0 && p.get<double>() <= 1.0)) {
          throw DataError(where + ": probability for '" + q + "' must be in [0, 1]");
        }
        row.probabilities[q] = p.get<double>();
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<DsgAnswerRow> LoadDsgAnswers(const std::filesystem::path& path) {
  try {
    return ParseDsgAnswers(ReadFile(path));
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::string EncodeDsgAnswers(std::span<const DsgAnswerRow> rows) {
  std::string out;
  for (const auto& r : rows) {
    nlohmann::ordered_json j;
    j["index"] = r.index;
    nlohmann::ordered_json answers = nlohmann::ordered_json::object();
    for (const auto& [q, a] : r.answers) answers[q] = a ? "yes" : "no";
    j["answers"] = answers;
    if (!r.probabilities.empty()) {
      nlohmann::ordered_json probs = nlohmann::ordered_json::object();
      for (const auto& [q, p] : r.probabilities) probs[q] = p;
      j["probabilities"] = probs;
    }
    out += j.dump();
    out.push_back('\n');
  }
  return out;
}

}  // namespace imgeval
