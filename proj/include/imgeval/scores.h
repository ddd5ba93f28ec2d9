// Copyright 2026 The imgeval Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace imgeval {

enum class ScoreKind { kClip, kVqa, kDsg };

std::string_view ScoreKindName(ScoreKind kind);

// Per-sample scores aligned by index with a metadata table.
struct ScoreTable {
  ScoreKind kind = ScoreKind::kClip;
  std::vector<double> scores;
};

// CSV with header "index,score". Rows may appear in any order but must cover
// 0..N-1 exactly once.
ScoreTable ParseScoreCsv(std::string_view text, ScoreKind kind);
ScoreTable LoadScoreCsv(const std::filesystem::path& path, ScoreKind kind);
std::string EncodeScoreCsv(std::span<const double> scores);

// One line per generated sample: {"index": i, "answers": {"q1": "yes", ...},
// "probabilities": {"q1": 0.93, ...}}. probabilities is optional.
struct DsgAnswerRow {
  std::size_t index = 0;
  std::map<std::string, bool> answers;
  std::map<std::string, double> probabilities;
};

std::vector<DsgAnswerRow> ParseDsgAnswers(std::string_view text);
std::vector<DsgAnswerRow> LoadDsgAnswers(const std::filesystem::path& path);
std::string EncodeDsgAnswers(std::span<const DsgAnswerRow> rows);

}  // namespace imgeval
