// Copyright 2026 The imgeval Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "imgeval/cli/compute.h"
#include "imgeval/cli/config.h"
#include "imgeval/results.h"

namespace imgeval::cli {

enum class ExerciseKind { kTradeoffs, kGroupRepresentation, kRankingRobustness, kPromptTypes };

std::string_view ExerciseKindName(ExerciseKind kind);
// Throws SpecError for unknown names.
ExerciseKind ParseExerciseKind(std::string_view name);
std::vector<std::string> DefaultExerciseMetrics(ExerciseKind kind);

// One [runs.<name>] table. `paths` keeps the spelling from the config file
// (role -> path) for the manifest; `inputs` holds resolved paths.
struct ExerciseRun {
  std::string name;
  RunInputs inputs;
  std::filesystem::path clip_scores;
  std::filesystem::path vqa_scores;
  std::map<std::string, std::string> paths;
};

struct ExerciseConfig {
  ExerciseKind kind = ExerciseKind::kRankingRobustness;
  std::vector<ExerciseRun> runs;  // in run-name order
  std::vector<std::string> metrics;
  std::optional<std::string> axis;  // hyperparameter swept in tradeoffs
  std::vector<std::pair<std::string, std::string>> scatters;  // prompt_types (x, y)
  std::int64_t seed = 0;
  int k = 3;
  double clip_scale = 100.0;
  std::filesystem::path out;
  ExecutionOptions execution;
};

// Reads top-level keys (kind, seed, out, workers, batch_size, k, clip_scale,
// metrics, axis, scatters) and [runs.<name>] tables. Relative paths resolve
// against the config file's directory. Unknown keys are errors. `kind`, when
// given, must agree with the file's kind key if it has one.
ExerciseConfig ExerciseConfigFromFile(const Config& config,
                                      std::optional<ExerciseKind> kind = std::nullopt);

// Per-kind checks on the config and on the presence and shape of its inputs.
// Runs before any metric is computed; throws SpecError or DataError.
void ValidateExercise(const ExerciseConfig& config);

struct ExerciseBundle {
  std::vector<ResultRow> results;             // canonical order
  std::map<std::string, std::string> files;   // bundle file name -> bytes
  nlohmann::ordered_json manifest;
};

// Validates, computes every metric through ComputeMetric, and builds plots.
// Writes nothing.
ExerciseBundle RunExercise(const ExerciseConfig& config);

// RunExercise, then stages the bundle and promotes it to config.out.
ExerciseBundle RunExerciseToDirectory(const ExerciseConfig& config);

}  // namespace imgeval::cli
