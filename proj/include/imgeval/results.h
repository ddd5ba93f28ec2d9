// Copyright 2026 The imgeval Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace imgeval {

inline constexpr std::string_view kResultsHeader =
    "model,dataset,group,hyperparameters,metric,value,seed";

// Generation hyperparameters such as guidance_scale. Keys may not contain
// '=' or ';'; values may not contain ';'.
using Hyperparameters = std::map<std::string, std::string>;

std::string FormatHyperparameters(const Hyperparameters& hp);
Hyperparameters ParseHyperparameters(std::string_view text);

// Orders by key, then by value, comparing values numerically when both parse
// as numbers.
bool HyperparametersLess(const Hyperparameters& a, const Hyperparameters& b);

struct ResultRow {
  std::string model;
  std::string dataset;
  std::string group = "ALL";
  Hyperparameters hyperparameters;
  std::string metric;
  double value = 0.0;
  std::optional<std::int64_t> seed;

  friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

// Identity of a measurement; value excluded.
std::string ResultKey(const ResultRow& row);

// Canonical order: model, dataset, metric, group, hyperparameters, seed.
bool CanonicalResultLess(const ResultRow& a, const ResultRow& b);
void SortResults(std::vector<ResultRow>& rows);

// Throws DuplicateResultError naming the first colliding key.
void CheckUniqueResults(std::span<const ResultRow> rows);

// Header plus rows in the order given. Values use shortest round-trip form.
std::string EncodeResults(std::span<const ResultRow> rows);
std::vector<ResultRow> ParseResults(std::string_view text);
std::vector<ResultRow> LoadResults(const std::filesystem::path& path);

// Sorted canonically and checked for uniqueness before writing.
void WriteResults(std::vector<ResultRow> rows, const std::filesystem::path& path);
// Merges with the rows already in `path` (if any); any key collision throws.
void AppendResults(std::span<const ResultRow> rows, const std::filesystem::path& path);

}  // namespace imgeval
