// Copyright 2026 The imgeval Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace imgeval {

// Group name under which every sample is aggregated. Reserved: metadata may
// not use it as a group tag.
inline constexpr std::string_view kAllGroup = "ALL";

// Prompt-derived question set. parents[q] lists the questions that must hold
// for q to be answerable.
struct DsgGraph {
  std::vector<std::string> question_ids;
  std::map<std::string, std::vector<std::string>> parents;

  // Throws GraphError on unknown ids, duplicate questions, or a cycle (the
  // message lists the cycle's members).
  void Validate() const;

  // Parents before children; ties keep question_ids order.
  std::vector<std::string> TopologicalOrder() const;

  friend bool operator==(const DsgGraph&, const DsgGraph&) = default;
};

struct SampleRecord {
  std::size_t index = 0;
  std::optional<std::string> prompt;
  std::optional<std::string> class_label;
  std::vector<std::string> groups;
  // Free-form content tags, used only by exclusion filters.
  std::vector<std::string> tags;
  std::optional<DsgGraph> dsg;

  // Every record is in kAllGroup.
  bool InGroup(std::string_view group) const;

  friend bool operator==(const SampleRecord&, const SampleRecord&) = default;
};

// One JSON object per line. Index is the line number; an explicit "index"
// field must agree with it.
std::vector<SampleRecord> ParseMetadata(std::string_view text);
std::vector<SampleRecord> LoadMetadata(const std::filesystem::path& path);

std::string EncodeMetadata(std::span<const SampleRecord> records);
void WriteMetadata(std::span<const SampleRecord> records,
                   const std::filesystem::path& path);

}  // namespace imgeval
