// Copyright 2026 The imgeval Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "imgeval/records.h"

namespace imgeval {

struct DatasetHandle {
  std::string name;
  std::vector<SampleRecord> records;

  std::size_t size() const { return records.size(); }
};

// SplitMix64 generator. The exact sequence is part of the subsampling
// contract so other implementations can reproduce assignments.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t Next();
  // Uniform in [0, bound) by rejection; bound > 0.
  std::uint64_t Below(std::uint64_t bound);

 private:
  std::uint64_t state_;
};

// Generator seed for one dataset: seed XOR FNV-1a-64(name).
std::uint64_t DatasetStreamSeed(std::int64_t seed, std::string_view dataset_name);

// Sorted, unique indices: the first `target` slots of a Fisher-Yates shuffle
// of [0, size) driven by SplitMix64(DatasetStreamSeed(seed, name)). When
// target == size every index is kept.
std::vector<std::size_t> SampleIndices(std::size_t size, std::size_t target, std::int64_t seed,
                                       std::string_view dataset_name);

struct SubsampleAssignment {
  std::size_t target_size = 0;
  std::int64_t seed = 0;
  std::map<std::string, std::vector<std::size_t>> indices;  // by dataset name
};

// Every dataset is cut to the size of the smallest one.
SubsampleAssignment BalancedSubsample(std::span<const DatasetHandle> datasets, std::int64_t seed);

// "dataset,index" CSV, one row per kept index, datasets in name order.
std::string EncodeSubsample(const SubsampleAssignment& assignment);
SubsampleAssignment ParseSubsample(std::string_view text);
SubsampleAssignment LoadSubsample(const std::filesystem::path& path);

struct BalanceCell {
  std::string group;
  std::string class_label;
  std::size_t count = 0;

  friend bool operator==(const BalanceCell&, const BalanceCell&) = default;
};

struct BalanceReport {
  std::size_t expected_per_cell = 0;
  std::size_t total = 0;           // records considered
  std::size_t num_groups = 0;
  std::size_t num_classes = 0;
  std::size_t unkeyed = 0;         // records missing a group or class label
  std::vector<BalanceCell> deficient;  // cells whose count != expected

  bool valid() const { return deficient.empty() && unkeyed == 0; }
};

// Checks every (group, class_label) cell of the grid spanned by the observed
// groups and class labels. Cells with no records are reported with count 0.
BalanceReport ValidateBalance(std::span<const SampleRecord> records,
                              std::size_t expected_per_cell);

// Indices of records that do not carry `tag` in their tags list.
std::vector<std::size_t> ExcludeTagged(std::span<const SampleRecord> records,
                                       std::string_view tag);

// group -> sorted indices, plus "ALL" with every index.
std::map<std::string, std::vector<std::size_t>> PartitionByGroup(
    std::span<const SampleRecord> records);

}  // namespace imgeval
