// Copyright 2026 The imgeval Authors
// SPDX-License-Identifier: Apache-2.0

#include "imgeval/dataset_ops.h"

#include <algorithm>
#include <numeric>
#include <set>

#include "imgeval/csv.h"
#include "imgeval/error.h"
#include "imgeval/io.h"

namespace imgeval {

std::uint64_t SplitMix64::Next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t SplitMix64::Below(std::uint64_t bound) {
  // Reject the low (2^64 mod bound) values so every residue is equally likely.
  const std::uint64_t threshold = (0 - bound) % bound;
  while (true) {
    std::uint64_t x = Next();
    if (x >= threshold) return x % bound;
  }
}

std::uint64_t DatasetStreamSeed(std::int64_t seed, std::string_view dataset_name) {
  return static_cast<std::uint64_t>(seed) ^ Fnv1a64(dataset_name);
}

std::vector<std::size_t> SampleIndices(std::size_t size, std::size_t target, std::int64_t seed,
                                       std::string_view dataset_name) {
  if (target > size) throw SpecError("cannot sample more indices than rows");
  std::vector<std::size_t> pool(size);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  if (target == size) return pool;
  SplitMix64 rng(DatasetStreamSeed(seed, dataset_name));
  for (std::size_t i = 0; i < target; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.Below(size - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(target);
  std::sort(pool.begin(), pool.end());
  return pool;
}

SubsampleAssignment BalancedSubsample(std::span<const DatasetHandle> datasets, std::int64_t seed) {
  if (datasets.empty()) throw SpecError("balanced subsampling needs at least one dataset");
  std::set<std::string> names;
  std::size_t target = datasets[0].size();
  for (const auto& ds : datasets) {
    if (!names.insert(ds.name).second) throw SpecError("duplicate dataset name '" + ds.name + "'");
    if (ds.size() == 0) throw SpecError("dataset '" + ds.name + "' is empty");
    target = std::min(target, ds.size());
  }
  SubsampleAssignment out;
  out.target_size = target;
  out.seed = seed;
  for (const auto& ds : datasets) out.indices[ds.name] = SampleIndices(ds.size(), target, seed, ds.name);
  return out;
}

std::string EncodeSubsample(const SubsampleAssignment& assignment) {
  std::string out = "dataset,index\n";
  for (const auto& [name, idx] : assignment.indices) {
    const std::string field = EscapeCsvField(name);
    for (std::size_t i : idx) out += field + "," + std::to_string(i) + "\n";
  }
  return out;
}

SubsampleAssignment ParseSubsample(std::string_view text) {
  auto records = ParseCsv(text);
  if (records.empty() || records[0] != std::vector<std::string>{"dataset", "index"}) {
    throw FormatError("subsample csv must start with header 'dataset,index'");
  }
  SubsampleAssignment out;
  for (std::size_t i = 1; i < records.size(); ++i) {
    std::int64_t index;
    if (records[i].size() != 2 || !ParseInt64(records[i][1], index) || index < 0) {
      throw DataError("subsample csv row " + std::to_string(i) + " is malformed");
    }
    out.indices[records[i][0]].push_back(static_cast<std::size_t>(index));
  }
  bool first = true;
  for (auto& [name, idx] : out.indices) {
    if (!std::is_sorted(idx.begin(), idx.end()) ||
        std::adjacent_find(idx.begin(), idx.end()) != idx.end()) {
      throw DataError("subsample indices for '" + name + "' must be strictly increasing");
    }
    if (!first && idx.size() != out.target_size) {
      throw DataError("subsample lists differ in length");
    }
    out.target_size = idx.size();
    first = false;
  }
  return out;
}

SubsampleAssignment LoadSubsample(const std::filesystem::path& path) {
  return ParseSubsample(ReadFile(path));
}

BalanceReport ValidateBalance(std::span<const SampleRecord> records,
                              std::size_t expected_per_cell) {
  BalanceReport report;
  report.expected_per_cell = expected_per_cell;
  report.total = records.size();
  std::set<std::string> groups, classes;
  std::map<std::pair<std::string, std::string>, std::size_t> counts;
  for (const auto& r : records) {
    if (r.groups.empty() || !r.class_label) {
      ++report.unkeyed;
      continue;
    }
    classes.insert(*r.class_label);
    for (const auto& g : r.groups) {
      groups.insert(g);
      ++counts[{g, *r.class_label}];
    }
  }
  report.num_groups = groups.size();
  report.num_classes = classes.size();
  for (const auto& g : groups) {
    for (const auto& c : classes) {
      auto it = counts.find({g, c});
      const std::size_t n = it == counts.end() ? 0 : it->second;
      if (n != expected_per_cell) report.deficient.push_back({g, c, n});
    }
  }
  return report;
}

std::vector<std::size_t> ExcludeTagged(std::span<const SampleRecord> records,
                                       std::string_view tag) {
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& tags = records[i].tags;
    if (std::find(tags.begin(), tags.end(), tag) == tags.end()) kept.push_back(i);
  }
  return kept;
}

std::map<std::string, std::vector<std::size_t>> PartitionByGroup(
    std::span<const SampleRecord> records) {
  std::map<std::string, std::vector<std::size_t>> out;
  auto& all = out[std::string(kAllGroup)];
  for (std::size_t i = 0; i < records.size(); ++i) {
    all.push_back(i);
    for (const auto& g : records[i].groups) out[g].push_back(i);
  }
  return out;
}

}  // namespace imgeval
