// Copyright 2026 The imgeval Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "imgeval/embedding.h"
#include "imgeval/marginal.h"
#include "imgeval/records.h"
#include "imgeval/scores.h"

namespace imgeval {

enum class MetricKind { kFid, kPrdc, kClipScore, kVqaScore, kDsg };

std::string_view MetricKindName(MetricKind kind);
// Throws SpecError for unknown names.
MetricKind ParseMetricKind(std::string_view name);
// FID and PRDC compare against real references; the rest score samples.
bool IsMarginal(MetricKind kind);

struct MetricSpec {
  MetricKind kind = MetricKind::kFid;
  std::optional<int> k;              // prdc only
  std::optional<double> scale;       // clipscore only
  std::optional<double> percentile;  // consistency kinds only
  bool grouped = false;

  // Throws SpecError on knobs that do not apply to `kind` or are out of range.
  void Validate() const;
  int EffectiveK() const { return k.value_or(kDefaultManifoldK); }
  double EffectiveScale() const;

  // Names of the report entries this spec produces, e.g. {"precision", ...}.
  std::vector<std::string> OutputNames() const;

  friend bool operator==(const MetricSpec&, const MetricSpec&) = default;
};

// metric name -> group -> value. Always contains group "ALL".
using MetricReport = std::map<std::string, std::map<std::string, double>>;

// Running mean and centered cross-product matrix, combined with the pairwise
// update of Chan et al. so merges are O(D^2) and numerically stable.
class MomentAccumulator {
 public:
  void Add(const RowMatrix& rows);
  void Merge(const MomentAccumulator& other);
  std::size_t count() const { return n_; }
  // Unbiased covariance; needs count() >= 2.
  GaussianMoments Moments() const;

 private:
  std::size_t n_ = 0;
  Eigen::VectorXd mean_;
  Eigen::MatrixXd comoment_;
};

// Single-writer accumulator for one metric. Shard rows across states, then
// Merge; never mutate one state from several threads.
class MetricState {
 public:
  explicit MetricState(MetricSpec spec);

  const MetricSpec& spec() const { return spec_; }
  std::size_t real_count() const { return real_count_; }
  std::size_t generated_count() const { return generated_count_; }

  // `records` aligns with the rows; it may be empty for ungrouped specs.
  void UpdateReal(const EmbeddingSet& embeddings, std::span<const SampleRecord> records);
  void UpdateGenerated(const EmbeddingSet& embeddings, std::span<const SampleRecord> records);

  // Conditional metrics. UpdateScores takes precomputed per-sample scores
  // (VQAScore probabilities are range-checked).
  void UpdateScores(std::span<const double> scores, std::span<const SampleRecord> records);
  void UpdateClip(const EmbeddingSet& images, const EmbeddingSet& texts,
                  std::span<const SampleRecord> records);
  void UpdateDsg(std::span<const DsgAnswerRow> answers, std::span<const SampleRecord> records);

  // Throws InsufficientSamples naming the first group below the minimum.
  MetricReport Compute(int workers = 1) const;

  // Buffers are concatenated in (a, b) order. Throws SpecError if specs differ.
  friend MetricState Merge(MetricState a, MetricState b);

 private:
  struct Side {
    std::map<std::string, MomentAccumulator> moments;  // fid
    std::vector<double> rows;                          // prdc, row-major
    std::vector<std::vector<std::string>> groups;      // prdc, per row
  };

  void CheckRecords(std::size_t rows, std::span<const SampleRecord> records) const;
  void AddEmbeddings(Side& side, const EmbeddingSet& embeddings,
                     std::span<const SampleRecord> records);
  void AppendScores(std::span<const double> scores, std::span<const SampleRecord> records);
  EmbeddingSet GroupRows(const Side& side, std::string_view group, std::size_t count) const;
  MetricReport ComputeFid() const;
  MetricReport ComputePrdc(int workers) const;
  MetricReport ComputeConsistency() const;

  MetricSpec spec_;
  std::size_t dim_ = 0;
  std::size_t real_count_ = 0;
  std::size_t generated_count_ = 0;
  Side real_;
  Side generated_;
  std::vector<double> scores_;
  std::vector<std::vector<std::string>> score_groups_;
};

MetricState NewState(MetricSpec spec);

}  // namespace imgeval
