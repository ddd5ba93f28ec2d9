// Copyright 2026 The imgeval Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "imgeval/embedding.h"
#include "imgeval/records.h"
#include "imgeval/scores.h"

namespace imgeval {

inline constexpr double kDefaultClipScale = 100.0;

// scale * max(0, cos(image, text)), cosine taken on unit-normalized copies.
// Throws DataError for a zero-norm vector, ShapeError for mismatched sizes and
// SpecError for a non-positive scale.
double ClipScore(std::span<const double> image_embedding, std::span<const double> text_embedding,
                 double scale = kDefaultClipScale);

// Row-wise ClipScore over aligned image / text embedding sets.
std::vector<double> ClipScores(const EmbeddingSet& images, const EmbeddingSet& texts,
                               double scale = kDefaultClipScale);

struct DsgAnswers {
  DsgGraph graph;
  std::map<std::string, bool> answers;  // true == "yes"
};

// Fraction of questions whose effective answer is yes. A question is
// effectively "no" when its own answer is no or any ancestor's effective
// answer is no. An empty question set scores 0.
double DsgScore(const DsgAnswers& sample);

// Pairs each answer row with its record's graph and scores it.
std::vector<double> DsgScores(std::span<const DsgAnswerRow> answers,
                              std::span<const SampleRecord> records);

// Validated pass-through of model-reported P("yes") values.
std::vector<double> VqaScores(std::span<const double> probabilities);

// How per-group values are summarized.
struct Aggregation {
  // nullopt: arithmetic mean; otherwise the p-th percentile (0..100) with
  // linear interpolation between closest ranks.
  std::optional<double> percentile;
};

double Percentile(std::vector<double> values, double p);

// "ALL" plus one entry per group tag present. Samples with several tags count
// in each of them; summation is in index order.
std::map<std::string, double> AggregateScores(const ScoreTable& per_sample,
                                              std::span<const SampleRecord> records,
                                              Aggregation aggregation = {});

}  // namespace imgeval
