// Copyright 2026 The imgeval Authors
// SPDX-License-Identifier: Apache-2.0

#include "imgeval/consistency.h"

#include <algorithm>
#include <cmath>

#include "imgeval/error.h"

namespace imgeval {

double ClipScore(std::span<const double> image_embedding, std::span<const double> text_embedding,
                 double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw SpecError("CLIPScore scale must be positive");
  }
  if (image_embedding.size() != text_embedding.size() || image_embedding.empty()) {
    throw ShapeError("CLIPScore embeddings differ in dimension: " +
                     std::to_string(image_embedding.size()) + " vs " +
                     std::to_string(text_embedding.size()));
  }
  double image_norm = 0.0, text_norm = 0.0;
  for (std::size_t i = 0; i < image_embedding.size(); ++i) {
    image_norm += image_embedding[i] * image_embedding[i];
    text_norm += text_embedding[i] * text_embedding[i];
  }
  image_norm = std::sqrt(image_norm);
  text_norm = std::sqrt(text_norm);
  if (!(image_norm > 0.0)) throw DataError("CLIPScore image embedding has zero norm");
  if (!(text_norm > 0.0)) throw DataError("CLIPScore text embedding has zero norm");
  double cosine = 0.0;
  for (std::size_t i = 0; i < image_embedding.size(); ++i) {
    cosine += (image_embedding[i] / image_norm) * (text_embedding[i] / text_norm);
  }
  cosine = std::min(cosine, 1.0);
  return scale * std::max(0.0, cosine);
}

std::vector<double> ClipScores(const EmbeddingSet& images, const EmbeddingSet& texts,
                               double scale) {
  if (images.n() != texts.n() || images.d() != texts.d()) {
    throw ShapeError("CLIPScore image set is " + std::to_string(images.n()) + "x" +
                     std::to_string(images.d()) + " but text set is " +
                     std::to_string(texts.n()) + "x" + std::to_string(texts.d()));
  }
  std::vector<double> out(images.n());
  for (std::size_t i = 0; i < images.n(); ++i) {
    try {
      out[i] = ClipScore(images.row(i), texts.row(i), scale);
    } catch (const DataError& e) {
      throw DataError("row " + std::to_string(i) + ": " + e.what());
    }
  }
  return out;
}

double DsgScore(const DsgAnswers& sample) {
  std::vector<std::string> missing;
  for (const auto& q : sample.graph.question_ids) {
    if (!sample.answers.count(q)) missing.push_back(q);
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto& q : missing) list += (list.empty() ? "" : ", ") + q;
    throw DataError("DSG answers missing for questions [" + list + "]");
  }
  for (const auto& [q, _] : sample.answers) {
    if (std::find(sample.graph.question_ids.begin(), sample.graph.question_ids.end(), q) ==
        sample.graph.question_ids.end()) {
      throw DataError("DSG answer for unknown question '" + q + "'");
    }
  }
  if (sample.graph.question_ids.empty()) return 0.0;

  std::map<std::string, bool> effective;
  for (const auto& q : sample.graph.TopologicalOrder()) {
    bool yes = sample.answers.at(q);
    if (auto it = sample.graph.parents.find(q); it != sample.graph.parents.end()) {
      for (const auto& p : it->second) yes = yes && effective.at(p);
    }
    effective[q] = yes;
  }
  std::size_t valid = 0;
  for (const auto& [_, yes] : effective) valid += yes;
  return static_cast<double>(valid) / static_cast<double>(sample.graph.question_ids.size());
}

std::vector<double> DsgScores(std::span<const DsgAnswerRow> answers,
                              std::span<const SampleRecord> records) {
  if (answers.size() != records.size()) {
    throw ShapeError("DSG answers have " + std::to_string(answers.size()) +
                     " rows but metadata has " + std::to_string(records.size()));
  }
  std::vector<double> out(answers.size());
  for (std::size_t i = 0; i < answers.size(); ++i) {
    if (!records[i].dsg) throw DataError("row " + std::to_string(i) + ": metadata has no DSG graph");
    try {
      out[i] = DsgScore(DsgAnswers{*records[i].dsg, answers[i].answers});
    } catch (const DataError& e) {
      throw DataError("row " + std::to_string(i) + ": " + e.what());
    }
  }
  return out;
}

std::vector<double> VqaScores(std::span<const double> probabilities) {
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    if (!(probabilities[i] >= 0.0 && probabilities[i] <= 1.0)) {
      throw DataError("VQAScore probability at index " + std::to_string(i) +
                      " is outside [0, 1]");
    }
  }
  return {probabilities.begin(), probabilities.end()};
}

double Percentile(std::vector<double> values, double p) {
  if (values.empty()) throw InsufficientSamples("percentile of an empty set");
  if (!(p >= 0.0 && p <= 100.0)) throw SpecError("percentile must be within [0, 100]");
  std::sort(values.begin(), values.end());
  const double pos = p / 100.0 * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

std::map<std::string, double> AggregateScores(const ScoreTable& per_sample,
                                              std::span<const SampleRecord> records,
                                              Aggregation aggregation) {
  if (per_sample.scores.size() != records.size()) {
    throw ShapeError("score table has " + std::to_string(per_sample.scores.size()) +
                     " entries but metadata has " + std::to_string(records.size()));
  }
  if (per_sample.scores.empty()) throw InsufficientSamples("group 'ALL' has no samples");
  std::map<std::string, std::vector<double>> members;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const double s = per_sample.scores[i];
    if (!std::isfinite(s)) throw DataError("non-finite score at index " + std::to_string(i));
    members[std::string(kAllGroup)].push_back(s);
    for (const auto& g : records[i].groups) members[g].push_back(s);
  }
  std::map<std::string, double> out;
  for (const auto& [group, values] : members) {
    if (aggregation.percentile) {
      out[group] = Percentile(values, *aggregation.percentile);
    } else {
      double sum = 0.0;
      for (double v : values) sum += v;
      out[group] = sum / static_cast<double>(values.size());
    }
  }
  return out;
}

}  // namespace imgeval
