// Copyright 2026 The imgeval Authors
// SPDX-License-Identifier: Apache-2.0

#include "imgeval/cli/compute.h"

#include <algorithm>
#include <span>

#include "imgeval/embedding.h"
#include "imgeval/error.h"
#include "imgeval/records.h"
#include "imgeval/scores.h"

namespace imgeval::cli {

namespace fs = std::filesystem;

namespace {

void Require(const fs::path& path, const char* flag, const MetricSpec& spec, const char* why) {
  if (path.empty()) {
    throw SpecError(std::string(MetricKindName(spec.kind)) + " needs " + flag + " (" + why + ")");
  }
}

template <typename T>
std::vector<T> Pick(std::vector<T> all, const std::optional<std::vector<std::size_t>>& indices,
                    const fs::path& source) {
  if (!indices) return all;
  std::vector<T> out;
  out.reserve(indices->size());
  for (std::size_t i : *indices) {
    if (i >= all.size()) {
      throw DataError(source.string() + ": subsample index " + std::to_string(i) +
                      " is past the last row " + std::to_string(all.size() - 1));
    }
    out.push_back(std::move(all[i]));
  }
  return out;
}

EmbeddingSet LoadRows(const fs::path& path, const std::optional<std::vector<std::size_t>>& indices) {
  EmbeddingSet all = LoadEmbeddings(path);
  if (!indices) return all;
  for (std::size_t i : *indices) {
    if (i >= all.n()) {
      throw DataError(path.string() + ": subsample index " + std::to_string(i) +
                      " is past the last row " + std::to_string(all.n() - 1));
    }
  }
  return all.Select(*indices);
}

std::vector<SampleRecord> LoadRecords(const fs::path& path,
                                      const std::optional<std::vector<std::size_t>>& indices) {
  if (path.empty()) return {};
  return Pick(LoadMetadata(path), indices, path);
}

void CheckAligned(std::size_t rows, const fs::path& rows_path, std::size_t other,
                  const fs::path& other_path) {
  if (rows != other) {
    throw ShapeError(rows_path.string() + " has " + std::to_string(rows) + " rows but " +
                     other_path.string() + " has " + std::to_string(other));
  }
}

// Calls fn(begin, count) over [0, n) in batch_size steps.
template <typename Fn>
void ForEachBatch(std::size_t n, std::size_t batch_size, Fn fn) {
  for (std::size_t begin = 0; begin < n; begin += batch_size) fn(begin, std::min(batch_size, n - begin));
}

std::span<const SampleRecord> Sub(const std::vector<SampleRecord>& records, std::size_t begin,
                                  std::size_t count) {
  if (records.empty()) return {};
  return std::span<const SampleRecord>(records).subspan(begin, count);
}

}  // namespace

void CheckInputs(const MetricSpec& spec, const RunInputs& in) {
  spec.Validate();
  switch (spec.kind) {
    case MetricKind::kFid:
    case MetricKind::kPrdc:
      Require(in.real, "--real", spec, "real embeddings");
      Require(in.generated, "--generated", spec, "generated embeddings");
      if (spec.grouped) {
        Require(in.real_metadata, "--real-metadata", spec, "group tags for --grouped");
        Require(in.metadata, "--metadata", spec, "group tags for --grouped");
      }
      break;
    case MetricKind::kClipScore:
      if (in.scores.empty()) {
        Require(in.clip_image, "--clip-image or --scores", spec, "CLIP image embeddings");
        Require(in.clip_text, "--clip-text", spec, "CLIP text embeddings");
      }
      if (spec.grouped) Require(in.metadata, "--metadata", spec, "group tags for --grouped");
      break;
    case MetricKind::kVqaScore:
      Require(in.scores, "--scores", spec, "per-sample VQAScore probabilities");
      if (spec.grouped) Require(in.metadata, "--metadata", spec, "group tags for --grouped");
      break;
    case MetricKind::kDsg:
      Require(in.dsg_answers, "--dsg-answers", spec, "per-sample question answers");
      Require(in.metadata, "--metadata", spec, "DSG question graphs");
      break;
  }
}

std::vector<ResultRow> ComputeMetric(const MetricSpec& spec, const RunInputs& in,
                                     const ExecutionOptions& options,
                                     const std::vector<std::string>& keep) {
  CheckInputs(spec, in);
  if (options.batch_size == 0) throw SpecError("batch size must be positive");
  MetricState state(spec);
  const auto& idx = in.indices;

  // Metadata is optional for ungrouped marginal and score metrics; when given
  // it must still align with the rows.
  const bool want_gen_records = spec.grouped || spec.kind == MetricKind::kDsg;
  std::vector<SampleRecord> gen_records = want_gen_records ? LoadRecords(in.metadata, idx)
                                                           : std::vector<SampleRecord>{};

  if (IsMarginal(spec.kind)) {
    EmbeddingSet real = LoadRows(in.real, idx);
    EmbeddingSet gen = LoadRows(in.generated, idx);
    std::vector<SampleRecord> real_records =
        spec.grouped ? LoadRecords(in.real_metadata, idx) : std::vector<SampleRecord>{};
    if (spec.grouped) {
      CheckAligned(real.n(), in.real, real_records.size(), in.real_metadata);
      CheckAligned(gen.n(), in.generated, gen_records.size(), in.metadata);
    }
    if (idx) CheckAligned(real.n(), in.real, gen.n(), in.generated);
    ForEachBatch(real.n(), options.batch_size, [&](std::size_t b, std::size_t c) {
      state.UpdateReal(real.Slice(b, c), Sub(real_records, b, c));
    });
    ForEachBatch(gen.n(), options.batch_size, [&](std::size_t b, std::size_t c) {
      state.UpdateGenerated(gen.Slice(b, c), Sub(gen_records, b, c));
    });
  } else if (spec.kind == MetricKind::kDsg) {
    auto answers = Pick(LoadDsgAnswers(in.dsg_answers), idx, in.dsg_answers);
    CheckAligned(answers.size(), in.dsg_answers, gen_records.size(), in.metadata);
    ForEachBatch(answers.size(), options.batch_size, [&](std::size_t b, std::size_t c) {
      state.UpdateDsg(std::span<const DsgAnswerRow>(answers).subspan(b, c), Sub(gen_records, b, c));
    });
  } else if (spec.kind == MetricKind::kClipScore && in.scores.empty()) {
    EmbeddingSet images = LoadRows(in.clip_image, idx);
    EmbeddingSet texts = LoadRows(in.clip_text, idx);
    CheckAligned(images.n(), in.clip_image, texts.n(), in.clip_text);
    if (spec.grouped) CheckAligned(images.n(), in.clip_image, gen_records.size(), in.metadata);
    ForEachBatch(images.n(), options.batch_size, [&](std::size_t b, std::size_t c) {
      state.UpdateClip(images.Slice(b, c), texts.Slice(b, c), Sub(gen_records, b, c));
    });
  } else {
    const ScoreKind kind = spec.kind == MetricKind::kClipScore ? ScoreKind::kClip : ScoreKind::kVqa;
    auto scores = Pick(LoadScoreCsv(in.scores, kind).scores, idx, in.scores);
    if (spec.grouped) CheckAligned(scores.size(), in.scores, gen_records.size(), in.metadata);
    ForEachBatch(scores.size(), options.batch_size, [&](std::size_t b, std::size_t c) {
      state.UpdateScores(std::span<const double>(scores).subspan(b, c), Sub(gen_records, b, c));
    });
  }

  const MetricReport report = state.Compute(options.workers);
  std::vector<ResultRow> rows;
  for (const auto& name : spec.OutputNames()) {
    if (!keep.empty() && std::find(keep.begin(), keep.end(), name) == keep.end()) continue;
    for (const auto& [group, value] : report.at(name)) {
      ResultRow r;
      r.model = in.model;
      r.dataset = in.dataset;
      r.group = group;
      r.hyperparameters = in.hyperparameters;
      r.metric = name;
      r.value = value;
      r.seed = in.seed;
      rows.push_back(std::move(r));
    }
  }
  SortResults(rows);
  return rows;
}

}  // namespace imgeval::cli
