// Copyright 2026 The imgeval Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "imgeval/metric_engine.h"
#include "imgeval/results.h"

namespace imgeval::cli {

// Input files for one (model, dataset) evaluation. Empty paths are absent.
// Generated-side files (generated, metadata, clip_*, scores, dsg_answers) are
// row-aligned with each other.
struct RunInputs {
  std::string model = "model";
  std::string dataset = "dataset";
  Hyperparameters hyperparameters;
  std::optional<std::int64_t> seed;  // copied into the seed column

  std::filesystem::path real;
  std::filesystem::path real_metadata;
  std::filesystem::path generated;
  std::filesystem::path metadata;
  std::filesystem::path clip_image;
  std::filesystem::path clip_text;
  std::filesystem::path scores;  // clipscore or vqascore per-sample CSV
  std::filesystem::path dsg_answers;

  // Row subset applied to every input before streaming; real and generated
  // sides must then have equal length.
  std::optional<std::vector<std::size_t>> indices;
};

struct ExecutionOptions {
  std::size_t batch_size = 1024;
  int workers = 1;
};

// Throws SpecError naming the first missing input `spec` needs.
void CheckInputs(const MetricSpec& spec, const RunInputs& inputs);

// Loads the inputs, streams them through a MetricState in batches and returns
// one row per (output metric, group). `keep` limits the emitted metric names.
std::vector<ResultRow> ComputeMetric(const MetricSpec& spec, const RunInputs& inputs,
                                     const ExecutionOptions& options,
                                     const std::vector<std::string>& keep = {});

}  // namespace imgeval::cli
