// Copyright 2026 The imgeval Authors
// SPDX-License-Identifier: Apache-2.0

// Deterministic synthetic inputs for tests and for trying the CLI.

#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "imgeval/cli/exercise.h"
#include "imgeval/embedding.h"
#include "imgeval/records.h"

namespace imgeval::testing {

// Uniform and normal draws built on raw mt19937_64 output, so streams do not
// depend on the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t Bits() { return engine_(); }
  double Uniform();                               // [0, 1)
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  double Normal();
  std::size_t Below(std::size_t bound);           // [0, bound)
  int Between(int lo, int hi);                    // [lo, hi]

 private:
  std::mt19937_64 engine_;
};

std::vector<std::vector<double>> RandomRows(Rng& rng, std::size_t n, std::size_t d,
                                            double scale = 1.0, double offset = 0.0);
EmbeddingSet ToEmbeddings(const std::vector<std::vector<double>>& rows);
std::vector<std::vector<double>> ToRows(const EmbeddingSet& e);

// Fresh empty directory under the system temp dir.
std::filesystem::path MakeTempDir(std::string_view name);

void WriteText(const std::filesystem::path& path, std::string_view text);

// Writes the inputs and a config.toml for one exercise kind into `dir` and
// returns the config path. Every file has at most 2000 rows.
std::filesystem::path WriteExerciseFixture(const std::filesystem::path& dir,
                                           cli::ExerciseKind kind);

// Unit-square PRDC fixture: real = corners, generated = {(0.1,0),(2,2)}.
void WriteUnitSquareFixture(const std::filesystem::path& dir);

}  // namespace imgeval::testing
