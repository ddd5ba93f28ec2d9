// Copyright 2026 The imgeval Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace imgeval {

using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// An N x D matrix of finite feature vectors. Always holds at least one row and
// one column; construction validates every entry.
class EmbeddingSet {
 public:
  explicit EmbeddingSet(RowMatrix data);

  // Row-major values, n * d of them.
  static EmbeddingSet FromValues(std::size_t n, std::size_t d,
                                 std::span<const double> values);

  std::size_t n() const { return static_cast<std::size_t>(data_.rows()); }
  std::size_t d() const { return static_cast<std::size_t>(data_.cols()); }

  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * d(), d()};
  }
  const RowMatrix& matrix() const { return data_; }

  // Rows [begin, begin + count).
  EmbeddingSet Slice(std::size_t begin, std::size_t count) const;
  // Rows in the given order; indices may repeat.
  EmbeddingSet Select(std::span<const std::size_t> indices) const;

  friend bool operator==(const EmbeddingSet& a, const EmbeddingSet& b) {
    return a.data_.rows() == b.data_.rows() && a.data_.cols() == b.data_.cols() &&
           a.data_ == b.data_;
  }

 private:
  RowMatrix data_;
};

// Row-wise concatenation; all parts must share d.
EmbeddingSet Concatenate(std::span<const EmbeddingSet> parts);

enum class NpyDtype { kFloat32, kFloat64 };

// Reads the .npy v1.0 subset: little-endian <f4 / <f8, C order, 2-D shape.
EmbeddingSet LoadEmbeddings(const std::filesystem::path& path);
EmbeddingSet ParseNpy(std::string_view bytes);

// kFloat32 rounds each value to the nearest float.
void WriteEmbeddings(const EmbeddingSet& embeddings,
                     const std::filesystem::path& path,
                     NpyDtype dtype = NpyDtype::kFloat64);
std::string EncodeNpy(const EmbeddingSet& embeddings, NpyDtype dtype);

}  // namespace imgeval
