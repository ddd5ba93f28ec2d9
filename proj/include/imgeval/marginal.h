// Copyright 2026 The imgeval Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "imgeval/embedding.h"

namespace imgeval {

// Neighbor count used to build k-NN manifolds unless overridden.
inline constexpr int kDefaultManifoldK = 3;

struct GaussianMoments {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;  // unbiased (n - 1 divisor), exactly symmetric
  std::size_t n = 0;
};

GaussianMoments FitGaussian(const EmbeddingSet& embeddings);

// Squared Frechet distance between two Gaussians:
//   |mu_a - mu_b|^2 + Tr(S_a + S_b - 2 (S_a^1/2 S_b S_a^1/2)^1/2)
// Both square roots come from symmetric eigendecompositions. Eigenvalues in
// [-1e-10 * max|lambda|, 0) are treated as zero; anything more negative is a
// NumericalError. The result is clamped to >= 0.
double FrechetDistance(const GaussianMoments& a, const GaussianMoments& b);

// Euclidean distance, accumulated over dimensions in index order. Every
// distance in this module goes through this function.
double EuclideanDistance(std::span<const double> a, std::span<const double> b);

// radii[i] is the distance from row i to its k-th nearest other row. Rows are
// compared in tiles so memory stays O(tile^2).
std::vector<double> KnnRadii(const EmbeddingSet& embeddings, int k, int workers = 1);

struct ManifoldModel {
  EmbeddingSet support;
  std::vector<double> radii;
  int k = kDefaultManifoldK;
};

ManifoldModel BuildManifold(EmbeddingSet support, int k, int workers = 1);

struct PrdcResult {
  double precision = 0.0;
  double recall = 0.0;
  double density = 0.0;
  double coverage = 0.0;

  friend bool operator==(const PrdcResult&, const PrdcResult&) = default;
};

// Ball membership is inclusive: a point x lies in the ball around c when
// EuclideanDistance(x, c) <= radius(c). Results do not depend on `workers`.
PrdcResult ComputePrdc(const EmbeddingSet& real, const EmbeddingSet& generated, int k,
                       int workers = 1);

}  // namespace imgeval
