// Copyright 2026 The imgeval Authors
// SPDX-License-Identifier: Apache-2.0

#include "imgeval/marginal.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "imgeval/error.h"
#include "imgeval/parallel.h"

namespace imgeval {

namespace {

constexpr std::size_t kTile = 128;
constexpr double kNegativeEigenTolerance = 1e-10;

// Eigenvalues of a symmetric matrix with small negatives clamped to zero.
// Retries once with a diagonal jitter if the solver does not converge.
Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> SymmetricEigen(const Eigen::MatrixXd& m,
                                                              const char* what) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
  if (solver.info() != Eigen::Success) {
    const double scale = std::max(m.diagonal().cwiseAbs().maxCoeff(), 1.0);
    Eigen::MatrixXd jittered = m;
    jittered.diagonal().array() += 1e-10 * scale;
    solver.compute(jittered);
    if (solver.info() != Eigen::Success) {
      throw NumericalError(std::string("eigendecomposition of ") + what + " did not converge");
    }
  }
  return solver;
}

Eigen::VectorXd ClampedEigenvalues(const Eigen::VectorXd& values, const char* what) {
  const double max_abs = values.size() ? values.cwiseAbs().maxCoeff() : 0.0;
  Eigen::VectorXd out = values;
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    if (out[i] < 0.0) {
      if (out[i] < -kNegativeEigenTolerance * max_abs) {
        throw NumericalError(std::string(what) + " has eigenvalue " + std::to_string(out[i]) +
                             " below tolerance; matrix is not positive semi-definite");
      }
      out[i] = 0.0;
    }
  }
  return out;
}

Eigen::MatrixXd Symmetrize(const Eigen::MatrixXd& m) { return 0.5 * (m + m.transpose()); }

void CheckSamples(const EmbeddingSet& e, int k, const char* side) {
  if (k < 1) throw SpecError("manifold k must be >= 1, got " + std::to_string(k));
  if (e.n() <= static_cast<std::size_t>(k)) {
    throw InsufficientSamples(std::string(side) + " set has " + std::to_string(e.n()) +
                              " rows; k=" + std::to_string(k) + " needs at least " +
                              std::to_string(k + 1));
  }
}

// k smallest values seen so far, ascending.
class SmallestK {
 public:
  explicit SmallestK(std::size_t k) : k_(k) { values_.reserve(k + 1); }
  void Offer(double v) {
    if (values_.size() == k_ && v >= values_.back()) return;
    values_.insert(std::upper_bound(values_.begin(), values_.end(), v), v);
    if (values_.size() > k_) values_.pop_back();
  }
  double Kth() const { return values_.back(); }

 private:
  std::size_t k_;
  std::vector<double> values_;
};

// Fills tile[(i - a0) * kTile + (j - b0)] with distances between rows of a
// and b.
void DistanceTile(const EmbeddingSet& a, std::size_t a0, std::size_t a1,
                  const EmbeddingSet& b, std::size_t b0, std::size_t b1,
                  std::vector<double>& tile) {
  for (std::size_t i = a0; i < a1; ++i) {
    auto row_a = a.row(i);
    double* out = tile.data() + (i - a0) * kTile;
    for (std::size_t j = b0; j < b1; ++j) out[j - b0] = EuclideanDistance(row_a, b.row(j));
  }
}

std::size_t NumTiles(std::size_t n) { return (n + kTile - 1) / kTile; }

}  // namespace

GaussianMoments FitGaussian(const EmbeddingSet& embeddings) {
  if (embeddings.n() < 2) {
    throw InsufficientSamples("Gaussian fit needs at least 2 rows, got " +
                              std::to_string(embeddings.n()));
  }
  const auto& x = embeddings.matrix();
  GaussianMoments m;
  m.n = embeddings.n();
  m.mean = x.colwise().mean().transpose();
  Eigen::MatrixXd centered = x.rowwise() - m.mean.transpose();
  m.cov = Symmetrize((centered.transpose() * centered) / static_cast<double>(m.n - 1));
  return m;
}

double FrechetDistance(const GaussianMoments& a, const GaussianMoments& b) {
  const auto d = a.mean.size();
  if (b.mean.size() != d || a.cov.rows() != d || a.cov.cols() != d || b.cov.rows() != d ||
      b.cov.cols() != d) {
    throw ShapeError("Frechet distance dimension mismatch: " + std::to_string(a.mean.size()) +
                     " vs " + std::to_string(b.mean.size()));
  }
  const double mean_term = (a.mean - b.mean).squaredNorm();

  auto eig_a = SymmetricEigen(Symmetrize(a.cov), "covariance");
  Eigen::VectorXd lambda_a = ClampedEigenvalues(eig_a.eigenvalues(), "covariance");
  Eigen::MatrixXd sqrt_a = eig_a.eigenvectors() * lambda_a.cwiseSqrt().asDiagonal() *
                           eig_a.eigenvectors().transpose();

  Eigen::MatrixXd inner = Symmetrize(sqrt_a * b.cov * sqrt_a);
  auto eig_inner = SymmetricEigen(inner, "covariance product");
  Eigen::VectorXd lambda_inner = ClampedEigenvalues(eig_inner.eigenvalues(), "covariance product");

  const double trace_term = a.cov.trace() + b.cov.trace() - 2.0 * lambda_inner.cwiseSqrt().sum();
  return std::max(0.0, mean_term + trace_term);
}

double EuclideanDistance(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double t = a[j] - b[j];
    sum += t * t;
  }
  return std::sqrt(sum);
}

std::vector<double> KnnRadii(const EmbeddingSet& embeddings, int k, int workers) {
  CheckSamples(embeddings, k, "support");
  const std::size_t n = embeddings.n();
  std::vector<double> radii(n);
  ParallelFor(NumTiles(n), workers, [&](std::size_t qt) {
    const std::size_t q0 = qt * kTile, q1 = std::min(n, q0 + kTile);
    std::vector<SmallestK> best(q1 - q0, SmallestK(static_cast<std::size_t>(k)));
    std::vector<double> tile(kTile * kTile);
    for (std::size_t rt = 0; rt < NumTiles(n); ++rt) {
      const std::size_t r0 = rt * kTile, r1 = std::min(n, r0 + kTile);
      DistanceTile(embeddings, q0, q1, embeddings, r0, r1, tile);
      for (std::size_t i = q0; i < q1; ++i) {
        const double* dist = tile.data() + (i - q0) * kTile;
        for (std::size_t j = r0; j < r1; ++j) {
          if (j != i) best[i - q0].Offer(dist[j - r0]);
        }
      }
    }
    for (std::size_t i = q0; i < q1; ++i) radii[i] = best[i - q0].Kth();
  });
  return radii;
}

ManifoldModel BuildManifold(EmbeddingSet support, int k, int workers) {
  auto radii = KnnRadii(support, k, workers);
  return ManifoldModel{std::move(support), std::move(radii), k};
}

PrdcResult ComputePrdc(const EmbeddingSet& real, const EmbeddingSet& generated, int k,
                       int workers) {
  if (real.d() != generated.d()) {
    throw ShapeError("real and generated dimensions differ: " + std::to_string(real.d()) +
                     " vs " + std::to_string(generated.d()));
  }
  CheckSamples(real, k, "real");
  CheckSamples(generated, k, "generated");
  const std::vector<double> real_radii = KnnRadii(real, k, workers);
  const std::vector<double> gen_radii = KnnRadii(generated, k, workers);
  const std::size_t n = real.n(), m = generated.n();

  // Per generated row: number of real balls containing it. Per real row:
  // whether some generated point is inside its ball (coverage), and whether it
  // lies inside some generated ball (recall). Each generated tile is owned by
  // one task; real flags are OR-merged afterwards, so the result is
  // independent of scheduling.
  std::vector<std::size_t> gen_hits(m, 0);
  const std::size_t gen_tiles = NumTiles(m);
  std::vector<std::vector<char>> covered(gen_tiles), recalled(gen_tiles);
  ParallelFor(gen_tiles, workers, [&](std::size_t gt) {
    const std::size_t g0 = gt * kTile, g1 = std::min(m, g0 + kTile);
    std::vector<char>& cov = covered[gt];
    std::vector<char>& rec = recalled[gt];
    cov.assign(n, 0);
    rec.assign(n, 0);
    std::vector<double> tile(kTile * kTile);
    for (std::size_t rt = 0; rt < NumTiles(n); ++rt) {
      const std::size_t r0 = rt * kTile, r1 = std::min(n, r0 + kTile);
      DistanceTile(generated, g0, g1, real, r0, r1, tile);
      for (std::size_t j = g0; j < g1; ++j) {
        const double* dist = tile.data() + (j - g0) * kTile;
        for (std::size_t i = r0; i < r1; ++i) {
          const double dji = dist[i - r0];
          if (dji <= real_radii[i]) {
            ++gen_hits[j];
            cov[i] = 1;
          }
          if (dji <= gen_radii[j]) rec[i] = 1;
        }
      }
    }
  });

  std::size_t precise = 0, hits = 0;
  for (std::size_t c : gen_hits) {
    precise += c > 0;
    hits += c;
  }
  std::size_t covered_count = 0, recalled_count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    bool c = false, r = false;
    for (std::size_t t = 0; t < gen_tiles; ++t) {
      c = c || covered[t][i];
      r = r || recalled[t][i];
    }
    covered_count += c;
    recalled_count += r;
  }

  PrdcResult out;
  out.precision = static_cast<double>(precise) / static_cast<double>(m);
  out.recall = static_cast<double>(recalled_count) / static_cast<double>(n);
  out.density = static_cast<double>(hits) / (static_cast<double>(k) * static_cast<double>(m));
  out.coverage = static_cast<double>(covered_count) / static_cast<double>(n);
  return out;
}

}  // namespace imgeval
