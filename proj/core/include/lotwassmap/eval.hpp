#pragma once

#include "lotwassmap/common.hpp"
#include "lotwassmap/embedding.hpp"

#include <chrono>
#include <utility>

namespace lotwassmap {

struct AlignmentReport {
  Matrix rotation;  // d x d orthogonal Q with Z ~ Y Q^T (rows are points)
  double relative_error = 0.0;
  double absolute_error = 0.0;
};

/// Orthogonal Procrustes over O(d): min_Q |Z - Q Y|_F with points as rows.
/// Both inputs must be column-centered; errors are reported absolute and relative to |Y|_F.
AlignmentReport procrustes_align(const Matrix& z, const Matrix& y);

/// Subtract column means.
Matrix centered(const Matrix& points);

struct BoundReport {
  double lhs = 0.0;  // achieved min_Q |Z - Q Y|_F
  double rhs = 0.0;  // (1 + sqrt 2) |Y^+| N (tau1 + tau2)
  bool hypothesis_ok = false;  // |Y^+| sqrt(N) (tau1 + tau2)^(1/2) <= 1/sqrt(2)
  double tau1 = 0.0;
  double tau2 = 0.0;
  double pinv_norm = 0.0;        // |Y^+| = 1 / sigma_min(Y)
  double max_deviation = 0.0;    // |Lambda - Delta|_max, Delta from Y
  bool holds() const noexcept { return !hypothesis_ok || lhs <= rhs; }
};

/// Compare an MDS embedding Z of dissimilarities Lambda against truth Y using
/// the MDS perturbation bound. tau1 is supplied by the caller (0 for data on an
/// isometric family); tau2 bounds the entrywise dissimilarity error.
BoundReport check_perturbation_bound(const Matrix& y, const SquaredDistanceMatrix& lambda,
                                     const Matrix& z, double tau1, double tau2);

/// |Lambda - Gamma|_max: observable stand-in for tau2 when Gamma holds exact empirical W2^2.
double max_abs_deviation(const SquaredDistanceMatrix& lambda, const SquaredDistanceMatrix& gamma);

/// Runs a pipeline invocation and fills in its end-to-end wall clock.
template <class Pipeline>
EmbeddingResult instrument(Pipeline&& run) {
  const auto start = std::chrono::steady_clock::now();
  EmbeddingResult res = std::forward<Pipeline>(run)();
  res.metrics.total_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

}  // namespace lotwassmap
