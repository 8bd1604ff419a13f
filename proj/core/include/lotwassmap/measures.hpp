#pragma once

#include "lotwassmap/common.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace lotwassmap {

/// Weighted point cloud: row i of `points` carries mass `weights(i)`.
class EmpiricalMeasure {
public:
  /// Uniform weights 1/k.
  explicit EmpiricalMeasure(Matrix points);
  /// Weights must be positive and sum to one within 1e-12.
  EmpiricalMeasure(Matrix points, Vector weights);

  const Matrix& points() const noexcept { return points_; }
  const Vector& weights() const noexcept { return weights_; }
  Index size() const noexcept { return points_.rows(); }
  Index dim() const noexcept { return points_.cols(); }

private:
  Matrix points_;
  Vector weights_;
};

/// Gaussian N(mean, covariance) with an SPD covariance.
struct GaussianSpec {
  Vector mean;
  Matrix covariance;

  /// Throws NotPositiveDefinite / DimensionMismatch when the spec is unusable.
  void validate() const;
};

struct DatasetDescriptor {
  std::string generator;
  nlohmann::json parameters;
  std::uint64_t seed = 0;
};

/// N sampled measures plus ground-truth parameters and the sampled reference.
struct ManifoldDataset {
  std::vector<EmpiricalMeasure> measures;
  Matrix truth;  // N x d
  EmpiricalMeasure reference;
  DatasetDescriptor descriptor;

  Index size() const noexcept { return static_cast<Index>(measures.size()); }
};

EmpiricalMeasure sample_gaussian(const GaussianSpec& spec, Index k, std::uint64_t seed);

/// G G^T with G an n x n matrix of i.i.d. N(0, scale^2) entries (scale is a standard deviation).
Matrix wishart_noise(double scale, Index n, std::uint64_t seed);

/// Shared parameters for the translation/rotation families.
struct CircleParams {
  Index count = 10;
  double radius = 8.0;
  Matrix base_cov;
  double noise_scale = 0.5;
  Index k = 1000;  // samples per data measure
  Index m = 1000;  // reference samples
};

struct GridParams {
  Index grid_side = 5;
  double lo = -10.0;
  double hi = 10.0;
  Matrix cov;
  double noise_scale = 0.5;
  Index k = 1000;
  Index m = 1000;
};

struct DilationParams {
  Index grid_side = 3;
  double lo = 1.0;
  double hi = 4.0;
  double noise_scale = 0.5;
  Index k = 2500;
  Index m = 1000;
};

/// Gaussians with means 2*pi*i/N around a circle, common covariance.
ManifoldDataset generate_circle_translation(const CircleParams& p, std::uint64_t seed);
/// Means around a circle; covariance rotated by the same angle as the mean.
ManifoldDataset generate_rotation(const CircleParams& p, std::uint64_t seed);
/// Means on a uniform grid_side x grid_side grid over [lo, hi]^2, enumerated row-major.
ManifoldDataset generate_grid_translation(const GridParams& p, std::uint64_t seed);
/// Zero-mean Gaussians with covariance diag(alpha^2, beta^2); truth is the centered (alpha, beta) grid.
ManifoldDataset generate_dilation(const DilationParams& p, std::uint64_t seed);

/// Closed-form W2 between Gaussians (Bures-Wasserstein).
double gaussian_w2(const GaussianSpec& a, const GaussianSpec& b);

/// Symmetric PSD square root via eigendecomposition, eigenvalues clamped at zero.
Matrix psd_sqrt(const Matrix& s);

/// R(theta) * base * R(theta)^T, symmetrized.
Matrix rotated_covariance(const Matrix& base, double theta);
/// diag(alpha^2, beta^2).
Matrix dilation_covariance(double alpha, double beta);

/// Uniformly spaced angles 2*pi*i/N.
std::vector<double> circle_angles(Index count);
/// Uniform 1-D grid of `side` points over [lo, hi]; a single point sits at the center.
std::vector<double> grid_coordinates(Index side, double lo, double hi);

}  // namespace lotwassmap
