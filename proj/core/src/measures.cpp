#include "lotwassmap/measures.hpp"

#include "lotwassmap/rng.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <sstream>

namespace lotwassmap {

namespace {

void check_points(const Matrix& points) {
  if (points.rows() < 1 || points.cols() < 1) {
    throw Error("empirical measure needs at least one point of dimension >= 1");
  }
  if (!points.allFinite()) throw Error("empirical measure has non-finite coordinates");
}

nlohmann::json matrix_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix rotation2(double theta) {
  Matrix r(2, 2);
  r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return r;
}

// Streams: 0 = reference, 1 + i = measure i. Within a measure, the Wishart
// draw and the sampling use separate sub-streams.
constexpr std::uint64_t kReferenceStream = 0;
constexpr std::uint64_t kWishartSub = 1;
constexpr std::uint64_t kSampleSub = 2;

EmpiricalMeasure sample_reference(Index dim, Index m, std::uint64_t seed) {
  GaussianSpec ref{Vector::Zero(dim), Matrix::Identity(dim, dim)};
  return sample_gaussian(ref, m, derive_seed(seed, {kReferenceStream}));
}

EmpiricalMeasure sample_perturbed(const Vector& mean, const Matrix& cov, double noise_scale,
                                  Index k, std::uint64_t seed, Index i) {
  const auto stream = static_cast<std::uint64_t>(i) + 1;
  Matrix perturbed = cov;
  if (noise_scale > 0.0) {
    perturbed += wishart_noise(noise_scale, cov.rows(), derive_seed(seed, {stream, kWishartSub}));
  }
  return sample_gaussian(GaussianSpec{mean, perturbed}, k,
                         derive_seed(seed, {stream, kSampleSub}));
}

void check_counts(Index count, Index k, Index m, const char* who) {
  if (count < 1 || k < 1 || m < 1) {
    throw Error(std::string(who) + ": measure count, k and m must all be >= 1");
  }
}

void check_cov2(const Matrix& cov, const char* who) {
  if (cov.rows() != 2 || cov.cols() != 2) {
    throw DimensionMismatch(std::string(who) + ": covariance must be 2x2");
  }
}

}  // namespace

EmpiricalMeasure::EmpiricalMeasure(Matrix points) : points_(std::move(points)) {
  check_points(points_);
  weights_ = Vector::Constant(points_.rows(), 1.0 / static_cast<double>(points_.rows()));
}

EmpiricalMeasure::EmpiricalMeasure(Matrix points, Vector weights)
    : points_(std::move(points)), weights_(std::move(weights)) {
  check_points(points_);
  if (weights_.size() != points_.rows()) {
    throw DimensionMismatch("empirical measure: weight count differs from point count");
  }
  if (!weights_.allFinite() || (weights_.array() <= 0.0).any()) {
    throw Error("empirical measure: weights must be finite and strictly positive");
  }
  if (std::abs(weights_.sum() - 1.0) > 1e-12) {
    throw InfeasibleWeights("empirical measure: weights must sum to 1");
  }
}

void GaussianSpec::validate() const {
  const Index n = mean.size();
  if (n < 1 || covariance.rows() != n || covariance.cols() != n) {
    throw DimensionMismatch("gaussian: mean and covariance dimensions disagree");
  }
  if (!mean.allFinite() || !covariance.allFinite()) throw Error("gaussian: non-finite parameters");
  if ((covariance - covariance.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw NotPositiveDefinite("gaussian: covariance is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(covariance, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  if (!(lo > 0.0)) {
    std::ostringstream msg;
    msg << "gaussian: covariance is not positive definite (smallest eigenvalue " << lo << ")";
    throw NotPositiveDefinite(msg.str());
  }
}

EmpiricalMeasure sample_gaussian(const GaussianSpec& spec, Index k, std::uint64_t seed) {
  if (k < 1) throw Error("sample_gaussian: k must be >= 1");
  spec.validate();
  const Index n = spec.mean.size();
  Eigen::LLT<Matrix> llt(spec.covariance);
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefinite("sample_gaussian: Cholesky factorization failed");
  }
  const Matrix l = llt.matrixL();

  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix z(k, n);
  for (Index i = 0; i < k; ++i) {
    for (Index c = 0; c < n; ++c) z(i, c) = normal(rng);
  }
  Matrix points = z * l.transpose();
  points.rowwise() += spec.mean.transpose();
  return EmpiricalMeasure(std::move(points));
}

Matrix wishart_noise(double scale, Index n, std::uint64_t seed) {
  if (!(scale >= 0.0)) throw Error("wishart_noise: scale must be >= 0");
  if (n < 1) throw Error("wishart_noise: dimension must be >= 1");
  if (scale == 0.0) return Matrix::Zero(n, n);
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, scale);
  Matrix g(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) g(i, j) = normal(rng);
  }
  Matrix w = g * g.transpose();
  // Exact symmetry; the product can differ in the last bit across the diagonal.
  return 0.5 * (w + w.transpose());
}

Matrix rotated_covariance(const Matrix& base, double theta) {
  check_cov2(base, "rotated_covariance");
  const Matrix r = rotation2(theta);
  const Matrix cov = r * base * r.transpose();
  return 0.5 * (cov + cov.transpose());
}

Matrix dilation_covariance(double alpha, double beta) {
  Matrix cov = Matrix::Zero(2, 2);
  cov(0, 0) = alpha * alpha;
  cov(1, 1) = beta * beta;
  return cov;
}

std::vector<double> circle_angles(Index count) {
  std::vector<double> out(static_cast<std::size_t>(count));
  for (Index i = 0; i < count; ++i) {
    out[static_cast<std::size_t>(i)] =
        2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(count);
  }
  return out;
}

std::vector<double> grid_coordinates(Index side, double lo, double hi) {
  std::vector<double> out(static_cast<std::size_t>(side));
  if (side == 1) {
    out[0] = 0.5 * (lo + hi);
    return out;
  }
  for (Index t = 0; t < side; ++t) {
    out[static_cast<std::size_t>(t)] =
        lo + (hi - lo) * static_cast<double>(t) / static_cast<double>(side - 1);
  }
  return out;
}

ManifoldDataset generate_circle_translation(const CircleParams& p, std::uint64_t seed) {
  check_counts(p.count, p.k, p.m, "circle-translation");
  check_cov2(p.base_cov, "circle-translation");
  GaussianSpec{Vector::Zero(2), p.base_cov}.validate();

  const auto angles = circle_angles(p.count);
  Matrix truth(p.count, 2);
  std::vector<EmpiricalMeasure> measures;
  measures.reserve(static_cast<std::size_t>(p.count));
  for (Index i = 0; i < p.count; ++i) {
    const double th = angles[static_cast<std::size_t>(i)];
    truth.row(i) << p.radius * std::cos(th), p.radius * std::sin(th);
    measures.push_back(sample_perturbed(truth.row(i).transpose(), p.base_cov, p.noise_scale, p.k,
                                        seed, i));
  }
  DatasetDescriptor desc{"circle-translation",
                         {{"N", p.count},
                          {"radius", p.radius},
                          {"base_cov", matrix_json(p.base_cov)},
                          {"noise", p.noise_scale},
                          {"k", p.k},
                          {"m", p.m}},
                         seed};
  return ManifoldDataset{std::move(measures), std::move(truth), sample_reference(2, p.m, seed),
                         std::move(desc)};
}

ManifoldDataset generate_rotation(const CircleParams& p, std::uint64_t seed) {
  check_counts(p.count, p.k, p.m, "rotation");
  check_cov2(p.base_cov, "rotation");
  GaussianSpec{Vector::Zero(2), p.base_cov}.validate();

  const auto angles = circle_angles(p.count);
  Matrix truth(p.count, 2);
  std::vector<EmpiricalMeasure> measures;
  measures.reserve(static_cast<std::size_t>(p.count));
  for (Index i = 0; i < p.count; ++i) {
    const double th = angles[static_cast<std::size_t>(i)];
    truth.row(i) << p.radius * std::cos(th), p.radius * std::sin(th);
    const Matrix cov = rotated_covariance(p.base_cov, th);
    measures.push_back(
        sample_perturbed(truth.row(i).transpose(), cov, p.noise_scale, p.k, seed, i));
  }
  DatasetDescriptor desc{"rotation",
                         {{"N", p.count},
                          {"radius", p.radius},
                          {"base_cov", matrix_json(p.base_cov)},
                          {"noise", p.noise_scale},
                          {"k", p.k},
                          {"m", p.m}},
                         seed};
  return ManifoldDataset{std::move(measures), std::move(truth), sample_reference(2, p.m, seed),
                         std::move(desc)};
}

ManifoldDataset generate_grid_translation(const GridParams& p, std::uint64_t seed) {
  check_counts(p.grid_side, p.k, p.m, "grid-translation");
  check_cov2(p.cov, "grid-translation");
  GaussianSpec{Vector::Zero(2), p.cov}.validate();

  const auto coords = grid_coordinates(p.grid_side, p.lo, p.hi);
  const Index count = p.grid_side * p.grid_side;
  Matrix truth(count, 2);
  std::vector<EmpiricalMeasure> measures;
  measures.reserve(static_cast<std::size_t>(count));
  for (Index r = 0; r < p.grid_side; ++r) {
    for (Index c = 0; c < p.grid_side; ++c) {
      const Index i = r * p.grid_side + c;
      truth.row(i) << coords[static_cast<std::size_t>(c)], coords[static_cast<std::size_t>(r)];
      measures.push_back(
          sample_perturbed(truth.row(i).transpose(), p.cov, p.noise_scale, p.k, seed, i));
    }
  }
  DatasetDescriptor desc{"grid-translation",
                         {{"grid_side", p.grid_side},
                          {"domain", {p.lo, p.hi}},
                          {"cov", matrix_json(p.cov)},
                          {"noise", p.noise_scale},
                          {"k", p.k},
                          {"m", p.m}},
                         seed};
  return ManifoldDataset{std::move(measures), std::move(truth), sample_reference(2, p.m, seed),
                         std::move(desc)};
}

ManifoldDataset generate_dilation(const DilationParams& p, std::uint64_t seed) {
  check_counts(p.grid_side, p.k, p.m, "dilation");
  if (!(p.lo > 0.0) || !(p.hi > 0.0)) throw Error("dilation: scale factors must be positive");

  const auto coords = grid_coordinates(p.grid_side, p.lo, p.hi);
  const Index count = p.grid_side * p.grid_side;
  Matrix truth(count, 2);
  std::vector<EmpiricalMeasure> measures;
  measures.reserve(static_cast<std::size_t>(count));
  for (Index r = 0; r < p.grid_side; ++r) {
    for (Index c = 0; c < p.grid_side; ++c) {
      const Index i = r * p.grid_side + c;
      const double alpha = coords[static_cast<std::size_t>(c)];
      const double beta = coords[static_cast<std::size_t>(r)];
      truth.row(i) << alpha, beta;
      const Matrix cov = dilation_covariance(alpha, beta);
      measures.push_back(sample_perturbed(Vector::Zero(2), cov, p.noise_scale, p.k, seed, i));
    }
  }
  truth.rowwise() -= truth.colwise().mean();
  DatasetDescriptor desc{"dilation",
                         {{"grid_side", p.grid_side},
                          {"domain", {p.lo, p.hi}},
                          {"noise", p.noise_scale},
                          {"k", p.k},
                          {"m", p.m}},
                         seed};
  return ManifoldDataset{std::move(measures), std::move(truth), sample_reference(2, p.m, seed),
                         std::move(desc)};
}

Matrix psd_sqrt(const Matrix& s) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(s);
  Vector lam = eig.eigenvalues();
  for (Index i = 0; i < lam.size(); ++i) lam(i) = lam(i) > 1e-12 ? std::sqrt(lam(i)) : 0.0;
  return eig.eigenvectors() * lam.asDiagonal() * eig.eigenvectors().transpose();
}

double gaussian_w2(const GaussianSpec& a, const GaussianSpec& b) {
  a.validate();
  b.validate();
  if (a.mean.size() != b.mean.size()) throw DimensionMismatch("gaussian_w2: dimensions differ");
  const Matrix sb = psd_sqrt(b.covariance);
  Matrix inner = sb * a.covariance * sb;
  inner = 0.5 * (inner + inner.transpose());
  const Matrix cross = psd_sqrt(inner);
  const double bures = (a.covariance + b.covariance - 2.0 * cross).trace();
  const double sq = (a.mean - b.mean).squaredNorm() + std::max(0.0, bures);
  return std::sqrt(sq);
}

}  // namespace lotwassmap
