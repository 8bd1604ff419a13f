#include "lotwassmap/eval.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace lotwassmap;

TEST(Procrustes, IdentityAndRotation) {
  std::mt19937_64 rng(11);
  const Matrix y = centered(oracles::gaussian_points(12, 3, rng));
  const AlignmentReport same = procrustes_align(y, y);
  EXPECT_LT(same.absolute_error, 1e-12);
  EXPECT_LT((same.rotation - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-12);

  for (int t = 0; t < 10; ++t) {
    const Matrix q = oracles::random_orthogonal(3, rng);  // includes reflections
    const Matrix z = y * q.transpose();
    const AlignmentReport r = procrustes_align(z, y);
    EXPECT_LT(r.absolute_error, 1e-10);
    EXPECT_LT(r.relative_error, 1e-12);
    EXPECT_LT((r.rotation - q).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LT((r.rotation.transpose() * r.rotation - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Procrustes, ReflectionInTwoDimensions) {
  Matrix y(3, 2);
  y << 1, 0, -0.5, 0.8, -0.5, -0.8;
  Matrix z = y;
  z.col(0) *= -1.0;
  EXPECT_LT(procrustes_align(z, y).absolute_error, 1e-12);
}

TEST(Procrustes, ErrorIsRotationInvariantAndScaleSensitive) {
  std::mt19937_64 rng(12);
  const Matrix y = centered(oracles::gaussian_points(9, 2, rng));
  const Matrix z = centered(y + 0.1 * oracles::gaussian_points(9, 2, rng));
  const double base = procrustes_align(z, y).absolute_error;
  const Matrix q = oracles::random_orthogonal(2, rng);
  EXPECT_NEAR(procrustes_align(z * q.transpose(), y).absolute_error, base, 1e-10);
  const AlignmentReport scaled = procrustes_align(1.5 * y, y);
  EXPECT_NEAR(scaled.absolute_error, 0.5 * y.norm(), 1e-10);
  EXPECT_NEAR(scaled.relative_error, 0.5, 1e-12);
}

TEST(Procrustes, Errors) {
  Matrix y(2, 2);
  y << 1, 0, -1, 0;
  EXPECT_THROW(procrustes_align(Matrix::Zero(3, 2), y), DimensionMismatch);
  EXPECT_THROW(procrustes_align(Matrix::Zero(2, 2), Matrix::Zero(2, 2)), Error);
  Matrix off = y;
  off.array() += 1.0;
  EXPECT_THROW(procrustes_align(off, y), Error);
}

TEST(PerturbationBound, ExactDistancesGiveZero) {
  std::mt19937_64 rng(13);
  const Matrix y = centered(oracles::gaussian_points(10, 2, rng));
  const SquaredDistanceMatrix lambda(oracles::squared_distances(y));
  const Matrix z = mds(lambda, 2).coordinates;
  const BoundReport r = check_perturbation_bound(y, lambda, z, 0.0, 0.0);
  EXPECT_TRUE(r.hypothesis_ok);
  EXPECT_LT(r.lhs, 1e-8);
  EXPECT_EQ(r.rhs, 0.0);
  EXPECT_LT(r.max_deviation, 1e-12);
}

TEST(PerturbationBound, HoldsUnderSmallPerturbations) {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  int tested = 0;
  for (int t = 0; t < 50; ++t) {
    const Index n = 6 + t % 10;
    const Matrix y = centered(5.0 * oracles::gaussian_points(n, 2, rng));
    Matrix noise(n, n);
    for (Index i = 0; i < n; ++i) {
      noise(i, i) = 0.0;
      for (Index j = i + 1; j < n; ++j) noise(i, j) = noise(j, i) = 1e-3 * unif(rng);
    }
    const Matrix lam = (oracles::squared_distances(y) + noise).cwiseMax(0.0);
    const SquaredDistanceMatrix lambda(lam);
    const double tau2 = (lam - oracles::squared_distances(y)).cwiseAbs().maxCoeff();
    const BoundReport r = check_perturbation_bound(y, lambda, mds(lambda, 2).coordinates, 0.0, tau2);
    if (r.hypothesis_ok) {
      ++tested;
      EXPECT_LE(r.lhs, r.rhs);
    }
    EXPECT_TRUE(r.holds());
  }
  EXPECT_GT(tested, 25);
}

TEST(PerturbationBound, ReportsViolatedHypothesis) {
  Matrix y(3, 2);
  y << 0.01, 0, -0.01, 0.001, 0, -0.001;
  const SquaredDistanceMatrix lambda(oracles::squared_distances(y));
  const BoundReport r = check_perturbation_bound(centered(y), lambda, centered(y), 0.0, 1.0);
  EXPECT_FALSE(r.hypothesis_ok);
  EXPECT_TRUE(r.holds());
  EXPECT_THROW(check_perturbation_bound(centered(y), lambda, centered(y), -1.0, 0.0), Error);
}

TEST(MaxAbsDeviation, Basic) {
  Matrix a = Matrix::Zero(2, 2);
  Matrix b = Matrix::Zero(2, 2);
  b(0, 1) = b(1, 0) = 0.25;
  EXPECT_DOUBLE_EQ(max_abs_deviation(SquaredDistanceMatrix(a), SquaredDistanceMatrix(b)), 0.25);
}

TEST(Instrument, FillsWallClock) {
  const EmbeddingResult r = instrument([] {
    EmbeddingResult e;
    e.coordinates = Matrix::Zero(1, 1);
    return e;
  });
  EXPECT_GE(r.metrics.total_seconds, 0.0);
  EXPECT_EQ(r.coordinates.rows(), 1);
}
