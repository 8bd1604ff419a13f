#include "lotwassmap/embedding.hpp"
#include "lotwassmap/eval.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace lotwassmap;

namespace {

Matrix circle_cov() {
  Matrix c(2, 2);
  c << 1.0, -0.5, -0.5, 1.0;
  return c;
}

double max_distance_gap(const Matrix& a, const Matrix& b) {
  return (oracles::squared_distances(a).cwiseSqrt() - oracles::squared_distances(b).cwiseSqrt())
      .cwiseAbs()
      .maxCoeff();
}

ManifoldDataset small_circle(Index count, Index samples, std::uint64_t seed) {
  return generate_circle_translation({count, 8.0, circle_cov(), 0.5, samples, samples}, seed);
}

}  // namespace

TEST(SquaredDistanceMatrix, Validation) {
  EXPECT_THROW(SquaredDistanceMatrix(Matrix::Zero(2, 3)), DimensionMismatch);
  Matrix asym = Matrix::Zero(2, 2);
  asym(0, 1) = 1.0;
  EXPECT_THROW(SquaredDistanceMatrix{asym}, Error);
  Matrix diag = Matrix::Identity(2, 2);
  EXPECT_THROW(SquaredDistanceMatrix{diag}, Error);
  Matrix neg = Matrix::Zero(2, 2);
  neg(0, 1) = neg(1, 0) = -1.0;
  EXPECT_THROW(SquaredDistanceMatrix{neg}, Error);
}

TEST(DoubleCenter, Examples) {
  EXPECT_EQ(double_center(SquaredDistanceMatrix(Matrix::Zero(3, 3))), Matrix::Zero(3, 3));
  Matrix d(2, 2);
  d << 0, 4, 4, 0;
  Matrix expected(2, 2);
  expected << 1, -1, -1, 1;
  EXPECT_LT((double_center(SquaredDistanceMatrix(d)) - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(DoubleCenter, AnnihilatesOnes) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 10; ++t) {
    const Matrix pts = oracles::gaussian_points(4 + t, 3, rng);
    const Matrix b = double_center(SquaredDistanceMatrix(oracles::squared_distances(pts)));
    EXPECT_LT((b * Vector::Ones(b.rows())).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_EQ(b, b.transpose());
  }
}

TEST(Mds, CollinearPoints) {
  Matrix pts(3, 1);
  pts << 0, 1, 3;
  const EmbeddingResult r = mds(SquaredDistanceMatrix(oracles::squared_distances(pts)), 1);
  EXPECT_NEAR(std::abs(r.coordinates(0, 0) - r.coordinates(1, 0)), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(r.coordinates(1, 0) - r.coordinates(2, 0)), 2.0, 1e-12);
  EXPECT_NEAR(std::abs(r.coordinates(0, 0) - r.coordinates(2, 0)), 3.0, 1e-12);
  EXPECT_EQ(r.method, "mds");
}

TEST(Mds, UnitSquare) {
  Matrix sq(4, 2);
  sq << 0, 0, 1, 0, 1, 1, 0, 1;
  const EmbeddingResult r = mds(SquaredDistanceMatrix(oracles::squared_distances(sq)), 2);
  EXPECT_LE(procrustes_align(r.coordinates, centered(sq)).absolute_error, 1e-8);
  EXPECT_LE(max_distance_gap(r.coordinates, sq), 1e-12);
}

TEST(Mds, YoungHouseholderExactRecovery) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 20; ++t) {
    const Index d = 1 + t % 5;
    const Index n = d + 2 + (t * 7) % 40;
    const Matrix pts = oracles::gaussian_points(n, d, rng);
    const EmbeddingResult r = mds(SquaredDistanceMatrix(oracles::squared_distances(pts)), d);
    EXPECT_LE(procrustes_align(r.coordinates, centered(pts)).absolute_error, 1e-8);
    EXPECT_LT(r.coordinates.colwise().mean().cwiseAbs().maxCoeff(), 1e-9);
    for (Index i = 1; i < d; ++i) EXPECT_GE(r.singular_values(i - 1), r.singular_values(i));
  }
}

TEST(Mds, ClampsNegativeEigenvalues) {
  // Violates the triangle inequality, so B is indefinite.
  Matrix d(3, 3);
  d << 0, 1, 9, 1, 0, 1, 9, 1, 0;
  const EmbeddingResult r = mds(SquaredDistanceMatrix(d), 2);
  EXPECT_GT(r.negative_eigenvalue_mass, 0.0);
  EXPECT_GE(r.singular_values.minCoeff(), 0.0);
}

TEST(Mds, RejectsBadDimension) {
  const SquaredDistanceMatrix d(Matrix::Zero(3, 3));
  EXPECT_THROW(mds(d, 3), Error);
  EXPECT_THROW(mds(d, 0), Error);
}

TEST(FixColumnSigns, LargestMagnitudeEntryNonnegative) {
  Matrix v(3, 2);
  v << 0.1, -0.5, -0.9, 0.5, 0.2, 0.3;
  fix_column_signs(v);
  EXPECT_GT(v(1, 0), 0.0);
  EXPECT_GT(v(0, 1), 0.0);  // tie between rows 0 and 1 goes to row 0
}

TEST(LotWassmap, IdenticalMeasuresEmbedAtOrigin) {
  ManifoldDataset d = small_circle(1, 40, 3);
  const EmpiricalMeasure mu = d.measures[0];
  d.measures = {mu, mu, mu, mu};
  d.truth = Matrix::Zero(4, 2);
  const EmbeddingResult r = lot_wassmap(d, SolverConfig::exact(), 2);
  EXPECT_LT(r.coordinates.cwiseAbs().maxCoeff(), 1e-12);
  const EmbeddingResult w = wassmap(d, SolverConfig::exact(), 2);
  EXPECT_LT(w.coordinates.cwiseAbs().maxCoeff(), 1e-6);
}

TEST(LotWassmap, EquivalentToMdsOnLotDistances) {
  const ManifoldDataset d = small_circle(10, 120, 4);
  for (const SolverConfig& solver : {SolverConfig::exact(), SolverConfig::entropic(1.0)}) {
    const auto maps = compute_transport_maps(d, solver);
    const EmbeddingResult direct = embed_transport_maps(maps, 2);
    const EmbeddingResult via_mds = mds(SquaredDistanceMatrix(lot_squared_distances(maps)), 2);
    EXPECT_LE(procrustes_align(direct.coordinates, via_mds.coordinates).absolute_error, 1e-8);
    EXPECT_LT((direct.singular_values - via_mds.singular_values).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(LotWassmap, SolveCountsAndMetadata) {
  const ManifoldDataset d = small_circle(6, 60, 5);
  const EmbeddingResult lot = lot_wassmap(d, SolverConfig::exact(), 2);
  EXPECT_EQ(lot.metrics.ot_solve_count, 6);
  EXPECT_EQ(lot.method, "lot-wassmap(exact)");
  EXPECT_EQ(lot.coordinates.rows(), 6);
  EXPECT_LT(lot.coordinates.colwise().mean().cwiseAbs().maxCoeff(), 1e-9);
  const EmbeddingResult base = wassmap(d, SolverConfig::exact(), 2);
  EXPECT_EQ(base.metrics.ot_solve_count, 15);
  const EmbeddingResult sk = lot_wassmap(d, SolverConfig::entropic(1.0), 2);
  EXPECT_EQ(sk.metrics.ot_solve_count, 6);
  EXPECT_GT(sk.metrics.sinkhorn_iterations, 0);
  EXPECT_EQ(sk.method, "lot-wassmap(sinkhorn-1)");
  EXPECT_THROW(lot_wassmap(d, SolverConfig::exact(), 6), Error);
}

TEST(Wassmap, TwoMeasureGeometry) {
  ManifoldDataset d = small_circle(2, 80, 6);
  const EmbeddingResult r = wassmap(d, SolverConfig::exact(), 1);
  const double w2 = wasserstein2_empirical(d.measures[0], d.measures[1]);
  EXPECT_NEAR(std::abs(r.coordinates(0, 0) - r.coordinates(1, 0)), w2, 1e-9);
}

TEST(Wassmap, AgreesWithLotWassmapOnTranslations) {
  const ManifoldDataset d = small_circle(10, 300, 7);
  const EmbeddingResult lot = lot_wassmap(d, SolverConfig::exact(), 2);
  const EmbeddingResult base = wassmap(d, SolverConfig::exact(), 2);
  const Matrix truth = centered(d.truth);
  // Both recover the circle; they agree with each other more closely than either matches truth.
  EXPECT_LT(procrustes_align(lot.coordinates, truth).relative_error, 0.1);
  EXPECT_LT(procrustes_align(base.coordinates, truth).relative_error, 0.1);
  EXPECT_LT(procrustes_align(lot.coordinates, base.coordinates).relative_error, 0.05);
}

TEST(LotWassmap, PermutationEquivariance) {
  const ManifoldDataset d = small_circle(7, 80, 8);
  std::vector<std::size_t> perm(7);
  std::iota(perm.begin(), perm.end(), 0);
  std::reverse(perm.begin(), perm.end());
  std::swap(perm[1], perm[4]);
  ManifoldDataset shuffled = d;
  for (std::size_t i = 0; i < perm.size(); ++i) shuffled.measures[i] = d.measures[perm[i]];
  const Matrix z = lot_wassmap(d, SolverConfig::exact(), 2).coordinates;
  const Matrix zp = lot_wassmap(shuffled, SolverConfig::exact(), 2).coordinates;
  Matrix z_reordered(7, 2);
  for (std::size_t i = 0; i < perm.size(); ++i) z_reordered.row(static_cast<Index>(i)) = z.row(static_cast<Index>(perm[i]));
  EXPECT_LT(max_distance_gap(z_reordered, zp), 1e-9);
}

TEST(LotWassmap, RotatingEverythingPreservesLotDistances) {
  std::mt19937_64 rng(9);
  const ManifoldDataset d = small_circle(5, 60, 10);
  const Matrix rot = oracles::random_orthogonal(2, rng);
  ManifoldDataset rotated = d;
  for (auto& mu : rotated.measures) mu = EmpiricalMeasure(Matrix(mu.points() * rot.transpose()));
  rotated.reference = EmpiricalMeasure(Matrix(d.reference.points() * rot.transpose()));
  const Matrix l0 = lot_squared_distances(compute_transport_maps(d, SolverConfig::exact()));
  const Matrix l1 = lot_squared_distances(compute_transport_maps(rotated, SolverConfig::exact()));
  EXPECT_LT((l0 - l1).cwiseAbs().maxCoeff(), 1e-8);
}
