#include "lotwassmap/embedding.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <chrono>
#include <cmath>
#include <sstream>

namespace lotwassmap {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void check_dim(Index dim, Index count) {
  if (dim < 1 || dim >= count) {
    std::ostringstream msg;
    msg << "embedding dimension " << dim << " must satisfy 1 <= d < N (N = " << count << ")";
    throw Error(msg.str());
  }
}

}  // namespace

SquaredDistanceMatrix::SquaredDistanceMatrix(Matrix values) : values_(std::move(values)) {
  if (values_.rows() != values_.cols() || values_.rows() < 1) {
    throw DimensionMismatch("squared distance matrix must be square and non-empty");
  }
  if (!values_.allFinite()) throw Error("squared distance matrix has non-finite entries");
  if ((values_ - values_.transpose()).cwiseAbs().maxCoeff() > 1e-9) {
    throw Error("squared distance matrix is not symmetric");
  }
  if (values_.diagonal().cwiseAbs().maxCoeff() > 1e-12) {
    throw Error("squared distance matrix has a nonzero diagonal");
  }
  if (values_.minCoeff() < -1e-12) throw Error("squared distance matrix has negative entries");
}

SquaredDistanceMatrix SquaredDistanceMatrix::from_points(const Matrix& points) {
  const Index n = points.rows();
  Matrix d = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) d(i, j) = d(j, i) = (points.row(i) - points.row(j)).squaredNorm();
  }
  return SquaredDistanceMatrix(std::move(d));
}

std::string SolverConfig::label() const {
  if (kind == Kind::Exact) return "exact";
  std::ostringstream s;
  s << "sinkhorn-" << sinkhorn.beta;
  return s.str();
}

Matrix double_center(const SquaredDistanceMatrix& d) {
  const Matrix& v = d.values();
  const Vector row_mean = v.rowwise().mean();
  const Vector col_mean = v.colwise().mean().transpose();
  const double grand = v.mean();
  Matrix b = v;
  b.colwise() -= row_mean;
  b.rowwise() -= col_mean.transpose();
  b.array() += grand;
  b *= -0.5;
  return 0.5 * (b + b.transpose());
}

void fix_column_signs(Matrix& v) {
  for (Index c = 0; c < v.cols(); ++c) {
    Index best = 0;
    for (Index r = 1; r < v.rows(); ++r) {
      if (std::abs(v(r, c)) > std::abs(v(best, c))) best = r;
    }
    if (v(best, c) < 0.0) v.col(c) = -v.col(c);
  }
}

EmbeddingResult mds(const SquaredDistanceMatrix& d, Index dim) {
  const Index count = d.size();
  check_dim(dim, count);
  const auto start = Clock::now();
  const Matrix b = double_center(d);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(b);
  if (eig.info() != Eigen::Success) throw Error("mds: eigendecomposition failed");

  // Eigen sorts ascending; take the top `dim` from the back.
  const Vector& lam = eig.eigenvalues();
  EmbeddingResult out;
  out.negative_eigenvalue_mass = 0.0;
  for (Index i = 0; i < count; ++i) out.negative_eigenvalue_mass += std::abs(std::min(lam(i), 0.0));

  Matrix v(count, dim);
  out.singular_values.resize(dim);
  for (Index c = 0; c < dim; ++c) {
    const Index src = count - 1 - c;
    v.col(c) = eig.eigenvectors().col(src);
    out.singular_values(c) = std::sqrt(std::max(lam(src), 0.0));
  }
  fix_column_signs(v);
  out.coordinates = v * out.singular_values.asDiagonal();
  out.method = "mds";
  out.metrics.spectral_seconds = seconds_since(start);
  out.metrics.total_seconds = out.metrics.spectral_seconds;
  return out;
}

std::vector<TransportMap> compute_transport_maps(const ManifoldDataset& dataset,
                                                 const SolverConfig& solver,
                                                 PipelineMetrics* metrics) {
  const Matrix& ref = dataset.reference.points();
  const ReferenceId rid = reference_id(ref);
  const CostConvention convention = solver.kind == SolverConfig::Kind::Exact
                                        ? CostConvention::Squared
                                        : CostConvention::HalfSquared;
  std::vector<TransportMap> maps;
  maps.reserve(dataset.measures.size());
  for (std::size_t idx = 0; idx < dataset.measures.size(); ++idx) {
    const EmpiricalMeasure& mu = dataset.measures[idx];
    const auto start = Clock::now();
    try {
      const CostMatrix c = cost_matrix(ref, mu.points(), convention);
      if (solver.kind == SolverConfig::Kind::Exact) {
        const TransportPlan plan = solve_exact(c, dataset.reference.weights(), mu.weights());
        maps.push_back(barycentric_projection(plan, mu.points(), rid));
      } else {
        const SinkhornResult res =
            solve_sinkhorn(c, dataset.reference.weights(), mu.weights(), solver.sinkhorn);
        if (metrics) {
          metrics->sinkhorn_iterations += res.iterations;
          if (!res.converged) ++metrics->unconverged_solves;
        }
        maps.push_back(barycentric_projection(res.plan, mu.points(), rid));
      }
    } catch (const Error& e) {
      std::ostringstream msg;
      msg << "transport map for measure " << idx << " failed: " << e.what();
      throw Error(msg.str());
    }
    if (metrics) {
      ++metrics->ot_solve_count;
      metrics->solve_seconds += seconds_since(start);
    }
  }
  return maps;
}

EmbeddingResult embed_transport_maps(const std::vector<TransportMap>& maps, Index dim) {
  const auto count = static_cast<Index>(maps.size());
  check_dim(dim, count);
  EmbeddingResult out;
  auto start = Clock::now();
  const TransportMapMatrix t = transport_map_matrix(maps);
  out.metrics.assemble_seconds = seconds_since(start);

  start = Clock::now();
  Eigen::BDCSVD<Matrix> svd(t.values, Eigen::ComputeThinV);
  const Vector& sv = svd.singularValues();
  Matrix v = Matrix::Zero(count, dim);
  out.singular_values = Vector::Zero(dim);
  const Index available = std::min(dim, sv.size());
  v.leftCols(available) = svd.matrixV().leftCols(available);
  out.singular_values.head(available) = sv.head(available);
  fix_column_signs(v);
  out.coordinates = v * out.singular_values.asDiagonal();
  out.metrics.spectral_seconds = seconds_since(start);
  out.negative_eigenvalue_mass = 0.0;
  return out;
}

EmbeddingResult lot_wassmap(const ManifoldDataset& dataset, const SolverConfig& solver, Index dim) {
  check_dim(dim, dataset.size());
  const auto start = Clock::now();
  PipelineMetrics metrics;
  const std::vector<TransportMap> maps = compute_transport_maps(dataset, solver, &metrics);
  EmbeddingResult out = embed_transport_maps(maps, dim);
  metrics.assemble_seconds = out.metrics.assemble_seconds;
  metrics.spectral_seconds = out.metrics.spectral_seconds;
  metrics.total_seconds = seconds_since(start);
  out.metrics = metrics;
  out.method = "lot-wassmap(" + solver.label() + ")";
  return out;
}

double squared_transport_cost(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu,
                              const SolverConfig& solver, PipelineMetrics* metrics) {
  const auto start = Clock::now();
  double value = 0.0;
  if (solver.kind == SolverConfig::Kind::Exact) {
    const CostMatrix c = cost_matrix(mu.points(), nu.points(), CostConvention::Squared);
    value = solve_exact_with_duals(c, mu.weights(), nu.weights()).objective;
  } else {
    const CostMatrix half = cost_matrix(mu.points(), nu.points(), CostConvention::HalfSquared);
    const SinkhornResult res = solve_sinkhorn(half, mu.weights(), nu.weights(), solver.sinkhorn);
    value = 2.0 * res.plan.cost(half);
    if (metrics) {
      metrics->sinkhorn_iterations += res.iterations;
      if (!res.converged) ++metrics->unconverged_solves;
    }
  }
  if (metrics) {
    ++metrics->ot_solve_count;
    metrics->solve_seconds += seconds_since(start);
  }
  return std::max(0.0, value);
}

EmbeddingResult wassmap(const ManifoldDataset& dataset, const SolverConfig& solver, Index dim) {
  const Index count = dataset.size();
  check_dim(dim, count);
  const auto start = Clock::now();
  PipelineMetrics metrics;
  Matrix gamma = Matrix::Zero(count, count);
  for (Index i = 0; i < count; ++i) {
    for (Index j = i + 1; j < count; ++j) {
      try {
        gamma(i, j) = gamma(j, i) = squared_transport_cost(
            dataset.measures[static_cast<std::size_t>(i)],
            dataset.measures[static_cast<std::size_t>(j)], solver, &metrics);
      } catch (const Error& e) {
        std::ostringstream msg;
        msg << "W2 between measures " << i << " and " << j << " failed: " << e.what();
        throw Error(msg.str());
      }
    }
  }
  EmbeddingResult out = mds(SquaredDistanceMatrix(std::move(gamma)), dim);
  metrics.spectral_seconds = out.metrics.spectral_seconds;
  metrics.total_seconds = seconds_since(start);
  out.metrics = metrics;
  out.method = "wassmap(" + solver.label() + ")";
  return out;
}

}  // namespace lotwassmap
