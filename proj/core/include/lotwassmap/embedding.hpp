#pragma once

#include "lotwassmap/common.hpp"
#include "lotwassmap/lot.hpp"
#include "lotwassmap/measures.hpp"
#include "lotwassmap/ot.hpp"

#include <string>
#include <vector>

namespace lotwassmap {

/// Validated N x N matrix of squared dissimilarities.
class SquaredDistanceMatrix {
public:
  /// Requires symmetry within 1e-9, a zero diagonal within 1e-12 and entries >= -1e-12.
  explicit SquaredDistanceMatrix(Matrix values);

  /// Squared Euclidean distances between the rows of `points`.
  static SquaredDistanceMatrix from_points(const Matrix& points);

  const Matrix& values() const noexcept { return values_; }
  Index size() const noexcept { return values_.rows(); }

private:
  Matrix values_;
};

/// Which OT solver produces the plans inside the pipelines.
struct SolverConfig {
  enum class Kind { Exact, Sinkhorn };
  Kind kind = Kind::Exact;
  SinkhornOptions sinkhorn;

  static SolverConfig exact() { return {}; }
  static SolverConfig entropic(double beta, double tol = 1e-9, int max_iter = 10000) {
    return {Kind::Sinkhorn, SinkhornOptions{beta, tol, max_iter}};
  }
  /// "exact" or "sinkhorn-<beta>".
  std::string label() const;
};

/// Counters and per-stage wall clock for one pipeline run.
struct PipelineMetrics {
  long long ot_solve_count = 0;
  long long sinkhorn_iterations = 0;
  long long unconverged_solves = 0;
  double solve_seconds = 0.0;
  double assemble_seconds = 0.0;
  double spectral_seconds = 0.0;
  double total_seconds = 0.0;
};

struct EmbeddingResult {
  Matrix coordinates;      // N x d, row i = z_i
  Vector singular_values;  // length d, descending
  double negative_eigenvalue_mass = 0.0;
  std::string method;      // "mds", "lot-wassmap(<solver>)", "wassmap(<solver>)"
  PipelineMetrics metrics;
};

/// -1/2 J D J with J = I - 11^T / N.
Matrix double_center(const SquaredDistanceMatrix& d);

/// Classical MDS: top-d eigenpairs of the double-centered matrix, negative eigenvalues clamped.
EmbeddingResult mds(const SquaredDistanceMatrix& d, Index dim);

/// One OT solve per measure from the dataset reference, followed by barycentric projection.
std::vector<TransportMap> compute_transport_maps(const ManifoldDataset& dataset,
                                                 const SolverConfig& solver,
                                                 PipelineMetrics* metrics = nullptr);

/// Truncated SVD of the centered transport-map matrix; z_i = (V_d Sigma_d)(i, :).
EmbeddingResult embed_transport_maps(const std::vector<TransportMap>& maps, Index dim);

/// LOT Wassmap: N OT solves and a truncated SVD, no pairwise distance matrix.
EmbeddingResult lot_wassmap(const ManifoldDataset& dataset, const SolverConfig& solver, Index dim);

/// Wassmap baseline: MDS on all N(N-1)/2 pairwise squared W2 distances.
EmbeddingResult wassmap(const ManifoldDataset& dataset, const SolverConfig& solver, Index dim);

/// Squared transport cost between two measures under the given solver
/// (exact optimum, or the squared-distance cost of the entropic plan).
double squared_transport_cost(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu,
                              const SolverConfig& solver, PipelineMetrics* metrics = nullptr);

/// Flip each column so its largest-magnitude entry is nonnegative (first index wins ties).
void fix_column_signs(Matrix& v);

}  // namespace lotwassmap
