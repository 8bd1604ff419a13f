#pragma once

#include "lotwassmap/common.hpp"
#include "lotwassmap/measures.hpp"

#include <variant>

namespace lotwassmap {

enum class CostConvention {
  Squared,      // |x - y|^2, used with the exact solver
  HalfSquared,  // 1/2 |x - y|^2, used with Sinkhorn
};

struct CostMatrix {
  RowMatrix values;  // m x k, row = reference sample, column = target sample
  CostConvention convention = CostConvention::Squared;
};

struct ExactMethod {};
struct SinkhornMethod {
  double beta = 1.0;
};
using PlanMethod = std::variant<ExactMethod, SinkhornMethod>;

/// Discrete coupling between source (rows) and target (columns) weights.
struct TransportPlan {
  RowMatrix mass;
  Vector source_weights;
  Vector target_weights;
  PlanMethod method;

  /// Sum_ij cost_ij * mass_ij.
  double cost(const CostMatrix& c) const;
  /// Max absolute marginal violation over rows and columns.
  double marginal_error() const;
};

CostMatrix cost_matrix(const Matrix& ref_points, const Matrix& target_points,
                       CostConvention convention);

/// Exact plan plus the dual certificate: u_i + v_j <= C_ij, equality on the support.
struct ExactSolution {
  TransportPlan plan;
  Vector u;
  Vector v;
  double objective = 0.0;
  long long pivots = 0;
};

/// Marginal tolerance for exact plans.
inline constexpr double kExactMarginalTol = 1e-9;
/// Marginal tolerance for Sinkhorn plans.
inline constexpr double kSinkhornMarginalTol = 1e-6;

/// Weights summing to 1 within 1e-9 are renormalized; otherwise InfeasibleWeights.
Vector normalized_weights(const Vector& w, const char* name);

/// Optimal vertex of the discrete Kantorovich LP via primal network simplex.
ExactSolution solve_exact_with_duals(const CostMatrix& cost, const Vector& a, const Vector& b);
TransportPlan solve_exact(const CostMatrix& cost, const Vector& a, const Vector& b);

struct SinkhornOptions {
  double beta = 1.0;
  double tol = 1e-9;
  int max_iter = 10000;
};

struct SinkhornResult {
  TransportPlan plan;
  Vector potential_f;  // length m
  Vector potential_g;  // length k
  int iterations = 0;
  double final_marginal_error = 0.0;
  bool converged = false;
};

/// Log-domain Sinkhorn for min <C, P> + beta * KL(P | a b^T).
/// The plan is P_ij = a_i b_j exp((f_i + g_j - C_ij) / beta).
SinkhornResult solve_sinkhorn(const CostMatrix& cost, const Vector& a, const Vector& b,
                              const SinkhornOptions& options);

/// sqrt of the optimal squared-Euclidean transport cost between two empirical measures.
double wasserstein2_empirical(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu);

}  // namespace lotwassmap
