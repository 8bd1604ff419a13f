#include "lotwassmap/ot.hpp"

#include "network_simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace lotwassmap {

double TransportPlan::cost(const CostMatrix& c) const {
  if (c.values.rows() != mass.rows() || c.values.cols() != mass.cols()) {
    throw DimensionMismatch("plan and cost matrix shapes differ");
  }
  return c.values.cwiseProduct(mass).sum();
}

double TransportPlan::marginal_error() const {
  const double rows = (mass.rowwise().sum() - source_weights).cwiseAbs().maxCoeff();
  const double cols = (mass.colwise().sum().transpose() - target_weights).cwiseAbs().maxCoeff();
  return std::max(rows, cols);
}

CostMatrix cost_matrix(const Matrix& ref_points, const Matrix& target_points,
                       CostConvention convention) {
  if (ref_points.cols() != target_points.cols()) {
    std::ostringstream msg;
    msg << "cost_matrix: ambient dimensions differ (" << ref_points.cols() << " vs "
        << target_points.cols() << ")";
    throw DimensionMismatch(msg.str());
  }
  const Index m = ref_points.rows();
  const Index k = target_points.rows();
  const Index n = ref_points.cols();
  const double factor = convention == CostConvention::HalfSquared ? 0.5 : 1.0;

  // Transposed copies keep each point contiguous in the inner loop.
  const Matrix ref_t = ref_points.transpose();
  const Matrix tgt_t = target_points.transpose();
  CostMatrix out{RowMatrix(m, k), convention};
  for (Index i = 0; i < m; ++i) {
    const double* w = ref_t.data() + i * n;
    double* row = out.values.data() + i * k;
    for (Index j = 0; j < k; ++j) {
      const double* x = tgt_t.data() + j * n;
      double s = 0.0;
      for (Index c = 0; c < n; ++c) {
        const double diff = w[c] - x[c];
        s += diff * diff;
      }
      row[j] = factor * s;
    }
  }
  return out;
}

Vector normalized_weights(const Vector& w, const char* name) {
  if (w.size() == 0) throw InfeasibleWeights(std::string(name) + ": empty weight vector");
  if (!w.allFinite() || (w.array() < 0.0).any()) {
    throw InfeasibleWeights(std::string(name) + ": weights must be finite and nonnegative");
  }
  const double total = w.sum();
  if (std::abs(total - 1.0) > 1e-9) {
    std::ostringstream msg;
    msg.precision(17);
    msg << name << ": weights sum to " << total << ", not 1";
    throw InfeasibleWeights(msg.str());
  }
  return total == 1.0 ? w : Vector(w / total);
}

namespace {

void check_cost(const CostMatrix& cost, const Vector& a, const Vector& b) {
  if (cost.values.rows() != a.size() || cost.values.cols() != b.size()) {
    throw DimensionMismatch("cost matrix shape does not match the marginal lengths");
  }
  if (!cost.values.allFinite()) throw Error("cost matrix has non-finite entries");
}

}  // namespace

ExactSolution solve_exact_with_duals(const CostMatrix& cost, const Vector& a_in,
                                     const Vector& b_in) {
  const Vector a = normalized_weights(a_in, "source weights");
  const Vector b = normalized_weights(b_in, "target weights");
  check_cost(cost, a, b);

  const Index m = a.size();
  const Index k = b.size();
  detail::TransportNetworkSimplex simplex(cost.values, a, b);
  if (simplex.run() != detail::TransportNetworkSimplex::Status::Optimal) {
    throw InfeasibleWeights("exact solver: marginals admit no feasible plan");
  }

  ExactSolution sol;
  sol.plan.mass.resize(m, k);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < k; ++j) sol.plan.mass(i, j) = simplex.flow(i, j);
  }
  sol.plan.source_weights = a;
  sol.plan.target_weights = b;
  sol.plan.method = ExactMethod{};
  sol.u.resize(m);
  sol.v.resize(k);
  for (Index i = 0; i < m; ++i) sol.u(i) = -simplex.potential(i);
  for (Index j = 0; j < k; ++j) sol.v(j) = simplex.potential(m + j);
  sol.objective = sol.plan.cost(cost);
  sol.pivots = simplex.pivots();
  return sol;
}

TransportPlan solve_exact(const CostMatrix& cost, const Vector& a, const Vector& b) {
  return solve_exact_with_duals(cost, a, b).plan;
}

namespace {

// out_i = -beta * log sum_j exp(log_w_j + (pot_j - C_ij) / beta), rows of C.
void softmin_rows(const RowMatrix& c, const Vector& pot, const Vector& log_w, double beta,
                  Vector& out) {
  const Index rows = c.rows();
  const Index cols = c.cols();
  std::vector<double> z(static_cast<std::size_t>(cols));
  for (Index i = 0; i < rows; ++i) {
    const double* ci = c.data() + i * cols;
    double zmax = -std::numeric_limits<double>::infinity();
    for (Index j = 0; j < cols; ++j) {
      const double v = log_w(j) + (pot(j) - ci[j]) / beta;
      z[static_cast<std::size_t>(j)] = v;
      zmax = std::max(zmax, v);
    }
    double s = 0.0;
    for (Index j = 0; j < cols; ++j) s += std::exp(z[static_cast<std::size_t>(j)] - zmax);
    out(i) = -beta * (zmax + std::log(s));
  }
}

// Same reduction over columns of C, accumulated row by row for cache order.
void softmin_cols(const RowMatrix& c, const Vector& pot, const Vector& log_w, double beta,
                  Vector& out) {
  const Index rows = c.rows();
  const Index cols = c.cols();
  Vector zmax = Vector::Constant(cols, -std::numeric_limits<double>::infinity());
  for (Index i = 0; i < rows; ++i) {
    const double* ci = c.data() + i * cols;
    const double base = log_w(i) + pot(i) / beta;
    for (Index j = 0; j < cols; ++j) zmax(j) = std::max(zmax(j), base - ci[j] / beta);
  }
  Vector s = Vector::Zero(cols);
  for (Index i = 0; i < rows; ++i) {
    const double* ci = c.data() + i * cols;
    const double base = log_w(i) + pot(i) / beta;
    for (Index j = 0; j < cols; ++j) s(j) += std::exp(base - ci[j] / beta - zmax(j));
  }
  for (Index j = 0; j < cols; ++j) out(j) = -beta * (zmax(j) + std::log(s(j)));
}

}  // namespace

SinkhornResult solve_sinkhorn(const CostMatrix& cost, const Vector& a_in, const Vector& b_in,
                              const SinkhornOptions& options) {
  if (!(options.beta > 0.0) || !std::isfinite(options.beta)) {
    throw Error("solve_sinkhorn: beta must be a positive finite number");
  }
  if (options.max_iter < 1) throw Error("solve_sinkhorn: max_iter must be at least 1");
  const Vector a = normalized_weights(a_in, "source weights");
  const Vector b = normalized_weights(b_in, "target weights");
  check_cost(cost, a, b);

  const double beta = options.beta;
  const Index m = a.size();
  const Index k = b.size();
  const Vector log_a = a.array().log();
  const Vector log_b = b.array().log();

  Vector f = Vector::Zero(m);
  Vector g = Vector::Zero(k);
  Vector f_next(m);

  SinkhornResult res;
  double row_err = std::numeric_limits<double>::infinity();
  int it = 0;
  while (true) {
    // With g fixed, row i of the current plan sums to a_i exp((f_i - f_next_i) / beta).
    softmin_rows(cost.values, g, log_b, beta, f_next);
    if (it > 0) {
      row_err = 0.0;
      for (Index i = 0; i < m; ++i) {
        row_err = std::max(row_err, a(i) * std::abs(std::expm1((f(i) - f_next(i)) / beta)));
      }
      if (row_err <= options.tol) {
        res.converged = true;
        break;
      }
      if (it >= options.max_iter) break;
    }
    f = f_next;
    softmin_cols(cost.values, f, log_a, beta, g);
    ++it;
  }

  res.plan.mass.resize(m, k);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < k; ++j) {
      res.plan.mass(i, j) = a(i) * b(j) * std::exp((f(i) + g(j) - cost.values(i, j)) / beta);
    }
  }
  res.plan.source_weights = a;
  res.plan.target_weights = b;
  res.plan.method = SinkhornMethod{beta};
  res.potential_f = std::move(f);
  res.potential_g = std::move(g);
  res.iterations = it;
  res.final_marginal_error = res.plan.marginal_error();
  return res;
}

double wasserstein2_empirical(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu) {
  const CostMatrix c = cost_matrix(mu.points(), nu.points(), CostConvention::Squared);
  const ExactSolution sol = solve_exact_with_duals(c, mu.weights(), nu.weights());
  return std::sqrt(std::max(0.0, sol.objective));
}

}  // namespace lotwassmap
