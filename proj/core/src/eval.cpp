#include "lotwassmap/eval.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <numbers>
#include <sstream>

namespace lotwassmap {

namespace {

void check_centered(const Matrix& p, const char* name) {
  const double scale = std::max(1.0, p.cwiseAbs().maxCoeff());
  const double drift = p.colwise().mean().cwiseAbs().maxCoeff();
  if (drift > 1e-6 * scale) {
    std::ostringstream msg;
    msg << "procrustes_align: " << name << " is not column-centered (mean drift " << drift << ")";
    throw Error(msg.str());
  }
}

}  // namespace

Matrix centered(const Matrix& points) {
  Matrix out = points;
  out.rowwise() -= points.colwise().mean();
  return out;
}

AlignmentReport procrustes_align(const Matrix& z, const Matrix& y) {
  if (z.rows() != y.rows() || z.cols() != y.cols()) {
    throw DimensionMismatch("procrustes_align: Z and Y shapes differ");
  }
  const double y_norm = y.norm();
  if (!(y_norm > 0.0)) throw Error("procrustes_align: reference configuration has zero norm");
  check_centered(z, "Z");
  check_centered(y, "Y");

  // Row form: minimize |Z - Y R|_F over orthogonal R; R = U V^T from Y^T Z = U S V^T.
  Eigen::JacobiSVD<Matrix> svd(y.transpose() * z, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Matrix r = svd.matrixU() * svd.matrixV().transpose();
  AlignmentReport out;
  out.rotation = r.transpose();
  out.absolute_error = (z - y * r).norm();
  out.relative_error = out.absolute_error / y_norm;
  return out;
}

BoundReport check_perturbation_bound(const Matrix& y, const SquaredDistanceMatrix& lambda,
                                     const Matrix& z, double tau1, double tau2) {
  const Index count = y.rows();
  const Index dim = y.cols();
  if (lambda.size() != count || z.rows() != count || z.cols() != dim) {
    throw DimensionMismatch("check_perturbation_bound: shapes of Y, Lambda and Z disagree");
  }
  if (tau1 < 0.0 || tau2 < 0.0) throw Error("check_perturbation_bound: tau must be >= 0");

  Eigen::JacobiSVD<Matrix> svd(y);
  const Vector& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  if (!(smin > 1e-12 * std::max(1.0, s(0)))) {
    throw Error("check_perturbation_bound: truth configuration is rank deficient");
  }

  BoundReport out;
  out.tau1 = tau1;
  out.tau2 = tau2;
  out.pinv_norm = 1.0 / smin;
  const double n = static_cast<double>(count);
  const double tau = tau1 + tau2;
  out.hypothesis_ok = out.pinv_norm * std::sqrt(n) * std::sqrt(tau) <= 1.0 / std::numbers::sqrt2;
  out.rhs = (1.0 + std::numbers::sqrt2) * out.pinv_norm * n * tau;
  out.lhs = procrustes_align(z, y).absolute_error;
  const SquaredDistanceMatrix delta = SquaredDistanceMatrix::from_points(y);
  out.max_deviation = (lambda.values() - delta.values()).cwiseAbs().maxCoeff();
  return out;
}

double max_abs_deviation(const SquaredDistanceMatrix& lambda, const SquaredDistanceMatrix& gamma) {
  if (lambda.size() != gamma.size()) throw DimensionMismatch("max_abs_deviation: sizes differ");
  return (lambda.values() - gamma.values()).cwiseAbs().maxCoeff();
}

}  // namespace lotwassmap
