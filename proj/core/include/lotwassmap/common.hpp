#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace lotwassmap {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
/// Dense row-major storage for cost matrices and couplings (row = reference sample).
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Base error for every rejected input or failed computation in the library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a covariance matrix is not symmetric positive definite.
class NotPositiveDefinite : public Error {
public:
  using Error::Error;
};

/// Raised when marginals do not sum to one (beyond the silent renormalization band).
class InfeasibleWeights : public Error {
public:
  using Error::Error;
};

/// Raised when argument shapes disagree.
class DimensionMismatch : public Error {
public:
  using Error::Error;
};

}  // namespace lotwassmap
