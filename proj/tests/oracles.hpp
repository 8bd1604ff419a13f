#pragma once

// Independent reference computations used only by tests. Nothing here calls
// the library's solvers.

#include "lotwassmap/common.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace oracles {

using lotwassmap::Index;
using lotwassmap::Matrix;
using lotwassmap::RowMatrix;
using lotwassmap::Vector;

/// Minimum-cost perfect assignment of a square cost matrix (O(n^3) Hungarian).
double hungarian_min_cost(const RowMatrix& cost);

/// Same quantity by enumerating all permutations (n <= 9).
double brute_force_assignment(const RowMatrix& cost);

/// Optimal 1-D squared-distance cost between two equal-size uniform point sets:
/// the sorted (monotone) coupling, averaged over points.
double sorted_coupling_cost(std::vector<double> x, std::vector<double> y);

/// Points with i.i.d. N(0, 1) coordinates, shifted by `offset` in every coordinate.
Matrix gaussian_points(Index count, Index dim, std::mt19937_64& rng, double offset = 0.0);

/// Random probability vector with entries bounded away from zero.
Vector random_simplex(Index count, std::mt19937_64& rng);

/// Random d x d orthogonal matrix (QR of a Gaussian matrix).
Matrix random_orthogonal(Index dim, std::mt19937_64& rng);

/// Squared Euclidean distances between rows, computed entrywise.
Matrix squared_distances(const Matrix& points);

}  // namespace oracles
