#pragma once

#include "lotwassmap/common.hpp"
#include "lotwassmap/measures.hpp"
#include "lotwassmap/ot.hpp"

#include <cstdint>
#include <vector>

namespace lotwassmap {

/// Content hash of a reference point cloud; binds maps to the samples they were evaluated at.
using ReferenceId = std::uint64_t;

ReferenceId reference_id(const Matrix& reference_points);

/// A transport map evaluated at the m reference samples (m x n).
struct TransportMap {
  Matrix values;
  ReferenceId reference = 0;
};

/// Centered, 1/sqrt(m)-scaled, column-stacked maps: (m*n) x N.
struct TransportMapMatrix {
  Matrix values;
  ReferenceId reference = 0;
  Index samples = 0;  // m
  Index dim = 0;      // n
};

/// Row i is the plan-weighted average of the targets coupled with reference sample i.
/// Throws when a row of the plan carries less than 1e-15 mass.
TransportMap barycentric_projection(const TransportPlan& plan, const Matrix& target_points,
                                    ReferenceId reference);

/// Entropic map evaluated at the reference samples directly from the Sinkhorn
/// target potential g: a softmax over targets of (g_j - C_ij) / beta, weighted
/// by the target masses. Agrees with barycentric_projection of the Sinkhorn plan.
TransportMap entropic_map(const Matrix& reference_points, const EmpiricalMeasure& target,
                          const Vector& potential_g, double beta);

/// sqrt((1/m) sum_i |A_i - B_i|^2).
double empirical_lot_distance(const TransportMap& a, const TransportMap& b);

TransportMapMatrix transport_map_matrix(const std::vector<TransportMap>& maps);

/// Pairwise squared empirical LOT distances.
Matrix lot_squared_distances(const std::vector<TransportMap>& maps);

}  // namespace lotwassmap
