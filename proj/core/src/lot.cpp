#include "lotwassmap/lot.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <sstream>

namespace lotwassmap {

ReferenceId reference_id(const Matrix& reference_points) {
  // FNV-1a over the shape and the raw coordinate bytes.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](const void* data, std::size_t len) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= bytes[i];
      h *= 0x100000001b3ULL;
    }
  };
  const std::int64_t shape[2] = {reference_points.rows(), reference_points.cols()};
  feed(shape, sizeof(shape));
  feed(reference_points.data(),
       static_cast<std::size_t>(reference_points.size()) * sizeof(double));
  return h;
}

TransportMap barycentric_projection(const TransportPlan& plan, const Matrix& target_points,
                                    ReferenceId reference) {
  if (plan.mass.cols() != target_points.rows()) {
    throw DimensionMismatch("barycentric_projection: plan columns differ from target count");
  }
  const Vector row_mass = plan.mass.rowwise().sum();
  for (Index i = 0; i < row_mass.size(); ++i) {
    if (!(row_mass(i) >= 1e-15)) {
      std::ostringstream msg;
      msg << "barycentric_projection: plan row " << i << " carries mass " << row_mass(i)
          << " (below 1e-15)";
      throw Error(msg.str());
    }
  }
  TransportMap out;
  out.values = plan.mass * target_points;
  out.values.array().colwise() /= row_mass.array();
  out.reference = reference;
  return out;
}

TransportMap entropic_map(const Matrix& reference_points, const EmpiricalMeasure& target,
                          const Vector& potential_g, double beta) {
  if (reference_points.cols() != target.dim()) {
    throw DimensionMismatch("entropic_map: ambient dimensions differ");
  }
  if (potential_g.size() != target.size()) {
    throw DimensionMismatch("entropic_map: potential length differs from target size");
  }
  if (!(beta > 0.0)) throw Error("entropic_map: beta must be positive");
  const Index m = reference_points.rows();
  const Index k = target.size();
  const CostMatrix c = cost_matrix(reference_points, target.points(), CostConvention::HalfSquared);

  TransportMap out;
  out.values.resize(m, target.dim());
  out.reference = reference_id(reference_points);
  Vector logits(k);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < k; ++j) {
      logits(j) = std::log(target.weights()(j)) + (potential_g(j) - c.values(i, j)) / beta;
    }
    const double top = logits.maxCoeff();
    const Vector w = (logits.array() - top).exp();
    out.values.row(i) = (w.transpose() * target.points()) / w.sum();
  }
  return out;
}

double empirical_lot_distance(const TransportMap& a, const TransportMap& b) {
  if (a.reference != b.reference) {
    throw Error("empirical_lot_distance: maps were computed against different references");
  }
  if (a.values.rows() != b.values.rows() || a.values.cols() != b.values.cols()) {
    throw DimensionMismatch("empirical_lot_distance: map shapes differ");
  }
  const double m = static_cast<double>(a.values.rows());
  return std::sqrt((a.values - b.values).squaredNorm() / m);
}

TransportMapMatrix transport_map_matrix(const std::vector<TransportMap>& maps) {
  if (maps.empty()) throw Error("transport_map_matrix: no maps given");
  const Index m = maps.front().values.rows();
  const Index n = maps.front().values.cols();
  const ReferenceId ref = maps.front().reference;
  const auto count = static_cast<Index>(maps.size());

  TransportMapMatrix out{Matrix(m * n, count), ref, m, n};
  for (Index col = 0; col < count; ++col) {
    const TransportMap& map = maps[static_cast<std::size_t>(col)];
    if (map.reference != ref || map.values.rows() != m || map.values.cols() != n) {
      std::ostringstream msg;
      msg << "transport_map_matrix: map " << col << " does not share the reference or shape";
      throw Error(msg.str());
    }
    // Row-major flattening: entry s * n + c holds coordinate c of sample s.
    for (Index s = 0; s < m; ++s) {
      for (Index c = 0; c < n; ++c) out.values(s * n + c, col) = map.values(s, c);
    }
  }
  const Vector mean = out.values.rowwise().mean();
  out.values.colwise() -= mean;
  out.values /= std::sqrt(static_cast<double>(m));
  return out;
}

Matrix lot_squared_distances(const std::vector<TransportMap>& maps) {
  const auto count = static_cast<Index>(maps.size());
  Matrix out = Matrix::Zero(count, count);
  for (Index i = 0; i < count; ++i) {
    for (Index j = i + 1; j < count; ++j) {
      const double d = empirical_lot_distance(maps[static_cast<std::size_t>(i)],
                                              maps[static_cast<std::size_t>(j)]);
      out(i, j) = out(j, i) = d * d;
    }
  }
  return out;
}

}  // namespace lotwassmap
