#include "oracles.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <limits>
#include <numeric>

namespace oracles {

double hungarian_min_cost(const RowMatrix& cost) {
  // Potentials-based Hungarian method, 1-indexed rows/columns.
  const int n = static_cast<int>(cost.rows());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  double total = 0.0;
  for (int j = 1; j <= n; ++j) total += cost(p[j] - 1, j - 1);
  return total;
}

double brute_force_assignment(const RowMatrix& cost) {
  const int n = static_cast<int>(cost.rows());
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += cost(i, perm[static_cast<std::size_t>(i)]);
    best = std::min(best, s);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

double sorted_coupling_cost(std::vector<double> x, std::vector<double> y) {
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - y[i]) * (x[i] - y[i]);
  return s / static_cast<double>(x.size());
}

Matrix gaussian_points(Index count, Index dim, std::mt19937_64& rng, double offset) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix out(count, dim);
  for (Index i = 0; i < count; ++i) {
    for (Index c = 0; c < dim; ++c) out(i, c) = normal(rng) + offset;
  }
  return out;
}

Vector random_simplex(Index count, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.2, 1.0);
  Vector w(count);
  for (Index i = 0; i < count; ++i) w(i) = unif(rng);
  return w / w.sum();
}

Matrix random_orthogonal(Index dim, std::mt19937_64& rng) {
  const Matrix g = gaussian_points(dim, dim, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  return qr.householderQ() * Matrix::Identity(dim, dim);
}

Matrix squared_distances(const Matrix& points) {
  const Index n = points.rows();
  Matrix d(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      double s = 0.0;
      for (Index c = 0; c < points.cols(); ++c) {
        const double diff = points(i, c) - points(j, c);
        s += diff * diff;
      }
      d(i, j) = s;
    }
  }
  return d;
}

}  // namespace oracles
