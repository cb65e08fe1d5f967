#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "egf/errors.hpp"

namespace egf {

enum class Domain { Interval, UnitDisk, UnitSquare };

/// Sensor locations plus the diagonal quadrature weights that turn discrete
/// vectors into L^2 functions. All orthonormality in this library is taken
/// with respect to these weights.
struct SensorGrid {
  int dim = 1;
  Eigen::MatrixXd points;   // n_sensors x dim
  Eigen::VectorXd weights;  // n_sensors, strictly positive
  Domain domain = Domain::Interval;
  double a = 0.0, b = 1.0;  // interval bounds (Interval only)
  double spacing = 0.0;     // lattice spacing h (disk/square), grid step (interval)
  int n_side = 0;           // lattice side count (square only)

  Eigen::Index size() const { return points.rows(); }
};

inline bool same_grid(const SensorGrid& x, const SensorGrid& y) {
  return x.dim == y.dim && x.domain == y.domain && x.points.rows() == y.points.rows() &&
         x.points == y.points && x.weights == y.weights;
}

// Uniform grid on [a, b] including both endpoints, trapezoid weights.
inline SensorGrid make_interval_grid(double a, double b, int n) {
  if (n < 3) throw InvalidArgumentError("make_interval_grid: need n >= 3, got " + std::to_string(n));
  if (!(a < b)) throw InvalidArgumentError("make_interval_grid: need a < b");
  SensorGrid g;
  g.dim = 1;
  g.domain = Domain::Interval;
  g.a = a;
  g.b = b;
  const double h = (b - a) / (n - 1);
  g.spacing = h;
  g.points.resize(n, 1);
  g.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    g.points(i, 0) = a + i * h;
    g.weights(i) = (i == 0 || i == n - 1) ? 0.5 * h : h;
  }
  g.points(n - 1, 0) = b;  // avoid accumulated rounding at the right end
  return g;
}

// Cartesian lattice of spacing h clipped to the open unit disk, weight h^2
// per retained point. Boundary cells are not clipped, so the covered area is
// only O(h) accurate.
inline SensorGrid make_disk_grid(double h) {
  if (!(h > 0.0 && h <= 0.5))
    throw InvalidArgumentError("make_disk_grid: need 0 < h <= 0.5, got " + std::to_string(h));
  SensorGrid g;
  g.dim = 2;
  g.domain = Domain::UnitDisk;
  g.spacing = h;
  const int imax = static_cast<int>(std::floor(1.0 / h));
  std::vector<double> xs, ys;
  for (int i = -imax; i <= imax; ++i) {
    for (int j = -imax; j <= imax; ++j) {
      const double x = i * h, y = j * h;
      if (x * x + y * y < 1.0) {
        xs.push_back(x);
        ys.push_back(y);
      }
    }
  }
  const auto n = static_cast<Eigen::Index>(xs.size());
  g.points.resize(n, 2);
  for (Eigen::Index k = 0; k < n; ++k) {
    g.points(k, 0) = xs[k];
    g.points(k, 1) = ys[k];
  }
  g.weights = Eigen::VectorXd::Constant(n, h * h);
  return g;
}

// Interior nodes of an n x n lattice on [0,1]^2 (Dirichlet boundary excluded),
// cell weight h^2 each. Points are ordered row-major in y then x.
inline SensorGrid make_square_grid(int n_per_side) {
  if (n_per_side < 3)
    throw InvalidArgumentError("make_square_grid: need n_per_side >= 3, got " +
                               std::to_string(n_per_side));
  SensorGrid g;
  g.dim = 2;
  g.domain = Domain::UnitSquare;
  g.n_side = n_per_side;
  const double h = 1.0 / (n_per_side - 1);
  g.spacing = h;
  const int ni = n_per_side - 2;
  g.points.resize(static_cast<Eigen::Index>(ni) * ni, 2);
  Eigen::Index k = 0;
  for (int iy = 1; iy <= ni; ++iy) {
    for (int ix = 1; ix <= ni; ++ix, ++k) {
      g.points(k, 0) = ix * h;
      g.points(k, 1) = iy * h;
    }
  }
  g.weights = Eigen::VectorXd::Constant(g.points.rows(), h * h);
  return g;
}

}  // namespace egf
