#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>

#include "egf/detail/linalg.hpp"
#include "egf/errors.hpp"
#include "egf/forcing.hpp"
#include "egf/grid.hpp"
#include "egf/solvers.hpp"

namespace egf {

enum class Provenance { Pod, RandomizedSvd, Interpolated };

inline const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::Pod: return "pod";
    case Provenance::RandomizedSvd: return "rsvd";
    case Provenance::Interpolated: return "interpolated";
  }
  return "unknown";
}

/// Low-rank symmetric kernel model G ~ Phi Sigma Phi^T with W-orthonormal
/// empirical eigenvectors Phi and diagonal coefficients sigma, ordered by
/// descending |sigma_k|.
struct EgfModel {
  SensorGrid grid;
  Eigen::MatrixXd phi;    // n_sensors x k
  Eigen::VectorXd sigma;  // k
  double theta = 0.0;
  Provenance provenance = Provenance::Pod;

  Eigen::Index rank() const { return sigma.size(); }
};

struct ErrorReport {
  std::optional<double> relative_kernel_error;  // percent
  std::optional<double> test_error;             // fraction
  Eigen::VectorXd per_sample_errors;            // fractions, excluded samples = NaN
  int excluded_samples = 0;
};

// Largest entry of |Phi^T W Phi - I|.
inline double orthonormality_defect(const EgfModel& m) {
  const Eigen::MatrixXd g =
      m.phi.transpose() * m.grid.weights.asDiagonal() * m.phi -
      Eigen::MatrixXd::Identity(m.rank(), m.rank());
  return detail::max_abs(g);
}

// u = Phi Sigma Phi^T W f, evaluated as two matrix-vector products.
inline Eigen::VectorXd apply(const EgfModel& m, const Eigen::VectorXd& f) {
  if (f.size() != m.grid.size())
    throw ShapeError("apply: forcing length " + std::to_string(f.size()) +
                     " != n_sensors " + std::to_string(m.grid.size()));
  const Eigen::VectorXd coeffs = m.phi.transpose() * (m.grid.weights.asDiagonal() * f);
  return m.phi * (m.sigma.asDiagonal() * coeffs);
}

// Column-wise apply for whole ensembles.
inline Eigen::MatrixXd apply_columns(const EgfModel& m, const Eigen::MatrixXd& f) {
  if (f.rows() != m.grid.size()) throw ShapeError("apply_columns: row count mismatch");
  return m.phi * (m.sigma.asDiagonal() * (m.phi.transpose() * (m.grid.weights.asDiagonal() * f)));
}

inline Eigen::MatrixXd densify(const EgfModel& m) {
  if (m.grid.size() > 10000)
    throw TooLargeError("densify: refusing to materialize " + std::to_string(m.grid.size()) +
                        "^2 kernel (guard at 10^4 sensors)");
  if (m.rank() == 0) return Eigen::MatrixXd::Zero(m.grid.size(), m.grid.size());
  return m.phi * m.sigma.asDiagonal() * m.phi.transpose();
}

namespace detail {

// || A ||_{L^2(Omega x Omega)} with tensorized quadrature weights, optionally
// ignoring the diagonal.
inline double kernel_norm_w(const Eigen::VectorXd& w, const Eigen::MatrixXd& a,
                            bool exclude_diagonal) {
  double acc = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (!exclude_diagonal || i != j) acc += w(i) * w(j) * a(i, j) * a(i, j);
  return std::sqrt(acc);
}

}  // namespace detail

// Relative L^2(Omega x Omega) error against a closed-form kernel, in percent.
// Diagonal entries are excluded when the kernel has a pole there.
inline double relative_kernel_error(const EgfModel& m, const KernelFunction& exact,
                                    bool exclude_diagonal = false) {
  const Eigen::Index n = m.grid.size();
  Eigen::MatrixXd gex(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (exclude_diagonal && i == j) {
        gex(i, j) = 0.0;
        continue;
      }
      gex(i, j) = exact(m.grid.points.row(i), m.grid.points.row(j));
    }
  }
  const Eigen::MatrixXd diff = densify(m) - gex;
  return 100.0 * detail::kernel_norm_w(m.grid.weights, diff, exclude_diagonal) /
         detail::kernel_norm_w(m.grid.weights, gex, exclude_diagonal);
}

// Relative L^2(Omega x Omega) distance between two models on the same grid,
// in percent of the reference model's norm.
inline double relative_model_error(const EgfModel& m, const EgfModel& reference) {
  if (!same_grid(m.grid, reference.grid))
    throw ShapeError("relative_model_error: models live on different grids");
  const Eigen::MatrixXd diff = densify(m) - densify(reference);
  return 100.0 * detail::kernel_norm_w(m.grid.weights, diff, false) /
         detail::kernel_norm_w(m.grid.weights, densify(reference), false);
}

// Mean relative L^2(Omega) response error over a test set. Samples with zero
// response norm are excluded and counted in the report.
inline ErrorReport test_error(const EgfModel& m, const ForcingEnsemble& test_f,
                              const ResponseEnsemble& test_e) {
  if (test_f.columns.cols() != test_e.columns.cols() ||
      test_f.columns.rows() != m.grid.size() || test_e.columns.rows() != m.grid.size())
    throw ShapeError("test_error: inconsistent test set shapes");
  const Eigen::Index nt = test_f.columns.cols();
  const Eigen::MatrixXd predicted = apply_columns(m, test_f.columns);
  ErrorReport report;
  report.per_sample_errors.setConstant(nt, std::numeric_limits<double>::quiet_NaN());
  double acc = 0.0;
  Eigen::Index used = 0;
  for (Eigen::Index j = 0; j < nt; ++j) {
    const double denom = detail::norm_w(m.grid.weights, test_e.columns.col(j));
    if (denom == 0.0) {
      ++report.excluded_samples;
      continue;
    }
    const double err =
        detail::norm_w(m.grid.weights, predicted.col(j) - test_e.columns.col(j)) / denom;
    report.per_sample_errors(j) = err;
    acc += err;
    ++used;
  }
  if (used > 0) report.test_error = acc / static_cast<double>(used);
  return report;
}

}  // namespace egf
