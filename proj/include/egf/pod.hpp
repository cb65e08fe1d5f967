#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "egf/detail/linalg.hpp"
#include "egf/errors.hpp"
#include "egf/model.hpp"
#include "egf/solvers.hpp"

namespace egf {

struct PodModes {
  Eigen::MatrixXd phi;                    // n_sensors x k, W-orthonormal
  Eigen::VectorXd pod_singular_values;    // all singular values of W^{1/2} E
};

// Truncated left singular vectors of W^{1/2} E, mapped back by W^{-1/2}.
// The full singular value list is returned for rank diagnostics.
inline PodModes pod_modes(const ResponseEnsemble& e, int k) {
  const Eigen::Index n = e.columns.rows(), m = e.columns.cols();
  if (k < 1 || k > std::min(n, m))
    throw InvalidArgumentError("pod_modes: need 1 <= k <= min(n_sensors, n_samples)");
  Eigen::BDCSVD<Eigen::MatrixXd> svd(detail::scale_rows_sqrt(e.grid.weights, e.columns),
                                     Eigen::ComputeThinU);
  const Eigen::VectorXd& s = svd.singularValues();
  if (!(s(k - 1) > 1e-12 * s(0)))
    throw RankError("pod_modes: response ensemble is rank deficient below k = " +
                    std::to_string(k) + "; use a smaller rank or more samples");
  PodModes out;
  out.phi = detail::scale_rows_inv_sqrt(e.grid.weights, svd.matrixU().leftCols(k));
  out.pod_singular_values = s;
  return out;
}

struct FitDiagnostics {
  std::vector<int> zeroed_modes;  // modes with no forcing energy, coefficient set to 0
};

// Minimizes sum_i || u_i - Phi Z Phi^T W f_i ||_W^2 over diagonal Z. In the
// W-norm the problem decouples per mode: Z_k = sum_i d_ik c_ik / sum_i c_ik^2
// with c_i = Phi^T W f_i, d_i = Phi^T W u_i.
inline Eigen::VectorXd fit_coefficients(const Eigen::MatrixXd& phi, const ForcingEnsemble& f,
                                        const ResponseEnsemble& e,
                                        FitDiagnostics* diag = nullptr) {
  if (f.columns.rows() != phi.rows() || e.columns.rows() != phi.rows() ||
      f.columns.cols() != e.columns.cols())
    throw ShapeError("fit_coefficients: inconsistent shapes");
  const Eigen::MatrixXd wt = f.grid.weights.asDiagonal() * phi;  // W Phi
  const Eigen::MatrixXd c = wt.transpose() * f.columns;          // k x m
  const Eigen::MatrixXd d = wt.transpose() * e.columns;          // k x m
  const Eigen::Index k = phi.cols();
  Eigen::VectorXd z(k);
  int zeroed = 0;
  for (Eigen::Index i = 0; i < k; ++i) {
    const double denom = c.row(i).squaredNorm();
    if (denom == 0.0) {
      z(i) = 0.0;
      ++zeroed;
      if (diag) diag->zeroed_modes.push_back(static_cast<int>(i));
      continue;
    }
    z(i) = c.row(i).dot(d.row(i)) / denom;
  }
  if (zeroed == k)
    throw DegenerateFitError("fit_coefficients: every mode has zero forcing projection");
  return z;
}

// One-pass learner: POD modes of the responses plus the decoupled coefficient
// fit, re-sorted by descending |coefficient|.
inline EgfModel learn_pod(const ForcingEnsemble& f, const ResponseEnsemble& e, int k,
                          FitDiagnostics* diag = nullptr) {
  if (!same_grid(f.grid, e.grid)) throw ShapeError("learn_pod: forcing/response grids differ");
  PodModes modes = pod_modes(e, k);
  const Eigen::VectorXd z = fit_coefficients(modes.phi, f, e, diag);

  std::vector<Eigen::Index> order(z.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return std::abs(z(a)) > std::abs(z(b));
  });

  EgfModel m;
  m.grid = e.grid;
  m.theta = e.problem.theta;
  m.provenance = Provenance::Pod;
  m.phi.resize(modes.phi.rows(), z.size());
  m.sigma.resize(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    m.phi.col(i) = modes.phi.col(order[i]);
    m.sigma(i) = z(order[i]);
  }
  return m;
}

}  // namespace egf
