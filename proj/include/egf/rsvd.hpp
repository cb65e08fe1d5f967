#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <functional>
#include <numeric>
#include <string>

#include "egf/detail/linalg.hpp"
#include "egf/errors.hpp"
#include "egf/model.hpp"
#include "egf/solvers.hpp"

namespace egf {

// Forward oracle used by the two-pass learner; pass is 1 (random sketch) or
// 2 (orthonormalized re-probe) so wrappers can attach pass-specific noise.
using ForwardOracle =
    std::function<ResponseEnsemble(const ProblemSpec&, const ForcingEnsemble&, int pass)>;

// Q factor of qr(W^{1/2} E) mapped back by W^{-1/2}; columns are W-orthonormal.
inline Eigen::MatrixXd weighted_qr(const ResponseEnsemble& e) {
  if (e.columns.size() == 0 || e.columns.isZero(0.0))
    throw DegenerateFitError("weighted_qr: response ensemble is zero");
  const detail::ThinQr qr = detail::qr_positive(detail::scale_rows_sqrt(e.grid.weights, e.columns));
  return detail::scale_rows_inv_sqrt(e.grid.weights, qr.q);
}

struct RsvdDiagnostics {
  double max_offdiag_ratio = 0.0;         // off-diagonal leakage of V^T W U S
  bool self_adjointness_warning = false;  // leakage above 1e-3
};

// Two-pass weighted randomized SVD. Pass 1 sketches the operator range with
// the supplied forcings; pass 2 re-probes with the W-orthonormalized
// responses, which stands in for the adjoint solve on self-adjoint problems.
// The coefficient matrix keeps the diagonal of V^T W U S so that eigenvalue
// signs survive; off-diagonal leakage is monitored.
inline EgfModel learn_rsvd(const ProblemSpec& problem, const ForcingEnsemble& f, int k,
                           const ForwardOracle& oracle = {}, RsvdDiagnostics* diag = nullptr) {
  const Eigen::Index m = f.columns.cols();
  if (k < 1 || k > m)
    throw InvalidArgumentError("learn_rsvd: need 1 <= k <= n_samples (sketch width)");
  const ForwardOracle solve_pass =
      oracle ? oracle
             : ForwardOracle([](const ProblemSpec& p, const ForcingEnsemble& fe, int) {
                 return solve_ensemble(p, fe);
               });

  ResponseEnsemble e;
  try {
    e = solve_pass(problem, f, 1);
  } catch (const Error& err) {
    throw Error(std::string("learn_rsvd pass 1: ") + err.what());
  }

  const Eigen::MatrixXd q_tilde = weighted_qr(e);

  ForcingEnsemble probe;
  probe.grid = f.grid;
  probe.columns = q_tilde;
  probe.seed = f.seed;
  ResponseEnsemble y;
  try {
    y = solve_pass(problem, probe, 2);
  } catch (const Error& err) {
    throw Error(std::string("learn_rsvd pass 2: ") + err.what());
  }

  // B = Q~^T G, so B W^{1/2} = (W^{1/2} Y)^T with Y the pass-2 responses.
  const Eigen::MatrixXd yw = detail::scale_rows_sqrt(f.grid.weights, y.columns);  // n x m
  Eigen::BDCSVD<Eigen::MatrixXd> svd(yw, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::MatrixXd& v = svd.matrixU();  // left vectors of yw = right vectors of B W^{1/2}
  const Eigen::MatrixXd& u = svd.matrixV();  // m x m

  const Eigen::MatrixXd q = detail::scale_rows_sqrt(f.grid.weights, q_tilde);
  const Eigen::MatrixXd coeff =
      (v.transpose() * q * u) * svd.singularValues().asDiagonal();  // V^T W U~ S

  if (diag) {
    double max_off = 0.0, max_diag = 0.0;
    for (Eigen::Index i = 0; i < coeff.rows(); ++i)
      for (Eigen::Index j = 0; j < coeff.cols(); ++j)
        if (i == j)
          max_diag = std::max(max_diag, std::abs(coeff(i, j)));
        else
          max_off = std::max(max_off, std::abs(coeff(i, j)));
    diag->max_offdiag_ratio = max_diag > 0.0 ? max_off / max_diag : 0.0;
    // clean self-adjoint problems leak O(sigma_{m+1}/sigma_1) through the
    // unsketched tail (~1e-4 at the default sketch widths); non-self-adjoint
    // operators put O(1) mass off the diagonal
    diag->self_adjointness_warning = diag->max_offdiag_ratio > 1e-3;
  }

  EgfModel out;
  out.grid = f.grid;
  out.theta = problem.theta;
  out.provenance = Provenance::RandomizedSvd;

  const Eigen::MatrixXd phi_full = q_tilde * u;  // W-orthonormal empirical eigenvectors
  Eigen::VectorXd sigma_full = coeff.diagonal();

  // |sigma| is descending up to rounding; re-sort to pin the invariant.
  std::vector<Eigen::Index> order(static_cast<size_t>(m));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return std::abs(sigma_full(a)) > std::abs(sigma_full(b));
  });

  out.phi.resize(phi_full.rows(), k);
  out.sigma.resize(k);
  for (int i = 0; i < k; ++i) {
    out.phi.col(i) = phi_full.col(order[i]);
    out.sigma(i) = sigma_full(order[i]);
  }
  return out;
}

}  // namespace egf
