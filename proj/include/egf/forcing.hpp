#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cstdint>
#include <string>

#include "egf/detail/random.hpp"
#include "egf/errors.hpp"
#include "egf/grid.hpp"

namespace egf {

/// Zero-mean Gaussian-process prior used to probe the system. Only the
/// squared-exponential family is supported.
struct KernelConfig {
  double length_scale = 5e-3;  // sigma of the squared-exponential kernel
  double jitter = 0.0;         // diagonal regularization added before factorization

  void validate() const {
    if (!(length_scale > 0.0)) throw InvalidArgumentError("KernelConfig: length_scale must be > 0");
    if (jitter < 0.0) throw InvalidArgumentError("KernelConfig: jitter must be >= 0");
  }
};

/// Matrix of forcing samples, one column per draw.
struct ForcingEnsemble {
  SensorGrid grid;
  Eigen::MatrixXd columns;  // n_sensors x n_samples
  std::uint64_t seed = 0;

  Eigen::Index n_samples() const { return columns.cols(); }
};

// K_ij = exp(-|x_i - x_j|^2 / (2 sigma^2)) + jitter * [i == j]
inline Eigen::MatrixXd covariance_matrix(const SensorGrid& grid, const KernelConfig& cfg) {
  cfg.validate();
  const Eigen::Index n = grid.size();
  if (n == 0) throw InvalidArgumentError("covariance_matrix: empty grid");
  const double inv = 1.0 / (2.0 * cfg.length_scale * cfg.length_scale);
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    k(i, i) = 1.0 + cfg.jitter;
    for (Eigen::Index j = 0; j < i; ++j) {
      const double d2 = (grid.points.row(i) - grid.points.row(j)).squaredNorm();
      const double v = std::exp(-d2 * inv);
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return k;
}

namespace detail {

// Cholesky with escalating jitter 1e-12, x10, ..., 1e-6 on top of whatever is
// already on the diagonal. Returns the lower factor and records the total
// jitter that finally succeeded.
inline Eigen::MatrixXd cholesky_with_escalation(Eigen::MatrixXd k, double base_jitter,
                                                double* jitter_used = nullptr) {
  double extra = 0.0;
  double attempted = base_jitter;
  for (;;) {
    Eigen::LLT<Eigen::MatrixXd> llt(k);
    if (llt.info() == Eigen::Success) {
      if (jitter_used) *jitter_used = attempted;
      return llt.matrixL();
    }
    const double next = (extra == 0.0) ? 1e-12 : extra * 10.0;
    if (next > 1e-6)
      throw IllConditionedKernelError(
          "covariance factorization failed with jitter up to " + std::to_string(attempted),
          attempted);
    k.diagonal().array() += (next - extra);
    extra = next;
    attempted = base_jitter + extra;
  }
}

inline Eigen::MatrixXd gp_cholesky(const SensorGrid& grid, const KernelConfig& cfg,
                                   double* jitter_used = nullptr) {
  return cholesky_with_escalation(covariance_matrix(grid, cfg), cfg.jitter, jitter_used);
}

// Draws n_samples columns from N(0, L L^T). Column j depends only on
// (seed, j), never on the other columns.
inline Eigen::MatrixXd gp_sample_from_factor(const Eigen::MatrixXd& chol_lower, std::uint64_t seed,
                                             Eigen::Index n_samples) {
  const Eigen::Index n = chol_lower.rows();
  Eigen::MatrixXd z(n, n_samples);
#pragma omp parallel for schedule(static)
  for (Eigen::Index j = 0; j < n_samples; ++j) {
    NormalStream rng(seed, static_cast<std::uint64_t>(j));
    for (Eigen::Index i = 0; i < n; ++i) z(i, j) = rng.next();
  }
  return chol_lower.triangularView<Eigen::Lower>() * z;
}

}  // namespace detail

inline ForcingEnsemble sample_gp(const SensorGrid& grid, const KernelConfig& cfg, int n_samples,
                                 std::uint64_t seed) {
  if (n_samples < 1) throw InvalidArgumentError("sample_gp: need n_samples >= 1");
  ForcingEnsemble f;
  f.grid = grid;
  f.seed = seed;
  const Eigen::MatrixXd chol_lower = detail::gp_cholesky(grid, cfg);
  f.columns = detail::gp_sample_from_factor(chol_lower, seed, n_samples);
  return f;
}

}  // namespace egf
