#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "egf/detail/random.hpp"
#include "egf/errors.hpp"
#include "egf/forcing.hpp"
#include "egf/grid.hpp"

namespace egf {

enum class ProblemKind {
  Poisson1D,             // -u'' = f on (0,1), u(0)=u(1)=0
  Helmholtz1D,           // u'' + theta^2 u = f, Dirichlet
  Airy1D,                // u'' - theta^2 x u = f, Dirichlet
  MultiPhysics1D,        // (u'' + theta^2 u)/2 = f on (0,1/4), -u'' = f on (1/4,1)
  FractionalLaplacian1D, // (-Delta)^theta u = f on [-1,1], periodic
  Poisson2DDisk,         // div(grad u) = f on the unit disk, u = 0 on the boundary
  Helmholtz2DSquare,     // div(grad u) + theta^2 u = f on (0,1)^2, Dirichlet
};

inline const char* to_string(ProblemKind k) {
  switch (k) {
    case ProblemKind::Poisson1D: return "poisson1d";
    case ProblemKind::Helmholtz1D: return "helmholtz1d";
    case ProblemKind::Airy1D: return "airy1d";
    case ProblemKind::MultiPhysics1D: return "multiphysics1d";
    case ProblemKind::FractionalLaplacian1D: return "fraclap1d";
    case ProblemKind::Poisson2DDisk: return "poisson2d-disk";
    case ProblemKind::Helmholtz2DSquare: return "helmholtz2d-square";
  }
  return "unknown";
}

struct ProblemSpec {
  ProblemKind kind = ProblemKind::Poisson1D;
  double theta = 0.0;
  SensorGrid grid;
};

struct NoiseConfig {
  double level = 0.0;  // fraction of the per-column mean absolute response
  std::uint64_t seed = 0;
};

struct ResponseEnsemble {
  SensorGrid grid;
  Eigen::MatrixXd columns;  // n_sensors x n_samples
  ProblemSpec problem;
  std::optional<NoiseConfig> noise_applied;

  Eigen::Index n_samples() const { return columns.cols(); }
};

using KernelFunction =
    std::function<double(const Eigen::RowVectorXd&, const Eigen::RowVectorXd&)>;

namespace detail {

// Eigenvalues of the 1D second-difference Dirichlet operator -D2 with m_int
// interior points: (4/h^2) sin^2(k pi / (2 (m_int + 1))), k = 1..m_int.
inline Eigen::VectorXd dirichlet_fd_eigenvalues(double h, Eigen::Index m_int) {
  Eigen::VectorXd lam(m_int);
  const double s = 4.0 / (h * h);
  for (Eigen::Index k = 1; k <= m_int; ++k)
    lam(k - 1) = s * std::pow(std::sin(0.5 * M_PI * k / static_cast<double>(m_int + 1)), 2);
  return lam;
}

inline void guard_resonance(double theta, const Eigen::VectorXd& laplacian_eigs,
                            const char* where) {
  const double t2 = theta * theta;
  for (Eigen::Index k = 0; k < laplacian_eigs.size(); ++k) {
    const double lam = laplacian_eigs(k);
    if (std::abs(t2 - lam) < 1e-6 * lam)
      throw ResonanceError(std::string(where) + ": theta = " + std::to_string(theta) +
                               " is within 1e-6 of the discrete eigenfrequency " +
                               std::to_string(std::sqrt(lam)),
                           theta, std::sqrt(lam));
  }
}

// Solves c2 * D2 u + diag(d) u = rhs on interior unknowns with zero Dirichlet
// values at both ends of the index range. rhs/result are m_int x cols.
inline Eigen::MatrixXd fd_dirichlet_solve(double h, double c2, const Eigen::VectorXd& d,
                                          const Eigen::MatrixXd& rhs) {
  const Eigen::Index m = rhs.rows();
  const double off = c2 / (h * h);
  Eigen::SparseMatrix<double> t(m, m);
  t.reserve(Eigen::VectorXi::Constant(static_cast<int>(m), 3));
  for (Eigen::Index i = 0; i < m; ++i) {
    if (i > 0) t.insert(i, i - 1) = off;
    t.insert(i, i) = -2.0 * off + d(i);
    if (i + 1 < m) t.insert(i, i + 1) = off;
  }
  t.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(t);
  if (lu.info() != Eigen::Success)
    throw Error("fd_dirichlet_solve: factorization failed (singular operator?)");
  return lu.solve(rhs);
}

inline void require_interval(const SensorGrid& g, double a, double b, const char* who) {
  if (g.domain != Domain::Interval || g.a != a || g.b != b)
    throw InvalidArgumentError(std::string(who) + ": grid must be the interval [" +
                               std::to_string(a) + ", " + std::to_string(b) + "]");
}

// Dense circulant solution operator for (-Delta)^theta on the periodic cell
// [-1, 1) sampled at the first n-1 grid points. The zero mode is annihilated,
// which realizes the mean-zero convention for both forcing and response.
inline Eigen::MatrixXd fractional_circulant(Eigen::Index n_cell, double theta) {
  const Eigen::Index n = n_cell;
  Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
  const double two_pi_over_n = 2.0 * M_PI / static_cast<double>(n);
  for (Eigen::Index m = 1; m < n; ++m) {
    const double freq = (m <= n / 2) ? static_cast<double>(m) : static_cast<double>(m) - n;
    const double sym = 1.0 / std::pow(std::abs(M_PI * freq), 2.0 * theta);
    for (Eigen::Index d = 0; d < n; ++d) g(d) += sym * std::cos(two_pi_over_n * m * d);
  }
  g /= static_cast<double>(n);
  Eigen::MatrixXd c(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) c(i, j) = g(((i - j) % n + n) % n);
  return c;
}

}  // namespace detail

// Closed-form Green's functions, available for Poisson1D on [0,1] and the
// unit-disk Poisson problem. The disk kernel has a pole at x = s.
inline std::optional<KernelFunction> exact_kernel(const ProblemSpec& problem) {
  switch (problem.kind) {
    case ProblemKind::Poisson1D: {
      detail::require_interval(problem.grid, 0.0, 1.0, "exact_kernel(poisson1d)");
      return KernelFunction([](const Eigen::RowVectorXd& x, const Eigen::RowVectorXd& s) {
        const double xx = x(0), ss = s(0);
        return xx <= ss ? xx * (1.0 - ss) : ss * (1.0 - xx);
      });
    }
    case ProblemKind::Poisson2DDisk: {
      return KernelFunction([](const Eigen::RowVectorXd& x, const Eigen::RowVectorXd& s) {
        const double num = (x - s).squaredNorm();
        if (num == 0.0) throw PoleError("disk kernel evaluated at x = s");
        const double cross = x(0) * s(1) - x(1) * s(0);
        const double dotm1 = x(0) * s(0) + x(1) * s(1) - 1.0;
        return std::log(num / (cross * cross + dotm1 * dotm1)) / (4.0 * M_PI);
      });
    }
    default:
      return std::nullopt;
  }
}

inline ResponseEnsemble solve_ensemble(const ProblemSpec& problem, const ForcingEnsemble& f) {
  if (!same_grid(problem.grid, f.grid))
    throw ShapeError("solve_ensemble: forcing grid differs from problem grid");
  const SensorGrid& g = problem.grid;
  const Eigen::Index n = g.size();
  const Eigen::Index cols = f.columns.cols();

  ResponseEnsemble r;
  r.grid = g;
  r.problem = problem;
  r.columns.setZero(n, cols);

  switch (problem.kind) {
    case ProblemKind::Poisson1D: {
      if (g.domain != Domain::Interval) throw InvalidArgumentError("poisson1d: interval grid required");
      const double h = g.spacing;
      const Eigen::Index m = n - 2;
      r.columns.middleRows(1, m) = detail::fd_dirichlet_solve(
          h, -1.0, Eigen::VectorXd::Zero(m), f.columns.middleRows(1, m));
      break;
    }
    case ProblemKind::Helmholtz1D: {
      if (g.domain != Domain::Interval) throw InvalidArgumentError("helmholtz1d: interval grid required");
      const double h = g.spacing;
      const Eigen::Index m = n - 2;
      detail::guard_resonance(problem.theta, detail::dirichlet_fd_eigenvalues(h, m), "helmholtz1d");
      const double t2 = problem.theta * problem.theta;
      r.columns.middleRows(1, m) = detail::fd_dirichlet_solve(
          h, 1.0, Eigen::VectorXd::Constant(m, t2), f.columns.middleRows(1, m));
      break;
    }
    case ProblemKind::Airy1D: {
      if (g.domain != Domain::Interval) throw InvalidArgumentError("airy1d: interval grid required");
      const double h = g.spacing;
      const Eigen::Index m = n - 2;
      const double t2 = problem.theta * problem.theta;
      Eigen::VectorXd d(m);
      for (Eigen::Index i = 0; i < m; ++i) d(i) = -t2 * g.points(i + 1, 0);
      r.columns.middleRows(1, m) = detail::fd_dirichlet_solve(h, 1.0, d, f.columns.middleRows(1, m));
      break;
    }
    case ProblemKind::MultiPhysics1D: {
      detail::require_interval(g, 0.0, 1.0, "multiphysics1d");
      const double h = g.spacing;
      // Dirichlet condition at the grid point nearest x = 1/4.
      Eigen::Index mid = 0;
      (g.points.col(0).array() - 0.25).abs().minCoeff(&mid);
      if (std::abs(g.points(mid, 0) - 0.25) > 0.5 * h + 1e-12)
        throw InvalidArgumentError("multiphysics1d: no grid point within h/2 of x = 1/4");
      if (mid < 2 || mid > n - 3)
        throw InvalidArgumentError("multiphysics1d: grid too coarse to split at x = 1/4");
      const Eigen::Index ml = mid - 1;       // interior unknowns of (0, x_mid)
      const Eigen::Index mr = n - mid - 2;   // interior unknowns of (x_mid, 1)
      detail::guard_resonance(problem.theta, detail::dirichlet_fd_eigenvalues(h, ml),
                              "multiphysics1d(left)");
      const double t2 = problem.theta * problem.theta;
      // (u'' + theta^2 u)/2 = f  <=>  u'' + theta^2 u = 2 f
      r.columns.middleRows(1, ml) = detail::fd_dirichlet_solve(
          h, 1.0, Eigen::VectorXd::Constant(ml, t2), 2.0 * f.columns.middleRows(1, ml));
      r.columns.middleRows(mid + 1, mr) = detail::fd_dirichlet_solve(
          h, -1.0, Eigen::VectorXd::Zero(mr), f.columns.middleRows(mid + 1, mr));
      break;
    }
    case ProblemKind::FractionalLaplacian1D: {
      detail::require_interval(g, -1.0, 1.0, "fraclap1d");
      if (!(problem.theta > 0.0 && problem.theta <= 1.0))
        throw InvalidArgumentError("fraclap1d: fractional order must lie in (0, 1]");
      const Eigen::Index nc = n - 1;  // periodic cell: last grid point duplicates the first
      const Eigen::MatrixXd c = detail::fractional_circulant(nc, problem.theta);
      Eigen::MatrixXd fc = f.columns.topRows(nc);
      // average the duplicated endpoint samples so the operator stays
      // self-adjoint under the trapezoid weights
      fc.row(0) = 0.5 * (f.columns.row(0) + f.columns.row(n - 1));
      r.columns.topRows(nc) = c * fc;
      r.columns.row(n - 1) = r.columns.row(0);
      break;
    }
    case ProblemKind::Poisson2DDisk: {
      if (g.domain != Domain::UnitDisk) throw InvalidArgumentError("poisson2d-disk: disk grid required");
      const KernelFunction kernel = *exact_kernel(problem);
      Eigen::MatrixXd a(n, n);
#pragma omp parallel for schedule(static)
      for (Eigen::Index i = 0; i < n; ++i) {
        a(i, i) = 0.0;  // pole omitted from the quadrature
        for (Eigen::Index j = 0; j < n; ++j)
          if (j != i) a(i, j) = g.weights(j) * kernel(g.points.row(i), g.points.row(j));
      }
      r.columns = a * f.columns;
      break;
    }
    case ProblemKind::Helmholtz2DSquare: {
      if (g.domain != Domain::UnitSquare || g.n_side < 3)
        throw InvalidArgumentError("helmholtz2d-square: grid from make_square_grid required");
      const double h = g.spacing;
      const int ni = g.n_side - 2;
      const Eigen::VectorXd lam1 = detail::dirichlet_fd_eigenvalues(h, ni);
      Eigen::VectorXd lam2(static_cast<Eigen::Index>(ni) * ni);
      for (int p = 0; p < ni; ++p)
        for (int q = 0; q < ni; ++q) lam2(static_cast<Eigen::Index>(p) * ni + q) = lam1(p) + lam1(q);
      detail::guard_resonance(problem.theta, lam2, "helmholtz2d-square");
      const double off = 1.0 / (h * h);
      const double t2 = problem.theta * problem.theta;
      Eigen::SparseMatrix<double> t(n, n);
      t.reserve(Eigen::VectorXi::Constant(static_cast<int>(n), 5));
      for (int iy = 0; iy < ni; ++iy) {
        for (int ix = 0; ix < ni; ++ix) {
          const Eigen::Index idx = static_cast<Eigen::Index>(iy) * ni + ix;
          if (iy > 0) t.insert(idx, idx - ni) = off;
          if (ix > 0) t.insert(idx, idx - 1) = off;
          t.insert(idx, idx) = -4.0 * off + t2;
          if (ix + 1 < ni) t.insert(idx, idx + 1) = off;
          if (iy + 1 < ni) t.insert(idx, idx + ni) = off;
        }
      }
      t.makeCompressed();
      Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(t);
      if (lu.info() != Eigen::Success)
        throw Error("helmholtz2d-square: factorization failed");
      r.columns = lu.solve(f.columns);
      break;
    }
  }
  return r;
}

// Perturbs every entry by level * c_ij * mean_i |u_j(x_i)| with i.i.d. standard
// normal c_ij. level = 0 returns the input unchanged.
inline ResponseEnsemble add_noise(const ResponseEnsemble& e, const NoiseConfig& cfg) {
  if (cfg.level < 0.0) throw InvalidArgumentError("add_noise: level must be >= 0");
  ResponseEnsemble out = e;
  out.noise_applied = cfg;
  if (cfg.level == 0.0) return out;
  const Eigen::Index n = e.columns.rows(), m = e.columns.cols();
#pragma omp parallel for schedule(static)
  for (Eigen::Index j = 0; j < m; ++j) {
    const double scale = cfg.level * e.columns.col(j).cwiseAbs().mean();
    if (scale == 0.0) continue;
    detail::NormalStream rng(cfg.seed, static_cast<std::uint64_t>(j));
    for (Eigen::Index i = 0; i < n; ++i) out.columns(i, j) += scale * rng.next();
  }
  return out;
}

}  // namespace egf
