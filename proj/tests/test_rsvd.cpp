#include <catch2/catch.hpp>
#include <cmath>

#include "egf/detail/linalg.hpp"
#include "egf/detail/random.hpp"
#include "egf/forcing.hpp"
#include "egf/grid.hpp"
#include "egf/model.hpp"
#include "egf/rsvd.hpp"
#include "egf/solvers.hpp"

using namespace egf;

namespace {

Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    detail::NormalStream rng(seed, static_cast<std::uint64_t>(j));
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = rng.next();
  }
  return m;
}

ResponseEnsemble as_response(const SensorGrid& g, Eigen::MatrixXd cols) {
  ResponseEnsemble e;
  e.grid = g;
  e.problem = {ProblemKind::Poisson1D, 0.0, g};
  e.columns = std::move(cols);
  return e;
}

SensorGrid unit_weight_grid(int n) {
  SensorGrid g;
  g.dim = 1;
  g.domain = Domain::Interval;
  g.a = 0.0;
  g.b = static_cast<double>(n);
  g.points.resize(n, 1);
  for (int i = 0; i < n; ++i) g.points(i, 0) = i;
  g.weights = Eigen::VectorXd::Ones(n);
  return g;
}

}  // namespace

TEST_CASE("weighted_qr: single column normalizes in the W norm", "[rsvd]") {
  const SensorGrid g = make_interval_grid(0.0, 1.0, 33);
  const Eigen::MatrixXd v = random_matrix(g.size(), 1, 2);
  const Eigen::MatrixXd q = weighted_qr(as_response(g, v));
  REQUIRE(q.cols() == 1);
  const Eigen::VectorXd expected = v.col(0) / detail::norm_w(g.weights, v.col(0));
  const double sign = q.col(0).dot(expected) > 0 ? 1.0 : -1.0;
  CHECK(detail::max_abs(q.col(0) - sign * expected) < 1e-12);
}

TEST_CASE("weighted_qr: reduces to the economized QR when W = I", "[rsvd]") {
  const SensorGrid g = unit_weight_grid(24);
  const Eigen::MatrixXd e = random_matrix(24, 6, 3);
  const Eigen::MatrixXd q = weighted_qr(as_response(g, e));
  CHECK(q == detail::qr_positive(e).q);
}

TEST_CASE("weighted_qr: W-orthonormal columns at scale", "[rsvd]") {
  const SensorGrid g = make_interval_grid(0.0, 1.0, 2000);
  const Eigen::MatrixXd e = random_matrix(2000, 100, 4);
  const Eigen::MatrixXd q = weighted_qr(as_response(g, e));
  REQUIRE(q.cols() == 100);
  const Eigen::MatrixXd gram = q.transpose() * g.weights.asDiagonal() * q;
  CHECK(detail::max_abs(gram - Eigen::MatrixXd::Identity(100, 100)) <= 1e-10);
}

TEST_CASE("weighted_qr: rejects a zero ensemble", "[rsvd]") {
  const SensorGrid g = make_interval_grid(0.0, 1.0, 10);
  CHECK_THROWS_AS(weighted_qr(as_response(g, Eigen::MatrixXd::Zero(10, 2))),
                  DegenerateFitError);
}

TEST_CASE("weighted_qr: reproduces its own sketch", "[rsvd]") {
  const SensorGrid g = make_interval_grid(0.0, 1.0, 300);
  KernelConfig cfg;
  cfg.length_scale = 0.02;
  const ForcingEnsemble f = sample_gp(g, cfg, 40, 9);
  const ResponseEnsemble e = solve_ensemble({ProblemKind::Poisson1D, 0.0, g}, f);
  const Eigen::MatrixXd q = weighted_qr(e);
  const Eigen::MatrixXd residual =
      e.columns - q * (q.transpose() * (g.weights.asDiagonal() * e.columns));
  const auto wnorm = [&](const Eigen::MatrixXd& m) {
    return detail::scale_rows_sqrt(g.weights, m).norm();
  };
  CHECK(wnorm(residual) <= 1e-10 * wnorm(e.columns));
}

TEST_CASE("learn_rsvd: exact recovery of a synthetic SPD operator", "[rsvd]") {
  const int n = 50;
  const SensorGrid g = unit_weight_grid(n);
  const Eigen::MatrixXd a = random_matrix(n, n, 11);
  const Eigen::MatrixXd spd = a * a.transpose() + Eigen::MatrixXd::Identity(n, n);

  ProblemSpec p{ProblemKind::Poisson1D, 0.0, g};
  const ForwardOracle oracle = [&](const ProblemSpec&, const ForcingEnsemble& fe, int) {
    ResponseEnsemble r;
    r.grid = fe.grid;
    r.problem = p;
    r.columns = spd * (fe.grid.weights.asDiagonal() * fe.columns);  // W = I here
    return r;
  };
  ForcingEnsemble f;
  f.grid = g;
  f.columns = random_matrix(n, n, 12);
  const EgfModel m = learn_rsvd(p, f, n, oracle);
  CHECK(detail::max_abs(densify(m) - spd) <= 1e-8 * detail::max_abs(spd));
  CHECK(m.provenance == Provenance::RandomizedSvd);
}

TEST_CASE("learn_rsvd: signed eigenvalues of the Helmholtz kernel", "[rsvd][heavy]") {
  const SensorGrid g = make_interval_grid(0.0, 1.0, 2000);
  KernelConfig cfg;
  cfg.length_scale = 5e-3;
  const ForcingEnsemble f = sample_gp(g, cfg, 50, 13);
  ProblemSpec p{ProblemKind::Helmholtz1D, 4.0, g};
  RsvdDiagnostics diag;
  const EgfModel m = learn_rsvd(p, f, 10, {}, &diag);

  const double s1 = 1.0 / (16.0 - M_PI * M_PI);            // positive
  const double s2 = 1.0 / (16.0 - 4.0 * M_PI * M_PI);      // negative
  CHECK(m.sigma(0) == Approx(s1).epsilon(0.01));
  CHECK(m.sigma(1) == Approx(s2).epsilon(0.01));
  CHECK(m.sigma(0) > 0.0);
  CHECK(m.sigma(1) < 0.0);
  // leakage from the unsketched spectral tail only
  CHECK(diag.max_offdiag_ratio <= 1e-4);
  CHECK_FALSE(diag.self_adjointness_warning);
  CHECK(orthonormality_defect(m) <= 1e-10);
}

TEST_CASE("learn_rsvd: warns when the operator is not self-adjoint", "[rsvd]") {
  const int n = 40;
  const SensorGrid g = unit_weight_grid(n);
  Eigen::MatrixXd nonsym = random_matrix(n, n, 19);
  nonsym += 3.0 * Eigen::MatrixXd::Identity(n, n);
  ProblemSpec p{ProblemKind::Poisson1D, 0.0, g};
  const ForwardOracle oracle = [&](const ProblemSpec&, const ForcingEnsemble& fe, int) {
    ResponseEnsemble r;
    r.grid = fe.grid;
    r.problem = p;
    r.columns = nonsym * fe.columns;
    return r;
  };
  ForcingEnsemble f;
  f.grid = g;
  f.columns = random_matrix(n, n, 20);
  RsvdDiagnostics diag;
  learn_rsvd(p, f, n, oracle, &diag);
  CHECK(diag.self_adjointness_warning);
  CHECK(diag.max_offdiag_ratio > 1e-2);
}

TEST_CASE("learn_rsvd: kernel error decreases with rank, then flattens", "[rsvd][heavy]") {
  const SensorGrid g = make_interval_grid(0.0, 1.0, 600);
  KernelConfig cfg;
  cfg.length_scale = 5e-3;
  const ForcingEnsemble f = sample_gp(g, cfg, 100, 14);
  ProblemSpec p{ProblemKind::Poisson1D, 0.0, g};
  const auto kernel = *exact_kernel(p);
  const double e10 = relative_kernel_error(learn_rsvd(p, f, 10), kernel);
  const double e50 = relative_kernel_error(learn_rsvd(p, f, 50), kernel);
  const double e100 = relative_kernel_error(learn_rsvd(p, f, 100), kernel);
  CHECK(e10 > e50);
  CHECK(e50 >= 0.98 * e100);
}

TEST_CASE("learn_rsvd: propagates solver failures with the pass identified", "[rsvd]") {
  const SensorGrid g = make_interval_grid(0.0, 1.0, 30);
  ProblemSpec p{ProblemKind::Poisson1D, 0.0, g};
  ForcingEnsemble f;
  f.grid = g;
  f.columns = random_matrix(30, 4, 15);
  const ForwardOracle failing = [&](const ProblemSpec& ps, const ForcingEnsemble& fe,
                                    int pass) -> ResponseEnsemble {
    if (pass == 2) throw Error("synthetic failure");
    return solve_ensemble(ps, fe);
  };
  try {
    learn_rsvd(p, f, 2, failing);
    FAIL("expected propagation");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("pass 2") != std::string::npos);
  }
  CHECK_THROWS_AS(learn_rsvd(p, f, 0), InvalidArgumentError);
  CHECK_THROWS_AS(learn_rsvd(p, f, 5), InvalidArgumentError);
}
