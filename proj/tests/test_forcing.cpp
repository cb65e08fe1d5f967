#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <catch2/catch.hpp>
#include <cmath>

#include "egf/forcing.hpp"
#include "egf/grid.hpp"

using namespace egf;

TEST_CASE("covariance matrix: unit diagonal and known off-diagonal", "[forcing]") {
  SensorGrid g;
  g.dim = 1;
  g.points.resize(2, 1);
  g.points << 0.0, 0.1;
  g.weights = Eigen::VectorXd::Constant(2, 0.05);

  KernelConfig cfg;
  cfg.length_scale = 0.1;
  const Eigen::MatrixXd k = covariance_matrix(g, cfg);
  CHECK(k(0, 0) == 1.0);
  CHECK(k(1, 1) == 1.0);
  // separation equal to the length scale
  CHECK(k(0, 1) == Approx(std::exp(-0.5)).epsilon(1e-14));
  CHECK(k(1, 0) == k(0, 1));
}

TEST_CASE("covariance matrix: positive semidefinite before jitter", "[forcing]") {
  const SensorGrid g = make_interval_grid(0.0, 1.0, 10);
  KernelConfig cfg;
  cfg.length_scale = 0.1;
  const Eigen::MatrixXd k = covariance_matrix(g, cfg);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k);
  CHECK(es.eigenvalues().minCoeff() >= -1e-10);
}

TEST_CASE("sample_gp: single-point grid draws have unit variance", "[forcing]") {
  SensorGrid g;
  g.dim = 1;
  g.points = Eigen::MatrixXd::Constant(1, 1, 0.3);
  g.weights = Eigen::VectorXd::Constant(1, 1.0);
  KernelConfig cfg;
  cfg.length_scale = 0.2;
  const ForcingEnsemble f = sample_gp(g, cfg, 4000, 11);
  const double var = f.columns.row(0).array().square().mean();
  CHECK(var > 0.9);
  CHECK(var < 1.1);
}

TEST_CASE("sample_gp: deterministic and counter-based per column", "[forcing]") {
  const SensorGrid g = make_interval_grid(0.0, 1.0, 40);
  KernelConfig cfg;
  cfg.length_scale = 0.05;
  const ForcingEnsemble a = sample_gp(g, cfg, 7, 123);
  const ForcingEnsemble b = sample_gp(g, cfg, 7, 123);
  CHECK(a.columns == b.columns);  // bitwise

  // column j depends only on (seed, j)
  const ForcingEnsemble wide = sample_gp(g, cfg, 12, 123);
  CHECK(wide.columns.leftCols(7) == a.columns);

  const ForcingEnsemble other = sample_gp(g, cfg, 7, 124);
  CHECK(a.columns != other.columns);
}

TEST_CASE("sample_gp: marginal variance about one at the default scale", "[forcing][heavy]") {
  const SensorGrid g = make_interval_grid(0.0, 1.0, 2000);
  KernelConfig cfg;
  cfg.length_scale = 0.0025;
  const ForcingEnsemble f = sample_gp(g, cfg, 2000, 5);
  // average per-sensor empirical variance
  const double mean_var = f.columns.array().square().rowwise().mean().mean();
  CHECK(mean_var > 0.9);
  CHECK(mean_var < 1.1);
}

TEST_CASE("sample_gp: forcing ensemble has high numerical rank", "[forcing][heavy]") {
  const SensorGrid g = make_interval_grid(0.0, 1.0, 2000);
  KernelConfig cfg;
  cfg.length_scale = 5e-3;
  const ForcingEnsemble f = sample_gp(g, cfg, 200, 21);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(f.columns);
  const Eigen::VectorXd& s = svd.singularValues();
  int numerical_rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > 1e-12 * s(0)) ++numerical_rank;
  CHECK(numerical_rank > 100);
}

TEST_CASE("cholesky escalation: rescues a singular PSD kernel", "[forcing]") {
  SensorGrid g;
  g.dim = 1;
  g.points.resize(2, 1);
  g.points << 0.0, 1.0;
  g.weights = Eigen::VectorXd::Constant(2, 0.5);
  KernelConfig cfg;
  cfg.length_scale = 1e3;  // K ~ all-ones: singular, but PSD -> jitter rescues it
  double used = -1.0;
  CHECK_NOTHROW(detail::gp_cholesky(g, cfg, &used));
  CHECK(used <= 1e-6);
}

TEST_CASE("cholesky escalation: reports the attempted jitter on indefinite input", "[forcing]") {
  Eigen::MatrixXd bad(2, 2);
  bad << 1.0, 2.0, 2.0, 1.0;  // eigenvalues 3 and -1, beyond any jitter on the ladder
  try {
    detail::cholesky_with_escalation(bad, 0.0);
    FAIL("expected IllConditionedKernelError");
  } catch (const IllConditionedKernelError& e) {
    CHECK(e.attempted_jitter == Approx(1e-6));
    CHECK(std::string(e.what()).find("jitter") != std::string::npos);
  }
}

TEST_CASE("sample_gp: rejects bad sample counts", "[forcing]") {
  const SensorGrid g = make_interval_grid(0.0, 1.0, 5);
  KernelConfig cfg;
  CHECK_THROWS_AS(sample_gp(g, cfg, 0, 1), InvalidArgumentError);
}
