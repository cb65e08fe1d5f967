#include <catch2/catch.hpp>
#include <filesystem>
#include <fstream>

#include "egf/experiments.hpp"

using namespace egf;
namespace fs = std::filesystem;

namespace {

RunOptions tiny() {
  RunOptions opt;
  opt.sensors = 300;
  opt.samples = 60;
  opt.rank = 20;
  opt.n_test = 15;
  opt.lengthscale = 0.02;
  opt.seed = 7;
  return opt;
}

}  // namespace

TEST_CASE("run_experiment: identical seeds give identical numbers", "[experiments]") {
  const ExperimentReport a = run_experiment("poisson1d-clean", tiny());
  const ExperimentReport b = run_experiment("poisson1d-clean", tiny());
  REQUIRE(a.rows.size() == b.rows.size());
  REQUIRE(a.rows.size() == 2);  // pod + rsvd
  for (size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].method == b.rows[i].method);
    REQUIRE(a.rows[i].epsilon_percent.has_value());
    REQUIRE(a.rows[i].epsilon_test_percent.has_value());
    CHECK(*a.rows[i].epsilon_percent == *b.rows[i].epsilon_percent);  // bitwise
    CHECK(*a.rows[i].epsilon_test_percent == *b.rows[i].epsilon_test_percent);
  }
}

TEST_CASE("run_experiment: rows carry complete provenance", "[experiments]") {
  const ExperimentReport r = run_experiment("poisson1d-noisy", tiny());
  for (const ReportRow& row : r.rows) {
    CHECK(row.params.contains("seed"));
    CHECK(row.params.contains("test_seed"));
    CHECK(row.params.contains("lengthscale"));
    CHECK(row.params.contains("samples"));
    CHECK(row.params.contains("rank"));
    CHECK(row.params.at("noise").get<double>() > 0.0);
    CHECK(row.params.contains("noise_seed_pass1"));
    if (row.method == "rsvd") CHECK(row.params.contains("noise_seed_pass2"));
  }
}

TEST_CASE("run_experiment: writes report and data files", "[experiments]") {
  const fs::path dir = fs::temp_directory_path() / "egf_report_test";
  fs::remove_all(dir);
  const ExperimentReport r = run_experiment("poisson1d-clean", tiny(), dir);
  CHECK(fs::exists(dir / "report.csv"));
  CHECK(fs::exists(dir / "report.json"));
  CHECK(fs::exists(dir / "G_poisson1d-clean_pod.csv"));
  CHECK(fs::exists(dir / "G_poisson1d-clean_rsvd.csv"));
  CHECK(fs::exists(dir / "G_poisson1d_exact.csv"));

  std::ifstream in(dir / "report.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header ==
        "recipe,experiment,method,theta,epsilon_percent,epsilon_test_percent,wall_ms,params");
  int lines = 0;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) ++lines;
  CHECK(lines == static_cast<int>(r.rows.size()));
  fs::remove_all(dir);
}

TEST_CASE("run_experiment: interpolation recipe at reduced size", "[experiments]") {
  RunOptions opt = tiny();
  opt.rank = 12;
  opt.samples = 30;
  const ExperimentReport r = run_experiment("airy-interp", opt);
  REQUIRE(r.rows.size() == 1);
  REQUIRE(r.rows[0].epsilon_percent.has_value());
  REQUIRE(r.rows[0].epsilon_test_percent.has_value());
  CHECK(r.rows[0].method == "interp");
  CHECK(r.rows[0].theta == 7.0);
  CHECK(r.rows[0].params.at("scheme") == "lagrange");
  CHECK(r.rows[0].params.at("knots").size() == 3);
}

TEST_CASE("run_sweep: averages per-seed kernel errors", "[experiments]") {
  SweepFixed fixed;
  fixed.sensors = 200;
  fixed.samples = 60;
  fixed.rank = 15;
  fixed.lengthscale = 0.02;
  fixed.n_seeds = 3;
  fixed.base_seed = 5;
  const auto series = run_sweep(SweepParam::Rank, {5, 10, 15}, fixed);
  REQUIRE(series.size() == 3);
  for (const SweepPoint& pt : series) {
    REQUIRE(pt.per_seed_percent.size() == 3);
    double acc = 0.0;
    for (double v : pt.per_seed_percent) acc += v;
    CHECK(pt.mean_epsilon_percent == Approx(acc / 3.0));
  }
  // more modes resolve more of the kernel
  CHECK(series[0].mean_epsilon_percent > series[2].mean_epsilon_percent);
}

TEST_CASE("run_experiment: unknown recipe is rejected", "[experiments]") {
  CHECK_THROWS_AS(run_experiment("no-such-recipe", {}), InvalidArgumentError);
}
