#include <catch2/catch.hpp>
#include <filesystem>
#include <fstream>

#include "egf/forcing.hpp"
#include "egf/grid.hpp"
#include "egf/io.hpp"
#include "egf/pod.hpp"
#include "egf/solvers.hpp"

using namespace egf;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("egf_io_test_" + name);
  fs::remove_all(p);
  return p;
}

DatasetBundle small_bundle() {
  DatasetBundle b;
  const SensorGrid g = make_interval_grid(0.0, 1.0, 64);
  b.problem = {ProblemKind::Poisson1D, 0.0, g};
  b.kernel.length_scale = 0.05;
  b.forcing = sample_gp(g, b.kernel, 9, 1234);
  b.response = solve_ensemble(b.problem, b.forcing);
  return b;
}

}  // namespace

TEST_CASE("dataset bundle round trip is bitwise", "[io]") {
  const fs::path dir = temp_dir("dataset");
  DatasetBundle b = small_bundle();
  b.response = add_noise(b.response, NoiseConfig{0.1, 77});
  save_bundle(b, dir);

  const DatasetBundle r = load_dataset_bundle(dir);
  CHECK(r.forcing.columns == b.forcing.columns);
  CHECK(r.response.columns == b.response.columns);
  CHECK(r.problem.grid.points == b.problem.grid.points);
  CHECK(r.problem.grid.weights == b.problem.grid.weights);
  CHECK(r.problem.kind == b.problem.kind);
  CHECK(r.kernel.length_scale == b.kernel.length_scale);
  CHECK(r.forcing.seed == b.forcing.seed);
  REQUIRE(r.response.noise_applied.has_value());
  CHECK(r.response.noise_applied->level == 0.1);
  CHECK(r.response.noise_applied->seed == 77);
  fs::remove_all(dir);
}

TEST_CASE("model bundle round trip is bitwise", "[io]") {
  const fs::path dir = temp_dir("model");
  const DatasetBundle b = small_bundle();
  const EgfModel m = learn_pod(b.forcing, b.response, 5);
  save_model_bundle(m, dir, {{"train_seed", 1234}});

  const EgfModel r = load_model_bundle(dir);
  CHECK(r.phi == m.phi);
  CHECK(r.sigma == m.sigma);
  CHECK(r.theta == m.theta);
  CHECK(r.provenance == m.provenance);
  CHECK(r.grid.points == m.grid.points);
  CHECK(r.grid.weights == m.grid.weights);
  fs::remove_all(dir);
}

TEST_CASE("truncated matrix file is reported as corrupt", "[io]") {
  const fs::path dir = temp_dir("truncated");
  save_bundle(small_bundle(), dir);

  // drop half the rows of E.csv
  std::ifstream in(dir / "E.csv");
  std::string keep, line;
  for (int i = 0; i < 30 && std::getline(in, line); ++i) keep += line + "\n";
  in.close();
  std::ofstream out(dir / "E.csv", std::ios::trunc);
  out << keep;
  out.close();

  try {
    load_dataset_bundle(dir);
    FAIL("expected BundleError");
  } catch (const BundleError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("E.csv") != std::string::npos);
    CHECK(msg.find("64x9") != std::string::npos);  // expected dims named
  }
  fs::remove_all(dir);
}

TEST_CASE("missing format version is an unsupported-format error", "[io]") {
  const fs::path dir = temp_dir("version");
  save_bundle(small_bundle(), dir);
  {
    std::ifstream in(dir / "manifest.json");
    nlohmann::json j;
    in >> j;
    in.close();
    j.erase("format_version");
    std::ofstream out(dir / "manifest.json", std::ios::trunc);
    out << j.dump(2);
  }
  CHECK_THROWS_AS(load_dataset_bundle(dir), FormatError);
  fs::remove_all(dir);
}

TEST_CASE("csv writer survives extreme doubles", "[io]") {
  const fs::path dir = temp_dir("csv");
  fs::create_directories(dir);
  Eigen::MatrixXd m(2, 3);
  m << 1.0 / 3.0, -2.2250738585072014e-308, 1.7976931348623157e308,
      0.1 + 0.2, -0.0, 4.9e-324;
  detail::write_matrix_csv(dir / "m.csv", m);
  const Eigen::MatrixXd r = detail::read_matrix_csv(dir / "m.csv");
  REQUIRE(r.rows() == 2);
  REQUIRE(r.cols() == 3);
  CHECK(r == m);  // bitwise through 17 significant digits
  fs::remove_all(dir);
}
