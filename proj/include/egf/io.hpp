#pragma once

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "egf/errors.hpp"
#include "egf/forcing.hpp"
#include "egf/grid.hpp"
#include "egf/model.hpp"
#include "egf/solvers.hpp"

namespace egf {

inline constexpr int kBundleFormatVersion = 1;

namespace detail {

// 17 significant digits, enough for a bitwise double round trip.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw BundleError("cannot open " + tmp.string() + " for writing");
    out << content;
    if (!out) throw BundleError("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& m) {
  std::string body;
  body.reserve(static_cast<size_t>(m.size()) * 20);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) body += ',';
      body += format_double(m(i, j));
    }
    body += '\n';
  }
  atomic_write(path, body);
}

inline Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw BundleError("cannot open " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    const char* p = line.c_str();
    char* end = nullptr;
    for (;;) {
      const double v = std::strtod(p, &end);
      if (end == p) throw BundleError("malformed number in " + path.string());
      row.push_back(v);
      p = end;
      while (*p == ' ') ++p;
      if (*p == ',') {
        ++p;
        continue;
      }
      if (*p == '\0' || *p == '\r') break;
      throw BundleError("unexpected character in " + path.string());
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw BundleError("ragged rows in " + path.string());
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw BundleError("empty matrix file " + path.string());
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows.front().size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      m(i, j) = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
  return m;
}

inline Eigen::MatrixXd read_matrix_checked(const std::filesystem::path& path, Eigen::Index rows,
                                           Eigen::Index cols) {
  const Eigen::MatrixXd m = read_matrix_csv(path);
  if (m.rows() != rows || m.cols() != cols)
    throw BundleError("corrupt bundle: " + path.string() + " is " + std::to_string(m.rows()) +
                      "x" + std::to_string(m.cols()) + ", expected " + std::to_string(rows) + "x" +
                      std::to_string(cols));
  return m;
}

inline nlohmann::json grid_to_json(const SensorGrid& g) {
  nlohmann::json j;
  j["dim"] = g.dim;
  j["n_sensors"] = g.size();
  switch (g.domain) {
    case Domain::Interval:
      j["domain"] = "interval";
      j["a"] = g.a;
      j["b"] = g.b;
      break;
    case Domain::UnitDisk: j["domain"] = "unit_disk"; break;
    case Domain::UnitSquare:
      j["domain"] = "unit_square";
      j["n_side"] = g.n_side;
      break;
  }
  j["spacing"] = g.spacing;
  return j;
}

inline void grid_meta_from_json(const nlohmann::json& j, SensorGrid& g) {
  g.dim = j.at("dim").get<int>();
  const std::string dom = j.at("domain").get<std::string>();
  if (dom == "interval") {
    g.domain = Domain::Interval;
    g.a = j.at("a").get<double>();
    g.b = j.at("b").get<double>();
  } else if (dom == "unit_disk") {
    g.domain = Domain::UnitDisk;
  } else if (dom == "unit_square") {
    g.domain = Domain::UnitSquare;
    g.n_side = j.at("n_side").get<int>();
  } else {
    throw BundleError("unknown grid domain '" + dom + "'");
  }
  g.spacing = j.value("spacing", 0.0);
}

inline ProblemKind problem_kind_from_string(const std::string& s) {
  for (ProblemKind k :
       {ProblemKind::Poisson1D, ProblemKind::Helmholtz1D, ProblemKind::Airy1D,
        ProblemKind::MultiPhysics1D, ProblemKind::FractionalLaplacian1D,
        ProblemKind::Poisson2DDisk, ProblemKind::Helmholtz2DSquare})
    if (s == to_string(k)) return k;
  throw InvalidArgumentError("unknown problem kind '" + s + "'");
}

inline nlohmann::json load_manifest(const std::filesystem::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in) throw BundleError("cannot open " + (dir / "manifest.json").string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw BundleError("corrupt manifest in " + dir.string() + ": " + e.what());
  }
  if (!j.contains("format_version"))
    throw FormatError("manifest in " + dir.string() + " has no format_version field");
  if (j["format_version"].get<int>() != kBundleFormatVersion)
    throw FormatError("unsupported bundle format version in " + dir.string());
  return j;
}

}  // namespace detail

/// A training or test data set on disk: manifest plus sensors/weights/F/E.
struct DatasetBundle {
  ProblemSpec problem;
  KernelConfig kernel;
  ForcingEnsemble forcing;
  ResponseEnsemble response;
};

inline void save_bundle(const DatasetBundle& b, const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const SensorGrid& g = b.problem.grid;
  nlohmann::json j;
  j["format_version"] = kBundleFormatVersion;
  j["kind"] = "dataset";
  j["problem"] = {{"kind", to_string(b.problem.kind)}, {"theta", b.problem.theta}};
  j["grid"] = detail::grid_to_json(g);
  j["kernel"] = {{"family", "squared_exponential"},
                 {"length_scale", b.kernel.length_scale},
                 {"jitter", b.kernel.jitter}};
  j["n_samples"] = b.forcing.columns.cols();
  j["seed"] = b.forcing.seed;
  if (b.response.noise_applied)
    j["noise"] = {{"level", b.response.noise_applied->level},
                  {"seed", b.response.noise_applied->seed}};
  else
    j["noise"] = nullptr;
  detail::write_matrix_csv(dir / "sensors.csv", g.points);
  detail::write_matrix_csv(dir / "weights.csv", g.weights);
  detail::write_matrix_csv(dir / "F.csv", b.forcing.columns);
  detail::write_matrix_csv(dir / "E.csv", b.response.columns);
  detail::atomic_write(dir / "manifest.json", j.dump(2) + "\n");
}

inline DatasetBundle load_dataset_bundle(const std::filesystem::path& dir) {
  const nlohmann::json j = detail::load_manifest(dir);
  if (j.value("kind", "") != "dataset")
    throw BundleError(dir.string() + " is not a dataset bundle");
  DatasetBundle b;
  b.problem.kind = detail::problem_kind_from_string(j.at("problem").at("kind").get<std::string>());
  b.problem.theta = j.at("problem").at("theta").get<double>();
  SensorGrid g;
  detail::grid_meta_from_json(j.at("grid"), g);
  const auto n = j.at("grid").at("n_sensors").get<Eigen::Index>();
  const auto m = j.at("n_samples").get<Eigen::Index>();
  g.points = detail::read_matrix_checked(dir / "sensors.csv", n, g.dim);
  g.weights = detail::read_matrix_checked(dir / "weights.csv", n, 1);
  b.problem.grid = g;
  b.kernel.length_scale = j.at("kernel").at("length_scale").get<double>();
  b.kernel.jitter = j.at("kernel").at("jitter").get<double>();
  b.forcing.grid = g;
  b.forcing.seed = j.at("seed").get<std::uint64_t>();
  b.forcing.columns = detail::read_matrix_checked(dir / "F.csv", n, m);
  b.response.grid = g;
  b.response.problem = b.problem;
  b.response.columns = detail::read_matrix_checked(dir / "E.csv", n, m);
  if (!j.at("noise").is_null())
    b.response.noise_applied =
        NoiseConfig{j.at("noise").at("level").get<double>(),
                    j.at("noise").at("seed").get<std::uint64_t>()};
  return b;
}

// Model bundles are self-contained: they carry the grid next to phi/sigma.
// seed_lineage is free-form provenance recorded verbatim in the manifest.
inline void save_model_bundle(const EgfModel& m, const std::filesystem::path& dir,
                              const nlohmann::json& seed_lineage = nlohmann::json::object()) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  nlohmann::json j;
  j["format_version"] = kBundleFormatVersion;
  j["kind"] = "model";
  j["theta"] = m.theta;
  j["rank"] = m.rank();
  j["provenance"] = to_string(m.provenance);
  j["grid"] = detail::grid_to_json(m.grid);
  j["seed_lineage"] = seed_lineage;
  detail::write_matrix_csv(dir / "sensors.csv", m.grid.points);
  detail::write_matrix_csv(dir / "weights.csv", m.grid.weights);
  detail::write_matrix_csv(dir / "phi.csv", m.phi);
  detail::write_matrix_csv(dir / "sigma.csv", m.sigma);
  detail::atomic_write(dir / "manifest.json", j.dump(2) + "\n");
}

inline EgfModel load_model_bundle(const std::filesystem::path& dir) {
  const nlohmann::json j = detail::load_manifest(dir);
  if (j.value("kind", "") != "model") throw BundleError(dir.string() + " is not a model bundle");
  EgfModel m;
  SensorGrid g;
  detail::grid_meta_from_json(j.at("grid"), g);
  const auto n = j.at("grid").at("n_sensors").get<Eigen::Index>();
  const auto k = j.at("rank").get<Eigen::Index>();
  g.points = detail::read_matrix_checked(dir / "sensors.csv", n, g.dim);
  g.weights = detail::read_matrix_checked(dir / "weights.csv", n, 1);
  m.grid = g;
  m.phi = detail::read_matrix_checked(dir / "phi.csv", n, k);
  m.sigma = detail::read_matrix_checked(dir / "sigma.csv", k, 1);
  m.theta = j.at("theta").get<double>();
  const std::string prov = j.at("provenance").get<std::string>();
  m.provenance = prov == "pod" ? Provenance::Pod
                 : prov == "rsvd" ? Provenance::RandomizedSvd
                                  : Provenance::Interpolated;
  return m;
}

}  // namespace egf
