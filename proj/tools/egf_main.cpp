// Experiment-runner CLI: dataset generation, the two learners, model
// evaluation, manifold interpolation, and the canned experiment recipes.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "egf/egf.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonFlags {
  std::string problem = "poisson1d";
  double theta = 0.0;
  int sensors = 2000;
  int samples = 100;
  int rank = 100;
  double lengthscale = -1.0;  // <0: per-problem default
  double noise = 0.0;
  std::uint64_t seed = 42;
  std::string out;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool with_model_flags = true) {
  cmd->add_option("--problem", f.problem,
                  "problem kind: poisson1d|helmholtz1d|airy1d|multiphysics1d|fraclap1d|"
                  "poisson2d-disk|helmholtz2d-square");
  cmd->add_option("--theta", f.theta, "model parameter");
  cmd->add_option("--sensors", f.sensors, "number of sensors");
  cmd->add_option("--samples", f.samples, "number of training samples");
  if (with_model_flags) cmd->add_option("--rank", f.rank, "target rank K");
  cmd->add_option("--lengthscale", f.lengthscale, "GP kernel length scale");
  cmd->add_option("--noise", f.noise, "relative noise level on training responses");
  cmd->add_option("--seed", f.seed, "base RNG seed");
}

egf::CellConfig to_cell(const CommonFlags& f) {
  egf::CellConfig c;
  c.problem.kind = egf::detail::problem_kind_from_string(f.problem);
  c.problem.theta = f.theta;
  c.problem.grid = egf::default_grid(c.problem.kind, f.sensors);
  c.kernel.length_scale =
      f.lengthscale > 0 ? f.lengthscale : egf::default_lengthscale(c.problem.kind);
  c.samples = f.samples;
  c.rank = f.rank;
  c.noise = f.noise;
  c.seed = f.seed;
  return c;
}

json lineage(const egf::CellConfig& c, const std::string& method) {
  return c.provenance(method);
}

int run(int argc, char** argv) {
  CLI::App app{"empirical Green's function learning and interpolation"};
  app.require_subcommand(1);

  // generate ---------------------------------------------------------------
  CommonFlags gen;
  CLI::App* generate = app.add_subcommand("generate", "sample forcings and solve for responses");
  add_common(generate, gen, false);
  generate->add_option("--out", gen.out, "output dataset directory")->required();

  // learn-pod --------------------------------------------------------------
  std::string pod_data, pod_out;
  int pod_rank = 100;
  CLI::App* learn_pod_cmd = app.add_subcommand("learn-pod", "fit a model from a dataset bundle");
  learn_pod_cmd->add_option("--data", pod_data, "dataset bundle directory")->required();
  learn_pod_cmd->add_option("--rank", pod_rank, "target rank K");
  learn_pod_cmd->add_option("--out", pod_out, "output model directory")->required();

  // learn-rsvd -------------------------------------------------------------
  CommonFlags rs;
  CLI::App* learn_rsvd_cmd =
      app.add_subcommand("learn-rsvd", "two-pass randomized learner (needs solver access)");
  add_common(learn_rsvd_cmd, rs);
  learn_rsvd_cmd->add_option("--out", rs.out, "output model directory")->required();

  // evaluate ---------------------------------------------------------------
  CommonFlags ev;
  std::string eval_model, eval_data, eval_out;
  int eval_ntest = 100;
  CLI::App* evaluate = app.add_subcommand("evaluate", "kernel/test errors of a saved model");
  evaluate->add_option("--model", eval_model, "model bundle directory")->required();
  evaluate->add_option("--data", eval_data, "test dataset bundle (default: fresh draws)");
  add_common(evaluate, ev, false);
  evaluate->add_option("--n-test", eval_ntest, "fresh test samples when --data is absent");
  evaluate->add_option("--out", eval_out, "also write the result JSON here");

  // interpolate ------------------------------------------------------------
  std::vector<std::string> interp_models;
  std::string interp_out, interp_scheme = "lagrange";
  double interp_theta = 0.0;
  CLI::App* interpolate = app.add_subcommand("interpolate", "interpolate saved models in theta");
  interpolate->add_option("--models", interp_models, "knot model directories")
      ->required()
      ->delimiter(',');
  interpolate->add_option("--theta", interp_theta, "target parameter")->required();
  interpolate->add_option("--scheme", interp_scheme, "lagrange|linear");
  interpolate->add_option("--out", interp_out, "output model directory")->required();

  // report -----------------------------------------------------------------
  std::string recipe, report_out, report_scheme;
  CommonFlags rep;
  int rep_ntest = -1, rep_nseeds = -1;
  bool rep_theta_set = false;
  CLI::App* report = app.add_subcommand("report", "run a named experiment recipe");
  report->add_option("--recipe", recipe,
                     "one of: " + [] {
                       std::string s;
                       for (const auto& n : egf::experiment_names()) s += n + " ";
                       return s;
                     }())
      ->required();
  report->add_option("--out", report_out, "report output directory")->required();
  report->add_option("--sensors", rep.sensors);
  report->add_option("--samples", rep.samples);
  report->add_option("--rank", rep.rank);
  report->add_option("--lengthscale", rep.lengthscale);
  report->add_option("--noise", rep.noise);
  report->add_option("--seed", rep.seed);
  report->add_option("--theta", rep.theta)->each([&](const std::string&) { rep_theta_set = true; });
  report->add_option("--scheme", report_scheme, "lagrange|linear");
  report->add_option("--n-test", rep_ntest);
  report->add_option("--n-seeds", rep_nseeds);

  CLI11_PARSE(app, argc, argv);

  if (generate->parsed()) {
    egf::CellConfig c = to_cell(gen);
    egf::DatasetBundle b;
    b.problem = c.problem;
    b.kernel = c.kernel;
    b.forcing = egf::sample_gp(c.problem.grid, c.kernel, c.samples, c.seed);
    b.response = egf::solve_ensemble(b.problem, b.forcing);
    if (c.noise > 0.0)
      b.response = egf::add_noise(
          b.response, egf::NoiseConfig{c.noise, c.seed + egf::kNoiseSeedOffsetPass1});
    egf::save_bundle(b, gen.out);
    std::cout << json{{"written", gen.out},
                      {"n_sensors", b.problem.grid.size()},
                      {"n_samples", b.forcing.columns.cols()}}
                     .dump()
              << "\n";
  } else if (learn_pod_cmd->parsed()) {
    const egf::DatasetBundle b = egf::load_dataset_bundle(pod_data);
    const egf::EgfModel m = egf::learn_pod(b.forcing, b.response, pod_rank);
    json lin{{"train_seed", b.forcing.seed}, {"data", pod_data}};
    if (b.response.noise_applied) lin["noise_seed"] = b.response.noise_applied->seed;
    egf::save_model_bundle(m, pod_out, lin);
    std::cout << json{{"written", pod_out}, {"rank", m.rank()}, {"method", "pod"}}.dump()
              << "\n";
  } else if (learn_rsvd_cmd->parsed()) {
    const egf::CellConfig c = to_cell(rs);
    const egf::EgfModel m = egf::learn_cell_rsvd(c);
    egf::save_model_bundle(m, rs.out, lineage(c, "rsvd"));
    std::cout << json{{"written", rs.out}, {"rank", m.rank()}, {"method", "rsvd"}}.dump()
              << "\n";
  } else if (evaluate->parsed()) {
    const egf::EgfModel m = egf::load_model_bundle(eval_model);
    json out;
    out["model"] = eval_model;
    if (!eval_data.empty()) {
      const egf::DatasetBundle b = egf::load_dataset_bundle(eval_data);
      const egf::ErrorReport er = egf::test_error(m, b.forcing, b.response);
      if (er.test_error) out["epsilon_test_percent"] = 100.0 * *er.test_error;
      out["excluded_samples"] = er.excluded_samples;
      if (const auto kernel = egf::exact_kernel(b.problem))
        out["epsilon_percent"] = egf::relative_kernel_error(
            m, *kernel, b.problem.kind == egf::ProblemKind::Poisson2DDisk);
    } else {
      egf::CellConfig c = to_cell(ev);
      c.problem.grid = m.grid;  // evaluate on the model's own grid
      c.n_test = eval_ntest;
      const egf::EvalResult r = egf::evaluate_cell(m, c);
      if (r.epsilon_percent) out["epsilon_percent"] = *r.epsilon_percent;
      if (r.epsilon_test_percent) out["epsilon_test_percent"] = *r.epsilon_test_percent;
      out["test_seed"] = c.seed + egf::kTestSeedOffset;
    }
    const std::string payload = out.dump(2) + "\n";
    std::cout << payload;
    if (!eval_out.empty()) egf::detail::atomic_write(eval_out, payload);
  } else if (interpolate->parsed()) {
    egf::InterpolationSet set;
    for (const std::string& dir : interp_models)
      set.knots.push_back(egf::load_model_bundle(dir));
    set.target_theta = interp_theta;
    const egf::InterpScheme scheme = interp_scheme == "linear"
                                         ? egf::InterpScheme::PiecewiseLinear
                                         : egf::InterpScheme::FullLagrange;
    const egf::EgfModel m = egf::interpolate_egf(set, scheme);
    json lin;
    lin["knots"] = json::array();
    for (const auto& k : set.knots) lin["knots"].push_back(k.theta);
    lin["origin_theta"] = set.knots[static_cast<size_t>(egf::select_origin(set))].theta;
    lin["scheme"] = egf::to_string(scheme);
    lin["sources"] = interp_models;
    egf::save_model_bundle(m, interp_out, lin);
    std::cout << json{{"written", interp_out}, {"theta", m.theta}}.dump() << "\n";
  } else if (report->parsed()) {
    egf::RunOptions opt;
    if (report->count("--sensors")) opt.sensors = rep.sensors;
    if (report->count("--samples")) opt.samples = rep.samples;
    if (report->count("--rank")) opt.rank = rep.rank;
    if (report->count("--lengthscale")) opt.lengthscale = rep.lengthscale;
    if (report->count("--noise")) opt.noise = rep.noise;
    if (report->count("--seed")) opt.seed = rep.seed;
    if (rep_theta_set) opt.theta = rep.theta;
    if (rep_ntest >= 0) opt.n_test = rep_ntest;
    if (rep_nseeds >= 0) opt.n_seeds = rep_nseeds;
    if (!report_scheme.empty())
      opt.scheme = report_scheme == "linear" ? egf::InterpScheme::PiecewiseLinear
                                             : egf::InterpScheme::FullLagrange;
    const egf::ExperimentReport rep_result = egf::run_experiment(recipe, opt, report_out);
    std::cout << json{{"recipe", recipe},
                      {"rows", rep_result.rows.size()},
                      {"report", (fs::path(report_out) / "report.csv").string()}}
                     .dump()
              << "\n";
  }
  return 0;
}

const char* error_type(const std::exception& e) {
  if (dynamic_cast<const egf::InvalidArgumentError*>(&e)) return "invalid-argument";
  if (dynamic_cast<const egf::ShapeError*>(&e)) return "shape";
  if (dynamic_cast<const egf::IllConditionedKernelError*>(&e)) return "ill-conditioned-kernel";
  if (dynamic_cast<const egf::ResonanceError*>(&e)) return "resonance";
  if (dynamic_cast<const egf::RankError*>(&e)) return "rank";
  if (dynamic_cast<const egf::DegenerateFitError*>(&e)) return "degenerate-fit";
  if (dynamic_cast<const egf::TooLargeError*>(&e)) return "too-large";
  if (dynamic_cast<const egf::PoleError*>(&e)) return "pole";
  if (dynamic_cast<const egf::FormatError*>(&e)) return "unsupported-format";
  if (dynamic_cast<const egf::BundleError*>(&e)) return "corrupt-bundle";
  return "internal";
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << json{{"error", {{"type", error_type(e)}, {"message", e.what()}}}}.dump()
              << "\n";
    return 1;
  }
}
