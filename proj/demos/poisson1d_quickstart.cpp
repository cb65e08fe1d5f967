// Minimal end-to-end run: probe the 1D Poisson operator with GP forcings,
// learn a rank-40 model with both learners, and compare against the closed
// form kernel.

#include <cstdio>

#include "egf/egf.hpp"

int main() {
  const egf::SensorGrid grid = egf::make_interval_grid(0.0, 1.0, 800);
  const egf::ProblemSpec problem{egf::ProblemKind::Poisson1D, 0.0, grid};
  egf::KernelConfig kernel;
  kernel.length_scale = 0.01;

  const egf::ForcingEnsemble train = egf::sample_gp(grid, kernel, 400, 42);
  const egf::ResponseEnsemble responses = egf::solve_ensemble(problem, train);

  const egf::EgfModel pod = egf::learn_pod(train, responses, 40);
  const egf::EgfModel rsvd =
      egf::learn_rsvd(problem, egf::sample_gp(grid, kernel, 40, 7), 40);

  const egf::KernelFunction exact = *egf::exact_kernel(problem);
  std::printf("pod   kernel error: %.3f%%\n", egf::relative_kernel_error(pod, exact));
  std::printf("rsvd  kernel error: %.3f%%\n", egf::relative_kernel_error(rsvd, exact));

  const egf::ForcingEnsemble test = egf::sample_gp(grid, kernel, 50, 1042);
  const egf::ResponseEnsemble test_resp = egf::solve_ensemble(problem, test);
  std::printf("pod   test error:   %.3f%%\n",
              100.0 * *egf::test_error(pod, test, test_resp).test_error);
  std::printf("rsvd  test error:   %.3f%%\n",
              100.0 * *egf::test_error(rsvd, test, test_resp).test_error);
  return 0;
}
