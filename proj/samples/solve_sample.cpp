// Solves one small problem with the regret estimator and the classical
// baselines, then reports the worst-case perturbation found for the regret
// solution.
//
//   solve_sample [problem.json]

#include <iomanip>
#include <iostream>

#include "regret_ls/regret_ls.hpp"

using namespace regret_ls;

int main(int argc, char** argv) {
  ProblemSpec spec;
  if (argc > 1) {
    spec = io::load_problem(argv[1]).spec;
  } else {
    oracle::Rng rng(42);
    spec = validation::random_problem(rng, 5, 3);
    spec.delta_H = spec.delta_Y = 0.6;
  }

  const RegretEstimate e = solve_regret_ls(spec);
  std::cout << std::setprecision(6);
  std::cout << "regret bound gamma* = " << e.gamma_star << " (" << e.report.iterations
            << " SDP iterations)\n";

  for (const char* name : {"rgrt-ls", "ls", "tls", "rbst-ls"}) {
    if (spec.delta_H == 0.0 && spec.delta_Y == 0.0 && std::string(name) == "rbst-ls") continue;
    const ComplexVector x = experiments::run_estimator(name, spec).x;
    std::cout << std::setw(8) << name << "  nominal residual " << (spec.y - spec.H * x).squaredNorm()
              << "  worst-case residual "
              << baselines::worst_case_residual(spec.H, spec.y, spec.delta_H, spec.delta_Y, x)
              << '\n';
  }

  if (spec.delta_H > 0.0 || spec.delta_Y > 0.0) {
    const RegretLmi lmi(spec, Formulation::Regret);
    const oracle::WorstCase wc =
        oracle::worst_case_perturbation(lmi, LmiPoint{e.gamma_star, e.tau, e.x_hat});
    std::cout << "worst perturbation: ||dH|| = " << wc.perturbation.norm_first
              << ", ||dy|| = " << wc.perturbation.norm_second
              << ", linearized regret " << wc.regret << '\n';
  }
  return 0;
}
