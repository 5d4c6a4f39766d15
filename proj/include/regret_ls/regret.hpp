#ifndef REGRET_LS_REGRET_HPP
#define REGRET_LS_REGRET_HPP

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "regret_ls/errors.hpp"
#include "regret_ls/lmi.hpp"
#include "regret_ls/problem.hpp"
#include "regret_ls/sdp.hpp"

namespace regret_ls {

struct SolveReport {
  sdp::Status status = sdp::Status::NumericalFailure;
  int iterations = 0;
  double duality_gap = 0.0;
  double relative_gap = 0.0;
  double dual_residual = 0.0;
  double min_slack_eigenvalue = 0.0;
  std::string message;
};

inline SolveReport make_report(const sdp::SdpSolution& s) {
  return {s.status, s.iterations, s.duality_gap, s.relative_gap,
          s.dual_residual, s.min_slack_eigenvalue, s.message};
}

struct RegretEstimate {
  Formulation formulation = Formulation::Regret;
  ComplexVector x_hat;
  double gamma_star = 0.0;
  std::vector<double> tau;
  SolveReport report;
};

namespace detail {

[[noreturn]] inline void throw_solver_failure(Formulation f, const sdp::SdpSolution& s) {
  std::ostringstream msg;
  msg << to_string(f) << ": SDP solve ended with status " << sdp::to_string(s.status)
      << " after " << s.iterations << " iterations (relative gap " << s.relative_gap
      << ", dual residual " << s.dual_residual << ")";
  if (!s.message.empty()) msg << ": " << s.message;
  if (s.status == sdp::Status::Infeasible) {
    msg << " [internal error: these formulations are always strictly feasible]";
  }
  throw SolverError(msg.str(), s.iterations);
}

}  // namespace detail

/// Solves the minimax problem encoded by `formulation` exactly as stated
/// (no dispatch). Throws SolverError unless the SDP reaches Optimal.
inline RegretEstimate solve_formulation(const ProblemSpec& spec, Formulation formulation,
                                        const sdp::SolverOptions& opts = {}) {
  spec.validate();
  const RegretLmi lmi(spec, formulation);
  const sdp::SdpSolution sol = sdp::solve(lmi.system(), opts);
  if (sol.status != sdp::Status::Optimal) detail::throw_solver_failure(formulation, sol);
  const LmiPoint p = lmi.decode(sol.z);
  RegretEstimate out;
  out.formulation = formulation;
  out.x_hat = p.x;
  out.gamma_star = p.gamma;
  out.tau = p.tau;
  out.report = make_report(sol);
  return out;
}

/// Worst-case objective of a fixed point x: min gamma over the multipliers only.
inline RegretEstimate evaluate_worst_case(const ProblemSpec& spec, Formulation formulation,
                                          const ComplexVector& x,
                                          const sdp::SolverOptions& opts = {}) {
  spec.validate();
  const RegretLmi lmi(spec, formulation);
  const sdp::SdpSolution sol = sdp::solve(lmi.system(x), opts);
  if (sol.status != sdp::Status::Optimal) detail::throw_solver_failure(formulation, sol);
  const LmiPoint p = lmi.decode(sol.z, x);
  RegretEstimate out;
  out.formulation = formulation;
  out.x_hat = x;
  out.gamma_star = p.gamma;
  out.tau = p.tau;
  out.report = make_report(sol);
  return out;
}

/// Unstructured regret estimator; a single nonzero bound selects the matching
/// single-channel formulation.
inline RegretEstimate solve_regret_ls(const ProblemSpec& spec,
                                      const sdp::SolverOptions& opts = {}) {
  Formulation f = Formulation::Regret;
  if (spec.delta_Y == 0.0 && spec.delta_H > 0.0) f = Formulation::RegretMatrixOnly;
  if (spec.delta_H == 0.0 && spec.delta_Y > 0.0) f = Formulation::RegretVectorOnly;
  return solve_formulation(spec, f, opts);
}

inline RegretEstimate solve_regret_reg_ls(const ProblemSpec& spec,
                                          const sdp::SolverOptions& opts = {}) {
  return solve_formulation(spec, Formulation::RegularizedRegret, opts);
}

inline RegretEstimate solve_regret_structured(const ProblemSpec& spec,
                                              const sdp::SolverOptions& opts = {}) {
  return solve_formulation(spec, Formulation::StructuredRegret, opts);
}

}  // namespace regret_ls

#endif  // REGRET_LS_REGRET_HPP
