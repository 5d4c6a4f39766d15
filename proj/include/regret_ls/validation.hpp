#ifndef REGRET_LS_VALIDATION_HPP
#define REGRET_LS_VALIDATION_HPP

// Self-checking suites run by `regret-ls validate` and the acceptance binary.
// Every suite is seeded and reports the worst observed error against its bound.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "regret_ls/baselines.hpp"
#include "regret_ls/errors.hpp"
#include "regret_ls/linalg.hpp"
#include "regret_ls/lmi.hpp"
#include "regret_ls/perturbation.hpp"
#include "regret_ls/problem.hpp"
#include "regret_ls/regret.hpp"
#include "regret_ls/sdp.hpp"
#include "regret_ls/taylor.hpp"

namespace regret_ls::validation {

struct SuiteResult {
  std::string name;
  bool passed = true;
  int checks = 0;
  int failures = 0;
  double worst = 0.0;  // worst value of the suite's headline metric
  double seconds = 0.0;
  std::vector<std::string> notes;  // one line per failed check (capped)

  void check(bool ok, const std::string& what) {
    ++checks;
    if (!ok) {
      ++failures;
      passed = false;
      if (notes.size() < 20) notes.push_back(what);
    }
  }
};

// ---------------------------------------------------------------- instances

/// Complex Gaussian H (m x n) and y scaled to unit spectral / Euclidean norm.
inline ProblemSpec random_problem(oracle::Rng& rng, Eigen::Index m, Eigen::Index n) {
  ProblemSpec spec;
  for (;;) {
    spec.H = oracle::complex_gaussian(m, n, rng);
    spec.H /= linalg::spectral_norm(spec.H);
    const RealVector s = linalg::singular_values(spec.H);
    if (s(s.size() - 1) > 1e-3) break;
  }
  spec.y = oracle::complex_gaussian(m, 1, rng).col(0).normalized();
  return spec;
}

/// Random structure with p_alpha matrices and p_beta vectors of unit norm.
inline Structure random_structure(oracle::Rng& rng, Eigen::Index m, Eigen::Index n,
                                  int p_alpha, int p_beta) {
  Structure s;
  for (int i = 0; i < p_alpha; ++i) {
    ComplexMatrix b = oracle::complex_gaussian(m, n, rng);
    s.H_basis.push_back(b / linalg::spectral_norm(b));
  }
  for (int j = 0; j < p_beta; ++j) {
    s.y_basis.push_back(oracle::complex_gaussian(m, 1, rng).col(0).normalized());
  }
  return s;
}

inline double relative_error(const ComplexVector& approx, const ComplexVector& exact) {
  return (approx - exact).norm() / std::max(exact.norm(), 1e-12);
}

namespace detail {

inline int uniform_int(oracle::Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

inline std::string fmt(double v) {
  std::ostringstream s;
  s.precision(3);
  s << v;
  return s.str();
}

}  // namespace detail

// ---------------------------------------------------------------- gradients

/// Analytic expansion coefficients against Wirtinger central differences
/// (step 1e-5) for the unstructured, regularized and structured costs.
inline SuiteResult gradient_suite(std::uint64_t seed, int instances = 100,
                                  double tolerance = 1e-5) {
  SuiteResult r;
  r.name = "gradients";
  detail::Timer timer;
  for (int i = 0; i < instances; ++i) {
    oracle::Rng rng(oracle::derive_seed(seed, static_cast<std::uint64_t>(i)));
    const int n = detail::uniform_int(rng, 3, 7);
    const int m = detail::uniform_int(rng, n + 1, 8);
    const ProblemSpec spec = random_problem(rng, m, n);
    const double mu = 0.1 + 1.9 * oracle::uniform01(rng);
    const Structure st = random_structure(rng, m, n, detail::uniform_int(rng, 1, 4),
                                          detail::uniform_int(rng, 1, 4));
    const std::string tag = "instance " + std::to_string(i) + " (" + std::to_string(m) + "x" +
                            std::to_string(n) + ")";
    auto compare = [&](const char* what, const TaylorCoefficients& an,
                       const oracle::FiniteDifferenceGradients& fd) {
      const double ed = relative_error(fd.d, an.d);
      const double eb = relative_error(fd.b, an.b);
      r.worst = std::max({r.worst, ed, eb});
      r.check(ed < tolerance && eb < tolerance, tag + " " + what + ": d error " + detail::fmt(ed) +
                                                    ", b error " + detail::fmt(eb));
    };

    compare("unstructured", taylor_unstructured(spec.H, spec.y),
            oracle::finite_difference_gradients(spec.H, spec.y, {}, 1e-5));

    oracle::GradientVariant reg;
    reg.kind = ExpansionKind::Regularized;
    reg.mu = mu;
    compare("regularized", taylor_regularized(spec.H, spec.y, mu),
            oracle::finite_difference_gradients(spec.H, spec.y, reg, 1e-5));

    oracle::GradientVariant str;
    str.kind = ExpansionKind::Structured;
    str.H_basis = st.H_basis;
    str.y_basis = st.y_basis;
    compare("structured", taylor_structured(spec.H, spec.y, st.H_basis, st.y_basis),
            oracle::finite_difference_gradients(spec.H, spec.y, str, 1e-5));
  }
  r.seconds = timer.seconds();
  return r;
}

// ---------------------------------------------------------------- solver

struct SolverCase {
  std::string name;
  sdp::Status status = sdp::Status::NumericalFailure;
  double duality_gap = 0.0;
  std::optional<double> objective_error;  // when an independent optimum is known
  double seconds = 0.0;
  int iterations = 0;
};

namespace detail {

// min gamma s.t. gamma I - A_k >= 0 for every k; optimum max_k lambda_max(A_k).
inline sdp::LmiSystem eigenvalue_lmi(const std::vector<ComplexMatrix>& mats) {
  sdp::LmiSystem sys;
  sys.num_vars = 1;
  sys.objective = RealVector::Ones(1);
  sys.variable_names = {"gamma"};
  for (const auto& a : mats) {
    sdp::LmiBlock b;
    b.name = "gammaI-A";
    b.constant = -a;
    b.coefficients = {ComplexMatrix::Identity(a.rows(), a.cols())};
    sys.blocks.push_back(std::move(b));
  }
  sys.initial_point = RealVector::Zero(1);
  sys.inflate_variable = 0;
  return sys;
}

inline ComplexMatrix random_hermitian(oracle::Rng& rng, Eigen::Index d) {
  const ComplexMatrix g = oracle::complex_gaussian(d, d, rng);
  return 0.5 * (g + g.adjoint());
}

inline double lambda_max(const ComplexMatrix& a) {
  return Eigen::SelfAdjointEigenSolver<ComplexMatrix>(a).eigenvalues().maxCoeff();
}

}  // namespace detail

/// 25 problems: eigenvalue LMIs with known optima and every formulation at
/// random data, with independent optima where one is available.
inline std::vector<SolverCase> solver_regression_set(std::uint64_t seed) {
  std::vector<SolverCase> out;
  oracle::Rng rng(oracle::derive_seed(seed, 0x501));
  auto run_sys = [&](const std::string& name, const sdp::LmiSystem& sys,
                     std::optional<double> known) {
    detail::Timer t;
    const sdp::SdpSolution s = sdp::solve(sys);
    SolverCase c;
    c.name = name;
    c.status = s.status;
    c.duality_gap = s.duality_gap;
    c.iterations = s.iterations;
    c.seconds = t.seconds();
    if (known) c.objective_error = std::abs(s.objective_value - *known);
    out.push_back(c);
  };
  // Eigenvalue problems, sizes 2..9.
  for (int d = 2; d <= 9; ++d) {
    const ComplexMatrix a = detail::random_hermitian(rng, d);
    run_sys("lambda_max " + std::to_string(d) + "x" + std::to_string(d),
            detail::eigenvalue_lmi({a}), detail::lambda_max(a));
  }
  for (int k = 0; k < 2; ++k) {
    const ComplexMatrix a = detail::random_hermitian(rng, 3 + k);
    const ComplexMatrix b = detail::random_hermitian(rng, 4 + k);
    run_sys("max lambda_max two blocks", detail::eigenvalue_lmi({a, b}),
            std::max(detail::lambda_max(a), detail::lambda_max(b)));
  }
  {
    // min t1 + t2 s.t. [[t1, c], [conj(c), t2]] >= 0; optimum 2 |c|.
    const Complex cval(0.7, -1.1);
    sdp::LmiSystem sys;
    sys.num_vars = 2;
    sys.objective = RealVector::Ones(2);
    sys.variable_names = {"t1", "t2"};
    sdp::LmiBlock b;
    b.name = "2x2";
    b.constant = ComplexMatrix::Zero(2, 2);
    b.constant(0, 1) = cval;
    b.constant(1, 0) = std::conj(cval);
    ComplexMatrix e1 = ComplexMatrix::Zero(2, 2);
    e1(0, 0) = 1.0;
    ComplexMatrix e2 = ComplexMatrix::Zero(2, 2);
    e2(1, 1) = 1.0;
    b.coefficients = {e1, e2};
    sys.blocks.push_back(b);
    sys.initial_point = RealVector::Constant(2, std::abs(cval) + 1.0);
    run_sys("2x2 geometric mean", sys, 2.0 * std::abs(cval));
  }

  auto run_formulation = [&](const std::string& name, const ProblemSpec& spec, Formulation f,
                             std::optional<double> known) {
    run_sys(name, RegretLmi(spec, f).system(), known);
  };
  for (double d : {0.0, 0.3, 0.6, 0.9, 1.2}) {
    ProblemSpec s = random_problem(rng, 5, 3);
    s.delta_H = s.delta_Y = d;
    run_formulation("regret delta=" + detail::fmt(d), s, Formulation::Regret,
                    d == 0.0 ? std::optional<double>(0.0) : std::nullopt);
  }
  {
    ProblemSpec s = random_problem(rng, 5, 3);
    s.delta_H = 0.8;
    const double ref = solve_formulation(s, Formulation::Regret).gamma_star;
    run_formulation("regret-matrix vs regret", s, Formulation::RegretMatrixOnly, ref);
    s.delta_H = 0.0;
    s.delta_Y = 0.8;
    const double ref2 = solve_formulation(s, Formulation::Regret).gamma_star;
    run_formulation("regret-vector vs regret", s, Formulation::RegretVectorOnly, ref2);
  }
  for (double d : {0.0, 0.65}) {
    ProblemSpec s = random_problem(rng, 3, 2);
    s.delta_H = s.delta_Y = d;
    s.mu = 0.5;
    run_formulation("regularized-regret delta=" + detail::fmt(d), s, Formulation::RegularizedRegret,
                    d == 0.0 ? std::optional<double>(0.0) : std::nullopt);
  }
  for (double d : {0.0, 1.0}) {
    ProblemSpec s = random_problem(rng, 5, 3);
    Structure st = random_structure(rng, 5, 3, 3, 2);
    st.delta_alpha = st.delta_beta = d;
    s.structure = st;
    run_formulation("structured-regret delta=" + detail::fmt(d), s, Formulation::StructuredRegret,
                    d == 0.0 ? std::optional<double>(0.0) : std::nullopt);
  }
  for (double d : {0.5, 1.2}) {
    ProblemSpec s = random_problem(rng, 5, 3);
    s.delta_H = s.delta_Y = d;
    const ComplexVector xr = baselines::solve_robust_ls(s.H, s.y, d, d);
    run_formulation("robust residual delta=" + detail::fmt(d), s, Formulation::RobustResidual,
                    baselines::worst_case_residual(s.H, s.y, d, d, xr));
  }
  {
    // H_1 = 0 and y_j = e_j: a full ball on y, so
    // min_x (||y - Hx|| + delta)^2 = (||Py|| + delta)^2.
    ProblemSpec s = random_problem(rng, 5, 3);
    Structure st;
    st.H_basis = {ComplexMatrix::Zero(5, 3)};
    for (Eigen::Index j = 0; j < 5; ++j) st.y_basis.push_back(ComplexVector::Unit(5, j));
    st.delta_beta = 0.7;
    s.structure = st;
    const double res = taylor_unstructured(s.H, s.y).kappa;
    const double known = std::pow(std::sqrt(res) + 0.7, 2);
    run_formulation("structured robust residual, output ball", s, Formulation::StructuredRobustResidual,
                    known);
  }
  return out;
}

inline SuiteResult solver_suite(std::uint64_t seed, double gap_bound = 1e-7,
                                double objective_bound = 1e-6, double seconds_bound = 1.0) {
  SuiteResult r;
  r.name = "solver";
  detail::Timer timer;
  for (const SolverCase& c : solver_regression_set(seed)) {
    const bool ok_status = c.status == sdp::Status::Optimal;
    const bool ok_gap = c.duality_gap < gap_bound;
    const bool ok_obj = !c.objective_error || *c.objective_error < objective_bound;
    const bool ok_time = c.seconds < seconds_bound;
    r.worst = std::max(r.worst, c.objective_error.value_or(0.0));
    r.check(ok_status && ok_gap && ok_obj && ok_time,
            c.name + ": status " + sdp::to_string(c.status) + ", gap " +
                detail::fmt(c.duality_gap) + ", objective error " +
                (c.objective_error ? detail::fmt(*c.objective_error) : std::string("n/a")) +
                ", " + detail::fmt(c.seconds) + " s");
  }
  r.seconds = timer.seconds();
  return r;
}

// ---------------------------------------------------------------- tightness

struct TightnessCase {
  Formulation formulation = Formulation::Regret;
  double gamma_star = 0.0;
  double extracted = 0.0;      // approximated regret at the extracted perturbation
  double sampled_max = 0.0;    // max over Monte-Carlo perturbations
  bool fallback_used = false;
};

inline TightnessCase tightness_case(const ProblemSpec& spec, Formulation f, std::uint64_t seed,
                                    int samples) {
  const RegretEstimate e = solve_formulation(spec, f);
  const RegretLmi lmi(spec, f);
  const LmiPoint p{e.gamma_star, e.tau, e.x_hat};
  const oracle::WorstCase wc = oracle::worst_case_perturbation(lmi, p);
  TightnessCase c;
  c.formulation = f;
  c.gamma_star = e.gamma_star;
  c.extracted = wc.regret;
  c.fallback_used = wc.perturbation.fallback_used;
  const auto mode = is_structured(f) ? oracle::SampleMode::Structured
                                     : oracle::SampleMode::Unstructured;
  c.sampled_max = -std::numeric_limits<double>::infinity();
  for (int t = 0; t < samples; ++t) {
    const oracle::PerturbationSample s =
        oracle::sample_perturbation(spec, mode, oracle::derive_seed(seed, static_cast<std::uint64_t>(t)));
    c.sampled_max = std::max(c.sampled_max, oracle::approx_regret(spec, e.x_hat, s, lmi.coefficients()));
  }
  return c;
}

/// Problems used by the tightness suite: per formulation, random 5x3 (3x2 for
/// the regularized one) data with bounds spread over [0.3, 1.5].
inline std::vector<std::pair<ProblemSpec, Formulation>> tightness_problems(std::uint64_t seed,
                                                                           int per_formulation) {
  std::vector<std::pair<ProblemSpec, Formulation>> out;
  oracle::Rng rng(oracle::derive_seed(seed, 0x7164));
  for (int i = 0; i < per_formulation; ++i) {
    const double d = 0.3 + 1.2 * oracle::uniform01(rng);
    ProblemSpec s1 = random_problem(rng, 5, 3);
    s1.delta_H = s1.delta_Y = d;
    out.emplace_back(s1, Formulation::Regret);

    ProblemSpec s2 = random_problem(rng, 3, 2);
    s2.delta_H = s2.delta_Y = d;
    s2.mu = 0.5;
    out.emplace_back(s2, Formulation::RegularizedRegret);

    ProblemSpec s3 = random_problem(rng, 5, 3);
    Structure st = random_structure(rng, 5, 3, 3, 3);
    st.delta_alpha = st.delta_beta = d;
    s3.structure = st;
    out.emplace_back(s3, Formulation::StructuredRegret);
  }
  return out;
}

inline SuiteResult tightness_suite(std::uint64_t seed, int per_formulation = 5,
                                   int samples = 10000) {
  SuiteResult r;
  r.name = "tightness";
  detail::Timer timer;
  int index = 0;
  for (const auto& [spec, f] : tightness_problems(seed, per_formulation)) {
    const TightnessCase c =
        tightness_case(spec, f, oracle::derive_seed(seed, static_cast<std::uint64_t>(index++)), samples);
    const double below = c.gamma_star - c.extracted;
    r.worst = std::max(r.worst, below);
    r.check(c.extracted >= c.gamma_star - 1e-4 && c.extracted <= c.gamma_star + 1e-8,
            std::string(to_string(f)) + ": extracted " + detail::fmt(c.extracted) +
                " vs gamma* " + detail::fmt(c.gamma_star));
    r.check(c.sampled_max <= c.gamma_star + 1e-6,
            std::string(to_string(f)) + ": sampled max " + detail::fmt(c.sampled_max) +
                " exceeds gamma* " + detail::fmt(c.gamma_star));
  }
  r.seconds = timer.seconds();
  return r;
}

// ---------------------------------------------------------------- taylor

/// Least-squares slope of log(err) against log(t).
inline double loglog_slope(const std::vector<double>& t, const std::vector<double>& err) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double x = std::log(t[i]);
    const double y = std::log(err[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

inline oracle::PerturbationSample scaled(const oracle::PerturbationSample& s, double t) {
  oracle::PerturbationSample out = s;
  if (out.dH.size()) out.dH *= t;
  if (out.dy.size()) out.dy *= t;
  if (out.alpha.size()) out.alpha *= t;
  if (out.beta.size()) out.beta *= t;
  out.norm_first *= t;
  out.norm_second *= t;
  return out;
}

/// |exact - approximated| regret along a ray of perturbations scaled by
/// t in {1, 1/2, 1/4, 1/8}; the remainder of a first-order expansion should
/// shrink like t^2. The ray starts at base_fraction * sigma_min(H).
inline SuiteResult taylor_suite(std::uint64_t seed, int instances = 20, double min_slope = 1.8,
                                double base_fraction = 1e-4) {
  SuiteResult r;
  r.name = "taylor";
  r.worst = std::numeric_limits<double>::infinity();  // smallest slope seen
  detail::Timer timer;
  const std::vector<double> ts = {1.0, 0.5, 0.25, 0.125};
  for (int i = 0; i < instances; ++i) {
    oracle::Rng rng(oracle::derive_seed(seed, static_cast<std::uint64_t>(i)));
    ProblemSpec spec = random_problem(rng, 5, 3);
    spec.delta_H = spec.delta_Y = 0.2;
    Structure st = random_structure(rng, 5, 3, 3, 3);
    st.delta_alpha = st.delta_beta = 0.2;
    spec.structure = st;
    const ComplexVector x = oracle::complex_gaussian(3, 1, rng).col(0);
    const RealVector sv = linalg::singular_values(spec.H);
    const double radius = base_fraction * sv(sv.size() - 1);

    auto ray = [&](const char* what, oracle::SampleMode mode, const TaylorCoefficients& c,
                   double mu) {
      oracle::PerturbationSample base = oracle::sample_perturbation(spec, mode, rng);
      // The expansion is local: keep the base perturbation well inside the
      // region where H + dH stays far from rank loss.
      if (mode == oracle::SampleMode::Unstructured) {
        base.dH *= radius / linalg::spectral_norm(base.dH);
        base.dy *= radius / base.dy.norm();
      } else {
        base.alpha *= radius / base.alpha.norm();
        base.beta *= radius / base.beta.norm();
      }
      std::vector<double> errs;
      for (double t : ts) {
        const oracle::PerturbationSample s = scaled(base, t);
        errs.push_back(std::abs(oracle::exact_regret(spec, x, s, mu) -
                                oracle::approx_regret(spec, x, s, c)));
      }
      const double slope = loglog_slope(ts, errs);
      r.worst = std::min(r.worst, slope);
      r.check(slope >= min_slope, "instance " + std::to_string(i) + " " + what + ": slope " +
                                      detail::fmt(slope));
    };
    ray("unstructured", oracle::SampleMode::Unstructured, taylor_unstructured(spec.H, spec.y), 0.0);
    ray("regularized", oracle::SampleMode::Unstructured, taylor_regularized(spec.H, spec.y, 0.5),
        0.5);
    ray("structured", oracle::SampleMode::Structured, taylor_structured(spec), 0.0);
  }
  r.seconds = timer.seconds();
  return r;
}

// ---------------------------------------------------------------- reductions

namespace detail {

/// Random m x n problem with 2 <= n < m <= 6 and zero bounds.
inline ProblemSpec reduction_problem(std::uint64_t seed, int i, oracle::Rng& rng) {
  rng.seed(oracle::derive_seed(seed, static_cast<std::uint64_t>(i)));
  const int n = uniform_int(rng, 2, 4);
  const int m = uniform_int(rng, n + 1, 6);
  return random_problem(rng, m, n);
}

}  // namespace detail

/// Zero bounds recover least squares and ridge with zero regret.
inline SuiteResult zero_bound_suite(std::uint64_t seed, int instances = 50) {
  SuiteResult r;
  r.name = "zero-bounds";
  detail::Timer timer;
  oracle::Rng rng;
  for (int i = 0; i < instances; ++i) {
    const ProblemSpec spec = detail::reduction_problem(seed, i, rng);
    const std::string tag = "instance " + std::to_string(i);

    const RegretEstimate t1 = solve_formulation(spec, Formulation::Regret);
    const double ex = (t1.x_hat - baselines::solve_ls(spec.H, spec.y)).norm();
    r.worst = std::max(r.worst, ex);
    r.check(ex < 1e-6 && std::abs(t1.gamma_star) < 1e-6,
            tag + " regret zero bounds: |x - H^+y| " + detail::fmt(ex) + ", gamma* " +
                detail::fmt(t1.gamma_star));

    ProblemSpec reg = spec;
    reg.mu = 0.5;
    const RegretEstimate t2 = solve_formulation(reg, Formulation::RegularizedRegret);
    const double er = (t2.x_hat - baselines::solve_reg_ls(reg.H, reg.y, reg.mu)).norm();
    r.worst = std::max(r.worst, er);
    r.check(er < 1e-6 && std::abs(t2.gamma_star) < 1e-6,
            tag + " regularized-regret zero bounds: |x - ridge| " + detail::fmt(er) + ", gamma* " +
                detail::fmt(t2.gamma_star));
  }
  r.seconds = timer.seconds();
  return r;
}

/// With one bound zeroed the joint formulation matches the single-channel one.
inline SuiteResult single_channel_suite(std::uint64_t seed, int instances = 50) {
  SuiteResult r;
  r.name = "single-channel";
  detail::Timer timer;
  oracle::Rng rng;
  for (int i = 0; i < instances; ++i) {
    const ProblemSpec spec = detail::reduction_problem(seed, i, rng);
    const std::string tag = "instance " + std::to_string(i);
    const double d = 0.2 + 1.0 * oracle::uniform01(rng);
    for (int which = 0; which < 2; ++which) {
      ProblemSpec s = spec;
      (which == 0 ? s.delta_H : s.delta_Y) = d;
      const Formulation single =
          which == 0 ? Formulation::RegretMatrixOnly : Formulation::RegretVectorOnly;
      const RegretEstimate a = solve_formulation(s, Formulation::Regret);
      const RegretEstimate b = solve_formulation(s, single);
      const double dx = (a.x_hat - b.x_hat).norm();
      const double dg = std::abs(a.gamma_star - b.gamma_star);
      r.worst = std::max(r.worst, dx);
      r.check(dx < 1e-6 && dg < 1e-7, tag + " " + std::string(to_string(single)) + ": |dx| " +
                                          detail::fmt(dx) + ", |dgamma| " + detail::fmt(dg));
    }
  }
  r.seconds = timer.seconds();
  return r;
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"gradients",  "zero-bounds", "single-channel",
                                                 "tightness",  "taylor",      "solver"};
  return names;
}

inline SuiteResult run_suite(const std::string& name, std::uint64_t seed) {
  if (name == "gradients") return gradient_suite(seed);
  if (name == "solver") return solver_suite(seed);
  if (name == "tightness") return tightness_suite(seed);
  if (name == "taylor") return taylor_suite(seed);
  if (name == "zero-bounds") return zero_bound_suite(seed);
  if (name == "single-channel") return single_channel_suite(seed);
  throw ArgumentError("unknown validation suite '" + name + "'");
}

}  // namespace regret_ls::validation

#endif  // REGRET_LS_VALIDATION_HPP
