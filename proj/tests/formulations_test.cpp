#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "regret_ls/baselines.hpp"
#include "regret_ls/experiments.hpp"
#include "regret_ls/lmi.hpp"
#include "regret_ls/perturbation.hpp"
#include "regret_ls/regret.hpp"
#include "regret_ls/taylor.hpp"
#include "regret_ls/validation.hpp"

using namespace regret_ls;

namespace {

ProblemSpec random_spec(std::uint64_t seed, Eigen::Index m = 5, Eigen::Index n = 3,
                        double delta = 0.0) {
  oracle::Rng rng(seed);
  ProblemSpec s = validation::random_problem(rng, m, n);
  s.delta_H = s.delta_Y = delta;
  return s;
}

ProblemSpec with_structure(ProblemSpec s, std::uint64_t seed, int pa, int pb, double delta) {
  oracle::Rng rng(seed);
  Structure st = validation::random_structure(rng, s.rows(), s.cols(), pa, pb);
  st.delta_alpha = st.delta_beta = delta;
  s.structure = st;
  return s;
}

ComplexVector ridge(const ProblemSpec& s, double mu) {
  const ComplexMatrix a =
      s.H.adjoint() * s.H + mu * ComplexMatrix::Identity(s.cols(), s.cols());
  return a.llt().solve(s.H.adjoint() * s.y);
}

double max_abs(const ComplexVector& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

// ---------------------------------------------------------------- expansion coefficients

TEST(TaylorUnstructured, SquareIdentityHasZeroCoefficients) {
  oracle::Rng rng(1);
  const ComplexVector y = oracle::complex_gaussian(4, 1, rng).col(0);
  const auto c = taylor_unstructured(ComplexMatrix::Identity(4, 4), y);
  EXPECT_NEAR(c.kappa, 0.0, 1e-15);
  EXPECT_LT(max_abs(c.d), 1e-15);
  EXPECT_LT(max_abs(c.b), 1e-15);
}

TEST(TaylorUnstructured, ExactFitHasZeroCoefficients) {
  ProblemSpec s = random_spec(2);
  oracle::Rng rng(3);
  s.y = s.H * oracle::complex_gaussian(3, 1, rng).col(0);
  const auto c = taylor_unstructured(s.H, s.y);
  EXPECT_NEAR(c.kappa, 0.0, 1e-14);
  EXPECT_LT(max_abs(c.d), 1e-13);
  EXPECT_LT(max_abs(c.b), 1e-13);
}

TEST(TaylorUnstructured, MatchesFiniteDifferences) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const ProblemSpec s = random_spec(10 + seed);
    const auto c = taylor_unstructured(s.H, s.y);
    const auto fd = oracle::finite_difference_gradients(s.H, s.y, {}, 1e-5);
    EXPECT_LT(validation::relative_error(fd.d, c.d), 1e-5);
    EXPECT_LT(validation::relative_error(fd.b, c.b), 1e-5);
    const ComplexMatrix p = linalg::projection_perp(s.H);
    EXPECT_NEAR(c.kappa, s.y.dot(p * s.y).real(), 1e-12);
    EXPECT_GE(c.kappa, 0.0);
  }
}

TEST(TaylorUnstructured, RankDeficientRejected) {
  ComplexMatrix h = ComplexMatrix::Zero(4, 2);
  h(0, 0) = 1.0;
  h(1, 0) = 1.0;
  EXPECT_THROW(taylor_unstructured(h, ComplexVector::Ones(4)), RankDeficientError);
  EXPECT_THROW(taylor_unstructured(ComplexMatrix::Ones(2, 3), ComplexVector::Ones(2)),
               PreconditionError);
}

TEST(TaylorRegularized, ZeroOutput) {
  const ProblemSpec s = random_spec(20);
  const auto c = taylor_regularized(s.H, ComplexVector::Zero(5), 0.5);
  EXPECT_EQ(c.kappa, 0.0);
  EXPECT_LT(max_abs(c.d), 1e-15);
  EXPECT_LT(max_abs(c.b), 1e-15);
}

TEST(TaylorRegularized, ZeroMatrix) {
  const ProblemSpec s = random_spec(21);
  const auto c = taylor_regularized(ComplexMatrix::Zero(5, 3), s.y, 0.5);
  EXPECT_NEAR(c.kappa, s.y.squaredNorm(), 1e-14);
  EXPECT_LT(max_abs(c.d), 1e-15);
  EXPECT_LT(max_abs(c.b - s.y), 1e-15);
}

TEST(TaylorRegularized, KappaIsRidgeCostAndGradientsMatch) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const ProblemSpec s = random_spec(30 + seed);
    const auto c = taylor_regularized(s.H, s.y, 0.5);
    const ComplexVector w = ridge(s, 0.5);
    EXPECT_NEAR(c.kappa, (s.y - s.H * w).squaredNorm() + 0.5 * w.squaredNorm(), 1e-10);
    oracle::GradientVariant v;
    v.kind = ExpansionKind::Regularized;
    v.mu = 0.5;
    const auto fd = oracle::finite_difference_gradients(s.H, s.y, v, 1e-5);
    EXPECT_LT(validation::relative_error(fd.d, c.d), 1e-5);
    EXPECT_LT(validation::relative_error(fd.b, c.b), 1e-5);
  }
}

TEST(TaylorRegularized, ArgumentChecks) {
  const ProblemSpec s = random_spec(40);
  EXPECT_THROW(taylor_regularized(s.H, s.y, -1.0), ArgumentError);
  const auto c0 = taylor_regularized(s.H, s.y, 0.0);
  EXPECT_EQ(c0.kind, ExpansionKind::Unstructured);
}

TEST(TaylorStructured, ZeroMatrixBasisGivesZeroD) {
  const ProblemSpec s = random_spec(50);
  const auto c = taylor_structured(s.H, s.y, {ComplexMatrix::Zero(5, 3), ComplexMatrix::Zero(5, 3)},
                                   {s.y});
  EXPECT_LT(max_abs(c.d), 1e-15);
}

TEST(TaylorStructured, UnitVectorBasisReproducesUnstructuredB) {
  const ProblemSpec s = random_spec(51);
  std::vector<ComplexVector> basis;
  for (int i = 0; i < 5; ++i) basis.push_back(ComplexVector::Unit(5, i));
  const auto c = taylor_structured(s.H, s.y, {ComplexMatrix::Zero(5, 3)}, basis);
  const auto u = taylor_unstructured(s.H, s.y);
  EXPECT_LT(max_abs(c.b - u.b), 1e-13);
  EXPECT_NEAR(c.kappa, u.kappa, 1e-14);
}

TEST(TaylorStructured, ToeplitzMatchesFiniteDifferences) {
  oracle::Rng rng(52);
  const ComplexVector h = oracle::complex_gaussian(3, 1, rng).col(0);
  const Structure st = experiments::build_toeplitz_structure(h, 5, 3);
  const ComplexMatrix hm = experiments::convolution_matrix(h, 3);
  const ComplexVector y = oracle::complex_gaussian(5, 1, rng).col(0);
  const auto c = taylor_structured(hm, y, st.H_basis, st.y_basis);
  oracle::GradientVariant v;
  v.kind = ExpansionKind::Structured;
  v.H_basis = st.H_basis;
  v.y_basis = st.y_basis;
  const auto fd = oracle::finite_difference_gradients(hm, y, v, 1e-5);
  EXPECT_LT(validation::relative_error(fd.d, c.d), 1e-5);
  EXPECT_LT(validation::relative_error(fd.b, c.b), 1e-5);
}

TEST(TaylorStructured, EmptyBasisRejected) {
  const ProblemSpec s = random_spec(53);
  EXPECT_THROW(taylor_structured(s.H, s.y, {}, {s.y}), ArgumentError);
  EXPECT_THROW(taylor_structured(s), ArgumentError);
}

// ---------------------------------------------------------------- LMI assembly

TEST(RegretLmi, BlockDimensions) {
  ProblemSpec s = random_spec(60, 5, 3, 0.5);
  const Eigen::Index m = 5, n = 3;
  EXPECT_EQ(RegretLmi(s, Formulation::Regret).dimension(), 1 + m + m + m * n);
  s.mu = 0.5;
  EXPECT_EQ(RegretLmi(s, Formulation::RegularizedRegret).dimension(), 1 + m + n + m + m * n);
  s.mu = 0.0;
  ProblemSpec a = s;
  a.delta_Y = 0.0;
  EXPECT_EQ(RegretLmi(a, Formulation::RegretMatrixOnly).dimension(), 1 + m + m * n);
  ProblemSpec b = s;
  b.delta_H = 0.0;
  EXPECT_EQ(RegretLmi(b, Formulation::RegretVectorOnly).dimension(), 1 + m + m);
  const ProblemSpec st = with_structure(s, 61, 3, 2, 0.5);
  EXPECT_EQ(RegretLmi(st, Formulation::StructuredRegret).dimension(), 1 + m + 3 + 2);
  // Main block plus one scalar block per multiplier.
  EXPECT_EQ(RegretLmi(s, Formulation::Regret).system().blocks.size(), 3u);
}

TEST(RegretLmi, MismatchedFormulationRejected) {
  const ProblemSpec s = random_spec(62, 5, 3, 0.5);
  EXPECT_THROW(RegretLmi(s, Formulation::RegretMatrixOnly), ArgumentError);
  EXPECT_THROW(RegretLmi(s, Formulation::RegretVectorOnly), ArgumentError);
  EXPECT_THROW(RegretLmi(s, Formulation::StructuredRegret), ArgumentError);
}

TEST(RegretLmi, ZeroBoundsRecoverLeastSquares) {
  const ProblemSpec s = random_spec(63);
  const RegretEstimate e = solve_formulation(s, Formulation::Regret);
  EXPECT_LT((e.x_hat - baselines::solve_ls(s.H, s.y)).norm(), 1e-6);
  EXPECT_NEAR(e.gamma_star, 0.0, 1e-6);
  for (double t : e.tau) EXPECT_NEAR(t, 0.0, 1e-6);
}

TEST(RegretLmi, VectorOnlyMatchesJointWithZeroMatrixBound) {
  ProblemSpec s = random_spec(64, 5, 3, 0.7);
  s.delta_H = 0.0;
  const RegretEstimate joint = solve_formulation(s, Formulation::Regret);
  const RegretEstimate single = solve_formulation(s, Formulation::RegretVectorOnly);
  EXPECT_LT((joint.x_hat - single.x_hat).norm(), 1e-6);
  EXPECT_NEAR(joint.gamma_star, single.gamma_star, 1e-7);
}

TEST(RegretLmi, SolutionIsFeasibleForSampledPerturbations) {
  const ProblemSpec s = random_spec(65, 5, 3, 0.8);
  const RegretEstimate e = solve_formulation(s, Formulation::Regret);
  const RegretLmi lmi(s, Formulation::Regret);
  EXPECT_GE(linalg::min_eigenvalue(lmi.matrix({e.gamma_star, e.tau, e.x_hat})), -1e-8);
  double worst = -1e300;
  for (int t = 0; t < 10000; ++t) {
    const auto p = oracle::sample_perturbation(s, oracle::SampleMode::Unstructured,
                                               oracle::derive_seed(65, t));
    worst = std::max(worst, oracle::approx_regret(s, e.x_hat, p, lmi.coefficients()));
  }
  EXPECT_LE(worst, e.gamma_star + 1e-6);
}

// ---------------------------------------------------------------- estimators

TEST(RegretEstimators, DispatchOnSingleBound) {
  ProblemSpec s = random_spec(70, 5, 3, 0.6);
  EXPECT_EQ(solve_regret_ls(s).formulation, Formulation::Regret);
  s.delta_Y = 0.0;
  EXPECT_EQ(solve_regret_ls(s).formulation, Formulation::RegretMatrixOnly);
  s.delta_Y = 0.6;
  s.delta_H = 0.0;
  EXPECT_EQ(solve_regret_ls(s).formulation, Formulation::RegretVectorOnly);
}

TEST(RegretEstimators, GammaIsNotMateriallyNegative) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    ProblemSpec s = random_spec(80 + seed, 5, 3, 0.4 * (seed + 1));
    EXPECT_GE(solve_regret_ls(s).gamma_star, -1e-8);
    s.mu = 0.5;
    EXPECT_GE(solve_regret_reg_ls(s).gamma_star, -1e-8);
    s.mu = 0.0;
    EXPECT_GE(solve_regret_structured(with_structure(s, 90 + seed, 3, 3, 0.5)).gamma_star, -1e-8);
  }
}

TEST(RegretEstimators, RegularizedZeroBoundsGiveRidge) {
  ProblemSpec s = random_spec(100, 3, 2);
  s.mu = 0.5;
  const RegretEstimate e = solve_regret_reg_ls(s);
  EXPECT_LT((e.x_hat - ridge(s, 0.5)).norm(), 1e-6);
  EXPECT_NEAR(e.gamma_star, 0.0, 1e-6);
}

TEST(RegretEstimators, RegularizedTendsToUnregularized) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    ProblemSpec s = random_spec(110 + seed, 5, 3, 0.5);
    const ComplexVector x0 = solve_regret_ls(s).x_hat;
    s.mu = 1e-8;
    EXPECT_LT((solve_regret_reg_ls(s).x_hat - x0).norm(), 1e-3);
  }
}

TEST(RegretEstimators, MinimaxDominatesCompetitors) {
  // Setup of the first Monte-Carlo scenario: unit-norm data, bounds 1.2.
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const ProblemSpec s = random_spec(120 + seed, 5, 3, 1.2);
    const RegretEstimate e = solve_regret_ls(s);
    const RegretLmi lmi(s, Formulation::Regret);
    for (const char* name : {"ls", "rbst-ls", "tls"}) {
      const ComplexVector x = experiments::run_estimator(name, s).x;
      const RegretEstimate w = evaluate_worst_case(s, Formulation::Regret, x);
      EXPECT_LE(e.gamma_star, w.gamma_star + 1e-8) << name;
      const auto wc = oracle::worst_case_perturbation(lmi, {w.gamma_star, w.tau, x});
      EXPECT_NEAR(wc.regret, w.gamma_star, 1e-4) << name;
      EXPECT_LE(e.gamma_star, wc.regret + 1e-6) << name;
    }
  }
}

TEST(RegretEstimators, RankDeficientDataRejected) {
  ProblemSpec s = random_spec(130, 5, 3, 0.5);
  s.H.col(2) = s.H.col(0) + s.H.col(1);
  EXPECT_THROW(solve_regret_ls(s), RankDeficientError);
  ProblemSpec t = random_spec(131, 3, 2, 0.5);
  t.H = ComplexMatrix::Ones(2, 3);
  t.y = ComplexVector::Ones(2);
  EXPECT_THROW(solve_regret_ls(t), PreconditionError);
}

// ---------------------------------------------------------------- sampler

TEST(Sampler, ZeroBoundGivesZeroPerturbation) {
  ProblemSpec s = random_spec(200);
  s.delta_Y = 0.5;
  for (int t = 0; t < 100; ++t) {
    const auto p = oracle::sample_perturbation(s, oracle::SampleMode::Unstructured, t);
    EXPECT_EQ(p.dH.cwiseAbs().maxCoeff(), 0.0);
    EXPECT_LE(p.dy.norm(), 0.5 + 1e-12);
  }
}

TEST(Sampler, RadiusUniformAndNormsBounded) {
  ProblemSpec s = random_spec(201, 5, 3, 1.2);
  const int n = 10000;
  std::vector<double> r;
  r.reserve(n);
  double max_norm = 0.0;
  for (int t = 0; t < n; ++t) {
    const auto p = oracle::sample_perturbation(s, oracle::SampleMode::Unstructured,
                                               oracle::derive_seed(201, t));
    const double nh = linalg::spectral_norm(p.dH);
    max_norm = std::max(max_norm, nh);
    EXPECT_NEAR(nh, p.norm_first, 1e-12);
    EXPECT_LE(p.dy.norm(), 1.2 + 1e-12);
    r.push_back(nh / 1.2);
  }
  EXPECT_LE(max_norm, 1.2 + 1e-12);
  // Kolmogorov-Smirnov against U[0, 1]; 1% critical value 1.628 / sqrt(n).
  std::sort(r.begin(), r.end());
  double d = 0.0;
  for (int i = 0; i < n; ++i) {
    d = std::max({d, (i + 1.0) / n - r[i], r[i] - static_cast<double>(i) / n});
  }
  EXPECT_LT(d, 1.628 / std::sqrt(static_cast<double>(n)));
}

TEST(Sampler, StructuredNormsBounded) {
  const ProblemSpec s = with_structure(random_spec(202), 203, 3, 4, 0.9);
  for (int t = 0; t < 1000; ++t) {
    const auto p = oracle::sample_perturbation(s, oracle::SampleMode::Structured, t);
    ASSERT_EQ(p.alpha.size(), 3);
    ASSERT_EQ(p.beta.size(), 4);
    EXPECT_LE(p.alpha.norm(), 0.9 + 1e-12);
    EXPECT_LE(p.beta.norm(), 0.9 + 1e-12);
  }
  EXPECT_THROW(oracle::sample_perturbation(random_spec(204), oracle::SampleMode::Structured, 1),
               ArgumentError);
}

TEST(Sampler, SeedDeterminism) {
  const ProblemSpec s = random_spec(205, 5, 3, 1.0);
  const auto a = oracle::sample_perturbation(s, oracle::SampleMode::Unstructured, 77);
  const auto b = oracle::sample_perturbation(s, oracle::SampleMode::Unstructured, 77);
  const auto c = oracle::sample_perturbation(s, oracle::SampleMode::Unstructured, 78);
  EXPECT_TRUE(a.dH == b.dH && a.dy == b.dy);
  EXPECT_FALSE(a.dH == c.dH);
  EXPECT_NE(oracle::derive_seed(1, 0), oracle::derive_seed(1, 1));
  EXPECT_NE(oracle::derive_seed(1, 0), oracle::derive_seed(2, 0));
}

// ---------------------------------------------------------------- regret oracles

TEST(ExactRegret, ZeroAtPerturbedLeastSquares) {
  const ProblemSpec s = random_spec(300, 5, 3, 0.5);
  const auto p = oracle::sample_perturbation(s, oracle::SampleMode::Unstructured, 1);
  const auto d = oracle::apply(s, p);
  EXPECT_NEAR(oracle::exact_regret(s, baselines::solve_ls(d.H, d.y), p), 0.0, 1e-12);
}

TEST(ExactRegret, NonnegativeAndMatchesApproxAtZero) {
  const ProblemSpec s = random_spec(301, 5, 3, 0.8);
  const auto c = taylor_unstructured(s.H, s.y);
  oracle::Rng rng(302);
  oracle::PerturbationSample zero = oracle::sample_perturbation(s, oracle::SampleMode::Unstructured, 0);
  zero.dH.setZero();
  zero.dy.setZero();
  for (int t = 0; t < 200; ++t) {
    const ComplexVector x = oracle::complex_gaussian(3, 1, rng).col(0);
    const auto p = oracle::sample_perturbation(s, oracle::SampleMode::Unstructured, t);
    EXPECT_GE(oracle::exact_regret(s, x, p), -1e-12);
    const double at_zero = (s.y - s.H * x).squaredNorm() - c.kappa;
    EXPECT_GE(at_zero, -1e-12);
    EXPECT_NEAR(oracle::exact_regret(s, x, zero), at_zero, 1e-12);
    EXPECT_NEAR(oracle::approx_regret(s, x, zero, c), at_zero, 1e-12);
  }
}

TEST(ExactRegret, RankDeficientPerturbationRejected) {
  const ProblemSpec s = random_spec(303, 5, 3, 2.0);
  auto p = oracle::sample_perturbation(s, oracle::SampleMode::Unstructured, 1);
  p.dH = -s.H;
  EXPECT_THROW(oracle::exact_regret(s, ComplexVector::Zero(3), p), RankDeficientError);
}

TEST(ApproxRegret, LeastSquaresPointHasZeroRegretAtZeroPerturbation) {
  const ProblemSpec s = random_spec(304, 5, 3, 0.5);
  auto p = oracle::sample_perturbation(s, oracle::SampleMode::Unstructured, 1);
  p.dH.setZero();
  p.dy.setZero();
  EXPECT_NEAR(oracle::approx_regret(s, baselines::solve_ls(s.H, s.y), p,
                                    taylor_unstructured(s.H, s.y)),
              0.0, 1e-13);
}

TEST(ApproxRegret, MatchesTermByTermExpansion) {
  const ProblemSpec s = random_spec(305, 5, 3, 0.9);
  const auto c = taylor_unstructured(s.H, s.y);
  const ComplexMatrix dmat = linalg::col_unstack(c.d, 5, 3);
  oracle::Rng rng(306);
  for (int t = 0; t < 50; ++t) {
    const ComplexVector x = oracle::complex_gaussian(3, 1, rng).col(0);
    const auto p = oracle::sample_perturbation(s, oracle::SampleMode::Unstructured, t);
    double expected = 0.0;
    for (int i = 0; i < 5; ++i) {
      Complex ri = s.y(i) + p.dy(i);
      for (int j = 0; j < 3; ++j) ri -= (s.H(i, j) + p.dH(i, j)) * x(j);
      expected += std::norm(ri);
    }
    expected -= c.kappa;
    for (int i = 0; i < 5; ++i) {
      for (int j = 0; j < 3; ++j) expected -= 2.0 * (std::conj(dmat(i, j)) * p.dH(i, j)).real();
      expected -= 2.0 * (std::conj(c.b(i)) * p.dy(i)).real();
    }
    EXPECT_NEAR(oracle::approx_regret(s, x, p, c), expected, 1e-10);
  }
}

TEST(ApproxRegret, ModeMismatchRejected) {
  const ProblemSpec s = with_structure(random_spec(307, 5, 3, 0.5), 308, 2, 2, 0.5);
  const auto p = oracle::sample_perturbation(s, oracle::SampleMode::Structured, 1);
  EXPECT_THROW(oracle::approx_regret(s, ComplexVector::Zero(3), p, taylor_unstructured(s.H, s.y)),
               ArgumentError);
}

TEST(TaylorRemainder, QuadraticDecay) {
  const auto r = validation::taylor_suite(2024, 5);
  EXPECT_TRUE(r.passed) << (r.notes.empty() ? "" : r.notes.front());
  EXPECT_GE(r.worst, 1.8);
}

// ---------------------------------------------------------------- finite differences

TEST(FiniteDifferences, ConstantFunctionGivesZero) {
  const ProblemSpec s = random_spec(400);
  const auto fd = oracle::finite_difference_gradients(s.H, ComplexVector::Zero(5), {}, 1e-5);
  EXPECT_LT(max_abs(fd.d), 1e-12);
  EXPECT_LT(max_abs(fd.b), 1e-12);
}

TEST(FiniteDifferences, StepRangeEnforced) {
  const ProblemSpec s = random_spec(401);
  EXPECT_THROW(oracle::finite_difference_gradients(s.H, s.y, {}, 1e-8), ArgumentError);
  EXPECT_THROW(oracle::finite_difference_gradients(s.H, s.y, {}, 1e-2), ArgumentError);
}

TEST(FiniteDifferences, StableAcrossStepSizes) {
  const ProblemSpec s = random_spec(402);
  const auto a = oracle::finite_difference_gradients(s.H, s.y, {}, 1e-4);
  const auto b = oracle::finite_difference_gradients(s.H, s.y, {}, 1e-5);
  EXPECT_LT(validation::relative_error(a.d, b.d), 1e-3);
  EXPECT_LT(validation::relative_error(a.b, b.b), 1e-3);
}

// ---------------------------------------------------------------- worst-case extraction

TEST(WorstCase, ZeroBoundsGiveZeroPerturbation) {
  const ProblemSpec s = random_spec(500);
  const RegretEstimate e = solve_formulation(s, Formulation::Regret);
  const auto wc = oracle::worst_case_perturbation(RegretLmi(s, Formulation::Regret),
                                                  {e.gamma_star, e.tau, e.x_hat});
  EXPECT_LT(wc.perturbation.dH.norm() + wc.perturbation.dy.norm(), 1e-12);
  EXPECT_NEAR(wc.regret, 0.0, 1e-8);
}

TEST(WorstCase, OutputOnlyUncertaintyHitsTheBoundary) {
  ProblemSpec s = random_spec(501, 5, 3, 0.7);
  s.delta_H = 0.0;
  const RegretLmi lmi(s, Formulation::RegretVectorOnly);
  const RegretEstimate e = solve_formulation(s, Formulation::RegretVectorOnly);
  const auto wc = oracle::worst_case_perturbation(lmi, {e.gamma_star, e.tau, e.x_hat});
  EXPECT_NEAR(wc.perturbation.dy.norm(), 0.7, 1e-10);
  EXPECT_NEAR(wc.regret, e.gamma_star, 1e-6);
}

TEST(WorstCase, TightAtOptimumForEveryFormulation) {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    ProblemSpec s = random_spec(510 + seed, 5, 3, 0.5 + 0.4 * seed);
    const ProblemSpec st = with_structure(s, 520 + seed, 3, 3, 0.5 + 0.4 * seed);
    ProblemSpec reg = random_spec(530 + seed, 3, 2, 0.65);
    reg.mu = 0.5;
    for (const auto& [spec, f] : std::vector<std::pair<ProblemSpec, Formulation>>{
             {s, Formulation::Regret},
             {reg, Formulation::RegularizedRegret},
             {st, Formulation::StructuredRegret},
             {s, Formulation::RobustResidual},
             {st, Formulation::StructuredRobustResidual}}) {
      const RegretEstimate e = solve_formulation(spec, f);
      const RegretLmi lmi(spec, f);
      const auto wc = oracle::worst_case_perturbation(lmi, {e.gamma_star, e.tau, e.x_hat});
      EXPECT_GE(wc.regret, e.gamma_star - 1e-4) << to_string(f);
      EXPECT_LE(wc.regret, e.gamma_star + 1e-8) << to_string(f);
      EXPECT_FALSE(wc.perturbation.fallback_used) << to_string(f);
      // Active channels sit on their boundary.
      for (std::size_t k = 0; k < lmi.num_channels(); ++k) {
        if (e.tau[k] < 1e-6) continue;
        const Channel c = lmi.channels()[k];
        double norm = 0.0;
        if (c == Channel::OutputVector) norm = wc.perturbation.dy.norm();
        if (c == Channel::DataMatrix) norm = wc.perturbation.dH.norm();
        if (c == Channel::Alpha) norm = wc.perturbation.alpha.norm();
        if (c == Channel::Beta) norm = wc.perturbation.beta.norm();
        EXPECT_NEAR(norm, lmi.channel_bound(c), 1e-10) << to_string(f) << " channel " << k;
      }
    }
  }
}
