#ifndef REGRET_LS_SDP_HPP
#define REGRET_LS_SDP_HPP

// Small dense semidefinite programs of the form
//
//   minimize    c^T z
//   subject to  F0_k + sum_i z_i F_ik  >= 0   for every block k,
//
// with z real and each F Hermitian. Complex blocks are embedded into real
// symmetric ones of twice the size; purely real blocks (including the 1x1
// sign constraints) are used as they are.
//
// The core is a primal-dual path-following method in the HKM direction with a
// Mehrotra predictor-corrector. Iterates keep z strictly feasible (the slack
// is always recomputed as F(z)); only the dual equality residual is driven to
// zero. A strictly feasible start is obtained by raising one designated
// variable (the epigraph variable of every formulation in this library).

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "regret_ls/errors.hpp"
#include "regret_ls/linalg.hpp"

namespace regret_ls::sdp {

struct LmiBlock {
  std::string name;
  ComplexMatrix constant;                   // F0
  std::vector<ComplexMatrix> coefficients;  // one per decision variable

  Eigen::Index dim() const { return constant.rows(); }
};

struct LmiSystem {
  Eigen::Index num_vars = 0;
  RealVector objective;
  std::vector<LmiBlock> blocks;
  std::vector<std::string> variable_names;
  RealVector initial_point;  // empty means zeros
  std::optional<Eigen::Index> inflate_variable;

  ComplexMatrix evaluate(std::size_t block, const RealVector& z) const {
    const LmiBlock& b = blocks.at(block);
    ComplexMatrix out = b.constant;
    for (Eigen::Index i = 0; i < num_vars; ++i) {
      if (z(i) != 0.0) out += z(i) * b.coefficients[static_cast<std::size_t>(i)];
    }
    return out;
  }

  /// Throws ArgumentError when the system is not well formed.
  void validate() const {
    if (num_vars <= 0) throw ArgumentError("LmiSystem: no decision variables");
    if (objective.size() != num_vars) {
      throw ArgumentError("LmiSystem: objective length differs from num_vars");
    }
    if (!objective.allFinite()) throw ArgumentError("LmiSystem: non-finite objective");
    if (blocks.empty()) throw ArgumentError("LmiSystem: no constraint blocks");
    if (initial_point.size() != 0 && initial_point.size() != num_vars) {
      throw ArgumentError("LmiSystem: initial point has wrong length");
    }
    if (inflate_variable && (*inflate_variable < 0 || *inflate_variable >= num_vars)) {
      throw ArgumentError("LmiSystem: inflate variable out of range");
    }
    for (const LmiBlock& b : blocks) {
      const Eigen::Index d = b.dim();
      if (d == 0 || b.constant.cols() != d) {
        throw ArgumentError("LmiSystem: block '" + b.name + "' is not square");
      }
      if (static_cast<Eigen::Index>(b.coefficients.size()) != num_vars) {
        throw ArgumentError("LmiSystem: block '" + b.name +
                            "' does not reference every variable");
      }
      auto check = [&](const ComplexMatrix& f) {
        if (f.rows() != d || f.cols() != d) {
          throw ArgumentError("LmiSystem: block '" + b.name + "' has mismatched sizes");
        }
        linalg::require_finite(f, "LmiSystem block '" + b.name + "'");
        const double scale = 1.0 + f.cwiseAbs().maxCoeff();
        if (linalg::hermitian_defect(f) > 1e-12 * scale) {
          throw ArgumentError("LmiSystem: block '" + b.name + "' is not Hermitian");
        }
      };
      check(b.constant);
      for (const ComplexMatrix& f : b.coefficients) check(f);
    }
  }
};

enum class Status { Optimal, MaxIterations, Infeasible, NumericalFailure };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::Optimal: return "optimal";
    case Status::MaxIterations: return "max_iterations";
    case Status::Infeasible: return "infeasible";
    case Status::NumericalFailure: return "numerical_failure";
  }
  return "unknown";
}

struct SolverOptions {
  int max_iterations = 200;
  // Relative complementarity Tr(SY) / max(1, |c^T z|).
  double gap_tolerance = 1e-12;
  // ||c - A(Y)|| / (1 + ||c||).
  double feasibility_tolerance = 1e-12;
  double step_fraction = 0.99;
  bool predictor_corrector = true;
  // Centering parameter when the predictor-corrector is off.
  double centering = 0.1;
  int max_inflations = 200;
};

struct SdpSolution {
  RealVector z;
  double objective_value = 0.0;
  double dual_objective = 0.0;
  Status status = Status::NumericalFailure;
  double duality_gap = 0.0;     // |c^T z - dual objective|
  double relative_gap = 0.0;    // Tr(SY) / max(1, |c^T z|)
  double dual_residual = 0.0;   // ||c - A(Y)|| / (1 + ||c||)
  double min_slack_eigenvalue = 0.0;
  int iterations = 0;
  std::vector<double> objective_history;
  std::vector<double> merit_history;  // Tr(SY)/N + ||c - A(Y)||
  std::vector<RealMatrix> dual;       // Y per (embedded) block
  std::string message;
};

/// [[Re F, -Im F], [Im F, Re F]]. F >= 0 iff the embedding is >= 0.
inline RealMatrix embed_hermitian(const ComplexMatrix& f) {
  if (f.rows() != f.cols()) throw ArgumentError("embed_hermitian: matrix not square");
  const double scale = 1.0 + (f.size() ? f.cwiseAbs().maxCoeff() : 0.0);
  if (linalg::hermitian_defect(f) > 1e-12 * scale) {
    throw ArgumentError("embed_hermitian: matrix not Hermitian");
  }
  const Eigen::Index d = f.rows();
  RealMatrix out(2 * d, 2 * d);
  const RealMatrix re = f.real();
  const RealMatrix im = f.imag();
  out.topLeftCorner(d, d) = re;
  out.topRightCorner(d, d) = -im;
  out.bottomLeftCorner(d, d) = im;
  out.bottomRightCorner(d, d) = re;
  return 0.5 * (out + out.transpose());
}

namespace detail {

struct RealBlock {
  RealMatrix f0;
  std::vector<RealMatrix> f;
  std::vector<bool> active;  // coefficient not identically zero
};

inline RealBlock to_real_block(const LmiBlock& b) {
  bool is_real = b.constant.imag().cwiseAbs().maxCoeff() == 0.0;
  for (const ComplexMatrix& f : b.coefficients) {
    if (!is_real) break;
    is_real = f.imag().cwiseAbs().maxCoeff() == 0.0;
  }
  auto convert = [&](const ComplexMatrix& m) -> RealMatrix {
    if (is_real) {
      RealMatrix r = m.real();
      return 0.5 * (r + r.transpose());
    }
    return embed_hermitian(m);
  };
  RealBlock out;
  out.f0 = convert(b.constant);
  out.f.reserve(b.coefficients.size());
  for (const ComplexMatrix& f : b.coefficients) {
    out.f.push_back(convert(f));
    out.active.push_back(out.f.back().cwiseAbs().maxCoeff() != 0.0);
  }
  return out;
}

inline RealMatrix symmetrize(const RealMatrix& a) { return 0.5 * (a + a.transpose()); }

// Largest alpha with X + alpha dX >= 0, given the Cholesky factor of X > 0.
inline double max_step(const Eigen::LLT<RealMatrix>& chol_x, const RealMatrix& dx) {
  const auto& l = chol_x.matrixL();
  RealMatrix t = l.solve(dx);
  t = l.solve(t.transpose()).transpose();
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(symmetrize(t), Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues()(0);
  if (lmin >= 0.0) return std::numeric_limits<double>::infinity();
  return -1.0 / lmin;
}

inline double trace_product(const RealMatrix& a, const RealMatrix& b) {
  return a.cwiseProduct(b).sum();  // both symmetric
}

}  // namespace detail

inline SdpSolution solve(const LmiSystem& problem, const SolverOptions& opts = {}) {
  problem.validate();
  using detail::RealBlock;
  const Eigen::Index k = problem.num_vars;
  const RealVector& c = problem.objective;

  std::vector<RealBlock> blocks;
  blocks.reserve(problem.blocks.size());
  double total_dim = 0.0;
  for (const LmiBlock& b : problem.blocks) {
    blocks.push_back(detail::to_real_block(b));
    total_dim += static_cast<double>(blocks.back().f0.rows());
  }

  auto slack = [&](const RealVector& z) {
    std::vector<RealMatrix> s;
    s.reserve(blocks.size());
    for (const RealBlock& b : blocks) {
      RealMatrix m = b.f0;
      for (Eigen::Index i = 0; i < k; ++i) {
        if (b.active[static_cast<std::size_t>(i)] && z(i) != 0.0) {
          m += z(i) * b.f[static_cast<std::size_t>(i)];
        }
      }
      s.push_back(detail::symmetrize(m));
    }
    return s;
  };
  auto direction_slack = [&](const RealVector& dz) {
    std::vector<RealMatrix> ds;
    ds.reserve(blocks.size());
    for (const RealBlock& b : blocks) {
      RealMatrix m = RealMatrix::Zero(b.f0.rows(), b.f0.cols());
      for (Eigen::Index i = 0; i < k; ++i) {
        if (b.active[static_cast<std::size_t>(i)]) m += dz(i) * b.f[static_cast<std::size_t>(i)];
      }
      ds.push_back(m);
    }
    return ds;
  };
  auto all_pd = [&](const std::vector<RealMatrix>& s) {
    for (const RealMatrix& m : s) {
      Eigen::LLT<RealMatrix> llt(m);
      if (llt.info() != Eigen::Success) return false;
    }
    return true;
  };
  auto apply_adjoint = [&](const std::vector<RealMatrix>& y) {
    RealVector out = RealVector::Zero(k);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      for (Eigen::Index i = 0; i < k; ++i) {
        if (blocks[b].active[static_cast<std::size_t>(i)]) {
          out(i) += detail::trace_product(blocks[b].f[static_cast<std::size_t>(i)], y[b]);
        }
      }
    }
    return out;
  };

  SdpSolution sol;
  RealVector z = problem.initial_point.size() ? problem.initial_point : RealVector::Zero(k);

  // Strictly feasible start.
  if (!all_pd(slack(z))) {
    if (!problem.inflate_variable) {
      sol.z = z;
      sol.status = Status::Infeasible;
      sol.message = "initial point is not strictly feasible and no inflate variable is set";
      return sol;
    }
    const Eigen::Index g = *problem.inflate_variable;
    const double base = z(g);
    double t = 1.0;
    bool found = false;
    for (int it = 0; it < opts.max_inflations; ++it) {
      z(g) = base + t;
      if (all_pd(slack(z))) {
        found = true;
        break;
      }
      t *= 2.0;
    }
    if (!found) {
      sol.z = z;
      sol.status = Status::Infeasible;
      sol.message = "no strictly feasible point found by inflating '" +
                    (problem.variable_names.size() > static_cast<std::size_t>(g)
                         ? problem.variable_names[static_cast<std::size_t>(g)]
                         : std::string("variable")) +
                    "'";
      return sol;
    }
    z(g) = base + 2.0 * t;
  }

  std::vector<RealMatrix> y;
  y.reserve(blocks.size());
  for (const RealBlock& b : blocks) y.push_back(RealMatrix::Identity(b.f0.rows(), b.f0.cols()));

  const double c_norm = c.norm();
  for (int iter = 0;; ++iter) {
    const std::vector<RealMatrix> s = slack(z);
    std::vector<Eigen::LLT<RealMatrix>> chol_s;
    std::vector<Eigen::LLT<RealMatrix>> chol_y;
    std::vector<RealMatrix> s_inv;
    bool ok = true;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      chol_s.emplace_back(s[b]);
      chol_y.emplace_back(y[b]);
      if (chol_s.back().info() != Eigen::Success || chol_y.back().info() != Eigen::Success) {
        ok = false;
        break;
      }
      s_inv.push_back(detail::symmetrize(
          chol_s.back().solve(RealMatrix::Identity(s[b].rows(), s[b].cols()))));
    }

    double comp = 0.0;
    double dual_obj = 0.0;
    if (ok) {
      for (std::size_t b = 0; b < blocks.size(); ++b) {
        comp += detail::trace_product(s[b], y[b]);
        dual_obj -= detail::trace_product(blocks[b].f0, y[b]);
      }
    }
    const RealVector rd = c - apply_adjoint(y);
    const double primal_obj = c.dot(z);
    const double mu = comp / total_dim;
    sol.z = z;
    sol.objective_value = primal_obj;
    sol.dual_objective = dual_obj;
    sol.duality_gap = std::abs(primal_obj - dual_obj);
    sol.relative_gap = comp / std::max(1.0, std::abs(primal_obj));
    sol.dual_residual = rd.norm() / (1.0 + c_norm);
    sol.iterations = iter;
    sol.dual = y;
    sol.objective_history.push_back(primal_obj);
    sol.merit_history.push_back(mu + rd.norm());
    if (!ok) {
      sol.status = Status::NumericalFailure;
      sol.message = "factorization of slack or dual iterate failed";
      return sol;
    }
    {
      double lmin = std::numeric_limits<double>::infinity();
      for (const RealMatrix& m : s) {
        Eigen::SelfAdjointEigenSolver<RealMatrix> es(m, Eigen::EigenvaluesOnly);
        lmin = std::min(lmin, es.eigenvalues()(0));
      }
      sol.min_slack_eigenvalue = lmin;
    }
    if (sol.relative_gap <= opts.gap_tolerance &&
        sol.dual_residual <= opts.feasibility_tolerance) {
      sol.status = Status::Optimal;
      return sol;
    }
    if (!std::isfinite(primal_obj) || std::abs(primal_obj) > 1e15 || z.norm() > 1e15) {
      sol.status = Status::Infeasible;
      sol.message = "objective unbounded below (dual infeasible)";
      return sol;
    }
    if (iter >= opts.max_iterations) {
      sol.status = Status::MaxIterations;
      sol.message = "iteration cap reached";
      return sol;
    }

    // Schur complement M_ij = Tr(F_i S^-1 F_j Y), g_i = Tr(F_i S^-1).
    RealMatrix m = RealMatrix::Zero(k, k);
    RealVector g = RealVector::Zero(k);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      const RealBlock& blk = blocks[b];
      for (Eigen::Index j = 0; j < k; ++j) {
        if (!blk.active[static_cast<std::size_t>(j)]) continue;
        const RealMatrix& fj = blk.f[static_cast<std::size_t>(j)];
        g(j) += detail::trace_product(fj, s_inv[b]);
        const RealMatrix gj = s_inv[b] * fj * y[b];
        for (Eigen::Index i = 0; i < k; ++i) {
          if (!blk.active[static_cast<std::size_t>(i)]) continue;
          m(i, j) += blk.f[static_cast<std::size_t>(i)].cwiseProduct(gj.transpose()).sum();
        }
      }
    }
    m = detail::symmetrize(m);
    Eigen::LLT<RealMatrix> chol_m(m);
    Eigen::LDLT<RealMatrix> ldlt_m;
    const bool use_llt = chol_m.info() == Eigen::Success;
    if (!use_llt) {
      ldlt_m.compute(m);
      if (ldlt_m.info() != Eigen::Success) {
        sol.status = Status::NumericalFailure;
        sol.message = "Schur complement system is singular";
        return sol;
      }
    }
    auto solve_m = [&](const RealVector& rhs) -> RealVector {
      return use_llt ? RealVector(chol_m.solve(rhs)) : RealVector(ldlt_m.solve(rhs));
    };

    auto dual_direction = [&](const std::vector<RealMatrix>& ds, double target,
                              const std::vector<RealMatrix>* second_order) {
      std::vector<RealMatrix> dy;
      dy.reserve(blocks.size());
      for (std::size_t b = 0; b < blocks.size(); ++b) {
        RealMatrix t = target * s_inv[b] - y[b] - s_inv[b] * ds[b] * y[b];
        if (second_order) t -= (*second_order)[b];
        dy.push_back(detail::symmetrize(t));
      }
      return dy;
    };
    auto step_lengths = [&](const std::vector<RealMatrix>& ds,
                            const std::vector<RealMatrix>& dy) {
      double ap = std::numeric_limits<double>::infinity();
      double ad = std::numeric_limits<double>::infinity();
      for (std::size_t b = 0; b < blocks.size(); ++b) {
        ap = std::min(ap, detail::max_step(chol_s[b], ds[b]));
        ad = std::min(ad, detail::max_step(chol_y[b], dy[b]));
      }
      return std::pair<double, double>{ap, ad};
    };

    double sigma = opts.centering;
    std::vector<RealMatrix> corr;
    bool have_corr = false;
    if (opts.predictor_corrector) {
      const RealVector dz_aff = solve_m(-c);
      const std::vector<RealMatrix> ds_aff = direction_slack(dz_aff);
      const std::vector<RealMatrix> dy_aff = dual_direction(ds_aff, 0.0, nullptr);
      auto [ap, ad] = step_lengths(ds_aff, dy_aff);
      ap = std::min(1.0, ap);
      ad = std::min(1.0, ad);
      double comp_aff = 0.0;
      for (std::size_t b = 0; b < blocks.size(); ++b) {
        comp_aff += detail::trace_product(s[b] + ap * ds_aff[b], y[b] + ad * dy_aff[b]);
      }
      const double mu_aff = std::max(0.0, comp_aff / total_dim);
      sigma = std::clamp(std::pow(mu_aff / mu, 3.0), 0.0, 1.0);
      corr.reserve(blocks.size());
      for (std::size_t b = 0; b < blocks.size(); ++b) {
        corr.push_back(s_inv[b] * ds_aff[b] * dy_aff[b]);
      }
      have_corr = true;
    }

    RealVector rhs = sigma * mu * g - c;
    if (have_corr) {
      for (std::size_t b = 0; b < blocks.size(); ++b) {
        const RealMatrix h = detail::symmetrize(corr[b]);
        for (Eigen::Index i = 0; i < k; ++i) {
          if (blocks[b].active[static_cast<std::size_t>(i)]) {
            rhs(i) -= detail::trace_product(blocks[b].f[static_cast<std::size_t>(i)], h);
          }
        }
      }
    }
    const RealVector dz = solve_m(rhs);
    if (!dz.allFinite()) {
      sol.status = Status::NumericalFailure;
      sol.message = "non-finite search direction";
      return sol;
    }
    const std::vector<RealMatrix> ds = direction_slack(dz);
    const std::vector<RealMatrix> dy =
        dual_direction(ds, sigma * mu, have_corr ? &corr : nullptr);
    auto [ap, ad] = step_lengths(ds, dy);
    ap = std::min(1.0, opts.step_fraction * ap);
    ad = std::min(1.0, opts.step_fraction * ad);

    // Rounding can push a boundary step out of the cone; shrink until both
    // iterates factor.
    bool accepted = false;
    for (int shrink = 0; shrink < 60; ++shrink) {
      const RealVector z_new = z + ap * dz;
      std::vector<RealMatrix> y_new;
      y_new.reserve(blocks.size());
      bool pd = all_pd(slack(z_new));
      for (std::size_t b = 0; pd && b < blocks.size(); ++b) {
        y_new.push_back(detail::symmetrize(y[b] + ad * dy[b]));
        pd = Eigen::LLT<RealMatrix>(y_new.back()).info() == Eigen::Success;
      }
      if (pd) {
        z = z_new;
        y = std::move(y_new);
        accepted = true;
        break;
      }
      ap *= 0.7;
      ad *= 0.7;
    }
    if (!accepted) {
      sol.status = Status::NumericalFailure;
      sol.message = "no step keeps the iterates positive definite";
      return sol;
    }
  }
}

}  // namespace regret_ls::sdp

#endif  // REGRET_LS_SDP_HPP
