#ifndef REGRET_LS_TAYLOR_HPP
#define REGRET_LS_TAYLOR_HPP

// First-order expansion of the optimal least-squares cost
//
//   f(H + dH, y + dy) ~ kappa + 2 Re{ d^H col(dH) } + 2 Re{ b^H dy }
//
// (and the analogue in the structured coordinates alpha, beta). Gradients use
// the Wirtinger convention: d = df/d conj(col(H)), so that the linear term is
// 2 Re Tr(D^H dH) with d = col(D).

#include <vector>

#include "regret_ls/errors.hpp"
#include "regret_ls/linalg.hpp"
#include "regret_ls/problem.hpp"

namespace regret_ls {

enum class ExpansionKind { Unstructured, Regularized, Structured };

struct TaylorCoefficients {
  ExpansionKind kind = ExpansionKind::Unstructured;
  double mu = 0.0;
  double kappa = 0.0;  // f(H, y)
  ComplexVector d;     // length mn (col(D)), or p_alpha when structured
  ComplexVector b;     // length m, or p_beta when structured
};

namespace detail {

struct LsPieces {
  ComplexVector w;         // H^+ y
  ComplexVector residual;  // P y
};

inline LsPieces ls_pieces(const ComplexMatrix& h, const ComplexVector& y) {
  check_full_column_rank(h, "H");
  if (y.size() != h.rows()) throw ArgumentError("y length differs from rows of H");
  const linalg::SvdFactors f = linalg::svd(h);
  const Eigen::Index n = h.cols();
  const ComplexMatrix un = f.U.leftCols(n);
  const ComplexVector c = un.adjoint() * y;
  LsPieces out;
  out.w = f.V * (c.array() / f.singular_values.array().cast<Complex>()).matrix();
  // P y = y - U_n U_n^H y
  out.residual = y - un * c;
  return out;
}

}  // namespace detail

/// kappa = y^H P y, D = -P y (H^+ y)^H, b = P y with P = I - H H^+.
inline TaylorCoefficients taylor_unstructured(const ComplexMatrix& h, const ComplexVector& y) {
  const detail::LsPieces ls = detail::ls_pieces(h, y);
  TaylorCoefficients out;
  out.kind = ExpansionKind::Unstructured;
  out.kappa = ls.residual.squaredNorm();
  const ComplexMatrix dmat = -ls.residual * ls.w.adjoint();
  out.d = linalg::col_stack(dmat);
  out.b = ls.residual;
  return out;
}

/// With P = I + H H^H / mu: kappa = y^H P^-1 y, b = P^-1 y and
/// D = -(1/mu) P^-1 y y^H P^-1 H  (equivalently -(y - H w*) w*^H for the
/// ridge solution w*). mu = 0 falls back to the unregularized expansion.
inline TaylorCoefficients taylor_regularized(const ComplexMatrix& h, const ComplexVector& y,
                                             double mu) {
  if (!(mu >= 0.0)) throw ArgumentError("taylor_regularized: mu must be nonnegative");
  if (mu == 0.0) return taylor_unstructured(h, y);
  if (y.size() != h.rows()) throw ArgumentError("y length differs from rows of H");
  const Eigen::Index m = h.rows();
  const ComplexMatrix p =
      ComplexMatrix::Identity(m, m) + (h * h.adjoint()) / mu;
  Eigen::LLT<ComplexMatrix> llt(p);
  if (llt.info() != Eigen::Success) {
    throw SolverError("taylor_regularized: I + H H^H / mu is not positive definite", 0);
  }
  const ComplexVector pinv_y = llt.solve(y);
  TaylorCoefficients out;
  out.kind = ExpansionKind::Regularized;
  out.mu = mu;
  out.kappa = std::max(0.0, y.dot(pinv_y).real());
  const ComplexMatrix dmat = -(pinv_y * (h.adjoint() * pinv_y).adjoint()) / mu;
  out.d = linalg::col_stack(dmat);
  out.b = pinv_y;
  return out;
}

/// Structured coordinates: d_i = conj(-y^H P H_i H^+ y), b_j = conj(y^H P y_j),
/// i.e. the vector-level conjugate transpose of the row of partials.
inline TaylorCoefficients taylor_structured(const ComplexMatrix& h, const ComplexVector& y,
                                            const std::vector<ComplexMatrix>& h_basis,
                                            const std::vector<ComplexVector>& y_basis) {
  if (h_basis.empty() || y_basis.empty()) {
    throw ArgumentError("taylor_structured: empty structure basis");
  }
  const detail::LsPieces ls = detail::ls_pieces(h, y);
  TaylorCoefficients out;
  out.kind = ExpansionKind::Structured;
  out.kappa = ls.residual.squaredNorm();
  out.d.resize(static_cast<Eigen::Index>(h_basis.size()));
  for (std::size_t i = 0; i < h_basis.size(); ++i) {
    const ComplexMatrix& hi = h_basis[i];
    if (hi.rows() != h.rows() || hi.cols() != h.cols()) {
      throw ArgumentError("taylor_structured: H_basis element has wrong shape");
    }
    out.d(static_cast<Eigen::Index>(i)) = -(hi * ls.w).dot(ls.residual);
  }
  out.b.resize(static_cast<Eigen::Index>(y_basis.size()));
  for (std::size_t j = 0; j < y_basis.size(); ++j) {
    if (y_basis[j].size() != h.rows()) {
      throw ArgumentError("taylor_structured: y_basis element has wrong length");
    }
    out.b(static_cast<Eigen::Index>(j)) = y_basis[j].dot(ls.residual);
  }
  return out;
}

inline TaylorCoefficients taylor_structured(const ProblemSpec& spec) {
  if (!spec.structure) throw ArgumentError("taylor_structured: problem has no structure");
  return taylor_structured(spec.H, spec.y, spec.structure->H_basis, spec.structure->y_basis);
}

}  // namespace regret_ls

#endif  // REGRET_LS_TAYLOR_HPP
