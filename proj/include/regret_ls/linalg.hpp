#ifndef REGRET_LS_LINALG_HPP
#define REGRET_LS_LINALG_HPP

// Dense complex linear algebra shared by every estimator.
//
// Matrices are Eigen::MatrixXcd (column-major storage). The JSON wire format
// (see io.hpp) is row-major; conversion happens only at that boundary.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <sstream>
#include <string>

#include "regret_ls/errors.hpp"

namespace regret_ls {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

namespace linalg {

struct SvdFactors {
  ComplexMatrix U;              // m x m
  RealVector singular_values;   // min(m, n), nonincreasing
  ComplexMatrix V;              // n x n
  double rank_tolerance = 0.0;  // default threshold used for rank decisions
};

inline bool all_finite(const ComplexMatrix& a) {
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      if (!std::isfinite(a(i, j).real()) || !std::isfinite(a(i, j).imag())) {
        return false;
      }
    }
  }
  return true;
}

inline void require_finite(const ComplexMatrix& a, const std::string& what) {
  if (!all_finite(a)) {
    throw ArgumentError(what + " contains non-finite entries");
  }
}

/// max(m, n) * eps * sigma_max.
inline double default_rank_tolerance(Eigen::Index rows, Eigen::Index cols,
                                     double sigma_max) {
  return static_cast<double>(std::max(rows, cols)) *
         std::numeric_limits<double>::epsilon() * sigma_max;
}

/// Full SVD A = U diag(s) V^H.
inline SvdFactors svd(const ComplexMatrix& a) {
  require_finite(a, "svd input");
  SvdFactors out;
  if (a.size() == 0) {
    out.U = ComplexMatrix::Identity(a.rows(), a.rows());
    out.V = ComplexMatrix::Identity(a.cols(), a.cols());
    out.singular_values.resize(0);
    return out;
  }
  Eigen::JacobiSVD<ComplexMatrix> jsvd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (jsvd.info() != Eigen::Success) {
    throw SolverError("svd: Jacobi sweeps did not converge", 0);
  }
  out.U = jsvd.matrixU();
  out.V = jsvd.matrixV();
  out.singular_values = jsvd.singularValues();
  out.rank_tolerance =
      default_rank_tolerance(a.rows(), a.cols(), out.singular_values(0));
  return out;
}

inline RealVector singular_values(const ComplexMatrix& a) {
  require_finite(a, "singular_values input");
  if (a.size() == 0) return RealVector(0);
  Eigen::JacobiSVD<ComplexMatrix> jsvd(a);
  if (jsvd.info() != Eigen::Success) {
    throw SolverError("svd: Jacobi sweeps did not converge", 0);
  }
  return jsvd.singularValues();
}

inline double spectral_norm(const ComplexMatrix& a) {
  if (a.size() == 0) return 0.0;
  return singular_values(a)(0);
}

inline Eigen::Index numerical_rank(const ComplexMatrix& a,
                                   std::optional<double> tol = std::nullopt) {
  const RealVector s = singular_values(a);
  if (s.size() == 0) return 0;
  const double t = tol.value_or(default_rank_tolerance(a.rows(), a.cols(), s(0)));
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > t) ++r;
  }
  return r;
}

/// Moore-Penrose pseudo-inverse; singular values at or below tol are zeroed.
inline ComplexMatrix pseudo_inverse(const ComplexMatrix& a,
                                    std::optional<double> tol = std::nullopt) {
  if (tol && *tol < 0.0) throw ArgumentError("pseudo_inverse: negative tolerance");
  const SvdFactors f = svd(a);
  const double t = tol.value_or(f.rank_tolerance);
  ComplexMatrix out = ComplexMatrix::Zero(a.cols(), a.rows());
  for (Eigen::Index i = 0; i < f.singular_values.size(); ++i) {
    const double s = f.singular_values(i);
    if (s > t) {
      out.noalias() += (f.V.col(i) / s) * f.U.col(i).adjoint();
    }
  }
  return out;
}

/// P = I - H H^+, built from the leading left singular vectors.
inline ComplexMatrix projection_perp(const ComplexMatrix& h,
                                     std::optional<double> tol = std::nullopt) {
  if (h.rows() < h.cols()) {
    throw ArgumentError("projection_perp: expected rows >= cols");
  }
  const Eigen::Index m = h.rows();
  ComplexMatrix p = ComplexMatrix::Identity(m, m);
  if (h.size() == 0) return p;
  const SvdFactors f = svd(h);
  const double t = tol.value_or(f.rank_tolerance);
  for (Eigen::Index i = 0; i < f.singular_values.size(); ++i) {
    if (f.singular_values(i) > t) {
      p.noalias() -= f.U.col(i) * f.U.col(i).adjoint();
    }
  }
  return 0.5 * (p + p.adjoint());
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

/// Stacks columns: col([[1,3],[2,4]]) = (1,2,3,4).
inline ComplexVector col_stack(const ComplexMatrix& a) {
  return Eigen::Map<const ComplexVector>(a.data(), a.size());
}

inline ComplexMatrix col_unstack(const ComplexVector& v, Eigen::Index rows,
                                 Eigen::Index cols) {
  if (rows < 0 || cols < 0 || v.size() != rows * cols) {
    std::ostringstream msg;
    msg << "col_unstack: vector of length " << v.size() << " cannot fill " << rows
        << "x" << cols;
    throw ArgumentError(msg.str());
  }
  return Eigen::Map<const ComplexMatrix>(v.data(), rows, cols);
}

/// X = x^T (x) I_m, so that X col(dH) = dH x for every m x n dH.
inline ComplexMatrix vec_operator(const ComplexVector& x, Eigen::Index m) {
  return kron(x.transpose(), ComplexMatrix::Identity(m, m));
}

/// Smallest eigenvalue of a Hermitian matrix (only the lower triangle is read).
inline double min_eigenvalue(const ComplexMatrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

inline double hermitian_defect(const ComplexMatrix& a) {
  if (a.size() == 0) return 0.0;
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace linalg
}  // namespace regret_ls

#endif  // REGRET_LS_LINALG_HPP
