#ifndef REGRET_LS_LMI_HPP
#define REGRET_LS_LMI_HPP

// LMI assembly for the minimax formulations.
//
// Every formulation bounds an expression of the form
//
//   gamma + kappa + sum_k 2 Re{ l_k^H a_k } - || r + sum_k A_k(x) a_k ||^2 (- mu ||x||^2) >= 0
//
// for all perturbation vectors a_k with ||a_k|| <= delta_k, where r = y - H x.
// The channels are
//
//   unstructured:  a = dy      (l = b, A = I)      and  a = col(dH) (l = d, A = -(x^T (x) I))
//   structured:    a = alpha   (l = d, A = -G(x))  and  a = beta    (l = b, A = Q)
//
// with G(x) = [H_1 x, ..., H_p x] and Q = [y_1, ..., y_q]. A Schur complement
// followed by the two-constraint S-procedure (lossless over C) turns the
// robust constraint into one Hermitian LMI
//
//   [ gamma + kappa - sum tau_k   r^H        delta_k l_k^H ]
//   [ r                           I          delta_k A_k   ]   >= 0,
//   [ delta_k l_k                 delta_k A_k^H   tau_k I  ]
//
// plus, for the regularized problem, a border [sqrt(mu) x^H ; 0 ; I] that
// contributes mu ||x||^2. The perturbation channel uses the vector norm of a_k,
// which for dH is the Frobenius norm.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "regret_ls/errors.hpp"
#include "regret_ls/linalg.hpp"
#include "regret_ls/problem.hpp"
#include "regret_ls/sdp.hpp"
#include "regret_ls/taylor.hpp"

namespace regret_ls {

/// Decision values of a regret LMI in complex form.
struct LmiPoint {
  double gamma = 0.0;
  std::vector<double> tau;  // one per perturbation channel
  ComplexVector x;
};

enum class Channel { OutputVector, DataMatrix, Alpha, Beta };

class RegretLmi {
 public:
  RegretLmi(const ProblemSpec& spec, Formulation formulation)
      : RegretLmi(spec, formulation, default_coefficients(spec, formulation)) {}

  RegretLmi(const ProblemSpec& spec, Formulation formulation, TaylorCoefficients coeffs)
      : spec_(spec), formulation_(formulation), coeffs_(std::move(coeffs)) {
    spec_.validate_shape();
    m_ = spec_.rows();
    n_ = spec_.cols();
    switch (formulation_) {
      case Formulation::Regret:
      case Formulation::RegularizedRegret:
      case Formulation::RobustResidual:
        channels_ = {Channel::OutputVector, Channel::DataMatrix};
        break;
      case Formulation::RegretMatrixOnly:
        if (spec_.delta_Y != 0.0) {
          throw ArgumentError("regret-matrix models uncertainty on H only; delta_Y must be 0");
        }
        channels_ = {Channel::DataMatrix};
        break;
      case Formulation::RegretVectorOnly:
        if (spec_.delta_H != 0.0) {
          throw ArgumentError("regret-vector models uncertainty on y only; delta_H must be 0");
        }
        channels_ = {Channel::OutputVector};
        break;
      case Formulation::StructuredRegret:
      case Formulation::StructuredRobustResidual:
        if (!spec_.structure) {
          throw ArgumentError(std::string(to_string(formulation_)) +
                              " requires a structure basis");
        }
        channels_ = {Channel::Alpha, Channel::Beta};
        break;
    }
    regularized_ = formulation_ == Formulation::RegularizedRegret && spec_.mu > 0.0;
    check_coefficients();
  }

  static TaylorCoefficients default_coefficients(const ProblemSpec& spec, Formulation f) {
    spec.validate_shape();
    switch (f) {
      case Formulation::Regret:
      case Formulation::RegretMatrixOnly:
      case Formulation::RegretVectorOnly:
        return taylor_unstructured(spec.H, spec.y);
      case Formulation::RegularizedRegret:
        return taylor_regularized(spec.H, spec.y, spec.mu);
      case Formulation::StructuredRegret:
        return taylor_structured(spec);
      case Formulation::RobustResidual:
      case Formulation::StructuredRobustResidual:
        break;
    }
    // Worst-case residual: no comparator term.
    TaylorCoefficients zero;
    const Eigen::Index m = spec.rows();
    const Eigen::Index n = spec.cols();
    if (is_structured(f)) {
      if (!spec.structure) throw ArgumentError("structured formulation without structure");
      zero.kind = ExpansionKind::Structured;
      zero.d = ComplexVector::Zero(static_cast<Eigen::Index>(spec.structure->H_basis.size()));
      zero.b = ComplexVector::Zero(static_cast<Eigen::Index>(spec.structure->y_basis.size()));
    } else {
      zero.d = ComplexVector::Zero(m * n);
      zero.b = ComplexVector::Zero(m);
    }
    return zero;
  }

  const ProblemSpec& spec() const { return spec_; }
  Formulation formulation() const { return formulation_; }
  const TaylorCoefficients& coefficients() const { return coeffs_; }
  const std::vector<Channel>& channels() const { return channels_; }
  std::size_t num_channels() const { return channels_.size(); }
  bool regularized() const { return regularized_; }

  /// Size of the main (complex) LMI block.
  Eigen::Index dimension() const {
    Eigen::Index d = 1 + m_ + (regularized_ ? n_ : 0);
    for (Channel c : channels_) d += channel_size(c);
    return d;
  }

  Eigen::Index channel_size(Channel c) const {
    switch (c) {
      case Channel::OutputVector: return m_;
      case Channel::DataMatrix: return m_ * n_;
      case Channel::Alpha: return static_cast<Eigen::Index>(spec_.structure->H_basis.size());
      case Channel::Beta: return static_cast<Eigen::Index>(spec_.structure->y_basis.size());
    }
    return 0;
  }

  /// Row offset of channel k inside the main block.
  Eigen::Index channel_offset(std::size_t k) const {
    Eigen::Index o = 1 + m_ + (regularized_ ? n_ : 0);
    for (std::size_t i = 0; i < k; ++i) o += channel_size(channels_[i]);
    return o;
  }

  double channel_bound(Channel c) const {
    switch (c) {
      case Channel::OutputVector: return spec_.delta_Y;
      case Channel::DataMatrix: return spec_.delta_H;
      case Channel::Alpha: return spec_.structure->delta_alpha;
      case Channel::Beta: return spec_.structure->delta_beta;
    }
    return 0.0;
  }

  const ComplexVector& channel_gradient(Channel c) const {
    return (c == Channel::OutputVector || c == Channel::Beta) ? coeffs_.b : coeffs_.d;
  }

  /// Residual sensitivity A_k(x): ytilde - Htilde x = r + sum_k A_k(x) a_k.
  ComplexMatrix channel_sensitivity(Channel c, const ComplexVector& x) const {
    switch (c) {
      case Channel::OutputVector: return ComplexMatrix::Identity(m_, m_);
      case Channel::DataMatrix: return -linalg::vec_operator(x, m_);
      case Channel::Alpha: {
        const auto& basis = spec_.structure->H_basis;
        ComplexMatrix g(m_, static_cast<Eigen::Index>(basis.size()));
        for (std::size_t i = 0; i < basis.size(); ++i) {
          g.col(static_cast<Eigen::Index>(i)) = -(basis[i] * x);
        }
        return g;
      }
      case Channel::Beta: {
        const auto& basis = spec_.structure->y_basis;
        ComplexMatrix q(m_, static_cast<Eigen::Index>(basis.size()));
        for (std::size_t j = 0; j < basis.size(); ++j) q.col(static_cast<Eigen::Index>(j)) = basis[j];
        return q;
      }
    }
    return {};
  }

  /// The Hermitian LMI matrix at a given point.
  ComplexMatrix matrix(const LmiPoint& p) const {
    if (p.x.size() != n_) throw ArgumentError("RegretLmi::matrix: x has wrong length");
    if (p.tau.size() != channels_.size()) {
      throw ArgumentError("RegretLmi::matrix: wrong number of multipliers");
    }
    const Eigen::Index d = dimension();
    ComplexMatrix f = ComplexMatrix::Zero(d, d);
    double corner = p.gamma + coeffs_.kappa;
    for (double t : p.tau) corner -= t;
    f(0, 0) = corner;
    const ComplexVector r = spec_.y - spec_.H * p.x;
    f.block(1, 0, m_, 1) = r;
    f.block(0, 1, 1, m_) = r.adjoint();
    f.block(1, 1, m_, m_).setIdentity();
    if (regularized_) {
      const Eigen::Index o = 1 + m_;
      const double s = std::sqrt(spec_.mu);
      f.block(o, 0, n_, 1) = s * p.x;
      f.block(0, o, 1, n_) = s * p.x.adjoint();
      f.block(o, o, n_, n_).setIdentity();
    }
    for (std::size_t k = 0; k < channels_.size(); ++k) {
      const Channel c = channels_[k];
      const Eigen::Index o = channel_offset(k);
      const Eigen::Index q = channel_size(c);
      const double delta = channel_bound(c);
      const ComplexVector& l = channel_gradient(c);
      const ComplexMatrix a = channel_sensitivity(c, p.x);
      f.block(o, 0, q, 1) = delta * l;
      f.block(0, o, 1, q) = delta * l.adjoint();
      f.block(1, o, m_, q) = delta * a;
      f.block(o, 1, q, m_) = delta * a.adjoint();
      f.block(o, o, q, q) = p.tau[k] * ComplexMatrix::Identity(q, q);
    }
    return f;
  }

  /// Number of real decision variables: gamma, one tau per channel and, unless
  /// x is fixed, Re x and Im x.
  Eigen::Index num_vars(bool x_fixed = false) const {
    return 1 + static_cast<Eigen::Index>(channels_.size()) + (x_fixed ? 0 : 2 * n_);
  }

  LmiPoint decode(const RealVector& z, const std::optional<ComplexVector>& fixed_x = {}) const {
    LmiPoint p;
    p.gamma = z(0);
    const auto nc = static_cast<Eigen::Index>(channels_.size());
    for (Eigen::Index k = 0; k < nc; ++k) p.tau.push_back(z(1 + k));
    if (fixed_x) {
      p.x = *fixed_x;
    } else {
      p.x.resize(n_);
      for (Eigen::Index j = 0; j < n_; ++j) p.x(j) = Complex(z(1 + nc + j), z(1 + nc + n_ + j));
    }
    return p;
  }

  /// min gamma over (gamma, tau, Re x, Im x), or over (gamma, tau) if x is fixed.
  /// Coefficient matrices are generated per real variable by linearity.
  sdp::LmiSystem system(const std::optional<ComplexVector>& fixed_x = {}) const {
    if (fixed_x && fixed_x->size() != n_) throw ArgumentError("fixed x has wrong length");
    const Eigen::Index nv = num_vars(fixed_x.has_value());
    const auto nc = static_cast<Eigen::Index>(channels_.size());
    sdp::LmiSystem sys;
    sys.num_vars = nv;
    sys.objective = RealVector::Zero(nv);
    sys.objective(0) = 1.0;
    sys.variable_names.push_back("gamma");
    for (Eigen::Index k = 0; k < nc; ++k) sys.variable_names.push_back("tau" + std::to_string(k + 1));
    if (!fixed_x) {
      for (Eigen::Index j = 0; j < n_; ++j) sys.variable_names.push_back("re_x" + std::to_string(j + 1));
      for (Eigen::Index j = 0; j < n_; ++j) sys.variable_names.push_back("im_x" + std::to_string(j + 1));
    }

    const RealVector origin = RealVector::Zero(nv);
    sdp::LmiBlock main;
    main.name = std::string(to_string(formulation_));
    main.constant = matrix(decode(origin, fixed_x));
    for (Eigen::Index i = 0; i < nv; ++i) {
      RealVector e = RealVector::Zero(nv);
      e(i) = 1.0;
      ComplexMatrix fi = matrix(decode(e, fixed_x)) - main.constant;
      // The x-part of the fixed-x system is already in the constant term.
      main.coefficients.push_back(0.5 * (fi + fi.adjoint()));
    }
    main.constant = 0.5 * (main.constant + main.constant.adjoint());
    sys.blocks.push_back(std::move(main));

    for (Eigen::Index k = 0; k < nc; ++k) {
      sdp::LmiBlock sign;
      sign.name = "tau" + std::to_string(k + 1) + ">=0";
      sign.constant = ComplexMatrix::Zero(1, 1);
      for (Eigen::Index i = 0; i < nv; ++i) {
        sign.coefficients.push_back(ComplexMatrix::Constant(1, 1, i == 1 + k ? 1.0 : 0.0));
      }
      sys.blocks.push_back(std::move(sign));
    }

    // Start: gamma is raised by the solver; tau_k must dominate delta_k^2 ||A_k||^2.
    sys.initial_point = RealVector::Zero(nv);
    const ComplexVector x0 = fixed_x.value_or(ComplexVector::Zero(n_));
    for (Eigen::Index k = 0; k < nc; ++k) {
      const Channel c = channels_[static_cast<std::size_t>(k)];
      const double delta = channel_bound(c);
      const double a_norm = linalg::spectral_norm(channel_sensitivity(c, x0));
      sys.initial_point(1 + k) = 1.0 + 2.0 * static_cast<double>(nc) * delta * delta * a_norm * a_norm;
    }
    if (!fixed_x) {
      for (Eigen::Index j = 0; j < n_; ++j) {
        sys.initial_point(1 + nc + j) = x0(j).real();
        sys.initial_point(1 + nc + n_ + j) = x0(j).imag();
      }
    }
    sys.inflate_variable = 0;
    return sys;
  }

 private:
  void check_coefficients() const {
    for (Channel c : channels_) {
      if (channel_gradient(c).size() != channel_size(c)) {
        throw ArgumentError("RegretLmi: Taylor coefficients do not match formulation " +
                            std::string(to_string(formulation_)));
      }
    }
  }

  ProblemSpec spec_;
  Formulation formulation_;
  TaylorCoefficients coeffs_;
  std::vector<Channel> channels_;
  bool regularized_ = false;
  Eigen::Index m_ = 0;
  Eigen::Index n_ = 0;
};

/// LMI system for a formulation; see RegretLmi for the variable layout.
inline sdp::LmiSystem assemble_lmi(const ProblemSpec& spec, Formulation formulation) {
  return RegretLmi(spec, formulation).system();
}

}  // namespace regret_ls

#endif  // REGRET_LS_LMI_HPP
