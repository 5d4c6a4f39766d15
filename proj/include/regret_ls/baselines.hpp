#ifndef REGRET_LS_BASELINES_HPP
#define REGRET_LS_BASELINES_HPP

// Comparison estimators: LS, TLS, worst-case robust LS, ridge, robust ridge
// and the structured worst-case residual estimator.

#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "regret_ls/errors.hpp"
#include "regret_ls/linalg.hpp"
#include "regret_ls/problem.hpp"
#include "regret_ls/regret.hpp"

namespace regret_ls::baselines {

inline void check_system(const ComplexMatrix& h, const ComplexVector& y, const char* who) {
  if (y.size() != h.rows()) {
    throw ArgumentError(std::string(who) + ": y length differs from rows of H");
  }
  if (h.rows() < h.cols()) throw ArgumentError(std::string(who) + ": expected m >= n");
}

inline ComplexVector solve_ls(const ComplexMatrix& h, const ComplexVector& y) {
  check_system(h, y, "solve_ls");
  return linalg::pseudo_inverse(h) * y;
}

/// Classical TLS from the right singular vector of [H y] for sigma_{n+1}.
inline ComplexVector solve_tls(const ComplexMatrix& h, const ComplexVector& y) {
  check_system(h, y, "solve_tls");
  const Eigen::Index m = h.rows();
  const Eigen::Index n = h.cols();
  ComplexMatrix c(m, n + 1);
  c << h, y;
  const linalg::SvdFactors fc = linalg::svd(c);
  const RealVector sh = linalg::singular_values(h);
  const double scale = std::max(fc.singular_values(0), std::numeric_limits<double>::min());
  const double tie_tol = 1e-12 * scale;
  // [H y] has n+1 singular values when m > n; otherwise sigma_{n+1} = 0.
  const double s_last = fc.singular_values.size() > n ? fc.singular_values(n) : 0.0;
  const double s_prev = fc.singular_values(n - 1);
  if (!(sh(n - 1) - s_last > tie_tol) || !(s_prev - s_last > tie_tol)) {
    std::ostringstream msg;
    msg << "solve_tls: nongeneric problem (sigma_n(H) = " << sh(n - 1)
        << ", sigma_n([H y]) = " << s_prev << ", sigma_{n+1}([H y]) = " << s_last << ")";
    throw NongenericTlsError(msg.str());
  }
  const ComplexVector v = fc.V.col(n);
  if (std::abs(v(n)) < 1e-12) {
    throw NongenericTlsError("solve_tls: last component of the singular vector vanishes");
  }
  return -v.head(n) / v(n);
}

/// (||y - Hx|| + delta_H ||x|| + delta_Y)^2: the worst residual over the
/// uncertainty ball at x (attained by a rank-one dH).
inline double worst_case_residual(const ComplexMatrix& h, const ComplexVector& y,
                                  double delta_h, double delta_y, const ComplexVector& x) {
  const double t = (y - h * x).norm() + delta_h * x.norm() + delta_y;
  return t * t;
}

/// The ridge path x(lambda) = (H^H H + lambda I)^-1 H^H y in SVD coordinates.
class RidgePath {
 public:
  RidgePath(const ComplexMatrix& h, const ComplexVector& y) {
    const linalg::SvdFactors f = linalg::svd(h);
    const Eigen::Index n = h.cols();
    sigma_ = f.singular_values;
    v_ = f.V;
    const ComplexVector c = f.U.adjoint() * y;
    c_ = c.head(n);
    perp_sq_ = c.tail(h.rows() - n).squaredNorm();
    y_norm_ = y.norm();
    hty_norm_ = (h.adjoint() * y).norm();
  }

  ComplexVector x(double lambda) const {
    ComplexVector t(c_.size());
    for (Eigen::Index i = 0; i < c_.size(); ++i) {
      const double s = sigma_(i);
      t(i) = (s > 0.0 || lambda > 0.0) ? c_(i) * (s / (s * s + lambda)) : Complex(0.0);
    }
    return v_ * t;
  }

  double x_norm(double lambda) const {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < c_.size(); ++i) {
      const double s = sigma_(i);
      if (s == 0.0 && lambda == 0.0) continue;
      const double g = s / (s * s + lambda);
      acc += g * g * std::norm(c_(i));
    }
    return std::sqrt(acc);
  }

  double residual_norm(double lambda) const {
    double acc = perp_sq_;
    for (Eigen::Index i = 0; i < c_.size(); ++i) {
      const double s = sigma_(i);
      const double g = (s * s + lambda) > 0.0 ? lambda / (s * s + lambda) : 1.0;
      acc += g * g * std::norm(c_(i));
    }
    return std::sqrt(acc);
  }

  double sigma_max() const { return sigma_.size() ? sigma_(0) : 0.0; }
  double y_norm() const { return y_norm_; }
  double hty_norm() const { return hty_norm_; }
  double perp_norm() const { return std::sqrt(perp_sq_); }

 private:
  RealVector sigma_;
  ComplexMatrix v_;
  ComplexVector c_;
  double perp_sq_ = 0.0;
  double y_norm_ = 0.0;
  double hty_norm_ = 0.0;
};

namespace detail {

// Root of an increasing-in-sign function on (lo, hi) by bisection in log scale.
inline double log_bisect(const std::function<double(double)>& f, double lo, double hi) {
  for (int it = 0; it < 200; ++it) {
    const double mid = std::sqrt(lo * hi);
    if (!(mid > lo && mid < hi)) break;
    if (f(mid) > 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
    if (hi / lo - 1.0 < 1e-15) break;
  }
  return std::sqrt(lo * hi);
}

// Bracket the sign change of f (negative near 0, positive for large lambda).
// Returns false if f is already nonnegative at the smallest probe.
inline bool bracket(const std::function<double(double)>& f, double scale, double& lo,
                    double& hi) {
  const double base = std::max(scale, std::numeric_limits<double>::min());
  hi = base;
  for (int it = 0; it < 2000 && f(hi) <= 0.0; ++it) hi *= 2.0;
  lo = base;
  for (int it = 0; it < 2000 && f(lo) > 0.0; ++it) {
    lo *= 0.5;
    if (lo < base * 1e-300) return false;
  }
  return f(lo) <= 0.0 && f(hi) > 0.0;
}

}  // namespace detail

/// argmin ||y - Hx|| + delta_H ||x||. The minimizer lies on the ridge path at
/// the root of the secular equation lambda ||x(lambda)|| = delta_H ||r(lambda)||.
inline ComplexVector solve_robust_ls(const ComplexMatrix& h, const ComplexVector& y,
                                     double delta_h, double delta_y) {
  check_system(h, y, "solve_robust_ls");
  if (!(delta_h >= 0.0) || !(delta_y >= 0.0)) {
    throw ArgumentError("solve_robust_ls: bounds must be nonnegative");
  }
  if (delta_h == 0.0) return solve_ls(h, y);
  const RidgePath path(h, y);
  if (path.hty_norm() <= delta_h * path.y_norm()) return ComplexVector::Zero(h.cols());
  auto secular = [&](double lambda) {
    return lambda * path.x_norm(lambda) - delta_h * path.residual_norm(lambda);
  };
  double lo = 0.0;
  double hi = 0.0;
  const double s = path.sigma_max();
  if (!detail::bracket(secular, s * s, lo, hi)) {
    // Residual vanishes at the LS solution and the kink is optimal.
    return solve_ls(h, y);
  }
  return path.x(detail::log_bisect(secular, lo, hi));
}

inline ComplexVector solve_reg_ls(const ComplexMatrix& h, const ComplexVector& y, double mu) {
  if (y.size() != h.rows()) throw ArgumentError("solve_reg_ls: y length differs from rows of H");
  if (!(mu > 0.0)) throw ArgumentError("solve_reg_ls: mu must be positive");
  return RidgePath(h, y).x(mu);
}

/// (||y - Hx|| + delta_H ||x|| + delta_Y)^2 + mu ||x||^2.
inline double robust_reg_objective(const ComplexMatrix& h, const ComplexVector& y,
                                   double delta_h, double delta_y, double mu,
                                   const ComplexVector& x) {
  return worst_case_residual(h, y, delta_h, delta_y, x) + mu * x.squaredNorm();
}

/// argmin (||y - Hx|| + delta_H ||x|| + delta_Y)^2 + mu ||x||^2. Stationarity
/// puts the minimizer on the ridge path with
/// lambda = ||r|| (delta_H / ||x|| + mu / s),  s = ||r|| + delta_H ||x|| + delta_Y.
inline ComplexVector solve_robust_reg_ls(const ComplexMatrix& h, const ComplexVector& y,
                                         double delta_h, double delta_y, double mu) {
  if (y.size() != h.rows()) {
    throw ArgumentError("solve_robust_reg_ls: y length differs from rows of H");
  }
  if (!(mu > 0.0)) throw ArgumentError("solve_robust_reg_ls: mu must be positive");
  if (!(delta_h >= 0.0) || !(delta_y >= 0.0)) {
    throw ArgumentError("solve_robust_reg_ls: bounds must be nonnegative");
  }
  const RidgePath path(h, y);
  if (path.hty_norm() == 0.0 || path.hty_norm() <= delta_h * path.y_norm()) {
    return ComplexVector::Zero(h.cols());
  }
  auto stationarity = [&](double lambda) {
    const double xn = path.x_norm(lambda);
    const double rn = path.residual_norm(lambda);
    const double s = rn + delta_h * xn + delta_y;
    double target = mu * rn / s;
    if (delta_h > 0.0) target += delta_h * rn / xn;
    return lambda - target;
  };
  double lo = 0.0;
  double hi = 0.0;
  const double s = path.sigma_max();
  if (!detail::bracket(stationarity, std::max(s * s, mu), lo, hi)) {
    return path.x(lo);
  }
  return path.x(detail::log_bisect(stationarity, lo, hi));
}

/// min_x max ||(y + Q beta) - (H + sum alpha_i H_i) x||^2 over the structured
/// balls, through the worst-case residual SDP.
inline ComplexVector solve_structured_robust_ls(const ProblemSpec& spec,
                                                const sdp::SolverOptions& opts = {}) {
  if (!spec.structure) throw ArgumentError("solve_structured_robust_ls: no structure");
  return solve_formulation(spec, Formulation::StructuredRobustResidual, opts).x_hat;
}

}  // namespace regret_ls::baselines

#endif  // REGRET_LS_BASELINES_HPP
