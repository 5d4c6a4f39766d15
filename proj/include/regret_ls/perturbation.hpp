#ifndef REGRET_LS_PERTURBATION_HPP
#define REGRET_LS_PERTURBATION_HPP

// Perturbation sampling, worst-case extraction and brute-force regret oracles.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "regret_ls/errors.hpp"
#include "regret_ls/linalg.hpp"
#include "regret_ls/lmi.hpp"
#include "regret_ls/problem.hpp"
#include "regret_ls/taylor.hpp"

namespace regret_ls::oracle {

enum class SampleMode { Unstructured, Structured };

/// A realized perturbation. Unstructured samples fill dH/dy, structured ones
/// alpha/beta; the unused pair is empty.
struct PerturbationSample {
  SampleMode mode = SampleMode::Unstructured;
  ComplexMatrix dH;
  ComplexVector dy;
  ComplexVector alpha;
  ComplexVector beta;
  double norm_first = 0.0;   // ||dH|| (spectral) or ||alpha||
  double norm_second = 0.0;  // ||dy|| or ||beta||
  bool fallback_used = false;  // extractor resorted to sphere sampling
};

/// splitmix64 finalizer; maps (master seed, stream index) to a stream seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

using Rng = std::mt19937_64;

/// Entries i.i.d. circular complex Gaussian with unit variance.
inline ComplexMatrix complex_gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  ComplexMatrix a(rows, cols);
  // Fill in a fixed (column-major) order so draws are layout independent.
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      a(i, j) = Complex(re, im);
    }
  }
  return a;
}

inline double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

/// Gaussian direction scaled to norm `radius` under `norm`.
template <typename NormFn>
ComplexMatrix scaled_direction(Eigen::Index rows, Eigen::Index cols, double radius, Rng& rng,
                               NormFn norm) {
  if (radius == 0.0 || rows == 0 || cols == 0) return ComplexMatrix::Zero(rows, cols);
  ComplexMatrix g = complex_gaussian(rows, cols, rng);
  double nrm = norm(g);
  while (!(nrm > 0.0)) {
    g = complex_gaussian(rows, cols, rng);
    nrm = norm(g);
  }
  return g * (radius / nrm);
}

/// Draws a feasible perturbation from `rng`: Gaussian direction, radius
/// r * delta with r ~ U[0, 1] drawn independently for each component.
inline PerturbationSample sample_perturbation(const ProblemSpec& spec, SampleMode mode, Rng& rng) {
  PerturbationSample s;
  s.mode = mode;
  const Eigen::Index m = spec.rows();
  const Eigen::Index n = spec.cols();
  auto euclid = [](const ComplexMatrix& a) { return a.norm(); };
  if (mode == SampleMode::Unstructured) {
    if (!(spec.delta_H >= 0.0) || !(spec.delta_Y >= 0.0)) {
      throw ArgumentError("sample_perturbation: bounds must be nonnegative");
    }
    const double rh = uniform01(rng) * spec.delta_H;
    s.dH = scaled_direction(m, n, rh, rng,
                            [](const ComplexMatrix& a) { return linalg::spectral_norm(a); });
    const double ry = uniform01(rng) * spec.delta_Y;
    s.dy = scaled_direction(m, 1, ry, rng, euclid);
    s.norm_first = rh;
    s.norm_second = ry;
    return s;
  }
  if (!spec.structure) throw ArgumentError("sample_perturbation: structured mode without structure");
  const Structure& st = *spec.structure;
  if (!(st.delta_alpha >= 0.0) || !(st.delta_beta >= 0.0)) {
    throw ArgumentError("sample_perturbation: bounds must be nonnegative");
  }
  const double ra = uniform01(rng) * st.delta_alpha;
  s.alpha = scaled_direction(static_cast<Eigen::Index>(st.H_basis.size()), 1, ra, rng, euclid);
  const double rb = uniform01(rng) * st.delta_beta;
  s.beta = scaled_direction(static_cast<Eigen::Index>(st.y_basis.size()), 1, rb, rng, euclid);
  s.norm_first = ra;
  s.norm_second = rb;
  return s;
}

inline PerturbationSample sample_perturbation(const ProblemSpec& spec, SampleMode mode,
                                              std::uint64_t seed) {
  Rng rng(seed);
  return sample_perturbation(spec, mode, rng);
}

/// Perturbed data (H + dH, y + dy) for either mode.
struct PerturbedData {
  ComplexMatrix H;
  ComplexVector y;
};

inline PerturbedData apply(const ProblemSpec& spec, const PerturbationSample& s) {
  PerturbedData out{spec.H, spec.y};
  if (s.mode == SampleMode::Unstructured) {
    if (s.dH.size()) out.H += s.dH;
    if (s.dy.size()) out.y += s.dy;
    return out;
  }
  if (!spec.structure) throw ArgumentError("apply: structured sample without structure");
  const Structure& st = *spec.structure;
  if (s.alpha.size() != static_cast<Eigen::Index>(st.H_basis.size()) ||
      s.beta.size() != static_cast<Eigen::Index>(st.y_basis.size())) {
    throw ArgumentError("apply: structured sample does not match the basis");
  }
  for (std::size_t i = 0; i < st.H_basis.size(); ++i) {
    out.H += s.alpha(static_cast<Eigen::Index>(i)) * st.H_basis[i];
  }
  for (std::size_t j = 0; j < st.y_basis.size(); ++j) {
    out.y += s.beta(static_cast<Eigen::Index>(j)) * st.y_basis[j];
  }
  return out;
}

/// ||ytilde - Htilde x||^2 (+ mu ||x||^2) minus the linearized optimal cost
/// kappa + 2 Re(d^H dh) + 2 Re(b^H dy).
inline double approx_regret(const ProblemSpec& spec, const ComplexVector& x,
                            const PerturbationSample& s, const TaylorCoefficients& c) {
  const bool structured = c.kind == ExpansionKind::Structured;
  if (structured != (s.mode == SampleMode::Structured)) {
    throw ArgumentError("approx_regret: coefficient kind does not match the sample mode");
  }
  const PerturbedData p = apply(spec, s);
  double value = (p.y - p.H * x).squaredNorm();
  if (c.kind == ExpansionKind::Regularized) value += c.mu * x.squaredNorm();
  double linear = c.kappa;
  if (structured) {
    linear += 2.0 * c.d.dot(s.alpha).real() + 2.0 * c.b.dot(s.beta).real();
  } else {
    if (s.dH.size()) linear += 2.0 * c.d.dot(linalg::col_stack(s.dH)).real();
    if (s.dy.size()) linear += 2.0 * c.b.dot(s.dy).real();
  }
  return value - linear;
}

/// min_w ||y - H w||^2 (+ mu ||w||^2), computed from scratch.
inline double optimal_cost(const ComplexMatrix& h, const ComplexVector& y, double mu) {
  if (mu > 0.0) {
    const ComplexMatrix p =
        ComplexMatrix::Identity(h.rows(), h.rows()) + (h * h.adjoint()) / mu;
    return std::max(0.0, y.dot(p.llt().solve(y)).real());
  }
  const Eigen::Index rank = linalg::numerical_rank(h);
  if (rank < h.cols()) {
    throw RankDeficientError("optimal_cost: perturbed data matrix is rank deficient (rank " +
                             std::to_string(rank) + " < " + std::to_string(h.cols()) + ")");
  }
  const ComplexVector w = linalg::pseudo_inverse(h) * y;
  return (y - h * w).squaredNorm();
}

/// Regret before linearization: residual cost at x minus the best achievable
/// cost on the perturbed data. mu > 0 selects the regularized cost.
inline double exact_regret(const ProblemSpec& spec, const ComplexVector& x,
                           const PerturbationSample& s, double mu = 0.0) {
  const PerturbedData p = apply(spec, s);
  double value = (p.y - p.H * x).squaredNorm();
  if (mu > 0.0) value += mu * x.squaredNorm();
  return value - optimal_cost(p.H, p.y, mu);
}

/// Which optimal-cost function finite_difference_gradients differentiates.
struct GradientVariant {
  ExpansionKind kind = ExpansionKind::Unstructured;
  double mu = 0.0;
  std::vector<ComplexMatrix> H_basis;  // structured only
  std::vector<ComplexVector> y_basis;
};

struct FiniteDifferenceGradients {
  ComplexVector d;  // col(D) (length mn) or length p_alpha when structured
  ComplexVector b;  // length m or p_beta
};

/// Central differences on the real and imaginary part of every coordinate,
/// combined as g = (df/dRe + i df/dIm) / 2 so that f(z + e) ~ f(z) + 2 Re(g^H e).
inline FiniteDifferenceGradients finite_difference_gradients(const ComplexMatrix& h,
                                                             const ComplexVector& y,
                                                             const GradientVariant& v,
                                                             double step) {
  if (!(step >= 1e-7 && step <= 1e-3)) {
    throw ArgumentError("finite_difference_gradients: step must lie in [1e-7, 1e-3]");
  }
  if (y.size() != h.rows()) throw ArgumentError("finite_difference_gradients: size mismatch");
  const double mu = v.kind == ExpansionKind::Regularized ? v.mu : 0.0;
  auto cost = [&](const ComplexMatrix& hh, const ComplexVector& yy) {
    return optimal_cost(hh, yy, mu);
  };
  auto wirtinger = [&](auto&& eval_at) {
    const double fr = eval_at(Complex(step, 0.0));
    const double br = eval_at(Complex(-step, 0.0));
    const double fi = eval_at(Complex(0.0, step));
    const double bi = eval_at(Complex(0.0, -step));
    return 0.5 * Complex((fr - br) / (2.0 * step), (fi - bi) / (2.0 * step));
  };

  FiniteDifferenceGradients g;
  if (v.kind == ExpansionKind::Structured) {
    if (v.H_basis.empty() || v.y_basis.empty()) {
      throw ArgumentError("finite_difference_gradients: empty structure basis");
    }
    g.d.resize(static_cast<Eigen::Index>(v.H_basis.size()));
    for (std::size_t i = 0; i < v.H_basis.size(); ++i) {
      g.d(static_cast<Eigen::Index>(i)) =
          wirtinger([&](Complex e) { return cost(h + e * v.H_basis[i], y); });
    }
    g.b.resize(static_cast<Eigen::Index>(v.y_basis.size()));
    for (std::size_t j = 0; j < v.y_basis.size(); ++j) {
      g.b(static_cast<Eigen::Index>(j)) =
          wirtinger([&](Complex e) { return cost(h, y + e * v.y_basis[j]); });
    }
    return g;
  }
  const Eigen::Index m = h.rows();
  const Eigen::Index n = h.cols();
  ComplexMatrix dmat(m, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < m; ++i) {
      dmat(i, j) = wirtinger([&](Complex e) {
        ComplexMatrix hp = h;
        hp(i, j) += e;
        return cost(hp, y);
      });
    }
  }
  g.d = linalg::col_stack(dmat);
  g.b.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    g.b(i) = wirtinger([&](Complex e) {
      ComplexVector yp = y;
      yp(i) += e;
      return cost(h, yp);
    });
  }
  return g;
}

namespace detail {

// Channel vectors a_k packed into a sample of the matching mode.
inline PerturbationSample pack(const RegretLmi& lmi, const std::vector<ComplexVector>& a) {
  PerturbationSample s;
  const ProblemSpec& spec = lmi.spec();
  const bool structured = is_structured(lmi.formulation());
  s.mode = structured ? SampleMode::Structured : SampleMode::Unstructured;
  if (structured) {
    s.alpha = ComplexVector::Zero(lmi.channel_size(Channel::Alpha));
    s.beta = ComplexVector::Zero(lmi.channel_size(Channel::Beta));
  } else {
    s.dH = ComplexMatrix::Zero(spec.rows(), spec.cols());
    s.dy = ComplexVector::Zero(spec.rows());
  }
  for (std::size_t k = 0; k < lmi.num_channels(); ++k) {
    switch (lmi.channels()[k]) {
      case Channel::OutputVector: s.dy = a[k]; break;
      case Channel::DataMatrix: s.dH = linalg::col_unstack(a[k], spec.rows(), spec.cols()); break;
      case Channel::Alpha: s.alpha = a[k]; break;
      case Channel::Beta: s.beta = a[k]; break;
    }
  }
  if (structured) {
    s.norm_first = s.alpha.norm();
    s.norm_second = s.beta.norm();
  } else {
    s.norm_first = linalg::spectral_norm(s.dH);
    s.norm_second = s.dy.norm();
  }
  return s;
}

// Approximated regret as a function of the channel vectors.
inline double channel_regret(const RegretLmi& lmi, const ComplexVector& x,
                             const std::vector<ComplexVector>& a) {
  const ProblemSpec& spec = lmi.spec();
  ComplexVector res = spec.y - spec.H * x;
  double value = -lmi.coefficients().kappa;
  for (std::size_t k = 0; k < lmi.num_channels(); ++k) {
    const Channel c = lmi.channels()[k];
    res += lmi.channel_sensitivity(c, x) * a[k];
    value -= 2.0 * lmi.channel_gradient(c).dot(a[k]).real();
  }
  value += res.squaredNorm();
  if (lmi.regularized()) value += spec.mu * x.squaredNorm();
  return value;
}


// Derivative-free maximization of f from x0 (Nelder-Mead simplex).
template <typename F>
RealVector nelder_mead(F&& f, const RealVector& x0, double step, int max_evals) {
  const Eigen::Index n = x0.size();
  std::vector<RealVector> pts;
  std::vector<double> vals;
  pts.push_back(x0);
  for (Eigen::Index i = 0; i < n; ++i) {
    RealVector p = x0;
    p(i) += step;
    pts.push_back(p);
  }
  for (const RealVector& p : pts) vals.push_back(f(p));
  int evals = static_cast<int>(pts.size());
  std::vector<std::size_t> order(pts.size());
  while (evals < max_evals) {
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return vals[a] > vals[b];
    });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[order.size() - 2];
    if (std::abs(vals[best] - vals[worst]) <= 1e-15 * (1.0 + std::abs(vals[best])) &&
        std::isfinite(vals[worst])) {
      break;
    }
    RealVector centroid = RealVector::Zero(n);
    for (std::size_t i = 0; i + 1 < order.size(); ++i) centroid += pts[order[i]];
    centroid /= static_cast<double>(n);
    const RealVector refl = centroid + (centroid - pts[worst]);
    const double fr = f(refl);
    ++evals;
    if (fr > vals[best]) {
      const RealVector exp = centroid + 2.0 * (centroid - pts[worst]);
      const double fe = f(exp);
      ++evals;
      if (fe > fr) {
        pts[worst] = exp;
        vals[worst] = fe;
      } else {
        pts[worst] = refl;
        vals[worst] = fr;
      }
    } else if (fr > vals[second]) {
      pts[worst] = refl;
      vals[worst] = fr;
    } else {
      const RealVector con = centroid + 0.5 * (pts[worst] - centroid);
      const double fc = f(con);
      ++evals;
      if (fc > vals[worst]) {
        pts[worst] = con;
        vals[worst] = fc;
      } else {
        for (std::size_t i = 0; i < pts.size(); ++i) {
          if (i == best) continue;
          pts[i] = pts[best] + 0.5 * (pts[i] - pts[best]);
          vals[i] = f(pts[i]);
          ++evals;
        }
      }
    }
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < vals.size(); ++i) {
    if (vals[i] > vals[best]) best = i;
  }
  return pts[best];
}

}  // namespace detail

struct WorstCase {
  PerturbationSample perturbation;
  double regret = 0.0;  // approximated regret attained at x
};

/// Worst-case perturbation of the approximated regret at x, read off the LMI.
///
/// With u = [1; s; t] spanning the null direction of the Schur complement of
/// the multiplier blocks, the rank-one maximizer of each channel is
/// a_k = -delta_k (l_k + A_k^H s) / ||l_k + A_k^H s||.
/// If u is degenerate the maximum is instead searched over sampled spheres.
inline WorstCase worst_case_perturbation(const RegretLmi& lmi, const LmiPoint& point,
                                         std::uint64_t fallback_seed = 0x5eed,
                                         int fallback_samples = 20000) {
  const ProblemSpec& spec = lmi.spec();
  const ComplexVector& x = point.x;
  const Eigen::Index m = spec.rows();
  const std::size_t nc = lmi.num_channels();
  std::vector<ComplexVector> a(nc);
  for (std::size_t k = 0; k < nc; ++k) {
    a[k] = ComplexVector::Zero(lmi.channel_size(lmi.channels()[k]));
  }

  // Schur complement of the multiplier blocks of channels with delta > 0.
  const ComplexMatrix f = lmi.matrix(point);
  const Eigen::Index top = lmi.channel_offset(0);
  ComplexMatrix schur = f.topLeftCorner(top, top);
  bool degenerate = false;
  bool any_active = false;
  // A channel with (numerically) zero gradient and sensitivity at x cannot
  // move the regret; its multiplier may vanish and any boundary point is optimal.
  const double inert_tol = 1e-5 * (1.0 + f.norm());
  std::vector<bool> inert(nc, false);
  for (std::size_t k = 0; k < nc; ++k) {
    const Channel c = lmi.channels()[k];
    if (lmi.channel_bound(c) == 0.0) continue;
    any_active = true;
    inert[k] = lmi.channel_gradient(c).norm() + lmi.channel_sensitivity(c, x).norm() < inert_tol;
    if (inert[k]) continue;
    if (!(point.tau[k] > 1e-14)) {
      degenerate = true;
      continue;
    }
    const Eigen::Index o = lmi.channel_offset(k);
    const Eigen::Index q = lmi.channel_size(c);
    const ComplexMatrix border = f.block(0, o, top, q);
    schur -= border * border.adjoint() / point.tau[k];
  }
  if (!any_active) {
    WorstCase out;
    out.perturbation = detail::pack(lmi, a);
    out.regret = detail::channel_regret(lmi, x, a);
    return out;
  }

  // Channel vectors induced by u; false if some l_k + A_k^H s vanishes.
  auto from_u = [&](const ComplexVector& u, std::vector<ComplexVector>& out_a) {
    const ComplexVector s = u.segment(1, m);
    for (std::size_t k = 0; k < nc; ++k) {
      const Channel c = lmi.channels()[k];
      const double delta = lmi.channel_bound(c);
      if (delta == 0.0) continue;
      const ComplexVector g =
          lmi.channel_gradient(c) + lmi.channel_sensitivity(c, x).adjoint() * s;
      const double gn = g.norm();
      if (inert[k] && gn < 1e-12) {
        out_a[k] = ComplexVector::Unit(g.size(), 0) * delta;
        continue;
      }
      if (gn < 1e-12) return false;
      out_a[k] = -delta * g / gn;
    }
    return true;
  };

  if (!degenerate) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (schur + schur.adjoint()));
    const RealVector& ev = es.eigenvalues();
    const double thresh = ev(0) + 1e-7 * (1.0 + std::abs(ev(ev.size() - 1)));
    Eigen::Index dim = 1;
    while (dim < ev.size() && ev(dim) <= thresh) ++dim;
    const ComplexMatrix null = es.eigenvectors().leftCols(dim);
    Eigen::Index pivot = 0;
    for (Eigen::Index i = 1; i < dim; ++i) {
      if (std::abs(null(0, i)) > std::abs(null(0, pivot))) pivot = i;
    }
    if (std::abs(null(0, pivot)) < 1e-12) {
      degenerate = true;
    } else {
      // Null vectors with u_0 = 1 form base + span(dirs).
      const ComplexVector base = null.col(pivot) / null(0, pivot);
      std::vector<ComplexVector> dirs;
      for (Eigen::Index i = 0; i < dim; ++i) {
        if (i != pivot) dirs.push_back(null.col(i) - null(0, i) * base);
      }
      auto value_at = [&](const RealVector& t, std::vector<ComplexVector>& out_a) {
        ComplexVector u = base;
        for (std::size_t j = 0; j < dirs.size(); ++j) {
          const auto jj = static_cast<Eigen::Index>(j);
          u += Complex(t(2 * jj), t(2 * jj + 1)) * dirs[j];
        }
        if (!from_u(u, out_a)) return -std::numeric_limits<double>::infinity();
        return detail::channel_regret(lmi, x, out_a);
      };
      RealVector t = RealVector::Zero(2 * static_cast<Eigen::Index>(dirs.size()));
      double best_value = value_at(t, a);
      if (!dirs.empty() && !(best_value >= point.gamma - 1e-12)) {
        std::vector<ComplexVector> scratch = a;
        const RealVector t_best = detail::nelder_mead(
            [&](const RealVector& v) { return value_at(v, scratch); }, t, 1.0, 4000);
        const double v = value_at(t_best, scratch);
        if (v > best_value) {
          best_value = v;
          a = scratch;
        }
      }
      if (!std::isfinite(best_value)) degenerate = true;
      if (!degenerate) {
        WorstCase out;
        out.perturbation = detail::pack(lmi, a);
        out.regret = best_value;
        return out;
      }
    }
  }

  // Fallback: best of random points on the product of spheres.
  Rng rng(fallback_seed);
  std::vector<ComplexVector> best = a;
  double best_value = -std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < fallback_samples; ++trial) {
    std::vector<ComplexVector> cand(nc);
    for (std::size_t k = 0; k < nc; ++k) {
      const Channel c = lmi.channels()[k];
      cand[k] = scaled_direction(lmi.channel_size(c), 1, lmi.channel_bound(c), rng,
                                 [](const ComplexMatrix& v) { return v.norm(); });
    }
    const double v = detail::channel_regret(lmi, x, cand);
    if (v > best_value) {
      best_value = v;
      best = std::move(cand);
    }
  }
  WorstCase out;
  out.perturbation = detail::pack(lmi, best);
  out.perturbation.fallback_used = true;
  out.regret = best_value;
  return out;
}

}  // namespace regret_ls::oracle

#endif  // REGRET_LS_PERTURBATION_HPP
