#ifndef REGRET_LS_PROBLEM_HPP
#define REGRET_LS_PROBLEM_HPP

#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "regret_ls/errors.hpp"
#include "regret_ls/linalg.hpp"

namespace regret_ls {

/// Structured perturbations dH = sum_i alpha_i H_i, dy = sum_j beta_j y_j with
/// ||alpha|| <= delta_alpha and ||beta|| <= delta_beta.
struct Structure {
  std::vector<ComplexMatrix> H_basis;
  std::vector<ComplexVector> y_basis;
  double delta_alpha = 0.0;
  double delta_beta = 0.0;
};

/// Which minimax problem an LMI encodes.
enum class Formulation {
  Regret,                    // uncertainty on H and y
  RegretMatrixOnly,          // uncertainty on H only
  RegretVectorOnly,          // uncertainty on y only
  RegularizedRegret,         // ridge cost, uncertainty on H and y
  StructuredRegret,          // structured perturbations
  RobustResidual,            // worst-case residual over unstructured balls
  StructuredRobustResidual,  // worst-case residual over structured balls
};

inline constexpr std::string_view to_string(Formulation f) {
  switch (f) {
    case Formulation::Regret: return "regret";
    case Formulation::RegretMatrixOnly: return "regret-matrix";
    case Formulation::RegretVectorOnly: return "regret-vector";
    case Formulation::RegularizedRegret: return "regularized-regret";
    case Formulation::StructuredRegret: return "structured-regret";
    case Formulation::RobustResidual: return "robust-residual";
    case Formulation::StructuredRobustResidual: return "structured-robust-residual";
  }
  return "unknown";
}

inline Formulation formulation_from_string(std::string_view name) {
  for (Formulation f : {Formulation::Regret, Formulation::RegretMatrixOnly, Formulation::RegretVectorOnly,
                        Formulation::RegularizedRegret, Formulation::StructuredRegret,
                        Formulation::RobustResidual, Formulation::StructuredRobustResidual}) {
    if (to_string(f) == name) return f;
  }
  throw ArgumentError("unknown formulation '" + std::string(name) + "'");
}

inline bool is_structured(Formulation f) {
  return f == Formulation::StructuredRegret || f == Formulation::StructuredRobustResidual;
}

/// The expansions ask for a full column rank data matrix; we require
/// sigma_n > rel_tol * sigma_1.
inline constexpr double kFullRankRelativeTolerance = 1e-8;

inline void check_full_column_rank(const ComplexMatrix& h, const std::string& what) {
  if (h.rows() < h.cols()) {
    std::ostringstream msg;
    msg << what << ": expected m >= n, got " << h.rows() << "x" << h.cols();
    throw PreconditionError(msg.str());
  }
  const RealVector s = linalg::singular_values(h);
  const double tol = kFullRankRelativeTolerance * (s.size() ? s(0) : 0.0);
  if (s.size() == 0 || !(s(s.size() - 1) > tol)) {
    std::ostringstream msg;
    msg << what << " is not numerically full column rank: sigma_n = "
        << (s.size() ? s(s.size() - 1) : 0.0) << ", tolerance = " << tol;
    throw RankDeficientError(msg.str());
  }
}

struct ProblemSpec {
  ComplexMatrix H;
  ComplexVector y;
  double delta_H = 0.0;
  double delta_Y = 0.0;
  double mu = 0.0;  // 0 means unregularized
  std::optional<Structure> structure;

  Eigen::Index rows() const { return H.rows(); }
  Eigen::Index cols() const { return H.cols(); }

  /// Shape, finiteness and sign checks; no rank test.
  void validate_shape() const {
    if (H.rows() == 0 || H.cols() == 0) throw ArgumentError("ProblemSpec: empty H");
    if (y.size() != H.rows()) throw ArgumentError("ProblemSpec: y length differs from rows of H");
    linalg::require_finite(H, "ProblemSpec.H");
    linalg::require_finite(y, "ProblemSpec.y");
    if (!(delta_H >= 0.0) || !(delta_Y >= 0.0)) {
      throw ArgumentError("ProblemSpec: uncertainty bounds must be nonnegative");
    }
    if (!(mu >= 0.0) || !std::isfinite(mu)) {
      throw ArgumentError("ProblemSpec: mu must be a finite nonnegative number");
    }
    if (structure) {
      const Structure& s = *structure;
      if (s.H_basis.empty() || s.y_basis.empty()) {
        throw ArgumentError("ProblemSpec: structure bases must be nonempty");
      }
      if (!(s.delta_alpha >= 0.0) || !(s.delta_beta >= 0.0)) {
        throw ArgumentError("ProblemSpec: structured bounds must be nonnegative");
      }
      for (const ComplexMatrix& hi : s.H_basis) {
        if (hi.rows() != H.rows() || hi.cols() != H.cols()) {
          throw ArgumentError("ProblemSpec: H_basis element has wrong shape");
        }
        linalg::require_finite(hi, "ProblemSpec.structure.H_basis");
      }
      for (const ComplexVector& yi : s.y_basis) {
        if (yi.size() != H.rows()) {
          throw ArgumentError("ProblemSpec: y_basis element has wrong length");
        }
        linalg::require_finite(yi, "ProblemSpec.structure.y_basis");
      }
    }
  }

  /// Everything the regret formulations assume: shape checks plus m >= n and
  /// numerically full column rank H.
  void validate() const {
    validate_shape();
    check_full_column_rank(H, "H");
  }
};

}  // namespace regret_ls

#endif  // REGRET_LS_PROBLEM_HPP
