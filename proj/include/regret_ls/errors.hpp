#ifndef REGRET_LS_ERRORS_HPP
#define REGRET_LS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace regret_ls {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed arguments: dimension mismatch, negative bounds, bad names.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition does not hold for otherwise well-formed input,
/// e.g. a data matrix that is not numerically full column rank.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// The perturbed data matrix lost column rank; Monte-Carlo callers resample.
class RankDeficientError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// Total least squares has no unique solution for this [H y].
class NongenericTlsError : public Error {
 public:
  using Error::Error;
};

/// An iterative kernel failed (SVD non-convergence, SDP breakdown, ...).
class SolverError : public Error {
 public:
  SolverError(const std::string& what, int iterations)
      : Error(what), iterations_(iterations) {}

  int iterations() const noexcept { return iterations_; }

 private:
  int iterations_;
};

}  // namespace regret_ls

#endif  // REGRET_LS_ERRORS_HPP
