#pragma once

#include <stdexcept>
#include <string>

namespace ppt {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Matrix dimensions disagree with each other or with a BipartiteShape.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A caller-supplied argument is outside its documented domain.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// An operation's precondition on an otherwise well-formed input does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Iterative numerics failed or produced an unusable result.
class NumericError : public Error {
 public:
  NumericError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  explicit NumericError(const std::string& what) : NumericError(what, 0.0) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// A closed-form expression hit a vanishing denominator.
class SingularityError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// A value failed a type invariant at construction (e.g. a density matrix
/// whose trace is not 1). Carries the invariant name and the violation margin.
class InvariantError : public Error {
 public:
  InvariantError(std::string invariant, double margin, const std::string& what)
      : Error(what), invariant_(std::move(invariant)), margin_(margin) {}
  const std::string& invariant() const noexcept { return invariant_; }
  double margin() const noexcept { return margin_; }

 private:
  std::string invariant_;
  double margin_;
};

/// A proven or hard-asserted mathematical property failed on concrete data.
/// Seeing one of these means either a bug or a genuine counterexample.
class TheoremViolation : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

/// Checkpoints that cannot be merged (config hash mismatch).
class MergeError : public Error {
 public:
  using Error::Error;
};

/// Checkpoints that disagree on the same (cell, sample) row.
class CorruptionError : public Error {
 public:
  using Error::Error;
};

}  // namespace ppt
