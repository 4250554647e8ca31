#pragma once

#include <stdexcept>
#include <string>

namespace sphp {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed configuration text.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// Well-formed configuration that violates a parameter invariant.
class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& what, int line = 0)
      : Error((line > 0 ? "line " + std::to_string(line) + ": " : std::string()) + field + ": " + what),
        field_(std::move(field)),
        line_(line) {}
  const std::string& field() const noexcept { return field_; }
  int line() const noexcept { return line_; }

 private:
  std::string field_;
  int line_;
};

/// Input outside the domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Lossless permeability evaluated at (or numerically on top of) a pole.
class PoleError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Denominator mu1^2 - mu_perp mu_par vanishes: the surface-resonance asymptote.
class BranchDegenerate : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Requested value lies outside the attainable range.
class OutOfRange : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Numerical failures of the dynamics solvers.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Density matrix leaks into the highest retained Fock shell.
class TruncationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Spin-wave storage channels are not orthogonal enough to be treated independently.
class OverlapError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace sphp
