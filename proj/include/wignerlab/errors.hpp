#pragma once

#include <stdexcept>
#include <string>

namespace wignerlab {

// Errors fall into two families. PreconditionError covers bad arguments and
// malformed input (CLI exit code 1); NumericalError covers a computation that
// could not be completed (CLI exit code 2).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidDimension : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class InvalidRank : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class DimensionMismatch : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class NotHermitian : public PreconditionError {
 public:
  NotHermitian(const std::string& what, double deviation)
      : PreconditionError(what), deviation_(deviation) {}
  double deviation() const noexcept { return deviation_; }

 private:
  double deviation_;
};

class NotAProjector : public PreconditionError {
 public:
  NotAProjector(const std::string& what, double distance)
      : PreconditionError(what), distance_(distance) {}
  /// Largest distance of an eigenvalue from {0, 1}.
  double distance() const noexcept { return distance_; }

 private:
  double distance_;
};

class NotUnitary : public PreconditionError {
 public:
  NotUnitary(const std::string& what, double deviation)
      : PreconditionError(what), deviation_(deviation) {}
  /// Frobenius norm of U^dagger U - I.
  double deviation() const noexcept { return deviation_; }

 private:
  double deviation_;
};

class NotAntisymmetric : public PreconditionError {
 public:
  NotAntisymmetric(const std::string& what, double deviation)
      : PreconditionError(what), deviation_(deviation) {}
  double deviation() const noexcept { return deviation_; }

 private:
  double deviation_;
};

class NotInvertible : public PreconditionError {
 public:
  NotInvertible(const std::string& what, double smallest_singular_value)
      : PreconditionError(what), smallest_(smallest_singular_value) {}
  double smallest_singular_value() const noexcept { return smallest_; }

 private:
  double smallest_;
};

class NotABlockPreserver : public PreconditionError {
 public:
  NotABlockPreserver(const std::string& what, double max_violation)
      : PreconditionError(what), max_violation_(max_violation) {}
  double max_violation() const noexcept { return max_violation_; }

 private:
  double max_violation_;
};

class RejectedCandidate : public PreconditionError {
 public:
  RejectedCandidate(const std::string& what, double residual)
      : PreconditionError(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class ParseError : public PreconditionError {
 public:
  ParseError(const std::string& field, const std::string& what)
      : PreconditionError("field '" + field + "': " + what), field_(field) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace wignerlab
