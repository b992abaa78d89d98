#pragma once

#include <stdexcept>
#include <string>

namespace dgf {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical guard (step size, CFL, positivity, truncation) was tripped.
class NumericalGuardError : public Error {
 public:
  using Error::Error;
};

class StepTooLarge : public NumericalGuardError {
 public:
  using NumericalGuardError::NumericalGuardError;
};

class CflViolation : public NumericalGuardError {
 public:
  using NumericalGuardError::NumericalGuardError;
};

class NegativityOverflow : public NumericalGuardError {
 public:
  using NumericalGuardError::NumericalGuardError;
};

class TruncationTolExceeded : public NumericalGuardError {
 public:
  using NumericalGuardError::NumericalGuardError;
};

class ResourceClampExceeded : public NumericalGuardError {
 public:
  using NumericalGuardError::NumericalGuardError;
};

class InsufficientPaths : public NumericalGuardError {
 public:
  using NumericalGuardError::NumericalGuardError;
};

class AlphaOutOfRange : public Error {
 public:
  using Error::Error;
};

class ParamOutOfRange : public Error {
 public:
  using Error::Error;
};

class FamilyNotDifferentiable : public Error {
 public:
  using Error::Error;
};

class HTooSmallForGrid : public Error {
 public:
  using Error::Error;
};

/// Configuration input did not match the schema. `field` names the offending key path.
class SchemaError : public Error {
 public:
  SchemaError(std::string field, const std::string& what)
      : Error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace dgf
