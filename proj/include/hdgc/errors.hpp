#pragma once

#include <stdexcept>
#include <string>

namespace hdgc {

// Base class for all library errors. Subclasses distinguish usage errors
// (bad parameters), violated data contracts, and I/O failures so callers
// can map them to exit codes.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Input data carries non-finite values, mismatched labels, or is empty.
class InvalidInputError : public Error {
public:
  using Error::Error;
};

// A configuration value is out of its documented range.
class InvalidParameterError : public Error {
public:
  using Error::Error;
};

// A structural precondition failed, e.g. a matrix tagged Hermitian is not.
class ContractViolationError : public Error {
public:
  using Error::Error;
};

// Regression design matrix is rank deficient.
class SingularDesignError : public Error {
public:
  using Error::Error;
};

// Operands have incompatible shapes.
class DimensionMismatchError : public Error {
public:
  using Error::Error;
};

// Input is degenerate for the requested operation (e.g. zero total variance).
class DegenerateInputError : public Error {
public:
  using Error::Error;
};

// A model fit is too perfect to test against (zero residual variance).
class DegenerateFitError : public Error {
public:
  using Error::Error;
};

// Malformed file contents; message carries row/column context.
class FormatError : public Error {
public:
  using Error::Error;
};

// Filesystem-level failure.
class IoError : public Error {
public:
  using Error::Error;
};

// Wraps an error raised inside a named pipeline stage.
class StageError : public Error {
public:
  StageError(const std::string& stage, const Error& cause, bool is_io)
      : Error("stage '" + stage + "': " + cause.what()), stage_(stage), is_io_(is_io) {}
  const std::string& stage() const { return stage_; }
  bool is_io() const { return is_io_; }

private:
  std::string stage_;
  bool is_io_;
};

}  // namespace hdgc
