/**
 * @file errors.hpp
 * @brief Error types thrown by the analysis engine and campaign tooling.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace tap {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Input violates a documented precondition (shape, finiteness, ranges).
class InvalidInputError : public Error {
 public:
  explicit InvalidInputError(const std::string& what) : Error(what) {}
};

/// An operation was invoked outside the configuration it is defined for.
class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& what) : Error(what) {}
};

/// Lookup of an unknown identifier in a built-in catalog.
class CatalogMissError : public Error {
 public:
  explicit CatalogMissError(const std::string& kind, const std::string& name)
      : Error(kind + ": unknown identifier \"" + name + "\""), name_(name) {}

  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

/// Fewer observations than parameters; the system has no unique minimizer.
class UnderDeterminedError : public Error {
 public:
  UnderDeterminedError(long rows, long cols)
      : Error("under-determined system: " + std::to_string(rows) + " observations for " +
              std::to_string(cols) + " parameters"),
        rows_(rows),
        cols_(cols) {}

  long rows() const noexcept { return rows_; }
  long cols() const noexcept { return cols_; }

 private:
  long rows_;
  long cols_;
};

/// Design matrix is rank deficient or conditioned below the configured floor.
class IllConditionedError : public Error {
 public:
  explicit IllConditionedError(double rcond)
      : Error("ill-conditioned design matrix: reciprocal condition number " +
              std::to_string(rcond)),
        rcond_(rcond) {}

  double rcond() const noexcept { return rcond_; }

 private:
  double rcond_;
};

/// Malformed text input; `line` is 1-based.
class ParseError : public Error {
 public:
  ParseError(long line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  long line() const noexcept { return line_; }

 private:
  long line_;
};

/// External engine produced a response the line protocol cannot interpret.
class ProtocolError : public Error {
 public:
  explicit ProtocolError(const std::string& what) : Error(what) {}
};

/// External engine did not answer within the configured deadline.
class EngineTimeoutError : public Error {
 public:
  explicit EngineTimeoutError(const std::string& what) : Error(what) {}
};

/// External engine crashed, exited nonzero, or reported its own failure.
class EngineFailureError : public Error {
 public:
  explicit EngineFailureError(const std::string& what) : Error(what) {}
};

}  // namespace tap
