#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nsolit {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed DSL text. `offset` is the byte offset into the parsed text.
struct ParseError : Error {
  enum class Kind { Syntax, UnknownVariable, Arity };
  ParseError(Kind k, std::size_t off, const std::string& msg)
      : Error(msg + " at offset " + std::to_string(off)), kind(k), offset(off) {}
  Kind kind;
  std::size_t offset;
};

struct DomainError : Error {
  using Error::Error;
};

struct UnboundVariable : Error {
  using Error::Error;
};

/// Symbolic determinant simplifies to zero, or a block is singular at a sample point.
struct SingularMatrix : Error {
  using Error::Error;
};

struct DegenerateHessian : Error {
  using Error::Error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};

/// Nonlocal D^-1 applied to a field whose mean is not zero.
struct NonzeroMean : Error {
  using Error::Error;
};

struct InvalidArgument : Error {
  using Error::Error;
};

/// Blow-up or square-root singularity during time stepping; `tau` is the first offending time.
struct IntegrationFailure : Error {
  enum class Kind { BlowUp, Singularity, Convergence };
  IntegrationFailure(Kind k, double t, const std::string& msg)
      : Error(msg + " at tau=" + std::to_string(t)), kind(k), tau(t) {}
  Kind kind;
  double tau;
};

}  // namespace nsolit
