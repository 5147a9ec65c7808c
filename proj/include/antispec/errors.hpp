#pragma once

#include <stdexcept>
#include <string>

namespace antispec {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidInput : Error {
  using Error::Error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};

/// Eigensolver failed to converge. `index` is the offending eigenvalue index
/// when the backend exposes it, -1 otherwise.
struct NoConvergence : Error {
  int index;
  explicit NoConvergence(const std::string& msg, int idx = -1) : Error(msg), index(idx) {}
};

/// Bi-orthogonal conditioning exceeded the bound: the matrix is numerically
/// defective (exceptional-point proximity).
struct NotDiagonalizable : Error {
  double cond;
  explicit NotDiagonalizable(const std::string& msg, double c = 0.0) : Error(msg), cond(c) {}
};

struct NotUnitary : Error {
  using Error::Error;
};

struct NotProportional : Error {
  using Error::Error;
};

struct NotUnimodular : Error {
  using Error::Error;
};

struct SymmetryViolated : Error {
  double residual;
  explicit SymmetryViolated(const std::string& msg, double r = 0.0) : Error(msg), residual(r) {}
};

struct NoRootInRegion : Error {
  using Error::Error;
};

struct OutOfRegime : Error {
  using Error::Error;
};

struct UnknownM : Error {
  using Error::Error;
};

struct InvalidPlan : Error {
  using Error::Error;
};

struct BracketInvalid : Error {
  using Error::Error;
};

}  // namespace antispec
