#pragma once

#include <stdexcept>
#include <string>

namespace nss {

/// Base class for every error raised by the library. The CLI maps the
/// concrete subclasses onto process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: dimension mismatch, bad lattice size, unparsable text.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A size cap (dense bridge, commutant, sparse solver) would be exceeded.
class ResourceLimit : public Error {
 public:
  using Error::Error;
};

/// An iterative procedure stopped before reaching its tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what + " (last residual " + std::to_string(residual) + ")"), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Randomized decomposition drew an element whose spectrum is too clustered
/// to separate sectors; rerun with a different seed.
class DegenerateSpectrum : public Error {
 public:
  using Error::Error;
};

class NotAnEigenstate : public Error {
 public:
  using Error::Error;
};

class InvalidMove : public Error {
 public:
  using Error::Error;
};

class InvalidFusion : public Error {
 public:
  using Error::Error;
};

class PathNotFound : public Error {
 public:
  using Error::Error;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

}  // namespace nss
