#pragma once

#include <stdexcept>
#include <string>

namespace nambu_em {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Structural breach of a SpectralState or LatticeField invariant
/// (non-positive weight, mismatched partner, wrong sample count, ...).
class InvalidState : public Error {
 public:
  using Error::Error;
};

/// Gauss law cannot be imposed, e.g. nonzero charge on the zero mode.
class ConstraintError : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class UnknownFunctional : public Error {
 public:
  explicit UnknownFunctional(const std::string& name)
      : Error("unknown functional '" + name + "'"), name_(name) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

class NonHolomorphic : public Error {
 public:
  using Error::Error;
};

/// Non-finite values or a degenerate linear solve during time stepping.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class NoHermitianPairing : public Error {
 public:
  using Error::Error;
};

class NyquistNonzero : public Error {
 public:
  using Error::Error;
};

class NonFiniteSample : public Error {
 public:
  using Error::Error;
};

class NotHermitian : public Error {
 public:
  using Error::Error;
};

class NoGrid : public Error {
 public:
  using Error::Error;
};

/// Malformed snapshot / lattice / report documents.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace nambu_em
