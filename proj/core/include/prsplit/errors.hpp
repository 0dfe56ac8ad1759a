#pragma once

#include <stdexcept>
#include <string>

namespace prsplit {

/// Base class for runtime failures raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad caller input: negative modulus, dimension mismatch, out-of-range
/// parameters.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Non-finite values or linear-solver breakdown, tagged with the iteration
/// at which the failure was detected (0 for pre-iteration evaluations).
class NumericalFailure : public Error {
 public:
  NumericalFailure(const std::string& what, long iteration)
      : Error(what + " (iteration " + std::to_string(iteration) + ")"),
        iteration_(iteration) {}

  long iteration() const { return iteration_; }

 private:
  long iteration_ = 0;
};

/// Eigenvalue computation did not converge.
class SpectralFailure : public Error {
 public:
  using Error::Error;
};

/// A diagnostic was requested that needs the fixed point, but no fixed point
/// is known for the run.
class UnsupportedDiagnostic : public Error {
 public:
  using Error::Error;
};

/// Instance generation kept producing non-acceptable instances until the
/// retry budget ran out.
class NonAcceptableInstances : public Error {
 public:
  using Error::Error;
};

}  // namespace prsplit
