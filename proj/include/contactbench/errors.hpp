#ifndef CONTACTBENCH_ERRORS_HPP
#define CONTACTBENCH_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace contactbench {

struct ContactBenchError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A contact's diagonal block cannot be used as a step or inverted.
struct SingularBlockError : ContactBenchError {
  SingularBlockError(int contact, const std::string& what)
      : ContactBenchError("contact " + std::to_string(contact) + ": " + what),
        contact_index(contact) {}
  int contact_index;
};

/// The sliding subproblem of the per-contact bisection has no solution.
struct SlidingSolveError : ContactBenchError {
  SlidingSolveError(int contact, const std::string& what)
      : ContactBenchError("contact " + std::to_string(contact) + ": " + what),
        contact_index(contact) {}
  int contact_index;
};

/// Factorization of G + R + rho I failed.
struct NumericalError : ContactBenchError {
  NumericalError(const std::string& what, double rho_value)
      : ContactBenchError(what), rho(rho_value) {}
  double rho;
};

/// No branch of the single-contact oracle satisfies the contact law.
struct OracleFailure : ContactBenchError {
  using ContactBenchError::ContactBenchError;
};

struct UnsupportedGeometry : ContactBenchError {
  using ContactBenchError::ContactBenchError;
};

/// Malformed problem or scene file. The message starts with the offending field.
struct InputError : ContactBenchError {
  using ContactBenchError::ContactBenchError;
};

}  // namespace contactbench

#endif
