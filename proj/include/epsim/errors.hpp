#pragma once

#include <stdexcept>
#include <string>

namespace epsim {

/// Bad configuration: invalid input files, inconsistent model setup,
/// mismatched layouts. CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Numerical failure at run time: non-finite fields, failed factorization,
/// non-convergent steady state. CLI maps this to exit code 3.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parameter estimation failure. CLI maps this to exit code 4.
struct FitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace epsim
