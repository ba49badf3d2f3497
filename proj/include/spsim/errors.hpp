#pragma once

#include <stdexcept>
#include <string>

namespace spsim {

// Configuration / input validation problems. CLI maps these to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failures (quadrature non-convergence, stepper underflow,
// invariant violations). CLI maps these to exit code 3.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace spsim
