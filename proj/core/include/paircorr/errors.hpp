#pragma once

#include <stdexcept>
#include <string>

namespace paircorr {

/// Precondition or input validation failure (maps to CLI exit code 2).
class validation_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Iterative solver failed to reach the requested tolerance (exit code 3).
class convergence_error : public std::runtime_error {
 public:
  convergence_error(const std::string& msg, double best_residual, int iterations)
      : std::runtime_error(msg), best_residual(best_residual), iterations(iterations) {}

  double best_residual;
  int iterations;
};

/// A mathematical invariant that must hold by construction was violated
/// (exit code 4). Signals a bug or a numerically unusable input.
class invariant_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace paircorr
