#pragma once

#include <stdexcept>
#include <string>

namespace recon {

/// Malformed or inconsistent input: bad schemes, unknown variables,
/// mismatched schemes, invalid settings.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numeric procedure failed to reach its target (e.g. IPF non-convergence).
class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace recon
