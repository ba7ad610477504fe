#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace confspec {

// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Model parameters violate their invariants (radius <= 0, open mesh, ...).
class InvalidModel : public Error {
 public:
  using Error::Error;
};

// Operation called with a backend or model kind it does not support.
class UnsupportedInput : public Error {
 public:
  using Error::Error;
};

// Dimension outside the range an operation is defined for.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Discretization too coarse or too large for the request.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

class DegenerateMesh : public Error {
 public:
  using Error::Error;
};

// Conformal factor outside the representable range.
class UnderflowError : public Error {
 public:
  using Error::Error;
};

// Field or weight vector does not match the node count of its space.
class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, int iterations, double residual)
      : Error(what + " (iterations=" + std::to_string(iterations) +
              ", residual=" + std::to_string(residual) + ")"),
        iterations_(iterations),
        residual_(residual) {}

  int iterations() const { return iterations_; }
  double residual() const { return residual_; }

 private:
  int iterations_;
  double residual_;
};

// Aggregated configuration failure: every violation found during validation.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> violations)
      : Error(join(violations)), violations_(std::move(violations)) {}

  const std::vector<std::string>& violations() const { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string out = "invalid configuration:";
    for (const auto& s : v) out += "\n  - " + s;
    return out;
  }
  std::vector<std::string> violations_;
};

}  // namespace confspec
