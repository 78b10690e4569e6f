#pragma once

#include <stdexcept>
#include <string>

namespace robinbox {

// Invalid physical or numerical parameters (m <= 0, b = 0, k off the momentum grid, ...).
class ParameterError : public std::invalid_argument {
 public:
  explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

// Operands built for different boxes.
class ConfigurationError : public std::invalid_argument {
 public:
  explicit ConfigurationError(const std::string& what) : std::invalid_argument(what) {}
};

// Evaluation point outside [-L/2, L/2].
class DomainError : public std::out_of_range {
 public:
  explicit DomainError(const std::string& what) : std::out_of_range(what) {}
};

// Root bracketing failed, image sums did not converge, state not normalizable.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// A state does not satisfy the assumptions of the requested formula.
class PreconditionError : public std::runtime_error {
 public:
  explicit PreconditionError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace robinbox
