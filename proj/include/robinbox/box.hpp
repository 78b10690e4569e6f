#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "robinbox/errors.hpp"

namespace robinbox {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;

// Mass and length of the box [-L/2, L/2], in units with hbar = 1.
class BoxConfig {
 public:
  BoxConfig() = default;
  BoxConfig(double mass, double length) : m_(mass), L_(length) {
    if (!(mass > 0.0) || !std::isfinite(mass)) throw ParameterError("BoxConfig: mass must be positive, got " + std::to_string(mass));
    if (!(length > 0.0) || !std::isfinite(length)) throw ParameterError("BoxConfig: length must be positive, got " + std::to_string(length));
  }

  double m() const { return m_; }
  double L() const { return L_; }
  double half() const { return 0.5 * L_; }
  double left() const { return -0.5 * L_; }
  double right() const { return 0.5 * L_; }

  // Full revival time of the Dirichlet and Neumann spectra, 4 m L^2 / pi.
  double revival_time() const { return 4.0 * m_ * L_ * L_ / pi; }

  bool contains(double x, double slack = 0.0) const {
    return x >= left() - slack * L_ && x <= right() + slack * L_;
  }

  friend bool operator==(const BoxConfig&, const BoxConfig&) = default;

 private:
  double m_ = 1.0;
  double L_ = 1.0;
};

inline void require_same_box(const BoxConfig& a, const BoxConfig& b, const char* where) {
  if (!(a == b)) throw ConfigurationError(std::string(where) + ": operands belong to different boxes");
}

}  // namespace robinbox
