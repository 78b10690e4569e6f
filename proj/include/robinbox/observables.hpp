#pragma once

#include <cmath>

#include "robinbox/quadrature.hpp"
#include "robinbox/wavefunction.hpp"

namespace robinbox {

struct Observables {
  double mean_x = 0.0;
  double mean_x2 = 0.0;
  double var_x = 0.0;
  double rho_left = 0.0;   // |Psi(-L/2)|^2
  double rho_right = 0.0;  // |Psi(+L/2)|^2
  double current_left = 0.0;
  double current_right = 0.0;
};

// j(x) = (1/2mi)(Psi* Psi' - Psi'* Psi) = Im(Psi* Psi') / m.
inline double probability_current(const WaveFunction& f, double x) {
  return std::imag(std::conj(f(x)) * derivative(f, 1, x)) / f.box().m();
}

inline Observables observables_of(const WaveFunction& f, const Quadrature& q) {
  require_same_box(f.box(), q.box(), "observables_of");
  Observables o;
  double n = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double x = q.nodes()[i];
    const double rho = std::norm(f(x)) * q.weights()[i];
    n += rho;
    o.mean_x += x * rho;
    o.mean_x2 += x * x * rho;
  }
  o.mean_x /= n;
  o.mean_x2 /= n;
  o.var_x = o.mean_x2 - o.mean_x * o.mean_x;
  const BoxConfig& box = f.box();
  o.rho_left = std::norm(f(box.left()));
  o.rho_right = std::norm(f(box.right()));
  o.current_left = probability_current(f, box.left());
  o.current_right = probability_current(f, box.right());
  return o;
}

}  // namespace robinbox
