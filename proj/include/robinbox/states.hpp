#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <random>
#include <vector>

#include "robinbox/box.hpp"
#include "robinbox/exp_sum.hpp"
#include "robinbox/quadrature.hpp"
#include "robinbox/spectrum.hpp"
#include "robinbox/wavefunction.hpp"

namespace robinbox {

// 1/sqrt(L): the zero mode for gamma_+ = gamma_- = 0.
inline WaveFunction constant_state(const BoxConfig& box) {
  return WaveFunction::from_exp_sum(box, ExpSum::exponential(1.0 / std::sqrt(box.L()), 0.0));
}

// sqrt(12/L^3) x: the zero mode for gamma_+ = gamma_- = -2/L.
inline WaveFunction linear_zero_state(const BoxConfig& box) {
  const double L = box.L();
  return WaveFunction::from_exp_sum(box, ExpSum::exponential(std::sqrt(12.0 / (L * L * L)), 0.0, 1));
}

// sqrt(gamma / sinh(gamma L)) exp(-gamma x): the negative-energy level of the
// antisymmetric family gamma_+ = -gamma_- = gamma.
inline WaveFunction decaying_state(const BoxConfig& box, double gamma) {
  if (!std::isfinite(gamma) || gamma == 0.0) throw ParameterError("decaying_state: gamma must be finite and nonzero");
  const double n = std::sqrt(gamma / std::sinh(gamma * box.L()));
  return WaveFunction::from_exp_sum(box, ExpSum::exponential(n, -gamma));
}

// Dirichlet eigenstate with wavenumber k = n pi / L (n >= 1).
inline WaveFunction dirichlet_state(const BoxConfig& box, int n) {
  if (n < 1) throw ParameterError("dirichlet_state: wavenumber index must be >= 1");
  return dirichlet_spectrum(box, n - 1).wavefunction(static_cast<std::size_t>(n - 1));
}

// Neumann eigenstate with wavenumber k = n pi / L (n >= 0).
inline WaveFunction neumann_state(const BoxConfig& box, int n) {
  if (n < 0) throw ParameterError("neumann_state: wavenumber index must be >= 0");
  return neumann_spectrum(box, n).wavefunction(static_cast<std::size_t>(n));
}

// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
inline double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// sum_l c_l psi_l over the first `modes` levels with |c_l| ∝ 0.6^l and
// uniformly random phases, normalized.
inline Expansion random_state(std::shared_ptr<const EnergyBasis> basis, int modes, std::uint64_t seed) {
  if (modes < 1 || static_cast<std::size_t>(modes) > basis->size()) throw ParameterError("random_state: mode count outside the basis");
  std::mt19937_64 rng(seed);
  Expansion e{std::move(basis), {}};
  double n2 = 0.0;
  for (int l = 0; l < modes; ++l) {
    const double mag = std::pow(0.6, l);
    e.coeffs.push_back(std::polar(mag, 2.0 * pi * uniform01(rng)));
    n2 += mag * mag;
  }
  for (auto& c : e.coeffs) c /= std::sqrt(n2);
  return e;
}

// exp(-(i/b)(x + a x^2 / 2)), normalized on the box.
inline WaveFunction saturating_state(const BoxConfig& box, cplx a, cplx b) {
  if (b == cplx{}) throw ParameterError("saturating_state: b must be nonzero");
  const cplx r = cplx{0.0, -1.0} / b;
  if (a == cplx{}) {
    ExpSum f = ExpSum::exponential(1.0, r);
    const double n2 = exact_inner(f, f, box.L()).real();
    if (!(n2 > 0.0) || !std::isfinite(n2)) throw NumericError("saturating_state: not normalizable");
    f *= 1.0 / std::sqrt(n2);
    return WaveFunction::from_exp_sum(box, f);
  }
  // Normalize against the largest exponent over the box to avoid overflow.
  double shift = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 256; ++i) {
    const double x = box.left() + box.L() * i / 256.0;
    shift = std::max(shift, (r * (x + 0.5 * a * x * x)).real());
  }
  auto raw = [=](double x) { return std::exp(r * (x + 0.5 * a * x * x) - shift); };
  Quadrature q(box);
  const double n2 = q.integrate([&](double x) { return std::norm(raw(x)); });
  if (!(n2 > 0.0) || !std::isfinite(n2)) throw NumericError("saturating_state: not normalizable");
  const double c = 1.0 / std::sqrt(n2);
  auto value = [=](double x) { return c * raw(x); };
  // psi' = r (1 + a x) psi, psi'' = [r a + r^2 (1 + a x)^2] psi.
  auto first = [=](double x) { return r * (1.0 + a * x) * value(x); };
  auto second = [=](double x) { return (r * a + r * r * (1.0 + a * x) * (1.0 + a * x)) * value(x); };
  return WaveFunction::from_closure(box, value, first, second);
}

}  // namespace robinbox
