#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "robinbox/box.hpp"
#include "robinbox/exp_sum.hpp"
#include "robinbox/momentum.hpp"
#include "robinbox/quadrature.hpp"
#include "robinbox/spectrum.hpp"
#include "robinbox/wavefunction.hpp"

namespace robinbox {

// Free solution on the whole line built from momentum-space Gaussians
// sum_j w_j exp(-a^2 (k - k_j)^2 / 2), all of width a.
struct GaussianPacketSpec {
  double a = 0.05;
  double k_c = 0.0;
  std::vector<std::pair<cplx, double>> components;  // (weight, k_j); empty means one unit packet at k_c

  static GaussianPacketSpec single(double a, double k_c) {
    if (!(a > 0.0) || !std::isfinite(a)) throw ParameterError("GaussianPacketSpec: width must be positive");
    if (!std::isfinite(k_c)) throw ParameterError("GaussianPacketSpec: k_c must be finite");
    return {a, k_c, {}};
  }

  std::vector<std::pair<cplx, double>> terms() const {
    if (components.empty()) return {{cplx{1.0, 0.0}, k_c}};
    return components;
  }

  double max_abs_k() const {
    double k = 0.0;
    for (const auto& [w, kj] : terms()) k = std::max(k, std::abs(kj));
    return k;
  }

  // Highest mode index kept: weights beyond it fall below 1e-16.
  int truncation(const BoxConfig& box) const { return static_cast<int>(std::ceil((max_abs_k() + 8.6 / a) * box.L() / pi)) + 1; }

  // Momentum amplitude (unnormalized) at k, evolved to time t.
  cplx momentum_amplitude(double k, double t, double m) const {
    cplx s{};
    for (const auto& [w, kj] : terms()) s += w * std::exp(-0.5 * a * a * (k - kj) * (k - kj));
    return s * std::exp(cplx{0.0, -k * k * t / (2.0 * m)});
  }
};

// Value and first two x-derivatives of the whole-line solution at (x, t).
// Each component is sqrt(a / (A sqrt(pi))) exp(-(x - k_j t/m)^2 / (2A)) exp(i k_j x - i k_j^2 t / 2m),
// A = a^2 + i t / m.
inline std::array<cplx, 3> gaussian_line(const GaussianPacketSpec& spec, double m, double x, double t) {
  const double a = spec.a;
  const cplx A{a * a, t / m};
  const cplx pref = std::sqrt(a / (A * std::sqrt(pi)));
  std::array<cplx, 3> out{};
  for (const auto& [w, kj] : spec.terms()) {
    const double xc = kj * t / m;
    const cplx v = w * pref * std::exp(-(x - xc) * (x - xc) / (2.0 * A) + cplx{0.0, kj * x - kj * kj * t / (2.0 * m)});
    const cplx g = -(x - xc) / A + cplx{0.0, kj};
    out[0] += v;
    out[1] += g * v;
    out[2] += (g * g - 1.0 / A) * v;
  }
  return out;
}

enum class WrapKind { dirichlet, neumann, mixed };

inline const char* to_string(WrapKind w) {
  switch (w) {
    case WrapKind::dirichlet: return "dirichlet";
    case WrapKind::neumann: return "neumann";
    case WrapKind::mixed: return "mixed";
  }
  return "?";
}

inline Family family_of(WrapKind w) {
  switch (w) {
    case WrapKind::dirichlet: return Family::dirichlet;
    case WrapKind::neumann: return Family::neumann;
    case WrapKind::mixed: return Family::mixed;
  }
  return Family::dirichlet;
}

namespace detail {

// Image sum around the box. Dirichlet/Neumann: period 2L, reflected images
// with sign -1/+1. Mixed (Neumann at -L/2, Dirichlet at +L/2): period 4L,
//   Psi(x+4nL) - Psi(-x+(4n+1)L) - Psi(x+(4n+2)L) + Psi(-x+(4n+3)L).
inline std::array<cplx, 3> image_block(const GaussianPacketSpec& spec, double m, WrapKind kind, double L, double x, double t, long n) {
  auto direct = [&](double y) { return gaussian_line(spec, m, y, t); };
  auto mirrored = [&](double y) {
    auto v = gaussian_line(spec, m, y, t);
    v[1] = -v[1];
    return v;
  };
  std::array<cplx, 3> s{};
  auto add = [&s](const std::array<cplx, 3>& v, double sign) {
    for (int i = 0; i < 3; ++i) s[i] += sign * v[i];
  };
  const double dn = static_cast<double>(n);
  switch (kind) {
    case WrapKind::dirichlet:
      add(direct(x + 2.0 * dn * L), 1.0);
      add(mirrored(-x + (2.0 * dn + 1.0) * L), -1.0);
      break;
    case WrapKind::neumann:
      add(direct(x + 2.0 * dn * L), 1.0);
      add(mirrored(-x + (2.0 * dn + 1.0) * L), 1.0);
      break;
    case WrapKind::mixed:
      add(direct(x + 4.0 * dn * L), 1.0);
      add(mirrored(-x + (4.0 * dn + 1.0) * L), -1.0);
      add(direct(x + (4.0 * dn + 2.0) * L), -1.0);
      add(mirrored(-x + (4.0 * dn + 3.0) * L), 1.0);
      break;
  }
  return s;
}

}  // namespace detail

struct WrapResult {
  WaveFunction state;  // normalized
  long images = 0;     // |n| range actually summed
  double norm = 0.0;   // norm of the raw image sum
};

// Image sum of the whole-line Gaussian solution at time t onto the box. The
// image range starts at `images` and grows until the outermost block falls
// below 1e-17 of the running maximum.
inline WrapResult wrap(const GaussianPacketSpec& spec, const BoxConfig& box, WrapKind kind, double t, long images = 8,
                       long max_images = 200000) {
  const double L = box.L();
  const double m = box.m();
  const std::array<double, 5> probes = {box.left(), -0.25 * L, 0.0, 0.25 * L, box.right()};
  // The packet centers sit near k_j t / m; make sure the range reaches them.
  double reach = 0.0;
  for (const auto& [w, kj] : spec.terms()) reach = std::max(reach, std::abs(kj * t / m));
  const double width = std::sqrt(std::norm(cplx{spec.a * spec.a, t / m})) / spec.a;
  const double period = kind == WrapKind::mixed ? 4.0 * L : 2.0 * L;
  long n = std::max(images, static_cast<long>(std::ceil((reach + 9.0 * width) / period)) + 1);
  for (;; n *= 2) {
    if (n > max_images) throw NumericError("wrap: image sum did not converge within the truncation limit");
    double edge = 0.0;
    double peak = 0.0;
    for (double x : probes) {
      for (long j = -n; j <= n; ++j) {
        const double v = std::abs(detail::image_block(spec, m, kind, L, x, t, j)[0]);
        peak = std::max(peak, v);
        if (j == -n || j == n) edge = std::max(edge, v);
      }
    }
    if (edge <= 1e-17 * std::max(peak, 1e-300)) break;
  }
  auto sum = [=](double x) {
    std::array<cplx, 3> s{};
    for (long j = -n; j <= n; ++j) {
      const auto b = detail::image_block(spec, m, kind, L, x, t, j);
      for (int i = 0; i < 3; ++i) s[i] += b[i];
    }
    return s;
  };
  Quadrature q(box);
  const double n2 = q.integrate([&](double x) { return std::norm(sum(x)[0]); });
  if (!(n2 > 0.0) || !std::isfinite(n2)) throw NumericError("wrap: image sum has zero norm");
  const double c = 1.0 / std::sqrt(n2);
  WrapResult r;
  r.images = n;
  r.norm = std::sqrt(n2);
  r.state = WaveFunction::from_closure(
      box, [=](double x) { return c * sum(x)[0]; }, [=](double x) { return c * sum(x)[1]; }, [=](double x) { return c * sum(x)[2]; });
  return r;
}

// Coefficient form of a state at time t.
struct EvolvingState {
  Expansion expansion;
  double t = 0.0;

  const EnergyBasis& basis() const { return *expansion.basis; }
  double norm_squared() const { return expansion.norm_squared(); }
  WaveFunction wavefunction() const { return expansion.to_wavefunction(); }
};

// Energy-basis coefficients of the wrapped packet at t = 0, normalized.
// Dirichlet (k = pi (l+1)/L): g(k) + g(-k) for even l, i (g(k) - g(-k)) for odd l.
// Neumann (k = pi l / L): g(0) for l = 0, otherwise as Dirichlet.
// Mixed (k = pi (l+1/2)/L): i (e^{ikL/2} g(k) - e^{-ikL/2} g(-k)).
inline EvolvingState gaussian_coefficients(const GaussianPacketSpec& spec, const BoxConfig& box, WrapKind kind,
                                           std::optional<int> modes = std::nullopt) {
  const int n_modes = modes.value_or(spec.truncation(box));
  if (n_modes < 1) throw ParameterError("gaussian_coefficients: need at least one mode");
  std::shared_ptr<const EnergyBasis> basis;
  switch (kind) {
    case WrapKind::dirichlet: basis = std::make_shared<const EnergyBasis>(dirichlet_spectrum(box, n_modes - 1)); break;
    case WrapKind::neumann: basis = std::make_shared<const EnergyBasis>(neumann_spectrum(box, n_modes - 1)); break;
    case WrapKind::mixed: basis = std::make_shared<const EnergyBasis>(mixed_spectrum(box, n_modes - 1)); break;
  }
  const double m = box.m();
  const double L = box.L();
  Expansion e{basis, {}};
  const double s2 = 1.0 / std::sqrt(2.0);
  for (int l = 0; l < n_modes; ++l) {
    const double k = basis->levels[static_cast<std::size_t>(l)].wavenumber;
    const cplx gp = spec.momentum_amplitude(k, 0.0, m);
    const cplx gm = spec.momentum_amplitude(-k, 0.0, m);
    cplx c;
    if (kind == WrapKind::mixed) {
      const cplx ph = std::polar(1.0, 0.5 * k * L);
      c = cplx{0.0, 1.0} * (ph * gp - std::conj(ph) * gm);
    } else if (kind == WrapKind::neumann && l == 0) {
      c = gp;
    } else {
      c = (l % 2 == 0) ? (gp + gm) * s2 : cplx{0.0, 1.0} * (gp - gm) * s2;
    }
    e.coeffs.push_back(c);
  }
  const double n2 = e.norm_squared();
  if (!(n2 > 0.0)) throw NumericError("gaussian_coefficients: packet has no weight on the basis");
  for (auto& c : e.coeffs) c /= std::sqrt(n2);
  return {std::move(e), 0.0};
}

// c_l(t) = c_l(0) exp(-i E_l t).
inline EvolvingState evolve(const EvolvingState& s, double t) {
  EvolvingState out = s;
  out.t = s.t + t;
  for (std::size_t l = 0; l < out.expansion.coeffs.size(); ++l)
    out.expansion.coeffs[l] *= std::polar(1.0, -s.basis().levels[l].energy * t);
  return out;
}

struct RevivalFidelity {
  double overlap = 0.0;           // |<Psi(0)|Psi(t)>|
  double density_distance = 0.0;  // ∫ | |Psi(t)|^2 - |Psi(0)|^2 | dx
};

inline RevivalFidelity revival_fidelity(const EvolvingState& initial, double t, const Quadrature& q) {
  const EvolvingState later = evolve(initial, t);
  RevivalFidelity r;
  cplx ov{};
  for (std::size_t l = 0; l < initial.expansion.coeffs.size(); ++l) ov += std::conj(initial.expansion.coeffs[l]) * later.expansion.coeffs[l];
  r.overlap = std::abs(ov);
  const ExpSum a = initial.expansion.exp_sum();
  const ExpSum b = later.expansion.exp_sum();
  r.density_distance = q.integrate([&](double x) { return std::abs(std::norm(b(x)) - std::norm(a(x))); });
  return r;
}

// Dense matrix over basis levels.
class LevelMatrix {
 public:
  explicit LevelMatrix(std::size_t n = 0) : n_(n), data_(n * n) {}
  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  std::size_t size() const { return n_; }

 private:
  std::size_t n_;
  std::vector<cplx> data_;
};

// X_ll' = <psi_l|x|psi_l'> and D_ll' = <psi_l|-i d/dx|psi_l'>, exact.
inline LevelMatrix position_matrix(const EnergyBasis& b, std::size_t n) {
  LevelMatrix X(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) X(i, j) = exact_inner(b.levels[i].eigenfunction, b.levels[j].eigenfunction.times_x(), b.config.L());
  return X;
}

inline LevelMatrix derivative_matrix(const EnergyBasis& b, std::size_t n) {
  LevelMatrix D(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      D(i, j) = cplx{0.0, -1.0} * exact_inner(b.levels[i].eigenfunction, b.levels[j].eigenfunction.derivative(), b.config.L());
  return D;
}

struct EhrenfestReport {
  double t = 0.0;
  double dx_dt = 0.0;
  double pR = 0.0;
  double residual1 = 0.0;       // |m dx/dt - <p_R>|
  double dpR_dt = 0.0;          // analytic double sum
  double dpR_dt_fd = 0.0;       // central difference of <p_R>(t), diagnostic
  double force_boundary = 0.0;  // (1/2m)[Re(Psi'' Psi*) - |Psi'|^2] from -L/2 to L/2
  double minus_dV = 0.0;
  double residual2 = 0.0;  // |dpR/dt - (-<V'> + force_boundary)|
  double pI = 0.0;
  double dpI_dt = 0.0;          // five-point difference of <p_I>(t)
  double dpI_bracket = 0.0;     // (1/2m)[Im(Psi'' Psi*)] from -L/2 to L/2
  double dpI_continuity = 0.0;  // -(1/2)[d rho / dt] from -L/2 to L/2
  double continuity_residual = 0.0;
};

// Precomputes the level matrices of one state and reports both Ehrenfest
// theorems at any time. V' is optional and enters only through -<V'>.
class EhrenfestAnalyzer {
 public:
  explicit EhrenfestAnalyzer(EvolvingState s, std::function<double(double)> v_prime = {})
      : state_(std::move(s)), v_prime_(std::move(v_prime)), quad_(state_.basis().config) {
    const std::size_t n = state_.expansion.coeffs.size();
    X_ = position_matrix(state_.basis(), n);
    D_ = derivative_matrix(state_.basis(), n);
  }

  const EvolvingState& state() const { return state_; }

  std::vector<cplx> coefficients(double t) const { return evolve(state_, t).expansion.coeffs; }

  double mean_x(double t) const { return quadratic(X_, coefficients(t)).real(); }
  double pR(double t) const { return quadratic(D_, coefficients(t)).real(); }
  double pI(double t) const { return expval_pI(evolve(state_, t).wavefunction()); }

  double dx_dt(double t) const { return commutator(X_, coefficients(t)).real(); }
  double dpR_dt(double t) const { return commutator(D_, coefficients(t)).real(); }

  EhrenfestReport report(double t) const {
    const BoxConfig& box = state_.basis().config;
    const double m = box.m();
    EhrenfestReport r;
    r.t = t;
    r.dx_dt = dx_dt(t);
    r.pR = pR(t);
    r.residual1 = std::abs(m * r.dx_dt - r.pR);
    r.dpR_dt = dpR_dt(t);
    const double T = box.revival_time();
    const double h = 1e-6 * T;
    r.dpR_dt_fd = (pR(t + h) - pR(t - h)) / (2.0 * h);

    const EvolvingState now = evolve(state_, t);
    const ExpSum psi = now.expansion.exp_sum();
    const ExpSum d1 = psi.derivative();
    const ExpSum d2 = d1.derivative();
    ExpSum psi_t;
    for (std::size_t l = 0; l < now.expansion.coeffs.size(); ++l) {
      ExpSum term = now.basis().levels[l].eigenfunction;
      term *= now.expansion.coeffs[l] * cplx{0.0, -now.basis().levels[l].energy};
      psi_t += term;
    }
    auto bracket = [&](auto&& f) { return f(box.right()) - f(box.left()); };
    r.force_boundary = bracket([&](double x) { return (std::real(d2(x) * std::conj(psi(x))) - std::norm(d1(x))) / (2.0 * m); });
    if (v_prime_) {
      const WaveFunction w = WaveFunction::from_exp_sum(box, psi);
      r.minus_dV = -quad_.integrate([&](double x) { return v_prime_(x) * std::norm(w(x)); });
    }
    r.residual2 = std::abs(r.dpR_dt - (r.minus_dV + r.force_boundary));

    r.pI = 0.5 * (std::norm(psi(box.left())) - std::norm(psi(box.right())));
    auto pI_at = [&](double s) {
      const ExpSum f = evolve(state_, s).expansion.exp_sum();
      return 0.5 * (std::norm(f(box.left())) - std::norm(f(box.right())));
    };
    r.dpI_dt = (-pI_at(t + 2 * h) + 8.0 * pI_at(t + h) - 8.0 * pI_at(t - h) + pI_at(t - 2 * h)) / (12.0 * h);
    r.dpI_bracket = bracket([&](double x) { return std::imag(d2(x) * std::conj(psi(x))) / (2.0 * m); });
    r.dpI_continuity = -0.5 * bracket([&](double x) { return 2.0 * std::real(std::conj(psi(x)) * psi_t(x)); });
    r.continuity_residual = std::max({std::abs(r.dpI_dt - r.dpI_bracket), std::abs(r.dpI_bracket - r.dpI_continuity),
                                      std::abs(r.dpI_dt - r.dpI_continuity)});
    return r;
  }

 private:
  // Σ c_i* c_j M_ij
  static cplx quadratic(const LevelMatrix& M, const std::vector<cplx>& c) {
    cplx s{};
    for (std::size_t i = 0; i < c.size(); ++i)
      for (std::size_t j = 0; j < c.size(); ++j) s += std::conj(c[i]) * c[j] * M(i, j);
    return s;
  }
  // Σ i (E_i - E_j) c_i* c_j M_ij: the time derivative of the quadratic form.
  cplx commutator(const LevelMatrix& M, const std::vector<cplx>& c) const {
    const auto& lv = state_.basis().levels;
    cplx s{};
    for (std::size_t i = 0; i < c.size(); ++i)
      for (std::size_t j = 0; j < c.size(); ++j) s += cplx{0.0, lv[i].energy - lv[j].energy} * std::conj(c[i]) * c[j] * M(i, j);
    return s;
  }

  EvolvingState state_;
  std::function<double(double)> v_prime_;
  Quadrature quad_;
  LevelMatrix X_;
  LevelMatrix D_;
};

inline EhrenfestReport ehrenfest_report(const EvolvingState& s, double t, std::function<double(double)> v_prime = {}) {
  return EhrenfestAnalyzer(s, std::move(v_prime)).report(t);
}

}  // namespace robinbox
