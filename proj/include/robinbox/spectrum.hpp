#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "robinbox/box.hpp"
#include "robinbox/exp_sum.hpp"
#include "robinbox/roots.hpp"
#include "robinbox/wavefunction.hpp"

namespace robinbox {

// Self-adjoint extension parameter of H at one wall: a finite real gamma, or
// the Dirichlet value gamma = infinity (kept as a tag, never as a big float).
class RobinParameter {
 public:
  constexpr RobinParameter() = default;
  constexpr RobinParameter(double gamma) : gamma_(gamma) {}  // NOLINT(google-explicit-constructor)
  static constexpr RobinParameter dirichlet() {
    RobinParameter p;
    p.dirichlet_ = true;
    return p;
  }

  constexpr bool is_dirichlet() const { return dirichlet_; }
  double value() const {
    if (dirichlet_) throw ParameterError("RobinParameter: Dirichlet wall has no finite gamma");
    return gamma_;
  }
  // Condition alpha*Psi +/- beta*Psi' = 0 in homogeneous form.
  constexpr double alpha() const { return dirichlet_ ? 1.0 : gamma_; }
  constexpr double beta() const { return dirichlet_ ? 0.0 : 1.0; }

  friend constexpr bool operator==(const RobinParameter&, const RobinParameter&) = default;

 private:
  double gamma_ = 0.0;
  bool dirichlet_ = false;
};

// gamma_+ Psi(L/2) + Psi'(L/2) = 0 and gamma_- Psi(-L/2) - Psi'(-L/2) = 0.
struct RobinBC {
  RobinParameter plus;
  RobinParameter minus;

  static RobinBC dirichlet() { return {RobinParameter::dirichlet(), RobinParameter::dirichlet()}; }
  static RobinBC neumann() { return {0.0, 0.0}; }
  // Neumann at -L/2, Dirichlet at +L/2.
  static RobinBC mixed() { return {RobinParameter::dirichlet(), 0.0}; }
  static RobinBC symmetric(double gamma) { return {gamma, gamma}; }
  static RobinBC antisymmetric(double gamma) { return {gamma, -gamma}; }

  friend bool operator==(const RobinBC&, const RobinBC&) = default;
};

struct WallResidual {
  double left = 0.0;
  double right = 0.0;
};

// |gamma_+ Psi + Psi'| at +L/2 and |gamma_- Psi - Psi'| at -L/2 (|Psi| at a Dirichlet wall).
inline WallResidual robin_residual(const WaveFunction& f, const RobinBC& bc) {
  const BoxConfig& box = f.box();
  WallResidual r;
  const double xr = box.right();
  const double xl = box.left();
  r.right = bc.plus.is_dirichlet() ? std::abs(f(xr)) : std::abs(bc.plus.value() * f(xr) + derivative(f, 1, xr));
  r.left = bc.minus.is_dirichlet() ? std::abs(f(xl)) : std::abs(bc.minus.value() * f(xl) - derivative(f, 1, xl));
  return r;
}

enum class LevelKind { negative, zero, positive };

inline const char* to_string(LevelKind k) {
  switch (k) {
    case LevelKind::negative: return "negative";
    case LevelKind::zero: return "zero";
    case LevelKind::positive: return "positive";
  }
  return "?";
}

struct EnergyLevel {
  int index = 0;  // position in the energy-ordered list
  double energy = 0.0;
  LevelKind kind = LevelKind::positive;
  double wavenumber = 0.0;  // k for positive levels, kappa for negative ones, 0 for zero modes
  ExpSum eigenfunction;
};

enum class Family { dirichlet, neumann, mixed, symmetric, antisymmetric, general };

inline const char* to_string(Family f) {
  switch (f) {
    case Family::dirichlet: return "dirichlet";
    case Family::neumann: return "neumann";
    case Family::mixed: return "mixed";
    case Family::symmetric: return "symmetric";
    case Family::antisymmetric: return "antisymmetric";
    case Family::general: return "general";
  }
  return "?";
}

struct EnergyBasis {
  BoxConfig config;
  Family family = Family::dirichlet;
  RobinBC bc;
  std::vector<EnergyLevel> levels;

  std::size_t size() const { return levels.size(); }
  WaveFunction wavefunction(std::size_t l) const { return WaveFunction::from_exp_sum(config, levels.at(l).eigenfunction); }
};

namespace detail {

// sinh(y)/y - 1 and 1 - sin(y)/y without cancellation.
inline double sinhc_minus_one(double y) {
  if (std::abs(y) < 1e-2) {
    const double y2 = y * y;
    return y2 / 6.0 * (1.0 + y2 / 20.0 * (1.0 + y2 / 42.0));
  }
  return std::sinh(y) / y - 1.0;
}
inline double one_minus_sinc(double y) {
  if (std::abs(y) < 1e-2) {
    const double y2 = y * y;
    return y2 / 6.0 * (1.0 - y2 / 20.0 * (1.0 - y2 / 42.0));
  }
  return 1.0 - std::sin(y) / y;
}

inline ExpSum cos_sum(double k, double amp) {
  return ExpSum({{cplx{0.5 * amp, 0.0}, cplx{0.0, k}, 0}, {cplx{0.5 * amp, 0.0}, cplx{0.0, -k}, 0}});
}
inline ExpSum sin_sum(double k, double amp) {
  return ExpSum({{cplx{0.0, -0.5 * amp}, cplx{0.0, k}, 0}, {cplx{0.0, 0.5 * amp}, cplx{0.0, -k}, 0}});
}
inline ExpSum cosh_sum(double kappa, double amp) {
  return ExpSum({{cplx{0.5 * amp, 0.0}, cplx{kappa, 0.0}, 0}, {cplx{0.5 * amp, 0.0}, cplx{-kappa, 0.0}, 0}});
}
inline ExpSum sinh_sum(double kappa, double amp) {
  return ExpSum({{cplx{0.5 * amp, 0.0}, cplx{kappa, 0.0}, 0}, {cplx{-0.5 * amp, 0.0}, cplx{-kappa, 0.0}, 0}});
}

// Rescales f so its first nonvanishing value scanning from -L/2 is real positive.
inline ExpSum canonical_phase(ExpSum f, const BoxConfig& box) {
  double scale = 0.0;
  for (int i = 0; i <= 64; ++i) scale = std::max(scale, std::abs(f(box.left() + box.L() * i / 64.0)));
  cplx v = f(box.left());
  if (std::abs(v) <= 1e-8 * scale) v = f.derivative()(box.left());
  if (std::abs(v) == 0.0) return f;
  f *= std::conj(v) / std::abs(v);
  return f;
}

inline void sort_and_index(std::vector<EnergyLevel>& levels, std::size_t count) {
  std::stable_sort(levels.begin(), levels.end(), [](const EnergyLevel& a, const EnergyLevel& b) { return a.energy < b.energy; });
  if (levels.size() > count) levels.resize(count);
  for (std::size_t i = 0; i < levels.size(); ++i) levels[i].index = static_cast<int>(i);
}

inline EnergyLevel positive_level(const BoxConfig& box, double k, ExpSum psi) {
  return EnergyLevel{0, k * k / (2.0 * box.m()), LevelKind::positive, k, std::move(psi)};
}

}  // namespace detail

// E_l = pi^2 (l+1)^2 / (2 m L^2); cos for even l, sin for odd l.
inline EnergyBasis dirichlet_spectrum(const BoxConfig& box, int l_max) {
  if (l_max < 0) throw ParameterError("dirichlet_spectrum: l_max must be >= 0");
  EnergyBasis basis{box, Family::dirichlet, RobinBC::dirichlet(), {}};
  const double amp = std::sqrt(2.0 / box.L());
  for (int l = 0; l <= l_max; ++l) {
    const double k = pi * (l + 1) / box.L();
    basis.levels.push_back(detail::positive_level(box, k, l % 2 == 0 ? detail::cos_sum(k, amp) : detail::sin_sum(k, amp)));
    basis.levels.back().index = l;
  }
  return basis;
}

// E_l = pi^2 l^2 / (2 m L^2) with the constant zero mode at l = 0.
inline EnergyBasis neumann_spectrum(const BoxConfig& box, int l_max) {
  if (l_max < 0) throw ParameterError("neumann_spectrum: l_max must be >= 0");
  EnergyBasis basis{box, Family::neumann, RobinBC::neumann(), {}};
  basis.levels.push_back(EnergyLevel{0, 0.0, LevelKind::zero, 0.0, ExpSum::exponential(1.0 / std::sqrt(box.L()), 0.0)});
  const double amp = std::sqrt(2.0 / box.L());
  for (int l = 1; l <= l_max; ++l) {
    const double k = pi * l / box.L();
    basis.levels.push_back(detail::positive_level(box, k, l % 2 == 0 ? detail::cos_sum(k, amp) : detail::sin_sum(k, amp)));
    basis.levels.back().index = l;
  }
  return basis;
}

// Psi'(-L/2) = 0, Psi(L/2) = 0: E_l = pi^2 (l+1/2)^2 / (2 m L^2),
// psi_l = sqrt(2/L) sin(k_l (x - L/2)).
inline EnergyBasis mixed_spectrum(const BoxConfig& box, int l_max) {
  if (l_max < 0) throw ParameterError("mixed_spectrum: l_max must be >= 0");
  EnergyBasis basis{box, Family::mixed, RobinBC::mixed(), {}};
  const double amp = std::sqrt(2.0 / box.L());
  for (int l = 0; l <= l_max; ++l) {
    const double k = pi * (l + 0.5) / box.L();
    // sin(k(x - L/2)) = sin(kx) cos(kL/2) - cos(kx) sin(kL/2)
    const double c = std::cos(0.5 * k * box.L());
    const double s = std::sin(0.5 * k * box.L());
    ExpSum psi = detail::sin_sum(k, amp * c) + detail::cos_sum(k, -amp * s);
    basis.levels.push_back(detail::positive_level(box, k, psi.simplified()));
    basis.levels.back().index = l;
  }
  return basis;
}

namespace detail {

inline double zero_mode_tolerance(const BoxConfig& box) { return 1e-12 / box.L(); }

}  // namespace detail

// gamma_+ = gamma_- = gamma. Positive levels from k tan(kL/2) = gamma (even)
// and k cot(kL/2) = -gamma (odd); negative levels from the tanh/coth
// analogues; zero modes at gamma = 0 and gamma = -2/L.
inline EnergyBasis symmetric_robin_spectrum(const BoxConfig& box, double gamma, int l_max) {
  if (l_max < 0) throw ParameterError("symmetric_robin_spectrum: l_max must be >= 0");
  if (!std::isfinite(gamma)) throw ParameterError("symmetric_robin_spectrum: gamma must be finite");
  EnergyBasis basis{box, Family::symmetric, RobinBC::symmetric(gamma), {}};
  const double L = box.L();
  const double g = 0.5 * gamma * L;  // dimensionless, u = kL/2
  const double tol = detail::zero_mode_tolerance(box);
  const bool zero_even = std::abs(gamma) < tol;
  const bool zero_odd = std::abs(gamma + 2.0 / L) < tol;
  std::vector<EnergyLevel> levels;
  const double amp = std::sqrt(2.0 / L);

  if (zero_even) levels.push_back({0, 0.0, LevelKind::zero, 0.0, ExpSum::exponential(1.0 / std::sqrt(L), 0.0)});
  if (zero_odd) levels.push_back({0, 0.0, LevelKind::zero, 0.0, ExpSum::exponential(std::sqrt(12.0 / (L * L * L)), 0.0, 1)});

  // Negative even level: v tanh v = -g.
  if (g < 0 && !zero_even) {
    auto f = [g](double v) { return v * std::tanh(v) + g; };
    double v = roots::bisect(f, 0.0, 1.0 - g, -1);
    v = roots::newton_polish(f, [](double v) { return std::tanh(v) + v / (std::cosh(v) * std::cosh(v)); }, v, 0.0, 1.0 - g);
    const double kappa = 2.0 * v / L;
    const double norm = amp / std::sqrt(detail::sinhc_minus_one(kappa * L) + 2.0);
    levels.push_back({0, -kappa * kappa / (2.0 * box.m()), LevelKind::negative, kappa, detail::cosh_sum(kappa, norm)});
  }
  // Negative odd level: v coth v = -g, requires g < -1.
  if (g < -1.0 && !zero_odd) {
    auto vcoth = [](double v) { return v < 1e-4 ? 1.0 + v * v / 3.0 : v / std::tanh(v); };
    auto f = [g, vcoth](double v) { return vcoth(v) + g; };
    double v = roots::bisect(f, 0.0, -g, -1);
    v = roots::newton_polish(
        f, [](double v) { return v < 1e-4 ? 2.0 * v / 3.0 : 1.0 / std::tanh(v) - v / (std::sinh(v) * std::sinh(v)); }, v, 0.0, -g);
    const double kappa = 2.0 * v / L;
    const double norm = amp / std::sqrt(detail::sinhc_minus_one(kappa * L));
    levels.push_back({0, -kappa * kappa / (2.0 * box.m()), LevelKind::negative, kappa, detail::sinh_sum(kappa, norm)});
  }

  const int per_branch = l_max + 2;
  // Even positive: f(u) = u sin u - g cos u on (j pi - pi/2, j pi + pi/2).
  {
    auto f = [g](double u) { return u * std::sin(u) - g * std::cos(u); };
    auto df = [g](double u) { return std::sin(u) + u * std::cos(u) + g * std::sin(u); };
    for (int j = 0; j < per_branch; ++j) {
      double a = j == 0 ? 0.0 : j * pi - 0.5 * pi;
      double b = j * pi + 0.5 * pi;
      if (j == 0) {
        b = 0.5 * pi;
        if (g <= 0.0) continue;  // u tan u >= 0 on (0, pi/2); g = 0 is the zero mode
      }
      double u;
      if (zero_even && j > 0) {
        u = j * pi;
      } else {
        const double fa = f(a);
        const int sa = j == 0 ? -1 : (fa > 0 ? 1 : -1);
        u = roots::bisect(f, a, b, sa);
        u = roots::newton_polish(f, df, u, a, b);
      }
      const double k = 2.0 * u / L;
      const double norm = amp / std::sqrt(1.0 + std::sin(k * L) / (k * L));
      levels.push_back(detail::positive_level(box, k, detail::cos_sum(k, norm)));
    }
  }
  // Odd positive: f(u) = u cos u + g sin u on (j pi, (j+1) pi).
  {
    auto f = [g](double u) { return u * std::cos(u) + g * std::sin(u); };
    auto df = [g](double u) { return std::cos(u) - u * std::sin(u) + g * std::cos(u); };
    for (int j = 0; j < per_branch; ++j) {
      const double a = j * pi;
      const double b = (j + 1) * pi;
      if (j == 0 && g <= -1.0) continue;  // u cot u < 1 on (0, pi)
      double u;
      if (zero_even) {
        u = (j + 0.5) * pi;
      } else {
        const int sa = j == 0 ? 1 : (j % 2 == 0 ? 1 : -1);
        u = roots::bisect(f, a, b, sa);
        u = roots::newton_polish(f, df, u, a, b);
      }
      const double k = 2.0 * u / L;
      const double norm = amp / std::sqrt(detail::one_minus_sinc(k * L));
      levels.push_back(detail::positive_level(box, k, detail::sin_sum(k, norm)));
    }
  }
  // Zero modes keep their closed forms 1/sqrt(L) and sqrt(12/L^3) x.
  for (auto& lv : levels)
    if (lv.kind != LevelKind::zero) lv.eigenfunction = detail::canonical_phase(lv.eigenfunction, box);
  detail::sort_and_index(levels, static_cast<std::size_t>(l_max) + 1);
  basis.levels = std::move(levels);
  return basis;
}

// gamma_+ = -gamma_- = gamma. Positive levels k_l = pi l / L independent of
// gamma; one negative level E = -gamma^2/2m with psi ∝ exp(-gamma x).
inline EnergyBasis antisymmetric_robin_spectrum(const BoxConfig& box, double gamma, int l_max) {
  if (l_max < 0) throw ParameterError("antisymmetric_robin_spectrum: l_max must be >= 0");
  if (!std::isfinite(gamma)) throw ParameterError("antisymmetric_robin_spectrum: gamma must be finite");
  EnergyBasis basis{box, Family::antisymmetric, RobinBC::antisymmetric(gamma), {}};
  const double L = box.L();
  std::vector<EnergyLevel> levels;
  if (std::abs(gamma) < detail::zero_mode_tolerance(box)) {
    levels.push_back({0, 0.0, LevelKind::zero, 0.0, ExpSum::exponential(1.0 / std::sqrt(L), 0.0)});
  } else {
    const double norm = std::sqrt(gamma / std::sinh(gamma * L));
    levels.push_back({0, -gamma * gamma / (2.0 * box.m()), LevelKind::negative, std::abs(gamma), ExpSum::exponential(norm, -gamma)});
  }
  for (int l = 1; l <= l_max; ++l) {
    const double k = pi * l / L;
    const double norm = 1.0 / std::sqrt(2.0 * L * (gamma * gamma + k * k));
    const double sign = l % 2 == 0 ? 1.0 : -1.0;
    ExpSum psi({{norm * cplx{gamma, -k}, cplx{0.0, k}, 0}, {-sign * norm * cplx{gamma, k}, cplx{0.0, -k}, 0}});
    levels.push_back(detail::positive_level(box, k, detail::canonical_phase(std::move(psi), box)));
  }
  detail::sort_and_index(levels, static_cast<std::size_t>(l_max) + 1);
  basis.levels = std::move(levels);
  return basis;
}

namespace detail {

// Solution of the left boundary condition, psi(-L/2) = beta_-, psi'(-L/2) = alpha_-.
inline ExpSum left_solution_positive(const BoxConfig& box, const RobinParameter& minus, double k) {
  const double h = box.half();
  // beta cos(k(x+h)) + (alpha/k) sin(k(x+h))
  const cplx ph = std::polar(1.0, k * h);
  const double b = minus.beta();
  const double a = minus.alpha() / k;
  return ExpSum({{0.5 * b * ph + a * ph / cplx{0.0, 2.0}, cplx{0.0, k}, 0},
                 {0.5 * b * std::conj(ph) - a * std::conj(ph) / cplx{0.0, 2.0}, cplx{0.0, -k}, 0}})
      .simplified();
}

inline ExpSum left_solution_negative(const BoxConfig& box, const RobinParameter& minus, double kappa) {
  const double h = box.half();
  const double ep = std::exp(kappa * h);
  const double em = std::exp(-kappa * h);
  const double b = minus.beta();
  const double a = minus.alpha() / kappa;
  return ExpSum({{0.5 * (b + a) * ep, kappa, 0}, {0.5 * (b - a) * em, -kappa, 0}}).simplified();
}

inline ExpSum normalize_exact(ExpSum f, const BoxConfig& box) {
  const double n2 = exact_inner(f, f, box.L()).real();
  if (!(n2 > 0.0) || !std::isfinite(n2)) throw NumericError("general_robin_spectrum: eigenfunction not normalizable");
  f *= 1.0 / std::sqrt(n2);
  return f;
}

}  // namespace detail

// Arbitrary gamma_+, gamma_- (each finite or Dirichlet). Positive levels are
// zeros of the boundary-matching determinant
//   F(k) = (b+ b- k^2 - a+ a-) sin kL - k (a+ b- + b+ a-) cos kL,
// negative levels of its continuation k -> i kappa.
inline EnergyBasis general_robin_spectrum(const BoxConfig& box, RobinParameter gamma_plus, RobinParameter gamma_minus, int l_max) {
  if (l_max < 0) throw ParameterError("general_robin_spectrum: l_max must be >= 0");
  for (const auto& p : {gamma_plus, gamma_minus})
    if (!p.is_dirichlet() && !std::isfinite(p.value())) throw ParameterError("general_robin_spectrum: gamma must be finite or Dirichlet");
  EnergyBasis basis{box, Family::general, RobinBC{gamma_plus, gamma_minus}, {}};
  const double L = box.L();
  const double ap = gamma_plus.alpha(), bp = gamma_plus.beta();
  const double am = gamma_minus.alpha(), bm = gamma_minus.beta();
  const double quad = bp * bm;
  const double prod = ap * am;
  const double cross = ap * bm + bp * am;

  std::vector<EnergyLevel> levels;
  const double g0 = -(prod * L + cross);
  const double g0_scale = (std::abs(ap) + bp / L) * (std::abs(am) + bm / L) * L;
  const bool zero_mode = std::abs(g0) < 1e-12 * g0_scale;
  if (zero_mode) {
    // beta_- + alpha_- (x + L/2)
    ExpSum psi({{cplx{bm + am * box.half(), 0.0}, 0.0, 0}, {cplx{am, 0.0}, 0.0, 1}});
    levels.push_back({0, 0.0, LevelKind::zero, 0.0, detail::normalize_exact(psi.simplified(), box)});
  }
  const double k_floor = zero_mode ? 1e-7 / L : 0.0;

  // Negative levels: scaled F(i kappa) e^{-kappa L} / kappa.
  {
    auto h = [&](double kappa) {
      const double shc = kappa * L < 1e-8 ? L : -std::expm1(-2.0 * kappa * L) / (2.0 * kappa);
      return -(quad * kappa * kappa + prod) * shc - cross * 0.5 * (1.0 + std::exp(-2.0 * kappa * L));
    };
    double kmax = 20.0 / L;
    for (const auto& p : {gamma_plus, gamma_minus})
      if (!p.is_dirichlet()) kmax = std::max(kmax, 2.0 * std::abs(p.value()) + 20.0 / L);
    const double step = std::min(pi / (64.0 * L), kmax / 4096.0);
    for (double kappa : roots::scan(h, 0.0, kmax, step)) {
      if (kappa <= k_floor) continue;
      ExpSum psi = detail::normalize_exact(detail::left_solution_negative(box, gamma_minus, kappa), box);
      levels.push_back({0, -kappa * kappa / (2.0 * box.m()), LevelKind::negative, kappa, psi});
    }
  }
  // Positive levels: F(k)/k, smooth through k = 0.
  {
    auto G = [&](double k) {
      const double sinc = k * L < 1e-8 ? L : std::sin(k * L) / k;
      return (quad * k * k - prod) * sinc - cross * std::cos(k * L);
    };
    const double step = pi / (64.0 * L);
    double lo = 0.0;
    std::vector<double> found;
    const std::size_t want = static_cast<std::size_t>(l_max) + 1;
    while (found.size() < want) {
      const double hi = lo + pi / L * static_cast<double>(want + 2);
      for (double k : roots::scan(G, lo, hi, step))
        if (k > k_floor) found.push_back(k);
      lo = hi;
      if (lo > 1e7 / L) throw NumericError("general_robin_spectrum: failed to bracket positive levels");
    }
    for (double k : found) {
      ExpSum psi = detail::normalize_exact(detail::left_solution_positive(box, gamma_minus, k), box);
      levels.push_back(detail::positive_level(box, k, psi));
    }
  }
  for (auto& lv : levels) lv.eigenfunction = detail::canonical_phase(lv.eigenfunction, box);
  detail::sort_and_index(levels, static_cast<std::size_t>(l_max) + 1);
  basis.levels = std::move(levels);
  return basis;
}

enum class Sector { plus, minus };

struct DoubledLevel {
  double energy = 0.0;
  Sector sector = Sector::plus;
  int level = 0;  // index into the source basis
};

// Spectrum of H(mu) = 1 H + mu P_-: every E_l once in the physical (plus)
// sector and shifted by mu in the minus sector.
inline std::vector<DoubledLevel> doubled_spectrum(const EnergyBasis& basis, double mu) {
  if (!(mu >= 0.0)) throw ParameterError("doubled_spectrum: mu must be >= 0");
  std::vector<DoubledLevel> out;
  for (const auto& lv : basis.levels) {
    out.push_back({lv.energy, Sector::plus, lv.index});
    out.push_back({lv.energy + mu, Sector::minus, lv.index});
  }
  std::stable_sort(out.begin(), out.end(), [](const DoubledLevel& a, const DoubledLevel& b) {
    if (a.energy != b.energy) return a.energy < b.energy;
    return a.sector == Sector::plus && b.sector == Sector::minus;
  });
  return out;
}

// Spectrum for any boundary condition, dispatching to the closed forms when
// the parameters match a special family.
inline EnergyBasis spectrum_for(const BoxConfig& box, Family family, const RobinBC& bc, int l_max) {
  switch (family) {
    case Family::dirichlet: return dirichlet_spectrum(box, l_max);
    case Family::neumann: return neumann_spectrum(box, l_max);
    case Family::mixed: return mixed_spectrum(box, l_max);
    case Family::symmetric: return symmetric_robin_spectrum(box, bc.plus.value(), l_max);
    case Family::antisymmetric: return antisymmetric_robin_spectrum(box, bc.plus.value(), l_max);
    case Family::general: return general_robin_spectrum(box, bc.plus, bc.minus, l_max);
  }
  throw ParameterError("spectrum_for: unknown family");
}

// Coefficient form of a state: psi = sum_l c_l psi_l in a shared basis.
struct Expansion {
  std::shared_ptr<const EnergyBasis> basis;
  std::vector<cplx> coeffs;

  ExpSum exp_sum() const {
    ExpSum out;
    for (std::size_t l = 0; l < coeffs.size(); ++l) {
      if (coeffs[l] == cplx{}) continue;
      ExpSum term = basis->levels.at(l).eigenfunction;
      term *= coeffs[l];
      out += term;
    }
    return out.simplified();
  }

  WaveFunction to_wavefunction() const { return WaveFunction::from_exp_sum(basis->config, exp_sum()); }

  double norm_squared() const {
    double s = 0.0;
    for (const auto& c : coeffs) s += std::norm(c);
    return s;
  }
};

// Coefficients <psi_l|f> for every level of the basis, by quadrature.
inline Expansion project(const WaveFunction& f, std::shared_ptr<const EnergyBasis> basis, const Quadrature& q) {
  Expansion e{basis, {}};
  e.coeffs.reserve(basis->size());
  for (std::size_t l = 0; l < basis->size(); ++l) e.coeffs.push_back(inner_product(basis->wavefunction(l), f, q));
  return e;
}

}  // namespace robinbox
