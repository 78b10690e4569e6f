#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <vector>

#include "robinbox/box.hpp"
#include "robinbox/exp_sum.hpp"
#include "robinbox/quadrature.hpp"
#include "robinbox/wavefunction.hpp"

namespace robinbox {

// exp(2i theta) = (1+l+)(1-l-) / ((1-l+)(1+l-)), theta in [0, pi).
inline double theta_from_lambdas(cplx lambda_plus, cplx lambda_minus) {
  for (cplx l : {lambda_plus, lambda_minus}) {
    if (std::abs(l.real()) > 1e-15 * (1.0 + std::abs(l.imag())))
      throw ParameterError("theta_from_lambdas: lambda must be purely imaginary");
    if (l == cplx{1.0, 0.0} || l == cplx{-1.0, 0.0}) throw ParameterError("theta_from_lambdas: lambda = +-1 makes the phase undefined");
  }
  const cplx rhs = (1.0 + lambda_plus) * (1.0 - lambda_minus) / ((1.0 - lambda_plus) * (1.0 + lambda_minus));
  double theta = 0.5 * std::arg(rhs);
  if (theta < 0.0) theta += pi;
  if (theta >= pi) theta -= pi;
  return theta;
}

// Extension parameters lambda_+- = i b_+- of p_R, reduced to theta.
class MomentumExtension {
 public:
  MomentumExtension() = default;

  static MomentumExtension from_lambdas(double b_plus, double b_minus) {
    if (!std::isfinite(b_plus) || !std::isfinite(b_minus)) throw ParameterError("MomentumExtension: lambda must be finite");
    MomentumExtension e;
    e.b_plus_ = b_plus;
    e.b_minus_ = b_minus;
    e.theta_ = theta_from_lambdas({0.0, b_plus}, {0.0, b_minus});
    return e;
  }

  // lambda_+ = i tan(theta/2), lambda_- = -i tan(theta/2).
  static MomentumExtension from_theta(double theta) {
    if (!(theta >= 0.0 && theta < pi)) throw ParameterError("MomentumExtension: theta must lie in [0, pi)");
    MomentumExtension e;
    e.b_plus_ = std::tan(0.5 * theta);
    e.b_minus_ = -e.b_plus_;
    e.theta_ = theta;
    return e;
  }

  cplx lambda_plus() const { return {0.0, b_plus_}; }
  cplx lambda_minus() const { return {0.0, b_minus_}; }
  double theta() const { return theta_; }

  // k_n = pi n / L + theta / L.
  double wavenumber(int n, const BoxConfig& box) const { return (pi * n + theta_) / box.L(); }

 private:
  double b_plus_ = 0.0;
  double b_minus_ = 0.0;
  double theta_ = 0.0;
};

// Two-component eigenfunction of p_R,
// phi_k = (e^{ikx} + s e^{-ikx}, e^{ikx} - s e^{-ikx}) / (2 sqrt L).
struct MomentumEigenstate {
  int n = 0;
  double k = 0.0;
  cplx sigma{1.0, 0.0};
  double L = 1.0;

  cplx even(double x) const { return (std::exp(cplx{0.0, k * x}) + sigma * std::exp(cplx{0.0, -k * x})) / (2.0 * std::sqrt(L)); }
  cplx odd(double x) const { return (std::exp(cplx{0.0, k * x}) - sigma * std::exp(cplx{0.0, -k * x})) / (2.0 * std::sqrt(L)); }

  // |phi_o - lambda phi_e| at each wall.
  double boundary_residual(const MomentumExtension& ext) const {
    const double h = 0.5 * L;
    return std::max(std::abs(odd(h) - ext.lambda_plus() * even(h)), std::abs(odd(-h) - ext.lambda_minus() * even(-h)));
  }
};

inline MomentumEigenstate momentum_eigenfunction(const BoxConfig& box, const MomentumExtension& ext, int n) {
  MomentumEigenstate s;
  s.n = n;
  s.k = ext.wavenumber(n, box);
  s.L = box.L();
  s.sigma = std::exp(cplx{0.0, s.k * box.L()}) * (1.0 - ext.lambda_plus()) / (1.0 + ext.lambda_plus());
  return s;
}

// Same, addressed by the eigenvalue; k must sit on the quantized grid.
inline MomentumEigenstate momentum_eigenfunction_at(const BoxConfig& box, const MomentumExtension& ext, double k) {
  const double x = (k * box.L() - ext.theta()) / pi;
  const double n = std::round(x);
  if (std::abs(x - n) > 1e-9 * (1.0 + std::abs(n))) throw ParameterError("momentum_eigenfunction: k is not an eigenvalue of p_R");
  return momentum_eigenfunction(box, ext, static_cast<int>(n));
}

namespace detail {

// Rule fine enough for e^{-ikx} with |k| <= k_max.
inline std::shared_ptr<const Quadrature> oscillatory_rule(const BoxConfig& box, double k_max) {
  const auto panels = static_cast<std::size_t>(std::max(32.0, std::ceil(std::abs(k_max) * box.L() / 20.0)));
  return std::make_shared<const Quadrature>(box, panels, 64);
}

}  // namespace detail

// c_n = <phi_{k_n}|Psi> = (1/sqrt(2L)) ∫ exp(-i k_n x) Psi(x) dx for n in [n_min, n_max].
// Exact for exponential-polynomial states, quadrature otherwise.
inline std::vector<cplx> momentum_amplitudes(const WaveFunction& f, const MomentumExtension& ext, int n_min, int n_max) {
  if (n_max < n_min) throw ParameterError("momentum_amplitudes: empty n range");
  const BoxConfig& box = f.box();
  const double scale = 1.0 / std::sqrt(2.0 * box.L());
  std::vector<cplx> c;
  c.reserve(static_cast<std::size_t>(n_max - n_min + 1));
  if (const ExpSum* es = f.exp_sum()) {
    for (int n = n_min; n <= n_max; ++n) c.push_back(scale * fourier_integral(*es, ext.wavenumber(n, box), box.L()));
    return c;
  }
  const double k_max = std::max(std::abs(ext.wavenumber(n_min, box)), std::abs(ext.wavenumber(n_max, box)));
  auto q = detail::oscillatory_rule(box, k_max);
  std::vector<cplx> samples;
  samples.reserve(q->size());
  for (std::size_t i = 0; i < q->size(); ++i) samples.push_back(q->weights()[i] * f(q->nodes()[i]));
  for (int n = n_min; n <= n_max; ++n) {
    const double k = ext.wavenumber(n, box);
    cplx s{};
    for (std::size_t i = 0; i < q->size(); ++i) s += std::polar(1.0, -k * q->nodes()[i]) * samples[i];
    c.push_back(scale * s);
  }
  return c;
}

// |Psi~(k)|^2 with Psi~(k) = (2 pi)^{-1/2} ∫ exp(-ikx) Psi dx, the density of
// the unquantized momentum. P(n) = (pi/L) |Psi~(k_n)|^2.
inline double momentum_density(const WaveFunction& f, double k) {
  const BoxConfig& box = f.box();
  cplx ft;
  if (const ExpSum* es = f.exp_sum()) {
    ft = fourier_integral(*es, k, box.L());
  } else {
    auto q = detail::oscillatory_rule(box, k);
    ft = q->integrate([&](double x) { return std::polar(1.0, -k * x) * f(x); });
  }
  return std::norm(ft) / (2.0 * pi);
}

// Fit P ~ C |k|^{-s} (1 + a / k^2) for one of the four tail subsequences
// (sign of n times parity of n).
struct TailFit {
  bool valid = false;
  int sign = 1;
  int parity = 0;
  double k_last = 0.0;  // |k| of the last retained member
  double C = 0.0;
  double s = 0.0;
  double a = 0.0;
};

namespace detail {

// Euler-Maclaurin estimate of Σ_{j>=1} C (K + j h)^{-e}, e > 1.
inline double power_tail_sum(double C, double e, double K, double h) {
  const double f = C * std::pow(K, -e);
  const double d1 = -e * f / K;
  const double d3 = -e * (e + 1) * (e + 2) * f / (K * K * K);
  return C * std::pow(K, 1.0 - e) / ((e - 1.0) * h) - 0.5 * f - h * d1 / 12.0 + h * h * h * d3 / 720.0;
}

}  // namespace detail

struct MomentumDistribution {
  int n_min = 0;
  int n_max = 0;
  double L = 1.0;
  double theta = 0.0;
  std::vector<double> probabilities;  // P(n) for n = n_min..n_max
  std::vector<TailFit> tails;
  double tail_exponent = std::numeric_limits<double>::infinity();  // slowest decay power among the fits

  double k(int n) const { return (pi * n + theta) / L; }
  double probability(int n) const { return probabilities.at(static_cast<std::size_t>(n - n_min)); }

  double listed_mass() const {
    double s = 0.0;
    for (double p : probabilities) s += p;
    return s;
  }

  // Σ_{n beyond the range} |k|^p P(n) from the fitted tails, signed by sign(k)^p.
  // Infinite when a fitted tail decays too slowly.
  double tail_moment(int p) const {
    const double dk = 2.0 * pi / L;
    double total = 0.0;
    for (const auto& t : tails) {
      if (!t.valid) continue;
      const double e = t.s - p;  // summand ~ C k^{-e}
      if (e <= 1.0) return std::numeric_limits<double>::infinity();
      const double sum = detail::power_tail_sum(t.C, e, t.k_last, dk) + detail::power_tail_sum(t.C * t.a, e + 2.0, t.k_last, dk);
      total += (p % 2 == 1 && t.sign < 0 ? -1.0 : 1.0) * sum;
    }
    return total;
  }

  // Σ k^p P(n) over the listed range plus the fitted tails.
  double moment(int p) const {
    double s = 0.0;
    for (int n = n_min; n <= n_max; ++n) s += std::pow(k(n), p) * probability(n);
    return s + tail_moment(p);
  }

  double total_mass() const { return moment(0); }
};

namespace detail {

inline void fit_tails(MomentumDistribution& d) {
  constexpr double floor = 1e-26;
  for (int sign : {1, -1}) {
    const int edge = sign > 0 ? d.n_max : d.n_min;
    if (sign * edge < 20) continue;
    const int start = edge / 10;
    for (int parity : {0, 1}) {
      std::vector<double> xs;
      std::vector<double> ys;
      double k_last = 0.0;
      for (int n = start; sign > 0 ? n <= edge : n >= edge; n += sign) {
        if (((n % 2) + 2) % 2 != parity) continue;
        const double kk = std::abs(d.k(n));
        k_last = kk;
        const double p = d.probability(n);
        if (p <= floor) continue;
        xs.push_back(std::log(kk));
        ys.push_back(std::log(p));
      }
      TailFit t;
      t.sign = sign;
      t.parity = parity;
      t.k_last = k_last;
      if (xs.size() >= 8) {
        // Least squares on log P = c0 - s log k + a / k^2 via 3x3 normal equations.
        double A[3][3] = {};
        double r[3] = {};
        for (std::size_t i = 0; i < xs.size(); ++i) {
          const double phi[3] = {1.0, xs[i], std::exp(-2.0 * xs[i])};
          for (int u = 0; u < 3; ++u) {
            r[u] += phi[u] * ys[i];
            for (int v = 0; v < 3; ++v) A[u][v] += phi[u] * phi[v];
          }
        }
        for (int col = 0; col < 3; ++col) {
          int piv = col;
          for (int row = col + 1; row < 3; ++row)
            if (std::abs(A[row][col]) > std::abs(A[piv][col])) piv = row;
          std::swap(A[col], A[piv]);
          std::swap(r[col], r[piv]);
          for (int row = col + 1; row < 3; ++row) {
            const double m = A[row][col] / A[col][col];
            for (int v = col; v < 3; ++v) A[row][v] -= m * A[col][v];
            r[row] -= m * r[col];
          }
        }
        double c[3];
        for (int row = 2; row >= 0; --row) {
          double acc = r[row];
          for (int v = row + 1; v < 3; ++v) acc -= A[row][v] * c[v];
          c[row] = acc / A[row][row];
        }
        t.C = std::exp(c[0]);
        t.s = -c[1];
        t.a = c[2];
        t.valid = std::isfinite(t.s) && std::isfinite(t.C) && std::isfinite(t.a) && t.s > 0.0;
        if (t.valid) d.tail_exponent = std::min(d.tail_exponent, t.s);
      }
      d.tails.push_back(t);
    }
  }
}

}  // namespace detail

inline MomentumDistribution momentum_distribution(const WaveFunction& f, const MomentumExtension& ext, int n_min = -512, int n_max = 512) {
  MomentumDistribution d;
  d.n_min = n_min;
  d.n_max = n_max;
  d.L = f.box().L();
  d.theta = ext.theta();
  for (const cplx& c : momentum_amplitudes(f, ext, n_min, n_max)) d.probabilities.push_back(std::norm(c));
  detail::fit_tails(d);
  return d;
}

// <-i d/dx> = ∫ Psi* (-i Psi') dx.
inline cplx expval_minus_i_ddx(const WaveFunction& f, const Quadrature& q) {
  if (const ExpSum* es = f.exp_sum()) return cplx{0.0, -1.0} * exact_inner(*es, es->derivative(), f.box().L());
  require_same_box(f.box(), q.box(), "expval_minus_i_ddx");
  return q.integrate([&](double x) { return std::conj(f(x)) * cplx{0.0, -1.0} * derivative(f, 1, x); });
}

inline double expval_pR(const WaveFunction& f, const Quadrature& q) { return expval_minus_i_ddx(f, q).real(); }

// <p_I> = (|Psi(-L/2)|^2 - |Psi(L/2)|^2) / 2.
inline double expval_pI(const WaveFunction& f) {
  const BoxConfig& box = f.box();
  return 0.5 * (std::norm(f(box.left())) - std::norm(f(box.right())));
}

// |<-i d/dx> - (<p_R> + i <p_I>)| with the left side from a single quadrature.
inline double momentum_identity_residual(const WaveFunction& f, const Quadrature& q) {
  require_same_box(f.box(), q.box(), "momentum_identity_residual");
  const cplx d = q.integrate([&](double x) { return std::conj(f(x)) * cplx{0.0, -1.0} * derivative(f, 1, x); });
  return std::abs(d - cplx{expval_pR(f, q), expval_pI(f)});
}

struct PR2Result {
  bool infinite = false;
  double value = std::numeric_limits<double>::infinity();  // ∫|Psi'|^2 when finite
  double series = std::numeric_limits<double>::infinity();  // Σ k^2 P(n) with fitted tails
};

// <p_R^2>, infinite unless Psi vanishes at both walls.
inline PR2Result expval_pR_squared(const WaveFunction& f, const MomentumExtension& ext, const Quadrature& q, int n_cut = 512) {
  const BoxConfig& box = f.box();
  PR2Result r;
  const double threshold = 1e-10 / box.L();
  if (std::norm(f(box.left())) > threshold || std::norm(f(box.right())) > threshold) {
    r.infinite = true;
    return r;
  }
  if (const ExpSum* es = f.exp_sum()) {
    const ExpSum d = es->derivative();
    r.value = exact_inner(d, d, box.L()).real();
  } else {
    require_same_box(box, q.box(), "expval_pR_squared");
    r.value = q.integrate([&](double x) { return std::norm(derivative(f, 1, x)); });
  }
  r.series = momentum_distribution(f, ext, -n_cut, n_cut).moment(2);
  return r;
}

}  // namespace robinbox
