#pragma once

#include <cmath>
#include <limits>

#include "robinbox/box.hpp"
#include "robinbox/errors.hpp"
#include "robinbox/exp_sum.hpp"
#include "robinbox/momentum.hpp"
#include "robinbox/observables.hpp"
#include "robinbox/quadrature.hpp"
#include "robinbox/spectrum.hpp"
#include "robinbox/states.hpp"
#include "robinbox/wavefunction.hpp"

namespace robinbox {

namespace detail {

// ∫ x Psi* (-i Psi') dx.
inline cplx x_minus_i_ddx(const WaveFunction& f, const Quadrature& q) {
  if (const ExpSum* es = f.exp_sum()) return cplx{0.0, -1.0} * exact_inner(es->times_x(), es->derivative(), f.box().L());
  return q.integrate([&](double x) { return x * std::conj(f(x)) * cplx{0.0, -1.0} * derivative(f, 1, x); });
}

// ‖(-i d/dx - beta) Psi‖^2, the centered form of ∫|Psi'|^2 - |beta|^2 when beta = <-i d/dx>.
inline double centered_derivative_norm_squared(const WaveFunction& f, cplx beta, const Quadrature& q) {
  if (const ExpSum* es = f.exp_sum()) {
    ExpSum d = es->derivative();
    d *= cplx{0.0, -1.0};
    ExpSum shift = *es;
    shift *= -beta;
    d += shift;
    d = d.simplified();
    return exact_inner(d, d, f.box().L()).real();
  }
  return q.integrate([&](double x) { return std::norm(cplx{0.0, -1.0} * derivative(f, 1, x) - beta * f(x)); });
}

// <-d^2/dx^2> = -∫ Psi* Psi'' dx.
inline double minus_laplacian(const WaveFunction& f, const Quadrature& q) {
  if (const ExpSum* es = f.exp_sum()) return -exact_inner(*es, es->derivative().derivative(), f.box().L()).real();
  return -q.integrate([&](double x) { return std::real(std::conj(f(x)) * derivative(f, 2, x)); });
}

inline double gamma_rho(const RobinParameter& g, double rho) { return g.is_dirichlet() ? 0.0 : g.value() * rho; }

}  // namespace detail

// <p_R x> on a physical state through the spectral chain
//   <x(-i d/dx)> = i + <p_R x> - (i/2)(L/2)(|Psi(L/2)|^2 + |Psi(-L/2)|^2).
inline cplx expval_pR_x(const WaveFunction& f, const Quadrature& q) {
  const BoxConfig& box = f.box();
  const double rho_sum = std::norm(f(box.right())) + std::norm(f(box.left()));
  return detail::x_minus_i_ddx(f, q) - cplx{0.0, 1.0} + cplx{0.0, 0.25 * box.L() * rho_sum};
}

// <{x, p_R}> = <x p_R> + <p_R x> with <x p_R> = <p_R x>*.
inline cplx anticommutator_x_pR(const WaveFunction& f, const Quadrature& q) {
  const cplx P = expval_pR_x(f, q);
  return std::conj(P) + P;
}

// <[x, p_R]> = <x p_R> - <p_R x>; equals i on physical states.
inline cplx commutator_expectation_x_pR(const WaveFunction& f, const Quadrature& q) {
  const cplx P = expval_pR_x(f, q);
  return std::conj(P) - P;
}

// <[x, p_I]> with p_I the pair of wall deltas pulled in by eps; both orderings
// sample x Psi at the same points.
inline cplx commutator_x_pI(const WaveFunction& f, double eps_fraction = 1e-12) {
  const BoxConfig& box = f.box();
  const double eps = eps_fraction * box.L();
  const double xl = box.left() + eps;
  const double xr = box.right() - eps;
  // The physical state sits in both components with weight 1/sqrt(2); p_I acts on the first.
  auto x_pI = [&](double x, double sign) { return 0.5 * sign * std::conj(f(x)) * (x * f(x)); };
  auto pI_x = [&](double x, double sign) { return 0.5 * sign * (x * std::conj(f(x))) * f(x); };
  return (x_pI(xl, 1.0) + x_pI(xr, -1.0)) - (pI_x(xl, 1.0) + pI_x(xr, -1.0));
}

struct GeneralizedUncertainty {
  double delta_a = 0.0;  // Δx
  double delta_b = 0.0;  // Δ(-i d/dx)
  double lhs = 0.0;      // ΔA ΔB
  double rhs = 0.0;      // |<A†B> - <A†><B>|
  double root_sum = 0.0;
  cplx a_dag_b{};
  cplx mean_b{};
};

// A = x, B = -i d/dx. With a boundary condition, <B†B> comes from
// 2m<T> - (gamma_+ rho_+ + gamma_- rho_-); without one, (ΔB)^2 = ‖(B - <B>) Psi‖^2,
// which stays accurate near saturation.
inline GeneralizedUncertainty generalized_uncertainty(const WaveFunction& f, const Quadrature& q, const RobinBC* bc = nullptr) {
  const BoxConfig& box = f.box();
  const Observables obs = observables_of(f, q);
  GeneralizedUncertainty g;
  g.mean_b = expval_minus_i_ddx(f, q);
  double var_b;
  if (bc) {
    const double btb = detail::minus_laplacian(f, q) - detail::gamma_rho(bc->plus, std::norm(f(box.right()))) -
                       detail::gamma_rho(bc->minus, std::norm(f(box.left())));
    var_b = btb - std::norm(g.mean_b);
  } else {
    var_b = detail::centered_derivative_norm_squared(f, g.mean_b, q);
  }
  g.delta_a = std::sqrt(std::max(obs.var_x, 0.0));
  g.delta_b = std::sqrt(std::max(var_b, 0.0));
  g.lhs = g.delta_a * g.delta_b;
  g.a_dag_b = detail::x_minus_i_ddx(f, q);
  const cplx z = g.a_dag_b - obs.mean_x * g.mean_b;
  g.rhs = std::abs(z);
  // <B†A> = <A†B>*, <B†> = <B>*.
  const cplx b_dag_a = std::conj(g.a_dag_b);
  const cplx s1 = g.a_dag_b + b_dag_a - obs.mean_x * g.mean_b - std::conj(g.mean_b) * obs.mean_x;
  const cplx s2 = g.a_dag_b - b_dag_a - obs.mean_x * g.mean_b + std::conj(g.mean_b) * obs.mean_x;
  g.root_sum = 0.5 * std::sqrt(std::max((s1 * s1 - s2 * s2).real(), 0.0));
  return g;
}

struct UncertaintyReport {
  double delta_x = 0.0;
  double two_m_T = 0.0;
  double pR = 0.0;
  double pR2_term = 0.0;
  double anticomm = 0.0;
  double anticomm_imag = 0.0;
  double cross_term = 0.0;
  double boundary_block = 0.0;  // 1 + (<x> - L/2) rho_+ - (<x> + L/2) rho_-
  double boundary_term = 0.0;   // boundary_block^2 / (4 Δx^2)
  double gamma_terms = 0.0;
  double pI_sq_term = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
  double slack = 0.0;
};

// Kinetic-energy form of the x / (-i d/dx) uncertainty relation:
//   2m<T> >= <p_R>^2 + (<{x,p_R}>/2 - <p_R><x>)^2 / Δx^2 + boundary_block^2 / (4Δx^2)
//            + gamma_+ rho_+ + gamma_- rho_- + (rho_+ - rho_-)^2 / 4.
inline UncertaintyReport kinetic_inequality_report(const WaveFunction& f, const RobinBC& bc, const Quadrature& q) {
  const BoxConfig& box = f.box();
  const double L = box.L();
  const WallResidual wr = robin_residual(f, bc);
  const double scale = (1.0 / L + std::max(bc.plus.is_dirichlet() ? 0.0 : std::abs(bc.plus.value()),
                                           bc.minus.is_dirichlet() ? 0.0 : std::abs(bc.minus.value()))) /
                       std::sqrt(L);
  if (std::max(wr.left, wr.right) > 1e-6 * scale)
    throw PreconditionError("kinetic_inequality_report: state does not satisfy the boundary condition");
  const Observables obs = observables_of(f, q);
  if (!(obs.var_x > 0.0)) throw PreconditionError("kinetic_inequality_report: degenerate position spread");
  const double rp = std::norm(f(box.right()));
  const double rm = std::norm(f(box.left()));
  UncertaintyReport r;
  r.delta_x = std::sqrt(obs.var_x);
  r.two_m_T = detail::minus_laplacian(f, q);
  r.pR = expval_pR(f, q);
  r.pR2_term = r.pR * r.pR;
  const cplx ac = anticommutator_x_pR(f, q);
  r.anticomm = ac.real();
  r.anticomm_imag = ac.imag();
  const double c = 0.5 * r.anticomm - r.pR * obs.mean_x;
  r.cross_term = c * c / obs.var_x;
  r.boundary_block = 1.0 + (obs.mean_x - 0.5 * L) * rp - (obs.mean_x + 0.5 * L) * rm;
  r.boundary_term = r.boundary_block * r.boundary_block / (4.0 * obs.var_x);
  r.gamma_terms = detail::gamma_rho(bc.plus, rp) + detail::gamma_rho(bc.minus, rm);
  r.pI_sq_term = 0.25 * (rp - rm) * (rp - rm);
  r.lhs = r.two_m_T;
  r.rhs = r.pR2_term + r.cross_term + r.boundary_term + r.gamma_terms + r.pI_sq_term;
  r.slack = r.lhs - r.rhs;
  r.holds = r.slack >= -1e-10;
  return r;
}

// Robin parameters obeyed by exp(-(x + a x^2/2)/c) (a, c real): psi'/psi = -(1 + a x)/c.
inline RobinBC saturating_bc(const BoxConfig& box, double a, double c) {
  const double h = 0.5 * box.L();
  return RobinBC{(1.0 + a * h) / c, -(1.0 - a * h) / c};
}

struct EigenResidual {
  double energy = 0.0;    // <H>
  double residual = 0.0;  // ‖(H - <H>) psi‖
};

// psi_S with a real and b = i c against H = -d^2/2m + (a x + 1)^2 / (2 m c^2).
inline EigenResidual saturating_eigen_residual(const BoxConfig& box, double a, double c, const Quadrature& q) {
  if (c == 0.0 || !std::isfinite(c) || !std::isfinite(a)) throw ParameterError("saturating_eigen_residual: need finite a and nonzero c");
  const WaveFunction psi = saturating_state(box, cplx{a, 0.0}, cplx{0.0, c});
  const double m = box.m();
  auto h_psi = [&](double x) {
    const double v = (a * x + 1.0) * (a * x + 1.0) / (2.0 * m * c * c);
    return -derivative(psi, 2, x) / (2.0 * m) + v * psi(x);
  };
  EigenResidual r;
  r.energy = q.integrate([&](double x) { return std::real(std::conj(psi(x)) * h_psi(x)); });
  r.residual = std::sqrt(q.integrate([&](double x) { return std::norm(h_psi(x) - r.energy * psi(x)); }));
  return r;
}

}  // namespace robinbox
