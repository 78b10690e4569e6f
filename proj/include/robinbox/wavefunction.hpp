#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "robinbox/box.hpp"
#include "robinbox/exp_sum.hpp"
#include "robinbox/quadrature.hpp"

namespace robinbox {

// A single-component physical state on the box. The doubled-space embedding
// (Psi/sqrt2, Psi/sqrt2) is implicit and only appears inside momentum formulas.
//
// Closure form carries a callable plus optional analytic derivatives. States
// built from an ExpSum also keep the exact form, which unlocks closed-form
// integrals downstream.
class WaveFunction {
 public:
  using Fn = std::function<cplx(double)>;

  WaveFunction() = default;

  static WaveFunction from_closure(const BoxConfig& box, Fn value, Fn first = {}, Fn second = {}) {
    WaveFunction w;
    w.box_ = box;
    w.value_ = std::move(value);
    w.first_ = std::move(first);
    w.second_ = std::move(second);
    return w;
  }

  static WaveFunction from_exp_sum(const BoxConfig& box, ExpSum f) {
    auto shared = std::make_shared<const ExpSum>(f.simplified());
    auto d1 = std::make_shared<const ExpSum>(shared->derivative());
    auto d2 = std::make_shared<const ExpSum>(d1->derivative());
    WaveFunction w;
    w.box_ = box;
    w.value_ = [shared](double x) { return (*shared)(x); };
    w.first_ = [d1](double x) { return (*d1)(x); };
    w.second_ = [d2](double x) { return (*d2)(x); };
    w.exact_ = shared;
    return w;
  }

  const BoxConfig& box() const { return box_; }
  bool valid() const { return static_cast<bool>(value_); }

  cplx operator()(double x) const { return value_(x); }

  bool has_analytic_derivative(int order) const { return order == 1 ? static_cast<bool>(first_) : static_cast<bool>(second_); }
  cplx analytic_derivative(int order, double x) const { return order == 1 ? first_(x) : second_(x); }

  // Exact exponential-polynomial form, when known.
  const ExpSum* exp_sum() const { return exact_.get(); }

  WaveFunction scaled(cplx a) const {
    if (exact_) {
      ExpSum f = *exact_;
      f *= a;
      return from_exp_sum(box_, std::move(f));
    }
    Fn v = [f = value_, a](double x) { return a * f(x); };
    Fn d1 = first_ ? Fn([f = first_, a](double x) { return a * f(x); }) : Fn{};
    Fn d2 = second_ ? Fn([f = second_, a](double x) { return a * f(x); }) : Fn{};
    return from_closure(box_, std::move(v), std::move(d1), std::move(d2));
  }

 private:
  BoxConfig box_;
  Fn value_;
  Fn first_;
  Fn second_;
  std::shared_ptr<const ExpSum> exact_;
};

// <f|g> = ∫ conj(f) g dx by quadrature.
inline cplx inner_product(const WaveFunction& f, const WaveFunction& g, const Quadrature& q) {
  require_same_box(f.box(), g.box(), "inner_product");
  require_same_box(f.box(), q.box(), "inner_product");
  return q.integrate([&](double x) { return std::conj(f(x)) * g(x); });
}

inline double norm_squared(const WaveFunction& f, const Quadrature& q) { return inner_product(f, f, q).real(); }

inline WaveFunction normalized(const WaveFunction& f, const Quadrature& q) {
  const double n2 = f.exp_sum() ? exact_inner(*f.exp_sum(), *f.exp_sum(), f.box().L()).real() : norm_squared(f, q);
  if (!(n2 > 0.0) || !std::isfinite(n2)) throw NumericError("normalized: state has zero or non-finite norm");
  return f.scaled(1.0 / std::sqrt(n2));
}

namespace detail {

inline cplx fd_first(const WaveFunction& f, double x, double h) {
  return (-f(x + 2 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2 * h)) / (12.0 * h);
}
inline cplx fd_second(const WaveFunction& f, double x, double h) {
  return (-f(x + 2 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h) - f(x - 2 * h)) / (12.0 * h * h);
}
// One-sided stencils; a negative h looks to the left.
inline cplx fd_first_one_sided(const WaveFunction& f, double x, double h) {
  return (-25.0 * f(x) + 48.0 * f(x + h) - 36.0 * f(x + 2 * h) + 16.0 * f(x + 3 * h) - 3.0 * f(x + 4 * h)) / (12.0 * h);
}
inline cplx fd_second_one_sided(const WaveFunction& f, double x, double h) {
  return (35.0 * f(x) - 104.0 * f(x + h) + 114.0 * f(x + 2 * h) - 56.0 * f(x + 3 * h) + 11.0 * f(x + 4 * h)) / (12.0 * h * h);
}

}  // namespace detail

// d^order f / dx^order at x. Analytic closures are used when present;
// otherwise a 5-point stencil with h = 1e-5 L and one Richardson level
// (one-sided within 2h of the walls).
inline cplx derivative(const WaveFunction& f, int order, double x) {
  if (order != 1 && order != 2) throw ParameterError("derivative: order must be 1 or 2");
  const BoxConfig& box = f.box();
  if (!box.contains(x, 1e-12)) throw DomainError("derivative: x outside the box");
  if (f.has_analytic_derivative(order)) return f.analytic_derivative(order, x);

  const double h = 1e-5 * box.L();
  const bool central = x - 2 * h >= box.left() && x + 2 * h <= box.right();
  if (central) {
    const cplx coarse = order == 1 ? detail::fd_first(f, x, h) : detail::fd_second(f, x, h);
    const cplx fine = order == 1 ? detail::fd_first(f, x, h / 2) : detail::fd_second(f, x, h / 2);
    return (16.0 * fine - coarse) / 15.0;
  }
  const double step = (x - 2 * h < box.left()) ? h : -h;
  if (order == 1) {
    const cplx coarse = detail::fd_first_one_sided(f, x, step);
    const cplx fine = detail::fd_first_one_sided(f, x, step / 2);
    return (16.0 * fine - coarse) / 15.0;
  }
  const cplx coarse = detail::fd_second_one_sided(f, x, step);
  const cplx fine = detail::fd_second_one_sided(f, x, step / 2);
  return (8.0 * fine - coarse) / 7.0;
}

// Sampled form: values at the nodes of a quadrature rule, interpolated
// panel-wise when evaluated elsewhere.
class SampledWave {
 public:
  SampledWave(std::shared_ptr<const Quadrature> q, std::vector<cplx> values) : q_(std::move(q)), values_(std::move(values)) {
    if (values_.size() != q_->size()) throw ParameterError("SampledWave: one sample per quadrature node required");
  }

  static SampledWave sample(const WaveFunction& f, std::shared_ptr<const Quadrature> q) {
    require_same_box(f.box(), q->box(), "SampledWave::sample");
    std::vector<cplx> v;
    v.reserve(q->size());
    for (double x : q->nodes()) v.push_back(f(x));
    return SampledWave(std::move(q), std::move(v));
  }

  const Quadrature& grid() const { return *q_; }
  std::span<const cplx> values() const { return values_; }

  double norm_squared() const {
    double s = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i) s += q_->weights()[i] * std::norm(values_[i]);
    return s;
  }

  WaveFunction to_wavefunction() const {
    auto q = q_;
    auto v = std::make_shared<const std::vector<cplx>>(values_);
    return WaveFunction::from_closure(q->box(), [q, v](double x) { return q->interpolate(*v, x); });
  }

 private:
  std::shared_ptr<const Quadrature> q_;
  std::vector<cplx> values_;
};

}  // namespace robinbox
