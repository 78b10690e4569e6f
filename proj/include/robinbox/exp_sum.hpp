#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "robinbox/box.hpp"

namespace robinbox {

// One term coeff * x^power * exp(rate * x).
struct ExpTerm {
  cplx coeff;
  cplx rate;
  int power = 0;
};

// ∫_{-h}^{h} x^p exp(s x) dx, exact up to rounding.
inline cplx exp_moment(int p, cplx s, double h) {
  const cplx z = s * h;
  if (std::abs(z) < 2.0) {
    // Only even total powers survive the symmetric interval.
    cplx sum{};
    cplx zj{1.0, 0.0};
    double fact = 1.0;
    for (int j = 0; j < 64; ++j) {
      if (j > 0) {
        zj *= z;
        fact *= static_cast<double>(j);
      }
      const int q = p + j;
      if (q % 2 == 0) sum += zj / fact * (2.0 / static_cast<double>(q + 1));
      if (j > 4 && std::abs(zj) / fact < 1e-19) break;
    }
    return sum * std::pow(h, p + 1);
  }
  const cplx ep = std::exp(s * h);
  const cplx em = std::exp(-s * h);
  cplx moment = (ep - em) / s;
  double hq = 1.0;
  for (int q = 1; q <= p; ++q) {
    hq *= h;
    const double sign = (q % 2 == 0) ? 1.0 : -1.0;
    moment = (hq * ep - sign * hq * em) / s - static_cast<double>(q) / s * moment;
  }
  return moment;
}

// Exponential polynomial sum_j c_j x^{p_j} exp(s_j x). Closed under
// differentiation, multiplication by x and conjugation, with exact integrals
// over the box; every free-particle eigenfunction has this form.
class ExpSum {
 public:
  ExpSum() = default;
  explicit ExpSum(std::vector<ExpTerm> terms) : terms_(std::move(terms)) {}

  static ExpSum exponential(cplx coeff, cplx rate, int power = 0) { return ExpSum({ExpTerm{coeff, rate, power}}); }

  const std::vector<ExpTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  cplx operator()(double x) const {
    cplx sum{};
    for (const auto& t : terms_) {
      cplx v = t.coeff * std::exp(t.rate * x);
      for (int i = 0; i < t.power; ++i) v *= x;
      sum += v;
    }
    return sum;
  }

  ExpSum derivative() const {
    std::vector<ExpTerm> out;
    out.reserve(2 * terms_.size());
    for (const auto& t : terms_) {
      if (t.rate != cplx{}) out.push_back({t.coeff * t.rate, t.rate, t.power});
      if (t.power > 0) out.push_back({t.coeff * static_cast<double>(t.power), t.rate, t.power - 1});
    }
    return ExpSum(std::move(out)).simplified();
  }

  ExpSum times_x() const {
    ExpSum r = *this;
    for (auto& t : r.terms_) ++t.power;
    return r;
  }

  // Pointwise complex conjugate for real x.
  ExpSum conjugated() const {
    ExpSum r = *this;
    for (auto& t : r.terms_) {
      t.coeff = std::conj(t.coeff);
      t.rate = std::conj(t.rate);
    }
    return r;
  }

  ExpSum& operator*=(cplx a) {
    for (auto& t : terms_) t.coeff *= a;
    return *this;
  }
  friend ExpSum operator*(cplx a, ExpSum f) { return f *= a; }

  ExpSum& operator+=(const ExpSum& o) {
    terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
    return *this;
  }
  friend ExpSum operator+(ExpSum a, const ExpSum& b) { return a += b; }

  // Merges terms with identical (rate, power) and drops exact zeros.
  ExpSum simplified() const {
    std::vector<ExpTerm> sorted = terms_;
    std::sort(sorted.begin(), sorted.end(), [](const ExpTerm& a, const ExpTerm& b) {
      if (a.power != b.power) return a.power < b.power;
      if (a.rate.real() != b.rate.real()) return a.rate.real() < b.rate.real();
      return a.rate.imag() < b.rate.imag();
    });
    std::vector<ExpTerm> out;
    for (const auto& t : sorted) {
      if (!out.empty() && out.back().power == t.power && out.back().rate == t.rate)
        out.back().coeff += t.coeff;
      else
        out.push_back(t);
    }
    std::erase_if(out, [](const ExpTerm& t) { return t.coeff == cplx{}; });
    return ExpSum(std::move(out));
  }

 private:
  std::vector<ExpTerm> terms_;
};

// ∫_{-L/2}^{L/2} f dx.
inline cplx integrate(const ExpSum& f, double L) {
  cplx sum{};
  for (const auto& t : f.terms()) sum += t.coeff * exp_moment(t.power, t.rate, 0.5 * L);
  return sum;
}

// ∫ conj(f) g dx over the box.
inline cplx exact_inner(const ExpSum& f, const ExpSum& g, double L) {
  const double h = 0.5 * L;
  cplx sum{};
  for (const auto& a : f.terms()) {
    const cplx ca = std::conj(a.coeff);
    const cplx ra = std::conj(a.rate);
    for (const auto& b : g.terms()) sum += ca * b.coeff * exp_moment(a.power + b.power, ra + b.rate, h);
  }
  return sum;
}

// ∫ exp(-i k x) f(x) dx over the box.
inline cplx fourier_integral(const ExpSum& f, double k, double L) {
  const double h = 0.5 * L;
  const cplx shift{0.0, -k};
  cplx sum{};
  for (const auto& t : f.terms()) sum += t.coeff * exp_moment(t.power, t.rate + shift, h);
  return sum;
}

}  // namespace robinbox
