#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "robinbox/errors.hpp"

namespace robinbox::roots {

// Bisection on [a, b] given the sign of f just right of a (which may differ
// from f(a) when f(a) is an exact zero we want to skip). Stops at relative
// width rel_tol.
template <class F>
double bisect(F&& f, double a, double b, int sign_left, double rel_tol = 1e-13) {
  const double fb = f(b);
  if (sign_left == 0 || fb == 0.0) return fb == 0.0 ? b : a;
  if ((fb > 0) == (sign_left > 0))
    throw NumericError("bisect: no sign change on [" + std::to_string(a) + ", " + std::to_string(b) + "]");
  for (int i = 0; i < 400; ++i) {
    const double mid = 0.5 * (a + b);
    if (b - a <= rel_tol * std::abs(mid) || mid == a || mid == b) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0) == (sign_left > 0))
      a = mid;
    else
      b = mid;
  }
  return 0.5 * (a + b);
}

// A few Newton steps, rejected if they leave [a, b] or do not reduce |f|.
template <class F, class DF>
double newton_polish(F&& f, DF&& df, double x, double a, double b, int steps = 3) {
  double fx = f(x);
  for (int i = 0; i < steps; ++i) {
    const double d = df(x);
    if (d == 0.0 || !std::isfinite(d)) break;
    const double next = x - fx / d;
    if (!(next >= a && next <= b)) break;
    const double fn = f(next);
    if (!(std::abs(fn) <= std::abs(fx))) break;
    x = next;
    fx = fn;
    if (fx == 0.0) break;
  }
  return x;
}

// All roots of f on (lo, hi] found by sampling with step h, bisecting sign
// changes, and checking local minima of |f| for a hidden pair of roots.
template <class F>
std::vector<double> scan(F&& f, double lo, double hi, double h, double rel_tol = 1e-14) {
  std::vector<double> roots;
  std::vector<double> xs;
  std::vector<double> fs;
  for (double x = lo + h; x <= hi + 0.5 * h; x += h) {
    xs.push_back(x);
    fs.push_back(f(x));
  }
  auto sgn = [](double v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); };
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    if (fs[i] == 0.0) {
      roots.push_back(xs[i]);
      continue;
    }
    if (sgn(fs[i]) != sgn(fs[i + 1]) && fs[i + 1] != 0.0) {
      roots.push_back(bisect(f, xs[i], xs[i + 1], sgn(fs[i]), rel_tol));
      continue;
    }
    // Same sign at both ends: look for a dip through zero between xs[i-1..i+1].
    if (i > 0 && sgn(fs[i - 1]) == sgn(fs[i]) && sgn(fs[i]) == sgn(fs[i + 1]) &&
        std::abs(fs[i]) < std::abs(fs[i - 1]) && std::abs(fs[i]) <= std::abs(fs[i + 1])) {
      const int s = sgn(fs[i]);
      auto g = [&](double x) { return s * f(x); };
      double a = xs[i - 1];
      double b = xs[i + 1];
      const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
      double c = b - gr * (b - a);
      double d = a + gr * (b - a);
      double gc = g(c);
      double gd = g(d);
      for (int it = 0; it < 200 && b - a > 1e-15 * std::abs(b); ++it) {
        if (gc < gd) {
          b = d;
          d = c;
          gd = gc;
          c = b - gr * (b - a);
          gc = g(c);
        } else {
          a = c;
          c = d;
          gc = gd;
          d = a + gr * (b - a);
          gd = g(d);
        }
        if (gc < 0 || gd < 0) break;
      }
      const double xm = gc < gd ? c : d;
      if (g(xm) < 0) {
        roots.push_back(bisect(f, xs[i - 1], xm, s, rel_tol));
        roots.push_back(bisect(f, xm, xs[i + 1], -s, rel_tol));
      }
    }
  }
  if (!fs.empty() && fs.back() == 0.0) roots.push_back(xs.back());
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  return roots;
}

}  // namespace robinbox::roots
