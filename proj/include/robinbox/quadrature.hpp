#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "robinbox/box.hpp"

namespace robinbox {

namespace detail {

// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_n,
// carried out in long double.
inline void gauss_legendre(std::size_t n, std::vector<double>& nodes, std::vector<double>& weights) {
  using ld = long double;
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  auto legendre = [n](ld x, ld& p, ld& dp) {
    ld p0 = 1.0L;
    ld p1 = x;
    for (std::size_t k = 2; k <= n; ++k) {
      const ld kk = static_cast<ld>(k);
      const ld p2 = ((2.0L * kk - 1.0L) * x * p1 - (kk - 1.0L) * p0) / kk;
      p0 = p1;
      p1 = p2;
    }
    p = p1;
    dp = static_cast<ld>(n) * (x * p1 - p0) / (x * x - 1.0L);
  };
  const std::size_t half = (n + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    ld x = std::cos(static_cast<ld>(pi) * (static_cast<ld>(i) + 0.75L) / (static_cast<ld>(n) + 0.5L));
    ld p = 0.0L;
    ld dp = 0.0L;
    for (int iter = 0; iter < 100; ++iter) {
      legendre(x, p, dp);
      const ld dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-19L) break;
    }
    legendre(x, p, dp);
    const ld w = 2.0L / ((1.0L - x * x) * dp * dp);
    nodes[i] = static_cast<double>(-x);
    nodes[n - 1 - i] = static_cast<double>(x);
    weights[i] = static_cast<double>(w);
    weights[n - 1 - i] = static_cast<double>(w);
  }
}

}  // namespace detail

// Composite Gauss-Legendre rule on [-L/2, L/2].
class Quadrature {
 public:
  static constexpr std::size_t default_panels = 32;
  static constexpr std::size_t default_nodes_per_panel = 64;

  explicit Quadrature(const BoxConfig& box, std::size_t panels = default_panels,
                      std::size_t nodes_per_panel = default_nodes_per_panel)
      : box_(box), panels_(panels), per_panel_(nodes_per_panel) {
    if (panels == 0 || nodes_per_panel == 0 || panels * nodes_per_panel < 256)
      throw ParameterError("Quadrature: need at least 256 nodes in total");
    std::vector<double> ref_x;
    std::vector<double> ref_w;
    detail::gauss_legendre(nodes_per_panel, ref_x, ref_w);
    ref_nodes_ = ref_x;
    const double width = box.L() / static_cast<double>(panels);
    nodes_.reserve(panels * nodes_per_panel);
    weights_.reserve(panels * nodes_per_panel);
    for (std::size_t p = 0; p < panels; ++p) {
      const double a = box.left() + width * static_cast<double>(p);
      const double mid = a + 0.5 * width;
      for (std::size_t j = 0; j < nodes_per_panel; ++j) {
        nodes_.push_back(mid + 0.5 * width * ref_x[j]);
        weights_.push_back(0.5 * width * ref_w[j]);
      }
    }
    // Barycentric weights for Lagrange interpolation through one panel's nodes.
    bary_.resize(nodes_per_panel);
    for (std::size_t j = 0; j < nodes_per_panel; ++j) {
      const double s = (j % 2 == 0) ? 1.0 : -1.0;
      bary_[j] = s * std::sqrt((1.0 - ref_x[j] * ref_x[j]) * ref_w[j]);
    }
  }

  const BoxConfig& box() const { return box_; }
  std::size_t size() const { return nodes_.size(); }
  std::size_t panels() const { return panels_; }
  std::size_t nodes_per_panel() const { return per_panel_; }
  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }

  template <class F>
  auto integrate(F&& f) const -> decltype(f(0.0)) {
    using R = decltype(f(0.0));
    R sum{};
    for (std::size_t p = 0; p < panels_; ++p) {
      R part{};
      for (std::size_t i = p * per_panel_; i < (p + 1) * per_panel_; ++i) part += weights_[i] * f(nodes_[i]);
      sum += part;
    }
    return sum;
  }

  // Interpolates panel-wise samples (one value per node) at x.
  cplx interpolate(std::span<const cplx> samples, double x) const {
    const double width = box_.L() / static_cast<double>(panels_);
    auto panel = static_cast<std::ptrdiff_t>(std::floor((x - box_.left()) / width));
    if (panel < 0) panel = 0;
    if (panel >= static_cast<std::ptrdiff_t>(panels_)) panel = static_cast<std::ptrdiff_t>(panels_) - 1;
    const double mid = box_.left() + width * (static_cast<double>(panel) + 0.5);
    const double t = (x - mid) / (0.5 * width);
    const std::size_t base = static_cast<std::size_t>(panel) * per_panel_;
    cplx num{};
    double den = 0.0;
    for (std::size_t j = 0; j < per_panel_; ++j) {
      const double d = t - ref_nodes_[j];
      if (d == 0.0) return samples[base + j];
      const double c = bary_[j] / d;
      num += c * samples[base + j];
      den += c;
    }
    return num / den;
  }

 private:
  BoxConfig box_;
  std::size_t panels_;
  std::size_t per_panel_;
  std::vector<double> ref_nodes_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
  std::vector<double> bary_;
};

}  // namespace robinbox
