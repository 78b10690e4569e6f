#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "robinbox/exp_sum.hpp"
#include "robinbox/observables.hpp"
#include "robinbox/quadrature.hpp"
#include "robinbox/wavefunction.hpp"

using namespace robinbox;

namespace {

WaveFunction closure(const BoxConfig& box, std::function<cplx(double)> f) { return WaveFunction::from_closure(box, std::move(f)); }

// exp(-gamma x) sqrt(gamma / sinh(gamma L))
WaveFunction decaying_state(const BoxConfig& box, double gamma) {
  const double n = std::sqrt(gamma / std::sinh(gamma * box.L()));
  return WaveFunction::from_exp_sum(box, ExpSum::exponential(n, -gamma));
}

}  // namespace

TEST(BoxConfig, RejectsNonPositive) {
  EXPECT_THROW(BoxConfig(0.0, 1.0), ParameterError);
  EXPECT_THROW(BoxConfig(1.0, -2.0), ParameterError);
  EXPECT_THROW(BoxConfig(NAN, 1.0), ParameterError);
  EXPECT_NEAR(BoxConfig(2.0, 3.0).revival_time(), 4.0 * 2.0 * 9.0 / pi, 1e-14);
}

TEST(Quadrature, IntegratesConstantAndPolynomials) {
  for (double L : {0.3, 1.0, 7.5}) {
    Quadrature q(BoxConfig(1.0, L));
    EXPECT_EQ(q.size(), 32u * 64u);
    EXPECT_NEAR(q.integrate([](double) { return 1.0; }), L, 1e-14 * L);
    // ∫ x^6 over [-L/2, L/2] = 2 (L/2)^7 / 7
    EXPECT_NEAR(q.integrate([](double x) { return std::pow(x, 6); }), 2.0 * std::pow(L / 2, 7) / 7.0, 1e-14 * std::pow(L, 7));
  }
  EXPECT_THROW(Quadrature(BoxConfig(1.0, 1.0), 2, 64), ParameterError);
}

TEST(Quadrature, ResolvesHighModes) {
  const BoxConfig box(1.0, 1.0);
  Quadrature q(box);
  const double k = 500 * pi;
  EXPECT_NEAR(q.integrate([&](double x) { return 2.0 * std::pow(std::cos(k * x), 2); }), 1.0, 1e-12);
}

TEST(Quadrature, InterpolationIsSpectrallyAccurate) {
  const BoxConfig box(1.0, 2.0);
  auto q = std::make_shared<const Quadrature>(box);
  auto f = closure(box, [](double x) { return std::exp(cplx{0.0, 7.0} * x) * std::exp(-x * x); });
  auto s = SampledWave::sample(f, q).to_wavefunction();
  for (double x : {-1.0, -0.731, 0.0, 0.25, 0.999, 1.0}) EXPECT_LT(std::abs(s(x) - f(x)), 1e-12);
}

TEST(InnerProduct, TrivialCases) {
  const BoxConfig box(1.0, 1.0);
  Quadrature q(box);
  auto c = closure(box, [](double) { return cplx{1.0, 0.0}; });
  EXPECT_NEAR(inner_product(c, c, q).real(), 1.0, 1e-14);
  auto f = closure(box, [](double x) { return std::sqrt(2.0) * std::cos(pi * x); });
  auto g = closure(box, [](double x) { return std::sqrt(2.0) * std::sin(2 * pi * x); });
  EXPECT_NEAR(std::abs(inner_product(f, g, q)), 0.0, 1e-15);
  EXPECT_NEAR(inner_product(f, f, q).real(), 1.0, 1e-12);
}

TEST(InnerProduct, ConjugateSymmetric) {
  const BoxConfig box(1.3, 2.1);
  Quadrature q(box);
  auto f = closure(box, [](double x) { return cplx{std::cos(3 * x), x * x}; });
  auto g = closure(box, [](double x) { return std::exp(cplx{0.2, 5.0} * x); });
  EXPECT_LT(std::abs(inner_product(f, g, q) - std::conj(inner_product(g, f, q))), 1e-14);
}

TEST(InnerProduct, MismatchedBoxesThrow) {
  Quadrature q(BoxConfig(1.0, 1.0));
  auto f = closure(BoxConfig(1.0, 1.0), [](double) { return cplx{1.0}; });
  auto g = closure(BoxConfig(1.0, 2.0), [](double) { return cplx{1.0}; });
  EXPECT_THROW(inner_product(f, g, q), ConfigurationError);
}

TEST(ExpSum, ExactIntegralsMatchQuadrature) {
  const BoxConfig box(1.0, 1.7);
  Quadrature q(box);
  ExpSum f({{cplx{0.3, -1.0}, cplx{0.0, 9.0}, 0}, {cplx{1.2, 0.0}, cplx{-2.0, 0.0}, 1}, {cplx{0.0, 0.7}, cplx{0.1, -3.0}, 2}});
  ExpSum g({{cplx{1.0, 0.0}, cplx{1e-6, 0.0}, 0}, {cplx{-0.4, 0.2}, cplx{0.0, 40.0}, 3}});
  auto wf = WaveFunction::from_exp_sum(box, f);
  auto wg = WaveFunction::from_exp_sum(box, g);
  EXPECT_LT(std::abs(exact_inner(f, g, box.L()) - inner_product(wf, wg, q)), 1e-13);
  EXPECT_LT(std::abs(integrate(f, box.L()) - q.integrate([&](double x) { return f(x); })), 1e-13);
  const double k = 12.3;
  EXPECT_LT(std::abs(fourier_integral(f, k, box.L()) - q.integrate([&](double x) { return std::exp(cplx{0.0, -k * x}) * f(x); })),
            1e-13);
}

TEST(ExpSum, DerivativeMatchesDifferences) {
  ExpSum f({{cplx{0.3, -1.0}, cplx{0.0, 2.0}, 2}, {cplx{1.2, 0.0}, cplx{-0.5, 0.1}, 1}});
  const ExpSum d = f.derivative();
  for (double x : {-0.4, 0.1, 0.5}) {
    const double h = 1e-5;
    const cplx fd = (f(x + h) - f(x - h)) / (2 * h);
    EXPECT_LT(std::abs(d(x) - fd), 1e-8);
  }
}

TEST(Derivative, AnalyticAndFiniteDifferencePathsAgree) {
  const BoxConfig box(1.0, 1.0);
  const double gamma = 1.0;
  auto analytic = decaying_state(box, gamma);
  auto plain = closure(box, [analytic](double x) { return analytic(x); });
  EXPECT_NEAR(analytic.analytic_derivative(1, 0.0).real(), -gamma * std::sqrt(gamma / std::sinh(gamma)), 1e-15);
  for (double x : {-0.5, -0.49999, -0.3, 0.0, 0.2, 0.49999, 0.5}) {
    EXPECT_LT(std::abs(derivative(plain, 1, x) - derivative(analytic, 1, x)), 1e-8) << x;
    // Second differences lose ~eps/h^2 to rounding.
    EXPECT_LT(std::abs(derivative(plain, 2, x) - derivative(analytic, 2, x)), 2e-4) << x;
  }
}

TEST(Derivative, ElementaryCases) {
  const BoxConfig box(1.0, 2.0);
  const int l = 3;
  const double k = pi * (l + 1) / box.L();
  const double amp = std::sqrt(2.0 / box.L());
  auto f = WaveFunction::from_closure(
      box, [=](double x) { return cplx{amp * std::sin(k * x)}; }, [=](double x) { return cplx{amp * k * std::cos(k * x)}; });
  EXPECT_NEAR(derivative(f, 1, 0.0).real(), amp * k, 1e-14);
  auto c = closure(box, [](double) { return cplx{1.0 / std::sqrt(2.0)}; });
  EXPECT_LT(std::abs(derivative(c, 1, 0.3)), 1e-10);
  EXPECT_THROW(derivative(c, 1, 1.2), DomainError);
  EXPECT_THROW(derivative(c, 3, 0.0), ParameterError);
}

TEST(Observables, DirichletGroundState) {
  const BoxConfig box(1.0, 1.0);
  Quadrature q(box);
  auto f = closure(box, [](double x) { return std::sqrt(2.0) * std::cos(pi * x); });
  auto o = observables_of(f, q);
  EXPECT_NEAR(o.mean_x, 0.0, 1e-15);
  EXPECT_NEAR(o.rho_left, 0.0, 1e-30);
  EXPECT_NEAR(o.rho_right, 0.0, 1e-30);
}

TEST(Observables, LinearZeroMode) {
  const double L = 2.0;
  const BoxConfig box(1.0, L);
  Quadrature q(box);
  auto f = WaveFunction::from_exp_sum(box, ExpSum::exponential(std::sqrt(12.0 / (L * L * L)), 0.0, 1));
  auto o = observables_of(f, q);
  EXPECT_NEAR(o.mean_x, 0.0, 1e-15);
  EXPECT_NEAR(o.var_x, 3.0 * L * L / 20.0, 1e-13);
  EXPECT_NEAR(o.rho_left, 3.0 / L, 1e-13);
  EXPECT_NEAR(o.rho_right, 3.0 / L, 1e-13);
  EXPECT_NEAR(o.current_left, 0.0, 1e-15);
}

TEST(Observables, DecayingStateMeanPosition) {
  const BoxConfig box(1.0, 1.0);
  Quadrature q(box);
  const double gamma = 1.0;
  auto o = observables_of(decaying_state(box, gamma), q);
  const double expected = (1.0 - gamma * box.L() / std::tanh(gamma * box.L())) / (2.0 * gamma);
  // Independent oracle: x-weighted density by a plain midpoint sum.
  auto midpoint = [&](int n) {
    double num = 0.0, den = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = -0.5 + (i + 0.5) / n;
      const double w = std::exp(-2.0 * gamma * x);
      num += x * w;
      den += w;
    }
    return num / den;
  };
  EXPECT_NEAR(midpoint(200000), expected, 1e-9);
  EXPECT_NEAR(o.mean_x, expected, 1e-13);
}

TEST(Observables, VarianceBoundedByInterval) {
  const BoxConfig box(1.0, 1.0);
  Quadrature q(box);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double a = u(rng) * 30.0, b = u(rng) * 30.0, c = u(rng);
    auto f = normalized(closure(box, [=](double x) { return std::exp(cplx{a * x, b * x * x}) + c; }), q);
    auto o = observables_of(f, q);
    EXPECT_LE(o.var_x, 0.25 + 1e-9);
    EXPECT_GE(o.var_x, -1e-12);
    EXPECT_LE(std::abs(o.mean_x), 0.5 + 1e-10);
  }
}

TEST(SampledWave, PreservesNorm) {
  const BoxConfig box(2.0, 3.0);
  auto q = std::make_shared<const Quadrature>(box);
  auto f = normalized(closure(box, [](double x) { return std::exp(cplx{-x * x, 3.0 * x}); }), *q);
  auto s = SampledWave::sample(f, q);
  EXPECT_NEAR(s.norm_squared(), 1.0, 1e-12);
  EXPECT_NEAR(norm_squared(s.to_wavefunction(), *q), 1.0, 1e-10);
}

TEST(Normalized, ZeroStateThrows) {
  const BoxConfig box(1.0, 1.0);
  Quadrature q(box);
  EXPECT_THROW(normalized(closure(box, [](double) { return cplx{}; }), q), NumericError);
}
