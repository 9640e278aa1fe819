#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "kinspec/quadrature.hpp"
#include "kinspec/summation.hpp"

using namespace kinspec;

TEST(GaussKronrod, PolynomialExactness) {
  // K21 integrates degree 31 exactly
  auto f = [](double x) { return std::pow(x, 30) + 3 * std::pow(x, 7); };
  const auto r = gauss_kronrod21(f, -1.0, 2.0);
  const double exact = (std::pow(2.0, 31) + 1.0) / 31.0 + 3.0 * (std::pow(2.0, 8) - 1.0) / 8.0;
  EXPECT_NEAR(r.value, exact, 1e-13 * exact);
}

TEST(Adaptive, SmoothAndSingular) {
  const auto r1 = integrate_adaptive([](double x) { return std::exp(x); }, 0.0, 1.0);
  EXPECT_NEAR(r1.value, std::numbers::e - 1.0, 1e-14);
  EXPECT_TRUE(r1.converged);
  const auto r2 = integrate_adaptive([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, {1e-14, 1e-12, 4000});
  EXPECT_NEAR(r2.value, 2.0, 1e-10);
}

TEST(Adaptive, ReportsNonConvergence) {
  const auto r = integrate_adaptive([](double x) { return std::sin(1.0 / x); }, 1e-8, 1.0, {1e-16, 1e-15, 8});
  EXPECT_FALSE(r.converged);
}

TEST(Adaptive, Breakpoints) {
  auto f = [](double x) { return std::abs(x - 0.3); };
  const auto r = integrate_adaptive(f, std::vector<double>{0.0, 0.3, 1.0});
  EXPECT_NEAR(r.value, 0.5 * (0.09 + 0.49), 1e-15);
  EXPECT_THROW(integrate_adaptive(f, std::vector<double>{0.0}), std::invalid_argument);
}

TEST(GaussRules, LegendreMoments) {
  for (int n : {1, 5, 20}) {
    const auto g = gauss_legendre(n);
    for (int k = 0; k <= 2 * n - 1; ++k) {
      double s = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i) s += g.weights[i] * std::pow(g.nodes[i], k);
      EXPECT_NEAR(s, k % 2 ? 0.0 : 2.0 / (k + 1), 1e-13);
    }
  }
}

TEST(GaussRules, HermiteMoments) {
  const auto g = gauss_hermite(16);
  for (int k = 0; k <= 31; k += 2) {
    double s = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) s += g.weights[i] * std::pow(g.nodes[i], k);
    const double exact = std::tgamma((k + 1) / 2.0);
    EXPECT_NEAR(s / exact, 1.0, 1e-12) << k;
  }
}

TEST(GaussRules, GeneralizedLaguerreMoments) {
  const double a = 0.5;
  const auto g = gauss_laguerre(24, a);
  for (int k = 0; k <= 47; ++k) {
    CompensatedSum s;
    for (std::size_t i = 0; i < g.size(); ++i) s += g.weights[i] * std::pow(g.nodes[i], k);
    EXPECT_NEAR(s.value() / std::tgamma(k + a + 1.0), 1.0, 1e-11) << k;
  }
}

TEST(CompensatedSum, RecoversCancellation) {
  CompensatedSum s;
  s += 1e16;
  s += 1.0;
  s += -1e16;
  EXPECT_EQ(s.value(), 1.0);
}
