#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "kinspec/analysis.hpp"
#include "kinspec/semigroup.hpp"

using namespace kinspec;

namespace {

SpectralCoefficients random_coefficients(int N, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  SpectralCoefficients c(N);
  for (const auto& m : enumerate_modes(N)) c.set(m, g(rng));
  return c;
}

}  // namespace

TEST(Eigenvalue, Examples) {
  EXPECT_NEAR(eigenvalue_of(OperatorSpec::fractional_landau(0.5), {0, 2, 1}), std::sqrt(12.0), 1e-15);
  EXPECT_EQ(eigenvalue_of(OperatorSpec::landau(), {2, 0, 0}), 8.0);
  const auto b = OperatorSpec::boltzmann(CrossSectionModel::normalized(0.5));
  for (const auto& spec : {OperatorSpec::landau(), OperatorSpec::fractional_landau(0.3), b}) {
    EXPECT_EQ(eigenvalue_of(spec, {0, 1, -1}), 0.0);
  }
  EXPECT_THROW(OperatorSpec::fractional_landau(1.2), std::domain_error);
}

TEST(Alpha, MIndependentPositiveAndOneOnKernel) {
  const auto k = CrossSectionModel::normalized(0.5);
  for (int m = -2; m <= 2; ++m) EXPECT_EQ(alpha_multiplier({1, 2, m}, k), alpha_multiplier({1, 2, 0}, k));
  EXPECT_EQ(alpha_multiplier({1, 0, 0}, k), 1.0);
  const auto rep = verify_theorem2(0.5, ModeGrid::up_to_level(12));
  for (const auto& m : enumerate_modes(12)) {
    if (is_collisional_invariant(m)) continue;
    const double a = alpha_multiplier(m, k);
    EXPECT_GE(a, rep.ratio_min * (1 - 1e-14));
    EXPECT_LE(a, rep.ratio_max * (1 + 1e-14));
  }
}

TEST(Evolve, IdentityAtZeroAndConservation) {
  std::mt19937_64 rng(1);
  const auto c = random_coefficients(8, rng);
  for (const auto& spec : {OperatorSpec::landau(), OperatorSpec::fractional_landau(0.5),
                           OperatorSpec::boltzmann(CrossSectionModel::normalized(0.5))}) {
    const auto c0 = evolve(c, spec, 0.0);
    for (const auto& [m, v] : c.terms()) EXPECT_EQ(c0[m], v);
    const auto c10 = evolve(c, spec, 10.0);
    for (const auto& m : collisional_invariant_modes()) EXPECT_EQ(c10[m], c[m]);
  }
  EXPECT_THROW(evolve(c, OperatorSpec::landau(), -1.0), std::domain_error);
}

TEST(Evolve, SingleModeDecay) {
  const auto k = CrossSectionModel::normalized(0.5);
  const auto spec = OperatorSpec::boltzmann(k);
  SpectralCoefficients c(4);
  c.set({1, 2, -1}, 0.8);
  const double lambda = boltzmann_eigenvalue({1, 2, 0}, k);
  for (double t : {0.1, 1.0, 3.0}) {
    EXPECT_NEAR(project_non_kernel(evolve(c, spec, t)).l2_norm(), std::exp(-lambda * t) * 0.8, 1e-15);
  }
}

TEST(Evolve, SemigroupLawAndDissipation) {
  std::mt19937_64 rng(9);
  const auto spec = OperatorSpec::boltzmann(CrossSectionModel::normalized(0.25));
  for (int trial = 0; trial < 20; ++trial) {
    const auto c = random_coefficients(10, rng);
    const auto a = evolve(evolve(c, spec, 0.3), spec, 0.45);
    const auto b = evolve(c, spec, 0.75);
    for (const auto& [m, v] : b.terms()) EXPECT_NEAR(a[m], v, 1e-12);
    double prev = project_non_kernel(c).l2_norm();
    for (double t = 0.1; t <= 2.0; t += 0.1) {
      const double cur = project_non_kernel(evolve(c, spec, t)).l2_norm();
      EXPECT_LT(cur, prev);
      prev = cur;
    }
  }
}

TEST(Evolve, DissipationRateMatchesDirichletForm) {
  std::mt19937_64 rng(13);
  const auto kernel = CrossSectionModel::normalized(0.5);
  const auto spec = OperatorSpec::boltzmann(kernel);
  const auto c = random_coefficients(8, rng);
  const double rate = norm_squared_rate(c, spec);
  EXPECT_NEAR(rate, -2.0 * coercive_norms(c, kernel).dirichlet, 1e-10 * std::abs(rate));
  // one-sided Richardson difference of ||c(t)||^2 as an independent check
  auto sq = [&](double t) { return std::pow(evolve(c, spec, t).l2_norm(), 2); };
  const double h = 1e-4;
  const double fd = (-3 * sq(0) + 4 * sq(h) - sq(2 * h)) / (2 * h);
  EXPECT_NEAR(fd, rate, 1e-5 * std::abs(rate));
}

TEST(Compose, Residuals) {
  std::mt19937_64 rng(21);
  const auto k = CrossSectionModel::normalized(0.5);
  for (int trial = 0; trial < 10; ++trial) EXPECT_LE(compose_check(random_coefficients(8, rng), k), 1e-12);
  SpectralCoefficients kern(1);
  kern.set({0, 1, 0}, 2.0);
  EXPECT_EQ(compose_check(kern, k), 0.0);
  SpectralCoefficients single(3);
  single.set({0, 3, 2}, 1.0);
  EXPECT_LE(compose_check(single, k), 1e-12);
}

TEST(Trace, CsvAndLandauScalarDecay) {
  SpectralCoefficients c(2);
  c.set({0, 2, 1}, 0.6);
  const auto rows = evolution_trace(c, OperatorSpec::landau(), {0.0, 0.1, 0.5});
  for (const auto& r : rows) EXPECT_NEAR(r.dirichlet, 12 * 0.36 * std::exp(-24 * r.t), 1e-14);
  const auto csv = trace_csv(rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "t,l2_norm,l2_norm_nonkernel,dirichlet_form");
  EXPECT_NE(csv.find("\n0,0.59999999999999998,0.59999999999999998,4.3199999999999994\n"), std::string::npos);
}

TEST(Trace, KernelOnlyIsFlat) {
  SpectralCoefficients c(2);
  for (const auto& m : collisional_invariant_modes()) c.set(m, 0.3);
  const auto rows = evolution_trace(c, OperatorSpec::boltzmann(CrossSectionModel::normalized(0.5)), {0, 1, 10});
  for (const auto& r : rows) {
    EXPECT_EQ(r.l2_norm, rows.front().l2_norm);
    EXPECT_EQ(r.l2_norm_nonkernel, 0.0);
    EXPECT_EQ(r.dirichlet, 0.0);
  }
}

TEST(Trace, BoltzmannAndFractionalBracketedByAlphaBand) {
  const double s = 0.5;
  const auto k = CrossSectionModel::normalized(s);
  const auto rep = verify_theorem2(s, ModeGrid::up_to_level(6));
  SpectralCoefficients c(4);
  c.set({0, 2, 0}, 0.4);
  c.set({1, 1, 1}, -0.2);
  c.set({0, 4, 3}, 0.3);
  const auto rb = evolution_trace(c, OperatorSpec::boltzmann(k), {0.0});
  const auto rf = evolution_trace(c, OperatorSpec::fractional_landau(s), {0.0});
  EXPECT_GE(rb[0].dirichlet, rep.ratio_min * rf[0].dirichlet * (1 - 1e-12));
  EXPECT_LE(rb[0].dirichlet, rep.ratio_max * rf[0].dirichlet * (1 + 1e-12));
}
