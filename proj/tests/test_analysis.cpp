#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "kinspec/analysis.hpp"

using namespace kinspec;

TEST(RatioBand, PositiveAndContainsSingleMode) {
  const double s = 0.5;
  const auto rep = verify_theorem2(s, ModeGrid::up_to_level(16));
  EXPECT_TRUE(rep.passed());
  EXPECT_GT(rep.ratio_min, 0.0);
  const double r02 = boltzmann_eigenvalue({0, 2, 0}, CrossSectionModel::normalized(s)) / std::sqrt(12.0);
  EXPECT_LE(rep.ratio_min, r02);
  EXPECT_GE(rep.ratio_max, r02);
  EXPECT_FALSE(is_collisional_invariant(rep.argmin));
  EXPECT_FALSE(is_collisional_invariant(rep.argmax));
  const auto j = rep.to_json();
  EXPECT_EQ(j["passed"], true);
  EXPECT_NE(rep.to_text().find("PASS"), std::string::npos);
}

TEST(RatioBand, TightBoundFails) {
  const auto rep = verify_theorem2(0.5, ModeGrid::up_to_level(8), 1.01);
  EXPECT_FALSE(rep.passed());
}

TEST(SineBound, BoundHolds) {
  const auto rep = lemma1_check(ModeGrid::up_to_level(24), 0.5);
  EXPECT_TRUE(rep.passed());
  EXPECT_NEAR(sine_bound(1, 0, 0.5), kQuarterPi, 1e-15);
  EXPECT_LT(sine_bound(16, 0, 0.5), 1e-3);
  const auto sp = lambda_split(16, 0, 0.5);
  EXPECT_LT(std::abs(sp.lambda1), sine_bound(16, 0, 0.5));
  for (double s : {0.01, 0.5, 0.99}) EXPECT_GT(sine_bound(1, 0, s), 0.0);
}

TEST(GrazingAsymptotics, ConvergesAtHalf) {
  std::vector<int> ns;
  for (int n = 1; n <= 2048; n *= 2) ns.push_back(n);
  const auto rep = lemma2_check(0.5, 0, ns);
  EXPECT_TRUE(rep.positive);
  EXPECT_TRUE(rep.envelope_holds);
  EXPECT_NEAR(rep.final_ratio(), 1.0, 0.05);
  EXPECT_TRUE(rep.passed());
  // the envelope ratio climbs along the sequence
  for (std::size_t i = 1; i < rep.envelope.size(); ++i) EXPECT_GE(rep.envelope[i], rep.envelope[i - 1] - 1e-12);
}

TEST(GrazingAsymptotics, Validation) {
  EXPECT_THROW(lemma2_check(0.5, 3, {1, 2}), std::domain_error);
  EXPECT_THROW(lemma2_check(0.5, 0, {4, 2}), std::invalid_argument);
}

TEST(Lambda3Growth, BandAndExplicitBounds) {
  for (double s : {0.25, 0.5, 0.75}) {
    const auto rep = lemma4_check(32, s, {0, 2});
    EXPECT_TRUE(rep.bounds_hold()) << s;
    EXPECT_TRUE(rep.band_holds()) << s;
    EXPECT_GT(lambda3_l1_lower(s), 0.0);
    EXPECT_GT(rep.empirical_c, 0.0);
  }
  // lambda_3 / l^{2s} keeps falling past l = 2 at s = 3/4
  const auto r = lemma4_check(32, 0.75, {4});
  EXPECT_LT(r.l2_calibrated_min, 1.0);
  EXPECT_GT(r.empirical_c_at.l, 2);
  EXPECT_NEAR(lambda3_l0_upper(0.5), 2.0 * (2.0 - 4.0 / std::numbers::pi), 1e-14);
}

TEST(Hilb, Examples) {
  EXPECT_EQ(hilb_approximation(5, 0.0), 1.0);
  const double th = 1.0 / 128;
  EXPECT_LT(std::abs(legendre_p(64, std::cos(th)) - hilb_approximation(64, th)), 10 * th * th);
  const auto suite = hilb_suite({4, 16, 64, 256});
  EXPECT_TRUE(suite.passed());
  for (const auto& r : suite.rows) EXPECT_EQ(r.points, 64u);
}

TEST(Hilb, ScaledDeviationBoundedAsThetaShrinks) {
  for (int l : {4, 16}) {
    const auto r = hilb_check(l, {1e-2 / l, 1e-3 / l, 1e-4 / l});
    EXPECT_LT(r.max_scaled_deviation, 0.05);
  }
}

TEST(Coercive, Examples) {
  const double s = 0.5;
  const auto k = CrossSectionModel::normalized(s);
  SpectralCoefficients kern(2);
  for (const auto& m : collisional_invariant_modes()) kern.set(m, 0.7);
  const auto nk = coercive_norms(kern, k);
  EXPECT_EQ(nk.dirichlet, 0.0);
  EXPECT_EQ(nk.hs_norm, 0.0);
  EXPECT_NEAR(nk.shifted(), 5 * 0.49, 1e-15);

  SpectralCoefficients e(2);
  e.set({0, 2, 1}, 1.0);
  const auto ne = coercive_norms(e, k);
  EXPECT_NEAR(ne.dirichlet, boltzmann_eigenvalue({0, 2, 0}, k), 1e-15);
  EXPECT_NEAR(ne.hs_norm, std::pow(3.5, s), 1e-15);
  EXPECT_NEAR(ne.sphere_norm, std::pow(6.0, s), 1e-15);
}

TEST(Coercive, RandomVectorsStayInBand) {
  for (double s : {0.25, 0.5, 0.75}) {
    BoltzmannSpectrum spec(CrossSectionModel::normalized(s));
    const int N = 16;
    spec.fill(ModeGrid::up_to_level(N));
    std::mt19937_64 rng(42);
    std::normal_distribution<double> g;
    double lo = 1e300, hi = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
      SpectralCoefficients c(N);
      for (const auto& m : enumerate_modes(N)) {
        if (!is_collisional_invariant(m)) c.set(m, g(rng));
      }
      const double r = coercive_norms(c, spec).ratio();
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    EXPECT_GT(lo, 0.0);
    EXPECT_LT(hi / lo, 10.0);
  }
}

TEST(Coercive, ShiftedFormDominatesL2) {
  BoltzmannSpectrum spec(CrossSectionModel::normalized(0.5));
  SpectralCoefficients c(4);
  c.set({0, 0, 0}, 1.0);
  c.set({2, 0, 0}, 0.5);
  const auto n = coercive_norms(c, spec);
  EXPECT_GT(n.shifted(), n.l2_squared);
  EXPECT_NEAR(n.shifted() - n.dirichlet, 1.25, 1e-15);
}
