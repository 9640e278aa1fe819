#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "kinspec/eigenbasis.hpp"

using namespace kinspec;

namespace {

double mu(const Vec3& v) {
  return std::pow(2 * std::numbers::pi, -1.5) * std::exp(-0.5 * (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]));
}

// fourth-order central second difference along axis j
double d2(const ModeIndex& m, Vec3 v, int j, double h) {
  auto at = [&](double dx) {
    Vec3 w = v;
    w[j] += dx;
    return eigenfunction_value(m, w);
  };
  return (-at(2 * h) + 16 * at(h) - 30 * at(0) + 16 * at(-h) - at(-2 * h)) / (12 * h * h);
}

template <class F>
double rotation_fd(F&& f, Vec3 v, int j, int k, double h) {
  auto partial = [&](int axis) {
    Vec3 a = v, b = v, c = v, d = v;
    a[axis] += 2 * h;
    b[axis] += h;
    c[axis] -= h;
    d[axis] -= 2 * h;
    return (-f(a) + 8 * f(b) - 8 * f(c) + f(d)) / (12 * h);
  };
  return v[j] * partial(k) - v[k] * partial(j);
}

}  // namespace

TEST(ModeIndex, OrderingAndLevels) {
  EXPECT_THROW(ModeIndex(0, 1, 2), std::domain_error);
  EXPECT_THROW(ModeIndex(-1, 0, 0), std::domain_error);
  const ModeIndex a(1, 0, 0), b(0, 2, -2), c(0, 1, 1);
  EXPECT_LT(c, a);
  EXPECT_LT(a, b);
  EXPECT_EQ(b.level(), 2);
  EXPECT_EQ(b.sphere_level(), 6);
  const auto modes = enumerate_modes(4);
  for (std::size_t i = 1; i < modes.size(); ++i) EXPECT_LT(modes[i - 1], modes[i]);
  EXPECT_EQ(modes.size(), 35u);
}

TEST(ModeGrid, RespectsAllBounds) {
  const ModeGrid g{2, 3, 5};
  for (const auto& m : g.modes()) {
    EXPECT_LE(m.n, 2);
    EXPECT_LE(m.l, 3);
    EXPECT_LE(m.level(), 5);
  }
  EXPECT_TRUE(g.contains(ModeIndex(1, 3, 0)));
  EXPECT_FALSE(g.contains(ModeIndex(2, 2, 0)));
}

TEST(Eigenfunction, Examples) {
  for (Vec3 v : {Vec3{0, 0, 0}, Vec3{0.3, -1.0, 2.0}, Vec3{4, 0, 0}}) {
    EXPECT_NEAR(eigenfunction_value({0, 0, 0}, v), std::sqrt(mu(v)), 1e-15);
  }
  EXPECT_NEAR(eigenfunction_value({1, 0, 0}, {1.0, 1.0, 1.0}), 0.0, 1e-15);
  EXPECT_EQ(eigenfunction_value({2, 3, -1}, {0, 0, 0}), 0.0);
}

TEST(Eigenfunction, Parity) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (const auto& m : enumerate_modes(6)) {
    for (int i = 0; i < 5; ++i) {
      const Vec3 v{g(rng), g(rng), g(rng)};
      const double sign = m.l % 2 ? -1.0 : 1.0;
      EXPECT_NEAR(eigenfunction_value(m, {-v[0], -v[1], -v[2]}), sign * eigenfunction_value(m, v), 1e-12);
    }
  }
}

TEST(Quadrature, Normalizations) {
  const auto grid = build_quadrature(48, 12);
  EXPECT_NEAR(grid.integrate(mu), 1.0, 1e-12);
  for (double w : grid.radial_weight) EXPECT_GT(w, 0.0);
  for (double w : grid.angular_weight) EXPECT_GT(w, 0.0);
  double s = 0.0;
  for (std::size_t ia = 0; ia < grid.angular_size(); ++ia) {
    const double y = real_spherical_harmonic(1, 0, grid.polar[ia], grid.azimuth[ia]);
    s += grid.angular_weight[ia] * y * y;
  }
  EXPECT_NEAR(s, 1.0, 1e-12);
  const double cross = grid.integrate(
      [](const Vec3& v) { return eigenfunction_value({0, 2, 1}, v) * eigenfunction_value({1, 0, 0}, v); });
  EXPECT_NEAR(cross, 0.0, 1e-10);
  EXPECT_THROW(build_quadrature(0, 2), std::domain_error);
}

TEST(Quadrature, GramMatrixIdentity) {
  const auto grid = build_quadrature(48, 12);
  const auto modes = enumerate_modes(10);
  // sample once, then form inner products
  std::vector<std::vector<double>> samples(modes.size());
  for (std::size_t i = 0; i < modes.size(); ++i) {
    samples[i].reserve(grid.size());
    for (std::size_t ir = 0; ir < grid.radial_size(); ++ir) {
      for (std::size_t ia = 0; ia < grid.angular_size(); ++ia) {
        samples[i].push_back(eigenfunction_value(modes[i], grid.node(ir, ia)));
      }
    }
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    for (std::size_t j = i; j < modes.size(); ++j) {
      CompensatedSum s;
      std::size_t p = 0;
      for (std::size_t ir = 0; ir < grid.radial_size(); ++ir) {
        for (std::size_t ia = 0; ia < grid.angular_size(); ++ia, ++p) {
          s += grid.weight(ir, ia) * samples[i][p] * samples[j][p];
        }
      }
      worst = std::max(worst, std::abs(s.value() - (i == j ? 1.0 : 0.0)));
    }
  }
  EXPECT_LT(worst, 1e-8);
}

TEST(Expand, UnitVectors) {
  const auto grid = build_quadrature(24, 8);
  const auto c = expand([](const Vec3& v) { return eigenfunction_value({2, 1, 0}, v); }, grid, 8);
  for (const auto& [mode, v] : c.terms()) EXPECT_NEAR(v, mode == ModeIndex(2, 1, 0) ? 1.0 : 0.0, 1e-10);
  const auto c0 = expand([](const Vec3& v) { return std::sqrt(mu(v)); }, grid, 8);
  for (const auto& [mode, v] : c0.terms()) EXPECT_NEAR(v, mode == ModeIndex(0, 0, 0) ? 1.0 : 0.0, 1e-12);
}

TEST(Expand, RoundTrip) {
  const int N = 6;
  const auto grid = build_quadrature(24, N);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  SpectralCoefficients c(N);
  for (const auto& m : enumerate_modes(N)) c.set(m, u(rng));
  const auto back = expand([&](const Vec3& v) { return synthesize(c, v); }, grid, N);
  for (const auto& [mode, v] : c.terms()) EXPECT_NEAR(back[mode], v, 1e-10);
  for (int i = 0; i < 20; ++i) {
    const Vec3 v{2 * u(rng), 2 * u(rng), 2 * u(rng)};
    EXPECT_NEAR(synthesize(back, v), synthesize(c, v), 1e-9);
  }
}

TEST(Synthesize, Examples) {
  SpectralCoefficients zero(4);
  EXPECT_EQ(synthesize(zero, {0.1, 0.2, 0.3}), 0.0);
  SpectralCoefficients e(0);
  e.set({0, 0, 0}, 1.0);
  EXPECT_NEAR(synthesize(e, {0, 0, 0}), std::pow(2 * std::numbers::pi, -0.75), 1e-15);
}

TEST(Projection, CollisionalInvariants) {
  SpectralCoefficients c(6);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (const auto& m : enumerate_modes(6)) c.set(m, g(rng));
  const auto p = project_collisional_invariants(c);
  EXPECT_EQ(p.terms().size(), 5u);
  const auto pp = project_collisional_invariants(p);
  for (const auto& [m, v] : p.terms()) EXPECT_EQ(pp[m], v);
  SpectralCoefficients e(2);
  e.set({0, 2, 1}, 1.0);
  EXPECT_TRUE(project_collisional_invariants(e).empty());
  const auto q = project_non_kernel(c);
  EXPECT_NEAR(q.l2_norm() * q.l2_norm() + p.l2_norm() * p.l2_norm(), c.l2_norm() * c.l2_norm(), 1e-12);
}

TEST(Coefficients, TruncationAndCsv) {
  SpectralCoefficients c(3);
  EXPECT_THROW(c.set({2, 0, 0}, 1.0), TruncationError);
  c.set({1, 1, -1}, 0.1);
  c.set({0, 0, 0}, -2.5e-17);
  const auto text = to_csv(c);
  EXPECT_EQ(text, "n,l,m,coefficient\n0,0,0,-2.4999999999999999e-17\n1,1,-1,0.10000000000000001\n");
  const auto back = coefficients_from_csv(text);
  EXPECT_EQ(back[ModeIndex(1, 1, -1)], 0.1);
  EXPECT_EQ(back[ModeIndex(0, 0, 0)], -2.5e-17);
  EXPECT_THROW(coefficients_from_csv("n,l,m\n"), std::invalid_argument);
  EXPECT_THROW(coefficients_from_csv("n,l,m,coefficient\n0,2,3,1\n"), std::invalid_argument);
  EXPECT_THROW(coefficients_from_csv("n,l,m,coefficient\n0,0,0,abc\n"), std::invalid_argument);
}

TEST(EigenRelations, OscillatorByFiniteDifferences) {
  const double h = 1e-2;
  const Vec3 pts[] = {{0.4, -0.7, 1.1}, {-1.3, 0.2, 0.5}, {0.9, 1.4, -0.6}};
  for (const auto& m : enumerate_modes(6)) {
    for (const auto& v : pts) {
      const double r2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
      const double f = eigenfunction_value(m, v);
      const double lap = d2(m, v, 0, h) + d2(m, v, 1, h) + d2(m, v, 2, h);
      EXPECT_NEAR(-lap + 0.25 * r2 * f - 1.5 * f, m.level() * f, 1e-4) << to_string(m);
    }
  }
}

TEST(EigenRelations, SphereLaplacianByFiniteDifferences) {
  const double h = 1e-3;
  const Vec3 pts[] = {{0.4, -0.7, 1.1}, {-1.3, 0.2, 0.5}};
  for (const auto& m : enumerate_modes(6)) {
    auto f = [&](const Vec3& v) { return eigenfunction_value(m, v); };
    for (const auto& v : pts) {
      double acc = 0.0;
      for (int j = 0; j < 3; ++j) {
        for (int k = j + 1; k < 3; ++k) {
          auto rf = [&](const Vec3& w) { return rotation_fd(f, w, j, k, h); };
          acc += rotation_fd(rf, v, j, k, h);
        }
      }
      EXPECT_NEAR(-acc, m.sphere_level() * f(v), 1e-4) << to_string(m);
    }
  }
}

TEST(HermiteExpansion, DegreeAndNorm) {
  for (const auto& m : enumerate_modes(6)) {
    const auto h = hermite_expansion(m, 6);
    EXPECT_NEAR(h.norm(), 1.0, 1e-12);
    for (const auto& [a, v] : h.terms()) {
      if (std::abs(v) > 1e-13) EXPECT_EQ(total_degree(a), m.level());
    }
  }
  EXPECT_THROW(hermite_expansion({2, 1, 0}, 4), TruncationError);
}
