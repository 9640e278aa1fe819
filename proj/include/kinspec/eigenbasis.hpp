#pragma once

// The shared eigenbasis of the linearized Landau and Boltzmann operators in
// three dimensions,
//
//   phi_{n,l,m}(v) = 2^{-3/4} (2 n! / Gamma(n+l+3/2))^{1/2} (|v|/sqrt 2)^l
//                    L_n^{[l+1/2]}(|v|^2/2) e^{-|v|^2/4} Y_l^m(v/|v|),
//
// together with velocity-space quadrature and the sample <-> coefficient
// transforms. phi_{n,l,m} sits at oscillator level 2n+l and sphere level l(l+1).

#include <array>
#include <cmath>
#include <compare>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "kinspec/errors.hpp"
#include "kinspec/hermite_algebra.hpp"
#include "kinspec/io.hpp"
#include "kinspec/quadrature.hpp"
#include "kinspec/specfun.hpp"
#include "kinspec/summation.hpp"

namespace kinspec {

using Vec3 = std::array<double, 3>;

/// Mode (n, l, m) of the eigenbasis.
struct ModeIndex {
  int n = 0;
  int l = 0;
  int m = 0;

  constexpr ModeIndex() = default;
  ModeIndex(int radial, int degree, int order) : n(radial), l(degree), m(order) {
    if (n < 0 || l < 0 || m < -l || m > l) {
      throw std::domain_error("ModeIndex: need n >= 0, l >= 0, |m| <= l (got " + std::to_string(n) + "," +
                              std::to_string(l) + "," + std::to_string(m) + ")");
    }
  }

  /// Oscillator level 2n + l.
  constexpr int level() const noexcept { return 2 * n + l; }
  /// Sphere level l(l+1).
  constexpr int sphere_level() const noexcept { return l * (l + 1); }

  friend constexpr bool operator==(const ModeIndex&, const ModeIndex&) = default;
  // Serialization order: (2n+l, l, m).
  friend constexpr std::strong_ordering operator<=>(const ModeIndex& a, const ModeIndex& b) {
    if (auto c = a.level() <=> b.level(); c != 0) return c;
    if (auto c = a.l <=> b.l; c != 0) return c;
    return a.m <=> b.m;
  }
};

inline std::string to_string(const ModeIndex& mode) {
  return "(" + std::to_string(mode.n) + "," + std::to_string(mode.l) + "," + std::to_string(mode.m) + ")";
}

/// The five collisional invariants: phi_{0,0,0}, phi_{0,1,m}, phi_{1,0,0}.
inline bool is_collisional_invariant(const ModeIndex& mode) noexcept {
  return (mode.n == 0 && mode.l <= 1) || (mode.n == 1 && mode.l == 0);
}

inline std::vector<ModeIndex> collisional_invariant_modes() {
  return {{0, 0, 0}, {0, 1, -1}, {0, 1, 0}, {0, 1, 1}, {1, 0, 0}};
}

/// Rectangular-with-level-cap set of modes: n <= n_max, l <= l_max, 2n+l <= level_max.
struct ModeGrid {
  int n_max = 0;
  int l_max = 0;
  int level_max = 0;

  static ModeGrid up_to_level(int level) { return {level / 2, level, level}; }

  bool contains(const ModeIndex& mode) const noexcept {
    return mode.n <= n_max && mode.l <= l_max && mode.level() <= level_max;
  }

  /// All modes of the grid in serialization order.
  std::vector<ModeIndex> modes() const {
    std::vector<ModeIndex> out;
    for (int k = 0; k <= level_max; ++k) {
      for (int l = k % 2; l <= k; l += 2) {
        const int n = (k - l) / 2;
        if (n > n_max || l > l_max) continue;
        for (int m = -l; m <= l; ++m) out.emplace_back(n, l, m);
      }
    }
    return out;
  }

  /// Distinct (n, l) pairs in serialization order (eigenvalues never depend on m).
  std::vector<std::pair<int, int>> radial_pairs() const {
    std::vector<std::pair<int, int>> out;
    for (int k = 0; k <= level_max; ++k) {
      for (int l = k % 2; l <= k; l += 2) {
        const int n = (k - l) / 2;
        if (n <= n_max && l <= l_max) out.emplace_back(n, l);
      }
    }
    return out;
  }
};

inline std::vector<ModeIndex> enumerate_modes(int level_max) { return ModeGrid::up_to_level(level_max).modes(); }

/// Finite expansion sum c_{n,l,m} phi_{n,l,m} with all modes at level <= cutoff.
class SpectralCoefficients {
 public:
  using Storage = std::map<ModeIndex, double>;

  explicit SpectralCoefficients(int cutoff) : cutoff_(cutoff) {
    if (cutoff < 0) throw std::domain_error("SpectralCoefficients: negative cutoff");
  }

  int cutoff() const noexcept { return cutoff_; }
  const Storage& terms() const noexcept { return terms_; }
  bool empty() const noexcept { return terms_.empty(); }

  double operator[](const ModeIndex& mode) const {
    auto it = terms_.find(mode);
    return it == terms_.end() ? 0.0 : it->second;
  }

  void set(const ModeIndex& mode, double value) {
    check(mode);
    terms_[mode] = value;
  }
  void add(const ModeIndex& mode, double value) {
    check(mode);
    terms_[mode] += value;
  }

  double l2_norm() const {
    CompensatedSum s;
    for (const auto& [mode, c] : terms_) s += c * c;
    return std::sqrt(s.value());
  }

 private:
  void check(const ModeIndex& mode) const {
    if (mode.level() > cutoff_) {
      throw TruncationError("SpectralCoefficients: mode " + to_string(mode) + " above cutoff " +
                            std::to_string(cutoff_));
    }
  }

  int cutoff_;
  Storage terms_;
};

/// Radial part of phi_{n,l,m} (everything except Y_l^m).
inline double radial_factor(int n, int l, double r) {
  const double u = 0.5 * r * r;
  const double norm = std::pow(2.0, -0.75) * std::sqrt(2.0 * gamma_fn(n + 1.0) / gamma_fn(n + l + 1.5));
  return norm * std::pow(r / std::numbers::sqrt2, l) * laguerre(n, l + 0.5, u) * std::exp(-0.5 * u);
}

namespace detail {

struct SphericalPoint {
  double r;
  double polar;
  double azimuth;
};

inline SphericalPoint to_spherical(const Vec3& v) {
  const double r = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  if (r == 0.0) return {0.0, 0.0, 0.0};
  const double polar = std::acos(std::clamp(v[2] / r, -1.0, 1.0));
  double azimuth = std::atan2(v[1], v[0]);
  if (azimuth < 0.0) azimuth += 2.0 * std::numbers::pi;
  if (azimuth >= 2.0 * std::numbers::pi) azimuth = 0.0;
  return {r, polar, azimuth};
}

}  // namespace detail

/// phi_{n,l,m}(v). At v = 0 the value is 0 for l >= 1.
inline double eigenfunction_value(const ModeIndex& mode, const Vec3& v) {
  const auto p = detail::to_spherical(v);
  if (p.r == 0.0 && mode.l >= 1) return 0.0;
  return radial_factor(mode.n, mode.l, p.r) * real_spherical_harmonic(mode.l, mode.m, p.polar, p.azimuth);
}

/// Product quadrature on R^3 in spherical coordinates.
///
/// Radial: generalized Gauss-Laguerre in u = |v|^2/2 for the weight u^{1/2} e^{-u};
/// radial_weight folds in the Jacobian and e^{u} so that
///   int_0^inf g(r) r^2 dr  ~  sum_i radial_weight[i] g(radius[i]).
/// Angular: Gauss-Legendre in cos(polar) times a uniform azimuthal rule.
struct QuadratureGrid {
  std::vector<double> radius;
  std::vector<double> radial_weight;
  std::vector<double> polar;
  std::vector<double> azimuth;
  std::vector<Vec3> direction;
  std::vector<double> angular_weight;
  int radial_exactness = 0;  // polynomial degree in u integrated exactly
  int l_max = 0;

  std::size_t radial_size() const noexcept { return radius.size(); }
  std::size_t angular_size() const noexcept { return direction.size(); }
  std::size_t size() const noexcept { return radial_size() * angular_size(); }

  Vec3 node(std::size_t ir, std::size_t ia) const {
    const double r = radius[ir];
    return {r * direction[ia][0], r * direction[ia][1], r * direction[ia][2]};
  }
  double weight(std::size_t ir, std::size_t ia) const { return radial_weight[ir] * angular_weight[ia]; }

  /// Quadrature of a point-evaluable function over R^3.
  template <class F>
  double integrate(F&& f) const {
    CompensatedSum total;
    for (std::size_t ir = 0; ir < radial_size(); ++ir) {
      CompensatedSum shell;
      for (std::size_t ia = 0; ia < angular_size(); ++ia) shell += angular_weight[ia] * f(node(ir, ia));
      total += radial_weight[ir] * shell.value();
    }
    return total.value();
  }
};

inline QuadratureGrid build_quadrature(int n_radial, int l_max) {
  if (n_radial < 1) throw std::domain_error("build_quadrature: need at least one radial node");
  if (l_max < 0) throw std::domain_error("build_quadrature: negative angular band limit");
  QuadratureGrid g;
  g.l_max = l_max;
  g.radial_exactness = 2 * n_radial - 1;

  const GaussRule rad = gauss_laguerre(n_radial, 0.5);
  for (std::size_t i = 0; i < rad.size(); ++i) {
    const double u = rad.nodes[i];
    g.radius.push_back(std::sqrt(2.0 * u));
    g.radial_weight.push_back(std::numbers::sqrt2 * std::exp(std::log(rad.weights[i]) + u));
  }

  const GaussRule pol = gauss_legendre(l_max + 1);
  const int n_az = 2 * l_max + 2;
  for (std::size_t i = 0; i < pol.size(); ++i) {
    const double x = pol.nodes[i];
    const double alpha = std::acos(x);
    const double sin_a = std::sqrt((1.0 - x) * (1.0 + x));
    for (int k = 0; k < n_az; ++k) {
      const double beta = 2.0 * std::numbers::pi * k / n_az;
      g.polar.push_back(alpha);
      g.azimuth.push_back(beta);
      g.direction.push_back({sin_a * std::cos(beta), sin_a * std::sin(beta), x});
      g.angular_weight.push_back(pol.weights[i] * 2.0 * std::numbers::pi / n_az);
    }
  }
  return g;
}

/// Coefficients c_{n,l,m} = <f, phi_{n,l,m}> for all modes with 2n+l <= cutoff.
///
/// f should decay at least like a polynomial times e^{-|v|^2/8}; outside that
/// class the quadrature still runs but accuracy is the caller's problem.
template <class F>
SpectralCoefficients expand(F&& f, const QuadratureGrid& grid, int cutoff) {
  SpectralCoefficients out(cutoff);
  const std::size_t nr = grid.radial_size();
  const std::size_t na = grid.angular_size();
  std::vector<double> samples(nr * na);
  for (std::size_t ir = 0; ir < nr; ++ir) {
    for (std::size_t ia = 0; ia < na; ++ia) samples[ir * na + ia] = f(grid.node(ir, ia));
  }
  std::vector<double> shell(nr);
  std::vector<double> ylm(na);
  for (int l = 0; l <= cutoff; ++l) {
    for (int m = -l; m <= l; ++m) {
      for (std::size_t ia = 0; ia < na; ++ia) {
        ylm[ia] = grid.angular_weight[ia] * real_spherical_harmonic(l, m, grid.polar[ia], grid.azimuth[ia]);
      }
      for (std::size_t ir = 0; ir < nr; ++ir) {
        CompensatedSum s;
        for (std::size_t ia = 0; ia < na; ++ia) s += ylm[ia] * samples[ir * na + ia];
        shell[ir] = s.value();
      }
      for (int n = 0; 2 * n + l <= cutoff; ++n) {
        CompensatedSum c;
        for (std::size_t ir = 0; ir < nr; ++ir) c += grid.radial_weight[ir] * radial_factor(n, l, grid.radius[ir]) * shell[ir];
        out.set(ModeIndex(n, l, m), c.value());
      }
    }
  }
  return out;
}

/// Pointwise value of sum c phi at v.
inline double synthesize(const SpectralCoefficients& c, const Vec3& v) {
  CompensatedSum s;
  for (const auto& [mode, coeff] : c.terms()) {
    if (coeff != 0.0) s += coeff * eigenfunction_value(mode, v);
  }
  return s.value();
}

/// Restriction to the five collisional-invariant modes (the projection P).
inline SpectralCoefficients project_collisional_invariants(const SpectralCoefficients& c) {
  SpectralCoefficients out(c.cutoff());
  for (const auto& [mode, coeff] : c.terms()) {
    if (is_collisional_invariant(mode)) out.set(mode, coeff);
  }
  return out;
}

/// Complement (1 - P)c.
inline SpectralCoefficients project_non_kernel(const SpectralCoefficients& c) {
  SpectralCoefficients out(c.cutoff());
  for (const auto& [mode, coeff] : c.terms()) {
    if (!is_collisional_invariant(mode)) out.set(mode, coeff);
  }
  return out;
}

/// Expansion of phi_{n,l,m} in the tensor Hermite basis Psi_alpha.
///
/// phi_{n,l,m} lies in E_{2n+l}, so only |alpha| = 2n+l can carry weight. The
/// inner products use a product Gauss-Hermite rule that is exact for the
/// polynomial-times-Gaussian integrands involved.
inline HermiteCoefficients<3> hermite_expansion(const ModeIndex& mode, int cutoff) {
  const int k = mode.level();
  if (k > cutoff) throw TruncationError("hermite_expansion: mode level exceeds Hermite cutoff");
  const int nodes = k + 2;
  const GaussRule gh = gauss_hermite(nodes);
  // v = sqrt(2) y; int F(v) dv = 2^{3/2} int F(sqrt2 y) dy and the rule weight is e^{-y^2}.
  std::vector<double> v(nodes), w(nodes);
  for (int i = 0; i < nodes; ++i) {
    v[i] = std::numbers::sqrt2 * gh.nodes[i];
    w[i] = gh.weights[i] * std::exp(gh.nodes[i] * gh.nodes[i]) * std::numbers::sqrt2;
  }
  std::vector<std::vector<double>> psi(k + 1, std::vector<double>(nodes));
  for (int a = 0; a <= k; ++a) {
    for (int i = 0; i < nodes; ++i) psi[a][i] = hermite_psi(a, v[i]);
  }
  std::vector<double> phi(static_cast<std::size_t>(nodes) * nodes * nodes);
  for (int i = 0; i < nodes; ++i) {
    for (int j = 0; j < nodes; ++j) {
      for (int q = 0; q < nodes; ++q) {
        phi[(static_cast<std::size_t>(i) * nodes + j) * nodes + q] =
            w[i] * w[j] * w[q] * eigenfunction_value(mode, {v[i], v[j], v[q]});
      }
    }
  }
  HermiteCoefficients<3> out(cutoff);
  for (int a = k; a >= 0; --a) {
    for (int b = k - a; b >= 0; --b) {
      const int c = k - a - b;
      CompensatedSum s;
      for (int i = 0; i < nodes; ++i) {
        for (int j = 0; j < nodes; ++j) {
          const double pij = psi[a][i] * psi[b][j];
          for (int q = 0; q < nodes; ++q) s += phi[(static_cast<std::size_t>(i) * nodes + j) * nodes + q] * pij * psi[c][q];
        }
      }
      out.add({a, b, c}, s.value());
    }
  }
  return out;
}

/// CSV with header `n,l,m,coefficient`, rows in serialization order.
inline std::string to_csv(const SpectralCoefficients& c) {
  std::string out = "n,l,m,coefficient\n";
  for (const auto& [mode, coeff] : c.terms()) {
    out += std::to_string(mode.n) + "," + std::to_string(mode.l) + "," + std::to_string(mode.m) + "," +
           io::format_double(coeff) + "\n";
  }
  return out;
}

/// Parses the CSV written by to_csv. The cutoff is the largest level present
/// unless a larger one is requested.
inline SpectralCoefficients coefficients_from_csv(const std::string& text, int min_cutoff = 0) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("coefficient CSV: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "n,l,m,coefficient") throw std::invalid_argument("coefficient CSV: bad header '" + line + "'");
  std::vector<std::pair<ModeIndex, double>> rows;
  int cutoff = min_cutoff;
  int line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = io::split(line, ',');
    if (fields.size() != 4) {
      throw std::invalid_argument("coefficient CSV: line " + std::to_string(line_no) + " needs 4 fields");
    }
    try {
      ModeIndex mode(io::parse_int(fields[0]), io::parse_int(fields[1]), io::parse_int(fields[2]));
      rows.emplace_back(mode, io::parse_double(fields[3]));
      cutoff = std::max(cutoff, mode.level());
    } catch (const std::exception& e) {
      throw std::invalid_argument("coefficient CSV: line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  SpectralCoefficients out(cutoff);
  for (const auto& [mode, v] : rows) out.add(mode, v);
  return out;
}

}  // namespace kinspec
