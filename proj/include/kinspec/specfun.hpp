#pragma once

// Special functions used by the eigenbasis and the eigenvalue formulas.
//
// Convention: associated Legendre functions carry NO Condon-Shortley phase,
//   P_l^m(x) = (1 - x^2)^{m/2} d^m/dx^m P_l(x),   0 <= m <= l.
// Every spectrum computed downstream only depends on squared normalizations
// and orthonormality, so the sign convention never shows up in a result.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace kinspec {

/// Degree/order pair (l, m) of a spherical harmonic, -l <= m <= l.
struct DegreePair {
  int l = 0;
  int m = 0;

  constexpr DegreePair() = default;
  DegreePair(int degree, int order) : l(degree), m(order) {
    if (l < 0 || m < -l || m > l) {
      throw std::domain_error("DegreePair: need l >= 0 and |m| <= l, got l=" + std::to_string(l) +
                              " m=" + std::to_string(m));
    }
  }
  friend constexpr bool operator==(const DegreePair&, const DegreePair&) = default;
};

namespace detail {

inline void require_unit_interval(double x, const char* who) {
  if (!(std::abs(x) <= 1.0)) {
    throw std::domain_error(std::string(who) + ": argument outside [-1, 1]");
  }
}

}  // namespace detail

/// Legendre polynomial P_l(x) by the upward three-term recurrence.
inline double legendre_p(int l, double x) {
  if (l < 0) throw std::domain_error("legendre_p: negative degree");
  detail::require_unit_interval(x, "legendre_p");
  if (l == 0) return 1.0;
  double p_prev = 1.0;
  double p = x;
  for (int k = 1; k < l; ++k) {
    const double next = ((2.0 * k + 1.0) * x * p - k * p_prev) / (k + 1.0);
    p_prev = p;
    p = next;
  }
  return p;
}

/// 1 - P_l(cos theta), evaluated without cancellation for small theta.
///
/// Writes x = 1 - t with t = 2 sin^2(theta/2) and runs the Legendre
/// recurrence on the deficits D_l = 1 - P_l(x):
///   (l+1) D_{l+1} = (2l+1) (t + (1-t) D_l) - l D_{l-1},  D_0 = 0, D_1 = t.
inline double legendre_deficit_cos(int l, double theta) {
  if (l < 0) throw std::domain_error("legendre_deficit_cos: negative degree");
  const double half_sin = std::sin(0.5 * theta);
  const double t = 2.0 * half_sin * half_sin;
  if (l == 0) return 0.0;
  double d_prev = 0.0;
  double d = t;
  for (int k = 1; k < l; ++k) {
    const double next = ((2.0 * k + 1.0) * (t + (1.0 - t) * d) - k * d_prev) / (k + 1.0);
    d_prev = d;
    d = next;
  }
  return d;
}

/// Associated Legendre function P_l^m(x), 0 <= m <= l, no Condon-Shortley phase.
inline double assoc_legendre_p(int l, int m, double x) {
  if (m < 0 || l < m) throw std::domain_error("assoc_legendre_p: need 0 <= m <= l");
  detail::require_unit_interval(x, "assoc_legendre_p");
  // P_m^m = (2m-1)!! (1-x^2)^{m/2}
  double pmm = 1.0;
  if (m > 0) {
    const double somx2 = std::sqrt((1.0 - x) * (1.0 + x));
    double odd = 1.0;
    for (int i = 1; i <= m; ++i) {
      pmm *= odd * somx2;
      odd += 2.0;
    }
  }
  if (l == m) return pmm;
  double pmmp1 = x * (2.0 * m + 1.0) * pmm;
  if (l == m + 1) return pmmp1;
  double pll = 0.0;
  for (int ll = m + 2; ll <= l; ++ll) {
    pll = ((2.0 * ll - 1.0) * x * pmmp1 - (ll + m - 1.0) * pmm) / (ll - m);
    pmm = pmmp1;
    pmmp1 = pll;
  }
  return pll;
}

/// Generalized Laguerre polynomial L_n^{[a]}(x).
inline double laguerre(int n, double a, double x) {
  if (n < 0) throw std::domain_error("laguerre: negative degree");
  if (!(a > -1.0)) throw std::domain_error("laguerre: parameter must exceed -1");
  if (n == 0) return 1.0;
  double l_prev = 1.0;
  double l_cur = 1.0 + a - x;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0 + a - x) * l_cur - (k + a) * l_prev) / (k + 1.0);
    l_prev = l_cur;
    l_cur = next;
  }
  return l_cur;
}

/// Gamma function on x > 0 (Lanczos, g = 7, nine terms).
inline double gamma_fn(double x) {
  if (!(x > 0.0)) throw std::domain_error("gamma_fn: argument must be positive");
  if (x < 0.5) return gamma_fn(x + 1.0) / x;
  static constexpr double kCoeff[9] = {
      0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
      771.32342877765313,   -176.61502916214059,   12.507343278686905,
      -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  const double z = x - 1.0;
  double series = kCoeff[0];
  for (int i = 1; i < 9; ++i) series += kCoeff[i] / (z + i);
  const double t = z + 7.5;
  // t^{z+1/2} e^{-t} split in two to delay overflow
  const double half_pow = std::pow(t, 0.5 * (z + 0.5));
  return std::sqrt(2.0 * std::numbers::pi) * half_pow * (half_pow * std::exp(-t)) * series;
}

/// Scaled Hermite function psi_n(x) = 2^{-1/4} phi_n(x / sqrt 2), orthonormal in L^2(R).
///
/// Returns exactly 0 once the Gaussian factor underflows.
inline double hermite_psi(int n, double x) {
  if (n < 0) throw std::domain_error("hermite_psi: negative index");
  const double y = x / std::numbers::sqrt2;
  const double gauss = std::exp(-0.5 * y * y);
  if (gauss == 0.0 || !std::isnormal(gauss)) return 0.0;
  const double scale = std::pow(2.0, -0.25);
  double p_prev = 0.0;
  double p = std::pow(std::numbers::pi, -0.25) * gauss;
  for (int k = 0; k < n; ++k) {
    const double next = std::sqrt(2.0 / (k + 1.0)) * y * p - std::sqrt(k / (k + 1.0)) * p_prev;
    p_prev = p;
    p = next;
  }
  return scale * p;
}

/// Bessel J_0 from its integral representation
///   J_0(t) = (1/pi) int_{-pi/2}^{pi/2} cos(t sin tau) dtau.
///
/// The integrand is analytic and periodic, so the trapezoidal rule over a full
/// period converges geometrically; the node count grows with |t| so the
/// aliased terms J_N(t) stay below double precision.
inline double bessel_j0(double t) {
  const double at = std::abs(t);
  const int quarter = static_cast<int>(std::ceil(0.5 * at + 12.0));
  const int n = 4 * quarter;
  const double h = 2.0 * std::numbers::pi / n;
  // cos(t sin tau) has quarter-period symmetry: sum over [0, pi/2] with endpoint weights.
  double acc = 0.5 * (1.0 + std::cos(at));
  for (int k = 1; k < quarter; ++k) acc += std::cos(at * std::sin(k * h));
  return acc / quarter;
}

/// Real spherical harmonic Y_l^m at polar angle alpha in [0, pi] and azimuth
/// beta in [0, 2 pi).
inline double real_spherical_harmonic(int l, int m, double alpha, double beta) {
  DegreePair dp(l, m);
  if (!(alpha >= 0.0 && alpha <= std::numbers::pi)) {
    throw std::domain_error("real_spherical_harmonic: polar angle outside [0, pi]");
  }
  if (!(beta >= 0.0 && beta < 2.0 * std::numbers::pi)) {
    throw std::domain_error("real_spherical_harmonic: azimuth outside [0, 2 pi)");
  }
  const double inv_4pi = 1.0 / (4.0 * std::numbers::pi);
  const double x = std::cos(alpha);
  if (dp.l == 0) return std::sqrt(inv_4pi);
  if (dp.m == 0) return std::sqrt((2.0 * l + 1.0) * inv_4pi) * legendre_p(l, x);
  const int am = std::abs(m);
  // (l-|m|)! / (l+|m|)!
  const double ratio = std::exp(std::lgamma(l - am + 1.0) - std::lgamma(l + am + 1.0));
  const double norm = std::sqrt((2.0 * l + 1.0) / (2.0 * std::numbers::pi) * ratio);
  const double plm = assoc_legendre_p(l, am, x);
  return m > 0 ? norm * plm * std::cos(m * beta) : norm * plm * std::sin(m * beta);
}

}  // namespace kinspec
