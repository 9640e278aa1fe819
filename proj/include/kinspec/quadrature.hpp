#pragma once

// One-dimensional quadrature: globally adaptive Gauss-Kronrod (G10/K21) and
// classical Gauss rules built by Golub-Welsch.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <tuple>
#include <stdexcept>
#include <vector>

#include "kinspec/summation.hpp"

namespace kinspec {

struct QuadOptions {
  double epsabs = 1e-15;
  double epsrel = 1e-12;
  int max_panels = 4000;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
  bool converged = true;
};

namespace detail {

// QUADPACK qk21 abscissae/weights; xgk[1], xgk[3], ... are the Gauss nodes.
inline constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
inline constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
inline constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
  double a;
  double b;
  double value;
  double error;
  friend bool operator<(const Panel& x, const Panel& y) { return x.error < y.error; }
};

}  // namespace detail

/// Single-panel 21-point Kronrod estimate with the QUADPACK error heuristic.
template <class F>
QuadResult gauss_kronrod21(F&& f, double a, double b) {
  using namespace detail;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double res_g = 0.0;
  double res_k = fc * kWgk[10];
  double res_abs = std::abs(res_k);
  std::array<double, 10> f1{}, f2{};
  for (int j = 0; j < 10; ++j) {
    const double dx = half * kXgk[j];
    f1[j] = f(center - dx);
    f2[j] = f(center + dx);
    const double sum = f1[j] + f2[j];
    res_k += kWgk[j] * sum;
    res_abs += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) res_g += kWg[j / 2] * sum;
  }
  const double mean = 0.5 * res_k;
  double res_asc = kWgk[10] * std::abs(fc - mean);
  for (int j = 0; j < 10; ++j) res_asc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));

  QuadResult r;
  r.value = res_k * half;
  res_abs *= std::abs(half);
  res_asc *= std::abs(half);
  double err = std::abs((res_k - res_g) * half);
  if (res_asc != 0.0 && err != 0.0) err = res_asc * std::min(1.0, std::pow(200.0 * err / res_asc, 1.5));
  if (res_abs > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(50.0 * eps * res_abs, err);
  r.error = err;
  r.evaluations = 21;
  return r;
}

/// Globally adaptive integration over the panels delimited by `breaks`
/// (sorted, at least two entries). The worst panel is bisected until the
/// summed error estimate meets max(epsabs, epsrel |I|).
template <class F>
QuadResult integrate_adaptive(F&& f, const std::vector<double>& breaks, const QuadOptions& opt = {}) {
  if (breaks.size() < 2) throw std::invalid_argument("integrate_adaptive: need at least two breakpoints");
  std::priority_queue<detail::Panel> heap;
  QuadResult out;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (!(breaks[i] < breaks[i + 1])) continue;
    const QuadResult r = gauss_kronrod21(f, breaks[i], breaks[i + 1]);
    out.evaluations += r.evaluations;
    heap.push({breaks[i], breaks[i + 1], r.value, r.error});
  }
  auto totals = [&heap]() {
    auto copy = heap;
    std::vector<detail::Panel> panels;
    panels.reserve(copy.size());
    while (!copy.empty()) {
      panels.push_back(copy.top());
      copy.pop();
    }
    std::sort(panels.begin(), panels.end(), [](const auto& x, const auto& y) { return x.a < y.a; });
    CompensatedSum v, e;
    for (const auto& p : panels) {
      v += p.value;
      e += p.error;
    }
    return std::pair{v.value(), e.value()};
  };
  if (heap.empty()) return out;

  // Running totals avoid an O(n) rescan per bisection; exact totals are recomputed at the end.
  double value = 0.0, error = 0.0;
  std::tie(value, error) = totals();
  while (error > std::max(opt.epsabs, opt.epsrel * std::abs(value))) {
    if (static_cast<int>(heap.size()) >= opt.max_panels) {
      out.converged = false;
      break;
    }
    const detail::Panel worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(worst.a < mid && mid < worst.b)) {
      out.converged = false;
      break;
    }
    heap.pop();
    const QuadResult left = gauss_kronrod21(f, worst.a, mid);
    const QuadResult right = gauss_kronrod21(f, mid, worst.b);
    out.evaluations += left.evaluations + right.evaluations;
    heap.push({worst.a, mid, left.value, left.error});
    heap.push({mid, worst.b, right.value, right.error});
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
  }
  std::tie(out.value, out.error) = totals();
  if (out.converged && out.error > std::max(opt.epsabs, opt.epsrel * std::abs(out.value))) {
    // drift in the running totals; report the exact state
    out.converged = false;
  }
  return out;
}

template <class F>
QuadResult integrate_adaptive(F&& f, double a, double b, const QuadOptions& opt = {}) {
  return integrate_adaptive(std::forward<F>(f), std::vector<double>{a, b}, opt);
}

/// Nodes and weights of an n-point Gauss rule.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::size_t size() const noexcept { return nodes.size(); }
};

/// Gauss rule for the measure whose monic-free Jacobi matrix has diagonal
/// `diag[0..n)` and off-diagonal `offdiag[1..n)` (offdiag[k] couples k-1 and k),
/// with total mass `mu0`.
///
/// Nodes come from the Jacobi eigenproblem and are polished by Newton on the
/// orthonormal polynomial p_n; weights use the Christoffel sum
/// w_i = 1 / sum_{k<n} p_k(x_i)^2, which keeps tiny tail weights accurate in a
/// relative sense.
inline GaussRule gauss_rule_from_jacobi(const std::vector<double>& diag, const std::vector<double>& offdiag,
                                        double mu0) {
  const auto n = static_cast<int>(diag.size());
  if (n < 1) throw std::invalid_argument("gauss_rule_from_jacobi: empty rule");
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) jac(i, i) = diag[i];
  for (int i = 1; i < n; ++i) jac(i, i - 1) = jac(i - 1, i) = offdiag[i];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jac, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("gauss_rule_from_jacobi: eigen solve failed");

  // p_k orthonormal: b_{k+1} p_{k+1} = (x - a_k) p_k - b_k p_{k-1}; b_n taken as 1.
  auto eval = [&](double x, double& pn, double& dpn, double& christoffel) {
    double p_prev = 0.0, p = 1.0 / std::sqrt(mu0);
    double dp_prev = 0.0, dp = 0.0;
    christoffel = 0.0;
    for (int k = 0; k < n; ++k) {
      christoffel += p * p;
      const double b_next = (k + 1 < n) ? offdiag[k + 1] : 1.0;
      const double b_cur = (k > 0) ? offdiag[k] : 0.0;
      const double p_next = ((x - diag[k]) * p - b_cur * p_prev) / b_next;
      const double dp_next = ((x - diag[k]) * dp + p - b_cur * dp_prev) / b_next;
      p_prev = p;
      p = p_next;
      dp_prev = dp;
      dp = dp_next;
    }
    pn = p;
    dpn = dp;
  };

  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = solver.eigenvalues()[i];
    double pn = 0.0, dpn = 0.0, chr = 0.0;
    for (int it = 0; it < 3; ++it) {
      eval(x, pn, dpn, chr);
      if (dpn == 0.0) break;
      const double step = pn / dpn;
      x -= step;
      if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(x))) break;
    }
    eval(x, pn, dpn, chr);
    rule.nodes[i] = x;
    rule.weights[i] = 1.0 / chr;
  }
  return rule;
}

/// Gauss-Legendre on [-1, 1].
inline GaussRule gauss_legendre(int n) {
  std::vector<double> a(n, 0.0), b(n, 0.0);
  for (int k = 1; k < n; ++k) b[k] = k / std::sqrt(4.0 * k * k - 1.0);
  return gauss_rule_from_jacobi(a, b, 2.0);
}

/// Gauss-Hermite for the weight e^{-x^2} on the real line.
inline GaussRule gauss_hermite(int n) {
  std::vector<double> a(n, 0.0), b(n, 0.0);
  for (int k = 1; k < n; ++k) b[k] = std::sqrt(0.5 * k);
  return gauss_rule_from_jacobi(a, b, std::sqrt(std::numbers::pi));
}

/// Generalized Gauss-Laguerre for the weight x^alpha e^{-x} on (0, inf).
inline GaussRule gauss_laguerre(int n, double alpha) {
  if (!(alpha > -1.0)) throw std::domain_error("gauss_laguerre: alpha must exceed -1");
  std::vector<double> a(n), b(n, 0.0);
  for (int k = 0; k < n; ++k) a[k] = 2.0 * k + alpha + 1.0;
  for (int k = 1; k < n; ++k) b[k] = std::sqrt(k * (k + alpha));
  return gauss_rule_from_jacobi(a, b, std::tgamma(alpha + 1.0));
}

}  // namespace kinspec
