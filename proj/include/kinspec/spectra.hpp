#pragma once

// Eigenvalues of the linearized Landau and non-cutoff Boltzmann operators
// (Maxwellian molecules, d = 3) on the common eigenbasis phi_{n,l,m}.
//
// Boltzmann eigenvalues are angular integrals
//   lambda_B(n,l) = int_0^{pi/4} beta(theta) F(theta; n,l) dtheta,
//   F = 1 + delta_{n0} delta_{l0} - P_l(cos) cos^k - P_l(sin) sin^k,  k = 2n+l,
// with beta(theta) = 4 pi b(cos 2theta) sin 2theta ~ theta^{-1-2s}.

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kinspec/eigenbasis.hpp"
#include "kinspec/errors.hpp"
#include "kinspec/io.hpp"
#include "kinspec/parallel.hpp"
#include "kinspec/quadrature.hpp"
#include "kinspec/specfun.hpp"
#include "kinspec/summation.hpp"

namespace kinspec {

inline constexpr double kQuarterPi = std::numbers::pi / 4.0;

/// Angular cross section beta(theta) on (0, pi/4].
class CrossSectionModel {
 public:
  enum class Kind { normalized, cutoff, custom };

  /// beta(theta) = theta^{-1-2s}.
  static CrossSectionModel normalized(double s) { return CrossSectionModel(Kind::normalized, s, 0.0, {}); }

  /// theta^{-1-2s} restricted to theta >= epsilon.
  static CrossSectionModel cutoff(double s, double epsilon) {
    if (!(epsilon > 0.0 && epsilon < kQuarterPi)) {
      throw std::domain_error("CrossSectionModel: cutoff angle must lie in (0, pi/4)");
    }
    return CrossSectionModel(Kind::cutoff, s, epsilon, {});
  }

  /// User kernel with declared singularity exponent s. beta must be positive on (0, pi/4].
  static CrossSectionModel custom(double s, std::function<double(double)> beta) {
    if (!beta) throw std::invalid_argument("CrossSectionModel: empty custom kernel");
    return CrossSectionModel(Kind::custom, s, 0.0, std::move(beta));
  }

  Kind kind() const noexcept { return kind_; }
  double s() const noexcept { return s_; }
  double epsilon() const noexcept { return epsilon_; }
  /// Lower end of the support of beta.
  double support_start() const noexcept { return kind_ == Kind::cutoff ? epsilon_ : 0.0; }

  double beta(double theta) const {
    switch (kind_) {
      case Kind::normalized:
        return std::pow(theta, -1.0 - 2.0 * s_);
      case Kind::cutoff:
        return theta < epsilon_ ? 0.0 : std::pow(theta, -1.0 - 2.0 * s_);
      case Kind::custom:
        return custom_(theta);
    }
    return 0.0;
  }

  /// "normalized", "cutoff:EPS" or "custom".
  std::string label() const {
    switch (kind_) {
      case Kind::normalized:
        return "normalized";
      case Kind::cutoff:
        return "cutoff:" + io::format_double(epsilon_);
      case Kind::custom:
        return "custom";
    }
    return "custom";
  }

 private:
  CrossSectionModel(Kind kind, double s, double epsilon, std::function<double(double)> beta)
      : kind_(kind), s_(s), epsilon_(epsilon), custom_(std::move(beta)) {
    if (!(s > 0.0 && s < 1.0)) throw std::domain_error("CrossSectionModel: s must lie in (0, 1)");
  }

  Kind kind_;
  double s_;
  double epsilon_;
  std::function<double(double)> custom_;
};

/// Landau eigenvalue: 0 on the collisional invariants, 2l(l+1) on the rest of
/// level 2, 2(2n+l) + l(l+1) above.
inline double landau_eigenvalue(const ModeIndex& mode) {
  if (is_collisional_invariant(mode)) return 0.0;
  const int k = mode.level();
  if (k == 2) return 2.0 * mode.l * (mode.l + 1);
  return 2.0 * k + static_cast<double>(mode.l) * (mode.l + 1);
}

namespace detail {

// Pieces of F evaluated without cancellation near theta = 0:
//   deficit = 1 - P_l(cos) cos^k  (= D + E - D E),   sine_part = P_l(sin) sin^k.
struct IntegrandParts {
  double deficit;
  double sine_part;
};

inline IntegrandParts integrand_parts(int n, int l, double theta) {
  const int k = 2 * n + l;
  const double half_sin = std::sin(0.5 * theta);
  const double t = 2.0 * half_sin * half_sin;  // 1 - cos(theta)
  double d = 0.0;
  if (l >= 1) {
    double d_prev = 0.0;
    d = t;
    for (int j = 1; j < l; ++j) {
      const double next = ((2.0 * j + 1.0) * (t + (1.0 - t) * d) - j * d_prev) / (j + 1.0);
      d_prev = d;
      d = next;
    }
  }
  const double e = k == 0 ? 0.0 : -std::expm1(k * std::log1p(-t));
  IntegrandParts p{};
  p.deficit = d + e - d * e;
  const double sn = std::sin(theta);
  if (k == 0) {
    p.sine_part = 1.0;
  } else if (sn <= 0.0) {
    p.sine_part = 0.0;
  } else {
    p.sine_part = legendre_p(l, sn) * std::exp(k * std::log(sn));
  }
  return p;
}

inline bool kernel_pair(int n, int l) noexcept { return (n == 0 && l <= 1) || (n == 1 && l == 0); }

// Head radius near the singularity, shrunk for rapidly varying integrands.
inline double head_radius(int n, int l) {
  const double scale = (2.0 * n + l) + 0.5 * l * (l + 1.0) + 1.0;
  return std::min(1e-3, 0.05 / std::sqrt(scale));
}

inline std::vector<double> tail_breaks(double a, double b, int l) {
  std::vector<double> geo{a};
  for (double x = 2.0 * a; x < b; x *= 2.0) geo.push_back(x);
  geo.push_back(b);
  const double cap = kQuarterPi / (l + 1.0);
  std::vector<double> out{geo.front()};
  for (std::size_t i = 0; i + 1 < geo.size(); ++i) {
    const double w = geo[i + 1] - geo[i];
    const int pieces = std::max(1, static_cast<int>(std::ceil(w / cap)));
    for (int p = 1; p < pieces; ++p) out.push_back(geo[i] + w * p / pieces);
    out.push_back(geo[i + 1]);
  }
  return out;
}

inline QuadOptions& spectral_quad_options() {
  static QuadOptions opt{1e-15, 1e-12, 20000};
  return opt;
}

// int_a^b beta(theta) g(theta) dtheta for an even g vanishing to second order at 0.
//
// Near the singularity g is replaced by a2 theta^2 + a4 theta^4 fitted through
// g(delta) and g(delta/2), and beta by c theta^{-1-2s} with c matched at delta;
// the head is then integrated in closed form.
template <class G>
QuadResult singular_integral(G&& g, const CrossSectionModel& kernel, double a, double b, double delta, int l) {
  QuadResult out;
  const double lo = std::max(a, kernel.support_start());
  if (!(lo < b)) return out;
  const double s = kernel.s();
  double head = 0.0;
  double tail_start = lo;
  if (lo < delta && delta < b) {
    const double g1 = g(delta);
    const double g2 = g(0.5 * delta);
    const double quartic = (4.0 / 3.0) * (g1 - 4.0 * g2);
    const double quadratic = g1 - quartic;
    const double c = kernel.beta(delta) * std::pow(delta, 1.0 + 2.0 * s);
    const double ratio = lo / delta;
    const double w2 = (1.0 - std::pow(ratio, 2.0 - 2.0 * s)) / (2.0 - 2.0 * s);
    const double w4 = (1.0 - std::pow(ratio, 4.0 - 2.0 * s)) / (4.0 - 2.0 * s);
    head = c * std::pow(delta, -2.0 * s) * (quadratic * w2 + quartic * w4);
    out.evaluations += 2;
    tail_start = delta;
  }
  auto integrand = [&](double theta) { return kernel.beta(theta) * g(theta); };
  const QuadResult tail = integrate_adaptive(integrand, tail_breaks(tail_start, b, l), spectral_quad_options());
  out.value = head + tail.value;
  out.error = tail.error;
  out.evaluations += tail.evaluations;
  out.converged = tail.converged;
  return out;
}

inline void require_converged(const QuadResult& r, const std::string& what) {
  if (!r.converged) throw QuadratureError(what + ": adaptive quadrature did not converge", r.value, r.error);
}

}  // namespace detail

/// Relative tolerance of every eigenvalue quadrature; set before computing, not concurrently.
inline void set_spectral_tolerance(double epsrel) {
  if (!(epsrel > 0.0)) throw std::domain_error("set_spectral_tolerance: tolerance must be positive");
  detail::spectral_quad_options().epsrel = epsrel;
}

/// F(theta; n, l) on [0, pi/4]. Identically 0 for the collisional invariants.
inline double boltzmann_integrand(int n, int l, double theta) {
  if (n < 0 || l < 0) throw std::domain_error("boltzmann_integrand: need n, l >= 0");
  if (!(theta >= 0.0 && theta <= kQuarterPi)) throw std::domain_error("boltzmann_integrand: theta outside [0, pi/4]");
  if (detail::kernel_pair(n, l)) return 0.0;
  const auto p = detail::integrand_parts(n, l, theta);
  return p.deficit - p.sine_part;
}

/// lambda_B(n,l,m); m is ignored. Throws QuadratureError when the tolerance is missed.
inline double boltzmann_eigenvalue(const ModeIndex& mode, const CrossSectionModel& kernel) {
  const int n = mode.n, l = mode.l;
  if (detail::kernel_pair(n, l)) return 0.0;
  const auto g = [n, l](double theta) { return boltzmann_integrand(n, l, theta); };
  const auto r = detail::singular_integral(g, kernel, 0.0, kQuarterPi, detail::head_radius(n, l), l);
  detail::require_converged(r, "boltzmann_eigenvalue" + to_string(mode));
  return r.value;
}

/// lambda_1 + lambda_2 + lambda_3 = lambda_B for the normalized kernel.
struct LambdaSplit {
  double lambda1 = 0.0;  // sine term, <= 0
  double lambda2 = 0.0;  // cosine deficit on (0, 1/(l+2))
  double lambda3 = 0.0;  // cosine deficit on (1/(l+2), pi/4)
  double sum() const noexcept { return lambda1 + lambda2 + lambda3; }
};

inline LambdaSplit lambda_split(int n, int l, double s) {
  if (n < 0 || l < 0 || 2 * n + l < 1) throw std::domain_error("lambda_split: need 2n+l >= 1");
  const auto kernel = CrossSectionModel::normalized(s);
  const double delta = detail::head_radius(n, l);
  const double split = 1.0 / (l + 2.0);
  const auto deficit = [n, l](double theta) { return detail::integrand_parts(n, l, theta).deficit; };
  const auto sine = [n, l](double theta) { return detail::integrand_parts(n, l, theta).sine_part; };
  const auto r1 = detail::singular_integral(sine, kernel, 0.0, kQuarterPi, delta, l);
  const auto r2 = detail::singular_integral(deficit, kernel, 0.0, split, delta, l);
  const auto r3 = detail::singular_integral(deficit, kernel, split, kQuarterPi, delta, l);
  const std::string tag = "lambda_split(" + std::to_string(n) + "," + std::to_string(l) + ")";
  detail::require_converged(r1, tag);
  detail::require_converged(r2, tag);
  detail::require_converged(r3, tag);
  return {-r1.value, r2.value, r3.value};
}

/// C_s = 2^{-1-s} Gamma(1-s) / s.
inline double grazing_constant_closed_form(double s) {
  if (!(s > 0.0 && s < 1.0)) throw std::domain_error("grazing_constant: s must lie in (0, 1)");
  return std::pow(2.0, -1.0 - s) * gamma_fn(1.0 - s) / s;
}

/// C_s = int_0^inf theta^{-1-2s} (1 - e^{-theta^2/2}) dtheta by quadrature.
///
/// On [0, 1] the exponential is expanded termwise; on [1, inf) the pure power
/// integrates to 1/(2s) and the Gaussian remainder is integrated numerically.
inline double grazing_constant(double s) {
  if (!(s > 0.0 && s < 1.0)) throw std::domain_error("grazing_constant: s must lie in (0, 1)");
  CompensatedSum head;
  double coeff = 1.0;  // (1/2)^j / j!
  for (int j = 1; j < 60; ++j) {
    coeff *= 0.5 / j;
    const double term = coeff / (2.0 * j - 2.0 * s);
    head += (j % 2 == 1) ? term : -term;
    if (term < 1e-20) break;
  }
  const auto gauss_tail = integrate_adaptive(
      [s](double theta) { return std::pow(theta, -1.0 - 2.0 * s) * std::exp(-0.5 * theta * theta); },
      std::vector<double>{1.0, 2.0, 4.0, 8.0, 16.0, 40.0}, QuadOptions{1e-17, 1e-14, 4000});
  return head.value() + 1.0 / (2.0 * s) - gauss_tail.value;
}

/// Even kernel nu on [-R, R] (R may be infinite only if nu decays integrably).
struct FinitePartKernel {
  std::function<double(double)> nu;
  double support = 1.0;
};

/// Test function with optional closed-form second derivative.
struct TestFunction {
  std::function<double(double)> phi;
  std::function<double(double)> phi_second;  // finite differences when empty
};

struct FinitePartResult {
  double value = 0.0;            // double-integral route
  double epsilon_limit = 0.0;    // extrapolated epsilon route
  double double_integral = 0.0;
  int halvings = 0;
};

namespace detail {

inline double second_derivative_fd(const std::function<double(double)>& f, double x) {
  constexpr double h = 1e-3;
  return (-f(x + 2 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h) - f(x - 2 * h)) / (12.0 * h * h);
}

inline std::vector<double> dyadic_breaks(double a, double b) {
  std::vector<double> out{a};
  if (a > 0.0) {
    for (double x = 2.0 * a; x < b; x *= 2.0) out.push_back(x);
  } else {
    for (double x = std::ldexp(b, -40); x < b; x *= 2.0) out.push_back(x);
  }
  out.push_back(b);
  return out;
}

}  // namespace detail

/// Finite part fp(nu)[phi] of an even kernel with theta^2 nu integrable.
///
/// Route (a): limit of int_{|theta| >= eps} nu (phi - phi(0)) along eps = 2^{-j} R,
/// accelerated by Aitken's delta-squared. Route (b): the Taylor-remainder form
///   int_0^1 (1-t) int theta^2 nu(theta) phi''(t theta) dtheta dt.
/// Throws NumericalFailure when the routes disagree by more than 1e-6 or the
/// epsilon sequence does not settle within 40 halvings.
inline FinitePartResult finite_part(const FinitePartKernel& kernel, const TestFunction& test) {
  if (!kernel.nu || !test.phi) throw std::invalid_argument("finite_part: kernel and test function required");
  const double R = kernel.support;
  if (!(R > 0.0) || !std::isfinite(R)) throw std::domain_error("finite_part: support must be finite and positive");
  const auto& nu = kernel.nu;
  const auto& phi = test.phi;
  const double phi0 = phi(0.0);
  const QuadOptions opt{1e-16, 1e-13, 8000};

  // (a) epsilon limit
  auto symmetric = [&](double theta) { return nu(theta) * ((phi(theta) - phi0) + (phi(-theta) - phi0)); };
  FinitePartResult res;
  CompensatedSum partial;
  partial += integrate_adaptive(symmetric, 0.5 * R, R, opt).value;
  std::vector<double> sums{partial.value()};
  // Aitken estimate with the smallest step to its successor
  std::optional<double> last_aitken;
  double best = 0.0, best_gap = std::numeric_limits<double>::infinity();
  int best_j = 0;
  double eps = 0.5 * R;
  for (int j = 1; j <= 40; ++j) {
    partial += integrate_adaptive(symmetric, 0.5 * eps, eps, opt).value;
    eps *= 0.5;
    sums.push_back(partial.value());
    const std::size_t m = sums.size();
    if (m < 3) continue;
    const double d1 = sums[m - 1] - sums[m - 2];
    const double d0 = sums[m - 2] - sums[m - 3];
    if (d1 == 0.0 && d0 == 0.0 && sums[m - 1] == 0.0) {
      best = 0.0, best_gap = 0.0, best_j = j;
      break;
    }
    const double denom = d1 - d0;
    if (denom == 0.0) continue;
    const double aitken = sums[m - 1] - d1 * d1 / denom;
    if (!std::isfinite(aitken)) continue;
    if (last_aitken) {
      const double gap = std::abs(aitken - *last_aitken);
      if (gap < best_gap) best = aitken, best_gap = gap, best_j = j;
      if (gap <= 1e-13 * std::max(1.0, std::abs(aitken))) break;
    }
    last_aitken = aitken;
  }
  const bool settled = best_gap <= 1e-8 * std::max(1.0, std::abs(best));
  res.epsilon_limit = best;
  res.halvings = best_j;
  if (!settled) throw NumericalFailure("finite_part: epsilon limit did not settle within 40 halvings");

  // (b) double integral over the even part phi(x) + phi(-x)
  std::function<double(double)> even_d2;
  QuadOptions inner_opt = opt, outer_opt{1e-15, 1e-12, 2000};
  if (test.phi_second) {
    even_d2 = [&test](double x) { return test.phi_second(x) + test.phi_second(-x); };
  } else {
    const std::function<double(double)> even = [&phi](double x) { return phi(x) + phi(-x); };
    even_d2 = [even](double x) { return detail::second_derivative_fd(even, x); };
    // rounding in the difference quotient sits near 1e-10
    inner_opt.epsabs = outer_opt.epsabs = 1e-9;
  }
  const auto inner_breaks = detail::dyadic_breaks(0.0, R);
  auto inner = [&](double t) {
    auto f = [&](double theta) { return theta * theta * nu(theta) * even_d2(t * theta); };
    return (1.0 - t) * integrate_adaptive(f, inner_breaks, inner_opt).value;
  };
  res.double_integral = integrate_adaptive(inner, 0.0, 1.0, outer_opt).value;
  res.value = res.double_integral;

  if (std::abs(res.epsilon_limit - res.double_integral) > 1e-6) {
    throw NumericalFailure("finite_part: epsilon route " + io::format_double(res.epsilon_limit) +
                           " disagrees with double-integral route " + io::format_double(res.double_integral));
  }
  return res;
}

/// One row of an eigenvalue table. Split entries are NaN unless the kernel is
/// the normalized one; ratio is NaN on collisional invariants.
struct EigenvalueRecord {
  ModeIndex mode;
  double lambda_L = 0.0;
  double lambda_B = 0.0;
  double lambda1 = std::numeric_limits<double>::quiet_NaN();
  double lambda2 = std::numeric_limits<double>::quiet_NaN();
  double lambda3 = std::numeric_limits<double>::quiet_NaN();
  double ratio = std::numeric_limits<double>::quiet_NaN();
};

/// All rows of `grid` in serialization order. Work is spread over (n, l) pairs;
/// every entry is computed by a self-contained quadrature, so the table does
/// not depend on the thread count.
inline std::vector<EigenvalueRecord> eigenvalue_table(const ModeGrid& grid, const CrossSectionModel& kernel) {
  const auto pairs = grid.radial_pairs();
  std::vector<EigenvalueRecord> per_pair(pairs.size());
  const bool split = kernel.kind() == CrossSectionModel::Kind::normalized;
  parallel_for(pairs.size(), [&](std::size_t i) {
    const auto [n, l] = pairs[i];
    EigenvalueRecord rec;
    rec.mode = ModeIndex(n, l, 0);
    rec.lambda_L = landau_eigenvalue(rec.mode);
    rec.lambda_B = boltzmann_eigenvalue(rec.mode, kernel);
    if (split && 2 * n + l >= 1) {
      const auto sp = lambda_split(n, l, kernel.s());
      rec.lambda1 = sp.lambda1;
      rec.lambda2 = sp.lambda2;
      rec.lambda3 = sp.lambda3;
    }
    if (rec.lambda_L > 0.0) rec.ratio = rec.lambda_B / std::pow(rec.lambda_L, kernel.s());
    per_pair[i] = rec;
  });
  std::vector<EigenvalueRecord> out;
  for (const auto& rec : per_pair) {
    for (int m = -rec.mode.l; m <= rec.mode.l; ++m) {
      EigenvalueRecord row = rec;
      row.mode = ModeIndex(rec.mode.n, rec.mode.l, m);
      out.push_back(row);
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.mode < b.mode; });
  return out;
}

inline std::string eigenvalue_csv(const std::vector<EigenvalueRecord>& rows) {
  std::string out = "n,l,m,lambda_L,lambda_B,lambda1,lambda2,lambda3,ratio\n";
  for (const auto& r : rows) {
    out += std::to_string(r.mode.n) + "," + std::to_string(r.mode.l) + "," + std::to_string(r.mode.m);
    for (double v : {r.lambda_L, r.lambda_B, r.lambda1, r.lambda2, r.lambda3, r.ratio}) {
      out += ",";
      out += io::format_double(v);
    }
    out += "\n";
  }
  return out;
}

inline nlohmann::ordered_json eigenvalue_sidecar(const ModeGrid& grid, const CrossSectionModel& kernel) {
  nlohmann::ordered_json j;
  j["s"] = kernel.s();
  j["kernel"] = kernel.label();
  if (kernel.kind() == CrossSectionModel::Kind::cutoff) j["epsilon"] = kernel.epsilon();
  j["n_max"] = grid.n_max;
  j["l_max"] = grid.l_max;
  j["level_max"] = grid.level_max;
  j["columns"] = {"n", "l", "m", "lambda_L", "lambda_B", "lambda1", "lambda2", "lambda3", "ratio"};
  return j;
}

/// lambda_B for a fixed kernel, tabulated over (n, l) pairs on demand.
///
/// fill() evaluates missing pairs in parallel; lookups of pairs that were
/// never filled are computed on the spot. Not safe for concurrent mutation.
class BoltzmannSpectrum {
 public:
  explicit BoltzmannSpectrum(CrossSectionModel kernel) : kernel_(std::move(kernel)) {}

  const CrossSectionModel& kernel() const noexcept { return kernel_; }

  void fill(const std::vector<std::pair<int, int>>& pairs) {
    std::vector<std::pair<int, int>> missing;
    for (const auto& p : pairs) {
      if (!values_.count(p)) missing.push_back(p);
    }
    std::sort(missing.begin(), missing.end());
    missing.erase(std::unique(missing.begin(), missing.end()), missing.end());
    std::vector<double> out(missing.size());
    parallel_for(missing.size(), [&](std::size_t i) {
      out[i] = boltzmann_eigenvalue(ModeIndex(missing[i].first, missing[i].second, 0), kernel_);
    });
    for (std::size_t i = 0; i < missing.size(); ++i) values_[missing[i]] = out[i];
  }

  void fill(const ModeGrid& grid) { fill(grid.radial_pairs()); }

  double operator()(const ModeIndex& mode) {
    const std::pair<int, int> key{mode.n, mode.l};
    auto it = values_.find(key);
    if (it != values_.end()) return it->second;
    const double v = boltzmann_eigenvalue(ModeIndex(mode.n, mode.l, 0), kernel_);
    values_.emplace(key, v);
    return v;
  }

 private:
  CrossSectionModel kernel_;
  std::map<std::pair<int, int>, double> values_;
};

}  // namespace kinspec
