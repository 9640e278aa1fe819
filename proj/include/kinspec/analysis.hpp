#pragma once

// Numerical corroboration of the two-sided spectral comparison
//   c0^{-1} lambda_L^s <= lambda_B <= c0 lambda_L^s
// and of the estimates behind it: the sine-term decay, the grazing
// asymptotics of lambda_2, the l^{2s} growth of lambda_3, the Hilb
// approximation, and the coercive norms. Every check produces a report with a
// JSON and an aligned-text rendering.

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "kinspec/eigenbasis.hpp"
#include "kinspec/io.hpp"
#include "kinspec/parallel.hpp"
#include "kinspec/quadrature.hpp"
#include "kinspec/specfun.hpp"
#include "kinspec/spectra.hpp"
#include "kinspec/summation.hpp"

namespace kinspec {

using json = nlohmann::ordered_json;

namespace detail {

inline json mode_json(const ModeIndex& m) { return json::array({m.n, m.l, m.m}); }

inline std::string brief(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", x);
  return buf;
}

inline std::string fixed(double x, int width = 14) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%*.*g", width, 8, x);
  return buf;
}

}  // namespace detail

/// Empirical band of lambda_B / lambda_L^s over the non-kernel modes of a grid.
struct RatioReport {
  double s = 0.0;
  ModeGrid grid;
  double ratio_min = std::numeric_limits<double>::infinity();
  double ratio_max = 0.0;
  ModeIndex argmin;
  ModeIndex argmax;
  // (1 + lambda_B) / (1 + (2n+l)^s + l^s (l+1)^s)
  double shifted_min = std::numeric_limits<double>::infinity();
  double shifted_max = 0.0;
  ModeIndex shifted_argmin;
  ModeIndex shifted_argmax;
  double band_bound = 50.0;
  std::size_t modes_checked = 0;
  bool all_positive = true;

  double width() const { return ratio_max / ratio_min; }
  double shifted_width() const { return shifted_max / shifted_min; }
  bool passed() const {
    return all_positive && modes_checked > 0 && std::isfinite(width()) && width() <= band_bound &&
           std::isfinite(shifted_width()) && shifted_width() <= band_bound;
  }

  json to_json() const {
    json j;
    j["check"] = "ratio_band";
    j["s"] = s;
    j["grid"] = {{"n_max", grid.n_max}, {"l_max", grid.l_max}, {"level_max", grid.level_max}};
    j["modes_checked"] = modes_checked;
    j["ratio"] = {{"min", ratio_min}, {"max", ratio_max}, {"width", width()},
                  {"argmin", detail::mode_json(argmin)}, {"argmax", detail::mode_json(argmax)}};
    j["shifted_ratio"] = {{"min", shifted_min}, {"max", shifted_max}, {"width", shifted_width()},
                          {"argmin", detail::mode_json(shifted_argmin)}, {"argmax", detail::mode_json(shifted_argmax)}};
    j["band_bound"] = band_bound;
    j["passed"] = passed();
    return j;
  }

  std::string to_text() const {
    std::string out = "ratio band  s=" + detail::brief(s) + "  level<=" + std::to_string(grid.level_max) + "\n";
    out += "  lambda_B/lambda_L^s   min" + detail::fixed(ratio_min) + " at " + to_string(argmin) + "   max" +
           detail::fixed(ratio_max) + " at " + to_string(argmax) + "   width" + detail::fixed(width()) + "\n";
    out += "  shifted               min" + detail::fixed(shifted_min) + " at " + to_string(shifted_argmin) +
           "   max" + detail::fixed(shifted_max) + " at " + to_string(shifted_argmax) + "   width" +
           detail::fixed(shifted_width()) + "\n";
    out += std::string("  ") + (passed() ? "PASS" : "FAIL") + "\n";
    return out;
  }
};

/// Ratio band over the grid. Modes are visited one per (n, l) since nothing depends on m.
inline RatioReport verify_theorem2(double s, const ModeGrid& grid, BoltzmannSpectrum& spectrum,
                                   double band_bound = 50.0) {
  if (grid.level_max < 1) throw std::domain_error("verify_theorem2: grid bounds must be positive");
  RatioReport rep;
  rep.s = s;
  rep.grid = grid;
  rep.band_bound = band_bound;
  spectrum.fill(grid);
  for (const auto& [n, l] : grid.radial_pairs()) {
    const ModeIndex mode(n, l, 0);
    if (is_collisional_invariant(mode)) continue;
    const double lb = spectrum(mode);
    const double ll = landau_eigenvalue(mode);
    const double r = lb / std::pow(ll, s);
    const double shifted =
        (1.0 + lb) / (1.0 + std::pow(2.0 * n + l, s) + std::pow(static_cast<double>(l), s) * std::pow(l + 1.0, s));
    ++rep.modes_checked;
    if (!(r > 0.0) || !std::isfinite(r) || !(shifted > 0.0)) rep.all_positive = false;
    if (r < rep.ratio_min) rep.ratio_min = r, rep.argmin = mode;
    if (r > rep.ratio_max) rep.ratio_max = r, rep.argmax = mode;
    if (shifted < rep.shifted_min) rep.shifted_min = shifted, rep.shifted_argmin = mode;
    if (shifted > rep.shifted_max) rep.shifted_max = shifted, rep.shifted_argmax = mode;
  }
  return rep;
}

inline RatioReport verify_theorem2(double s, const ModeGrid& grid, double band_bound = 50.0) {
  BoltzmannSpectrum spectrum(CrossSectionModel::normalized(s));
  return verify_theorem2(s, grid, spectrum, band_bound);
}

/// One row of a split-based check.
struct SplitRow {
  int n = 0;
  int l = 0;
  double value = 0.0;
  double bound = 0.0;
  bool ok = true;
};

inline json split_rows_json(const std::vector<SplitRow>& rows) {
  json arr = json::array();
  for (const auto& r : rows) arr.push_back({{"n", r.n}, {"l", r.l}, {"value", r.value}, {"bound", r.bound}, {"ok", r.ok}});
  return arr;
}

/// |lambda_1(n,l)| <= (pi/4)^{2n+l-2s} / (2n+l-2s) for every grid pair with 2n+l >= 2.
struct SineBoundReport {
  double s = 0.0;
  std::vector<SplitRow> rows;
  std::vector<SplitRow> violations;
  double worst_ratio = 0.0;  // max |lambda_1| / bound

  bool passed() const { return !rows.empty() && violations.empty(); }
  json to_json() const {
    json j;
    j["check"] = "sine_term_bound";
    j["s"] = s;
    j["pairs_checked"] = rows.size();
    j["worst_ratio"] = worst_ratio;
    j["violations"] = split_rows_json(violations);
    j["passed"] = passed();
    return j;
  }
  std::string to_text() const {
    return "sine term bound  s=" + detail::brief(s) + "  pairs " + std::to_string(rows.size()) +
           "  worst |lambda1|/bound" + detail::fixed(worst_ratio) + "  violations " +
           std::to_string(violations.size()) + "  " + (passed() ? "PASS" : "FAIL") + "\n";
  }
};

inline double sine_bound(int n, int l, double s) {
  const double e = 2.0 * n + l - 2.0 * s;
  return std::pow(kQuarterPi, e) / e;
}

inline SineBoundReport lemma1_check(const ModeGrid& grid, double s) {
  SineBoundReport rep;
  rep.s = s;
  std::vector<std::pair<int, int>> pairs;
  for (const auto& p : grid.radial_pairs()) {
    if (2 * p.first + p.second >= 2) pairs.push_back(p);
  }
  rep.rows.resize(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t i) {
    const auto [n, l] = pairs[i];
    SplitRow row{n, l, lambda_split(n, l, s).lambda1, sine_bound(n, l, s), true};
    row.ok = std::abs(row.value) <= row.bound + 1e-10;
    rep.rows[i] = row;
  });
  for (const auto& r : rep.rows) {
    rep.worst_ratio = std::max(rep.worst_ratio, std::abs(r.value) / r.bound);
    if (!r.ok) rep.violations.push_back(r);
  }
  return rep;
}

/// lambda_2(n, l) against the grazing asymptotics (2n+l)^s C_s.
struct GrazingAsymptoticsReport {
  double s = 0.0;
  int l = 0;
  double grazing = 0.0;           // C_s
  double envelope_constant = 0.0; // C in lambda_2 <= C ((2n+l)^s + (l+2)^{2s})
  std::vector<int> n_values;
  std::vector<double> lambda2;
  std::vector<double> ratio;      // lambda_2 / ((2n+l)^s C_s)
  std::vector<double> envelope;   // lambda_2 / ((2n+l)^s + (l+2)^{2s})
  bool positive = true;
  bool envelope_holds = true;
  double tolerance = 0.05;

  double final_ratio() const { return ratio.empty() ? std::nan("") : ratio.back(); }
  bool passed() const {
    return !ratio.empty() && positive && envelope_holds && std::abs(final_ratio() - 1.0) <= tolerance;
  }
  json to_json() const {
    json j;
    j["check"] = "grazing_asymptotics";
    j["s"] = s;
    j["l"] = l;
    j["grazing_constant"] = grazing;
    j["envelope_constant"] = envelope_constant;
    json rows = json::array();
    for (std::size_t i = 0; i < n_values.size(); ++i) {
      rows.push_back({{"n", n_values[i]}, {"lambda2", lambda2[i]}, {"ratio", ratio[i]}, {"envelope", envelope[i]}});
    }
    j["terms"] = rows;
    j["final_ratio"] = final_ratio();
    j["tolerance"] = tolerance;
    j["passed"] = passed();
    return j;
  }
  std::string to_text() const {
    std::string out = "grazing asymptotics  s=" + detail::brief(s) + "  l=" + std::to_string(l) + "  C_s" +
                      detail::fixed(grazing) + "\n";
    for (std::size_t i = 0; i < n_values.size(); ++i) {
      out += "  n=" + std::to_string(n_values[i]) + "  lambda2" + detail::fixed(lambda2[i]) + "  ratio" +
             detail::fixed(ratio[i]) + "\n";
    }
    out += std::string("  ") + (passed() ? "PASS" : "FAIL") + "\n";
    return out;
  }
};

/// The envelope constant is the larger of the first-term calibration and C_s;
/// lambda_2 / ((2n+l)^s + (l+2)^{2s}) climbs towards C_s along the sequence.
inline GrazingAsymptoticsReport lemma2_check(double s, int l_fixed, const std::vector<int>& n_sequence, double tolerance = 0.05) {
  if (l_fixed < 0 || l_fixed > 2) throw std::domain_error("lemma2_check: l must be 0, 1 or 2");
  if (n_sequence.empty()) throw std::invalid_argument("lemma2_check: empty n sequence");
  if (!std::is_sorted(n_sequence.begin(), n_sequence.end())) {
    throw std::invalid_argument("lemma2_check: n sequence must increase");
  }
  GrazingAsymptoticsReport rep;
  rep.s = s;
  rep.l = l_fixed;
  rep.tolerance = tolerance;
  rep.grazing = grazing_constant(s);
  rep.n_values = n_sequence;
  const std::size_t count = n_sequence.size();
  rep.lambda2.resize(count);
  parallel_for(count, [&](std::size_t i) {
    rep.lambda2[i] = lambda_split(n_sequence[i], l_fixed, s).lambda2;
  });
  for (std::size_t i = 0; i < count; ++i) {
    const double k = 2.0 * n_sequence[i] + l_fixed;
    rep.ratio.push_back(rep.lambda2[i] / (std::pow(k, s) * rep.grazing));
    rep.envelope.push_back(rep.lambda2[i] / (std::pow(k, s) + std::pow(l_fixed + 2.0, 2.0 * s)));
    if (!(rep.lambda2[i] > 0.0)) rep.positive = false;
  }
  rep.envelope_constant = std::max(rep.envelope.front(), rep.grazing);
  for (double e : rep.envelope) {
    if (e > rep.envelope_constant * (1.0 + 1e-12)) rep.envelope_holds = false;
  }
  return rep;
}

/// Proof-level lower bound for l >= 2:
///   lambda_3(n,l) >= l^{2s} int_1^{pi/2} x^{-1-2s} (1 - |P_l(cos(x/l))|) dx.
inline double lambda3_lower_bound(int l, double s) {
  if (l < 2) throw std::domain_error("lambda3_lower_bound: needs l >= 2");
  const auto f = [l, s](double x) {
    return std::pow(x, -1.0 - 2.0 * s) * (1.0 - std::abs(legendre_p(l, std::cos(x / l))));
  };
  std::vector<double> breaks;
  const int pieces = 8;
  for (int i = 0; i <= pieces; ++i) breaks.push_back(1.0 + (std::numbers::pi / 2.0 - 1.0) * i / pieces);
  return std::pow(static_cast<double>(l), 2.0 * s) * integrate_adaptive(f, breaks, QuadOptions{1e-15, 1e-11, 4000}).value;
}

/// int_{1/2}^{pi/4} 2 theta^{-1-2s} dtheta (upper bound for l = 0).
inline double lambda3_l0_upper(double s) {
  return (std::pow(0.5, -2.0 * s) - std::pow(kQuarterPi, -2.0 * s)) / s;
}

/// int_{1/3}^{pi/4} theta^{-1-2s} (1 - cos theta) dtheta (lower bound for l = 1).
inline double lambda3_l1_lower(double s) {
  const auto f = [s](double t) {
    const double h = std::sin(0.5 * t);
    return std::pow(t, -1.0 - 2.0 * s) * 2.0 * h * h;
  };
  return integrate_adaptive(f, 1.0 / 3.0, kQuarterPi, QuadOptions{1e-16, 1e-13, 2000}).value;
}

struct Lambda3GrowthReport {
  double s = 0.0;
  int l_max = 0;
  std::vector<int> n_probe;
  double band_min = std::numeric_limits<double>::infinity();  // of lambda_3 / (1+l)^{2s}, l in [2, l_max]
  double band_max = 0.0;
  std::vector<SplitRow> lower_bound_rows;  // l >= 2, bound = proof lower bound
  std::vector<SplitRow> l0_rows;           // bound = upper bound
  std::vector<SplitRow> l1_rows;           // bound = lower bound
  double band_limit = 10.0;
  double empirical_c = std::numeric_limits<double>::infinity();  // min of lambda_3 / l^{2s}, l in [2, l_max]
  ModeIndex empirical_c_at;
  double l2_calibrated_min = std::numeric_limits<double>::infinity();  // min of lambda_3 / (c_2(n) l^{2s})

  double width() const { return band_max / band_min; }
  bool bounds_hold() const {
    auto ok = [](const std::vector<SplitRow>& v) {
      return std::all_of(v.begin(), v.end(), [](const SplitRow& r) { return r.ok; });
    };
    return ok(lower_bound_rows) && ok(l0_rows) && ok(l1_rows);
  }
  bool band_holds() const { return band_min > 0.0 && width() <= band_limit; }
  bool passed() const {
    return !lower_bound_rows.empty() && band_holds() && bounds_hold() && empirical_c > 0.0 && std::isfinite(empirical_c);
  }

  json to_json() const {
    json j;
    j["check"] = "lambda3_growth";
    j["s"] = s;
    j["l_max"] = l_max;
    j["n_probe"] = n_probe;
    j["band"] = {{"min", band_min}, {"max", band_max}, {"width", width()}, {"limit", band_limit}};
    j["empirical_c"] = {{"value", empirical_c}, {"at", detail::mode_json(empirical_c_at)}};
    j["l2_calibrated_min_ratio"] = l2_calibrated_min;
    j["lower_bound"] = split_rows_json(lower_bound_rows);
    j["l0_upper"] = split_rows_json(l0_rows);
    j["l1_lower"] = split_rows_json(l1_rows);
    j["passed"] = passed();
    return j;
  }
  std::string to_text() const {
    return "lambda3 growth  s=" + detail::brief(s) + "  band [" + io::format_double(band_min) + ", " +
           io::format_double(band_max) + "]  width" + detail::fixed(width()) + "  c " + io::format_double(empirical_c) +
           "  l=2 calibrated min" + detail::fixed(l2_calibrated_min) + "  bounds " +
           (bounds_hold() ? "hold" : "violated") + "  " + (passed() ? "PASS" : "FAIL") + "\n";
  }
};

inline Lambda3GrowthReport lemma4_check(int l_max, double s, const std::vector<int>& n_probe) {
  if (l_max < 2) throw std::domain_error("lemma4_check: l_max must be at least 2");
  if (n_probe.empty()) throw std::invalid_argument("lemma4_check: no n values to probe");
  Lambda3GrowthReport rep;
  rep.s = s;
  rep.l_max = l_max;
  rep.n_probe = n_probe;
  struct Job {
    int n;
    int l;
  };
  std::vector<Job> jobs;
  for (int n : n_probe) {
    for (int l = 0; l <= l_max; ++l) {
      if (2 * n + l >= 1) jobs.push_back({n, l});
    }
  }
  std::vector<double> lambda3(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t i) { lambda3[i] = lambda_split(jobs[i].n, jobs[i].l, s).lambda3; });
  std::vector<double> lower(l_max + 1, 0.0);
  parallel_for(static_cast<std::size_t>(l_max - 1), [&](std::size_t i) {
    const int l = static_cast<int>(i) + 2;
    lower[l] = lambda3_lower_bound(l, s);
  });
  const double up0 = lambda3_l0_upper(s);
  const double lo1 = lambda3_l1_lower(s);
  std::map<int, double> c2;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (jobs[i].l == 2) c2[jobs[i].n] = lambda3[i] / std::pow(2.0, 2.0 * s);
  }
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const auto [n, l] = jobs[i];
    const double v = lambda3[i];
    if (l == 0) {
      rep.l0_rows.push_back({n, l, v, up0, v >= -1e-12 && v <= up0 + 1e-10});
    } else if (l == 1) {
      rep.l1_rows.push_back({n, l, v, lo1, v >= lo1 - 1e-10});
    } else {
      rep.lower_bound_rows.push_back({n, l, v, lower[l], v >= lower[l] - 1e-10});
      const double b = v / std::pow(1.0 + l, 2.0 * s);
      rep.band_min = std::min(rep.band_min, b);
      rep.band_max = std::max(rep.band_max, b);
      const double c = v / std::pow(l, 2.0 * s);
      if (c < rep.empirical_c) rep.empirical_c = c, rep.empirical_c_at = ModeIndex(n, l, 0);
      rep.l2_calibrated_min = std::min(rep.l2_calibrated_min, c / c2.at(n));
    }
  }
  return rep;
}

/// Hilb approximation P_l(cos theta) ~ (theta / sin theta)^{1/2} J_0((l + 1/2) theta).
inline double hilb_approximation(int l, double theta) {
  const double factor = theta == 0.0 ? 1.0 : std::sqrt(theta / std::sin(theta));
  return factor * bessel_j0((l + 0.5) * theta);
}

struct HilbReport {
  int l = 0;
  double max_scaled_deviation = 0.0;  // max |P_l(cos) - hilb| / theta^2
  double argmax = 0.0;
  std::size_t points = 0;
  json to_json() const {
    return {{"l", l}, {"max_scaled_deviation", max_scaled_deviation}, {"theta_at_max", argmax}, {"points", points}};
  }
};

/// Uniform grid theta_i = i c / (64 l), i = 1..64 on (0, c/l].
inline std::vector<double> hilb_grid(int l, double c = 1.0, int points = 64) {
  std::vector<double> g;
  for (int i = 1; i <= points; ++i) g.push_back(c * i / (static_cast<double>(points) * l));
  return g;
}

inline HilbReport hilb_check(int l, const std::vector<double>& theta_grid) {
  if (l < 1) throw std::domain_error("hilb_check: l must be positive");
  HilbReport rep;
  rep.l = l;
  for (double th : theta_grid) {
    if (!(th > 0.0)) throw std::domain_error("hilb_check: grid points must be positive");
    const double dev = std::abs(legendre_p(l, std::cos(th)) - hilb_approximation(l, th)) / (th * th);
    ++rep.points;
    if (dev > rep.max_scaled_deviation) rep.max_scaled_deviation = dev, rep.argmax = th;
  }
  return rep;
}

/// Hilb deviations for several degrees against one shared constant.
struct HilbSuiteReport {
  std::vector<HilbReport> rows;
  double bound = 0.05;
  double max_over_l() const {
    double m = 0.0;
    for (const auto& r : rows) m = std::max(m, r.max_scaled_deviation);
    return m;
  }
  bool passed() const { return !rows.empty() && max_over_l() <= bound; }
  json to_json() const {
    json j;
    j["check"] = "hilb";
    json arr = json::array();
    for (const auto& r : rows) arr.push_back(r.to_json());
    j["rows"] = arr;
    j["bound"] = bound;
    j["max"] = max_over_l();
    j["passed"] = passed();
    return j;
  }
  std::string to_text() const {
    std::string out = "hilb\n";
    for (const auto& r : rows) {
      out += "  l=" + std::to_string(r.l) + "  max dev/theta^2" + detail::fixed(r.max_scaled_deviation) + "\n";
    }
    out += "  bound" + detail::fixed(bound) + "  " + (passed() ? "PASS" : "FAIL") + "\n";
    return out;
  }
};

inline HilbSuiteReport hilb_suite(const std::vector<int>& degrees, double bound = 0.05) {
  HilbSuiteReport rep;
  rep.bound = bound;
  for (int l : degrees) rep.rows.push_back(hilb_check(l, hilb_grid(l)));
  return rep;
}

/// cos^k theta <= exp(-(2/pi^2) k theta^2) on a uniform grid of [0, 1/2].
inline bool cosine_gaussian_bound_holds(int k, int points = 501) {
  for (int i = 0; i < points; ++i) {
    const double th = 0.5 * i / (points - 1);
    const double lhs = std::exp(k * std::log(std::cos(th)));
    const double rhs = std::exp(-(2.0 / (std::numbers::pi * std::numbers::pi)) * k * th * th);
    if (lhs > rhs * (1.0 + 1e-14)) return false;
  }
  return true;
}

/// Quadratic forms of a coefficient vector.
struct CoerciveNorms {
  double dirichlet = 0.0;    // sum lambda_B c^2
  double hs_norm = 0.0;      // sum_{non-kernel} (3/2 + 2n + l)^s c^2
  double sphere_norm = 0.0;  // sum_{non-kernel} (l(l+1))^s c^2
  double l2_squared = 0.0;   // sum c^2
  double shifted() const { return dirichlet + l2_squared; }
  double ratio() const { return dirichlet / (hs_norm + sphere_norm); }
  json to_json() const {
    return {{"dirichlet", dirichlet}, {"hs_norm", hs_norm}, {"sphere_norm", sphere_norm},
            {"l2_squared", l2_squared}, {"shifted_dirichlet", shifted()}};
  }
};

inline CoerciveNorms coercive_norms(const SpectralCoefficients& c, BoltzmannSpectrum& spectrum) {
  const double s = spectrum.kernel().s();
  std::vector<std::pair<int, int>> pairs;
  for (const auto& [mode, v] : c.terms()) pairs.emplace_back(mode.n, mode.l);
  spectrum.fill(pairs);
  CompensatedSum d, h, sp, l2;
  for (const auto& [mode, v] : c.terms()) {
    const double c2 = v * v;
    l2 += c2;
    d += spectrum(mode) * c2;
    if (is_collisional_invariant(mode)) continue;
    h += std::pow(1.5 + mode.level(), s) * c2;
    sp += std::pow(static_cast<double>(mode.sphere_level()), s) * c2;
  }
  return {d.value(), h.value(), sp.value(), l2.value()};
}

inline CoerciveNorms coercive_norms(const SpectralCoefficients& c, const CrossSectionModel& kernel) {
  BoltzmannSpectrum spectrum(kernel);
  return coercive_norms(c, spectrum);
}

}  // namespace kinspec
