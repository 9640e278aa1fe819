#pragma once

// Functional calculus on the eigenbasis: every operator here is diagonal, so
// powers, multipliers and e^{-tL} act coefficient by coefficient.

#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "kinspec/eigenbasis.hpp"
#include "kinspec/io.hpp"
#include "kinspec/spectra.hpp"
#include "kinspec/summation.hpp"

namespace kinspec {

/// Which diagonal operator to apply.
class OperatorSpec {
 public:
  enum class Kind { landau, boltzmann, fractional_landau };

  static OperatorSpec landau() { return OperatorSpec(Kind::landau, 0.0, std::nullopt); }
  static OperatorSpec fractional_landau(double s) {
    require_exponent(s);
    return OperatorSpec(Kind::fractional_landau, s, std::nullopt);
  }
  static OperatorSpec boltzmann(const CrossSectionModel& kernel) {
    return OperatorSpec(Kind::boltzmann, kernel.s(), kernel);
  }

  Kind kind() const noexcept { return kind_; }
  double s() const noexcept { return s_; }
  const CrossSectionModel& kernel() const {
    if (!kernel_) throw std::logic_error("OperatorSpec: no kernel for this operator");
    return *kernel_;
  }

  std::string label() const {
    switch (kind_) {
      case Kind::landau:
        return "landau";
      case Kind::fractional_landau:
        return "fractional-landau";
      case Kind::boltzmann:
        return "boltzmann";
    }
    return "landau";
  }

  /// Eigenvalue on `mode`, exactly 0 on the collisional invariants.
  double eigenvalue(const ModeIndex& mode) const {
    if (is_collisional_invariant(mode)) return 0.0;
    switch (kind_) {
      case Kind::landau:
        return landau_eigenvalue(mode);
      case Kind::fractional_landau:
        return std::pow(landau_eigenvalue(mode), s_);
      case Kind::boltzmann:
        return (*spectrum_)(mode);
    }
    return 0.0;
  }

  /// Precomputes Boltzmann eigenvalues for the modes of `c`; no-op otherwise.
  void prepare(const SpectralCoefficients& c) const {
    if (kind_ != Kind::boltzmann) return;
    std::vector<std::pair<int, int>> pairs;
    for (const auto& [mode, v] : c.terms()) pairs.emplace_back(mode.n, mode.l);
    spectrum_->fill(pairs);
  }

 private:
  static void require_exponent(double s) {
    if (!(s > 0.0 && s < 1.0)) throw std::domain_error("OperatorSpec: s must lie in (0, 1)");
  }

  OperatorSpec(Kind kind, double s, std::optional<CrossSectionModel> kernel)
      : kind_(kind), s_(s), kernel_(std::move(kernel)) {
    if (kernel_) spectrum_ = std::make_shared<BoltzmannSpectrum>(*kernel_);
  }

  Kind kind_;
  double s_;
  std::optional<CrossSectionModel> kernel_;
  std::shared_ptr<BoltzmannSpectrum> spectrum_;  // shared cache, filled lazily
};

inline double eigenvalue_of(const OperatorSpec& spec, const ModeIndex& mode) { return spec.eigenvalue(mode); }

/// alpha = lambda_B / lambda_L^s; 1 on the collisional invariants.
inline double alpha_multiplier(const ModeIndex& mode, const CrossSectionModel& kernel) {
  if (is_collisional_invariant(mode)) return 1.0;
  return boltzmann_eigenvalue(mode, kernel) / std::pow(landau_eigenvalue(mode), kernel.s());
}

/// e^{-tL} c. Collisional-invariant coefficients are copied untouched.
inline SpectralCoefficients evolve(const SpectralCoefficients& c0, const OperatorSpec& spec, double t) {
  if (!(t >= 0.0)) throw std::domain_error("evolve: time must be non-negative");
  spec.prepare(c0);
  SpectralCoefficients out(c0.cutoff());
  for (const auto& [mode, v] : c0.terms()) {
    if (is_collisional_invariant(mode)) {
      out.set(mode, v);
    } else {
      out.set(mode, v * std::exp(-spec.eigenvalue(mode) * t));
    }
  }
  return out;
}

/// Apply the operator itself: c -> lambda c.
inline SpectralCoefficients apply_operator(const SpectralCoefficients& c, const OperatorSpec& spec) {
  spec.prepare(c);
  SpectralCoefficients out(c.cutoff());
  for (const auto& [mode, v] : c.terms()) out.set(mode, spec.eigenvalue(mode) * v);
  return out;
}

/// sum lambda c^2.
inline double dirichlet_form(const SpectralCoefficients& c, const OperatorSpec& spec) {
  spec.prepare(c);
  CompensatedSum d;
  for (const auto& [mode, v] : c.terms()) d += spec.eigenvalue(mode) * v * v;
  return d.value();
}

/// d/dt ||e^{-tL} c||^2 at t = 0, i.e. -2 sum lambda c^2.
inline double norm_squared_rate(const SpectralCoefficients& c, const OperatorSpec& spec) {
  return -2.0 * dirichlet_form(c, spec);
}

/// Relative residual between L_B c and alpha L_L^s c.
inline double compose_check(const SpectralCoefficients& c, const CrossSectionModel& kernel) {
  const auto lb = OperatorSpec::boltzmann(kernel);
  const auto lf = OperatorSpec::fractional_landau(kernel.s());
  lb.prepare(c);
  CompensatedSum diff, ref;
  for (const auto& [mode, v] : c.terms()) {
    const double lhs = lb.eigenvalue(mode) * v;
    const double alpha = is_collisional_invariant(mode) ? 1.0 : lb.eigenvalue(mode) / lf.eigenvalue(mode);
    const double rhs = alpha * (lf.eigenvalue(mode) * v);
    diff += (lhs - rhs) * (lhs - rhs);
    ref += lhs * lhs;
  }
  if (ref.value() == 0.0) return std::sqrt(diff.value());
  return std::sqrt(diff.value() / ref.value());
}

struct TraceRow {
  double t = 0.0;
  double l2_norm = 0.0;
  double l2_norm_nonkernel = 0.0;
  double dirichlet = 0.0;
};

/// Norms of e^{-tL} c at each requested time, in the order given.
inline std::vector<TraceRow> evolution_trace(const SpectralCoefficients& c0, const OperatorSpec& spec,
                                             const std::vector<double>& times) {
  spec.prepare(c0);
  std::vector<TraceRow> rows;
  for (double t : times) {
    const auto c = evolve(c0, spec, t);
    rows.push_back({t, c.l2_norm(), project_non_kernel(c).l2_norm(), dirichlet_form(c, spec)});
  }
  return rows;
}

inline std::string trace_csv(const std::vector<TraceRow>& rows) {
  std::string out = "t,l2_norm,l2_norm_nonkernel,dirichlet_form\n";
  for (const auto& r : rows) {
    out += io::format_double(r.t) + "," + io::format_double(r.l2_norm) + "," +
           io::format_double(r.l2_norm_nonkernel) + "," + io::format_double(r.dirichlet) + "\n";
  }
  return out;
}

}  // namespace kinspec
