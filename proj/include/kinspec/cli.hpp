#pragma once

// Command-line front end: eigs, verify, evolve, norms.
//
// Exit codes: 0 success, 1 failed verification, 2 configuration or parse
// error, 3 quadrature failure.

#include "CLI11.hpp"
#include "json.hpp"

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "kinspec/analysis.hpp"
#include "kinspec/eigenbasis.hpp"
#include "kinspec/errors.hpp"
#include "kinspec/io.hpp"
#include "kinspec/semigroup.hpp"
#include "kinspec/spectra.hpp"

namespace kinspec::cli {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kConfigError = 2, kQuadratureFailure = 3 };

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  double s = 0.5;
  std::string kernel = "normalized";
  int n_max = 16;
  int l_max = 32;
  std::optional<int> level_max;  // default max(2 n_max, l_max)
  int radial_nodes = 48;
  std::optional<double> tol;
  std::filesystem::path out = ".";
  std::vector<double> times{0.0, 0.1, 0.25, 0.5, 1.0, 2.0, 5.0};
  std::string initial = "preset:bimodal";
  std::string op = "boltzmann";

  ModeGrid grid() const {
    return {n_max, l_max, level_max.value_or(std::max(2 * n_max, l_max))};
  }
};

inline CrossSectionModel parse_kernel(const std::string& text, double s) {
  if (text == "normalized") return CrossSectionModel::normalized(s);
  if (text.rfind("cutoff:", 0) == 0) {
    double eps = 0.0;
    try {
      eps = io::parse_double(text.substr(7));
    } catch (const std::exception&) {
      throw ConfigError("kernel: cannot parse cutoff angle in '" + text + "'");
    }
    if (!(eps > 0.0 && eps < kQuarterPi)) throw ConfigError("kernel: cutoff angle must lie in (0, pi/4)");
    return CrossSectionModel::cutoff(s, eps);
  }
  throw ConfigError("kernel: expected 'normalized' or 'cutoff:EPS', got '" + text + "'");
}

inline std::vector<double> parse_times(const std::string& text) {
  std::vector<double> out;
  for (auto field : io::split(text, ',')) {
    double t = 0.0;
    try {
      t = io::parse_double(field);
    } catch (const std::exception&) {
      throw ConfigError("times: cannot parse '" + std::string(field) + "'");
    }
    if (!(t >= 0.0) || !std::isfinite(t)) throw ConfigError("times: sample times must be finite and non-negative");
    out.push_back(t);
  }
  if (out.empty()) throw ConfigError("times: empty list");
  return out;
}

inline void validate(const RunConfig& c) {
  if (!(c.s > 0.0 && c.s < 1.0)) throw ConfigError("s must lie in (0, 1), got " + io::format_double(c.s));
  if (c.n_max < 0 || c.l_max < 0) throw ConfigError("nmax and lmax must be non-negative");
  if (c.n_max == 0 && c.l_max == 0) throw ConfigError("grid bounds must not both be zero");
  if (c.level_max && *c.level_max < 1) throw ConfigError("level must be positive");
  if (c.radial_nodes < 1) throw ConfigError("radial-nodes must be positive");
  if (c.tol && !(*c.tol > 0.0 && *c.tol < 1e-2)) throw ConfigError("tol must lie in (0, 1e-2)");
  if (c.op != "landau" && c.op != "boltzmann" && c.op != "fractional-landau") {
    throw ConfigError("operator must be landau, boltzmann or fractional-landau");
  }
  (void)parse_kernel(c.kernel, c.s);
}

/// Overlay keys of a JSON config onto `c`.
inline void apply_config_file(RunConfig& c, const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(io::read_file(path));
  } catch (const std::exception& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigError("config " + path.string() + ": expected a JSON object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "s") c.s = v.get<double>();
      else if (key == "kernel") c.kernel = v.get<std::string>();
      else if (key == "nmax") c.n_max = v.get<int>();
      else if (key == "lmax") c.l_max = v.get<int>();
      else if (key == "level") c.level_max = v.get<int>();
      else if (key == "radial_nodes") c.radial_nodes = v.get<int>();
      else if (key == "tol") c.tol = v.get<double>();
      else if (key == "out") c.out = v.get<std::string>();
      else if (key == "times") c.times = v.is_string() ? parse_times(v.get<std::string>()) : v.get<std::vector<double>>();
      else if (key == "initial") c.initial = v.get<std::string>();
      else if (key == "operator") c.op = v.get<std::string>();
      else throw ConfigError("config " + path.string() + ": unknown key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
}

/// Named initial data.
///
///   bimodal        (0,0,0) 0.5, (1,0,0) -0.3, (0,2,0) 0.4, (2,0,0) 0.25,
///                  (0,4,0) 0.2, (1,2,1) -0.15
///   kernel-only    (0,0,0) 1, (0,1,-1) 0.2, (0,1,0) -0.3, (0,1,1) 0.1, (1,0,0) 0.5
///   shifted-maxwellian
///                  coefficients of (2 pi)^{-3/4} (e^{-|v-u|^2/4} - e^{-|v|^2/4}),
///                  u = (1/2, 0, 0), obtained by quadrature
inline SpectralCoefficients preset(const std::string& name, const RunConfig& cfg) {
  const int cutoff = cfg.grid().level_max;
  auto fixed = [&](std::initializer_list<std::pair<ModeIndex, double>> rows) {
    int need = cutoff;
    for (const auto& r : rows) need = std::max(need, r.first.level());
    SpectralCoefficients c(need);
    for (const auto& [m, v] : rows) c.set(m, v);
    return c;
  };
  if (name == "bimodal") {
    return fixed({{{0, 0, 0}, 0.5}, {{1, 0, 0}, -0.3}, {{0, 2, 0}, 0.4},
                  {{2, 0, 0}, 0.25}, {{0, 4, 0}, 0.2}, {{1, 2, 1}, -0.15}});
  }
  if (name == "kernel-only") {
    return fixed({{{0, 0, 0}, 1.0}, {{0, 1, -1}, 0.2}, {{0, 1, 0}, -0.3}, {{0, 1, 1}, 0.1}, {{1, 0, 0}, 0.5}});
  }
  if (name == "shifted-maxwellian") {
    const double norm = std::pow(2.0 * std::numbers::pi, -0.75);
    auto f = [norm](const Vec3& v) {
      const double r2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
      const double d2 = (v[0] - 0.5) * (v[0] - 0.5) + v[1] * v[1] + v[2] * v[2];
      return norm * (std::exp(-0.25 * d2) - std::exp(-0.25 * r2));
    };
    const auto grid = build_quadrature(cfg.radial_nodes, cutoff);
    return expand(f, grid, cutoff);
  }
  throw ConfigError("unknown preset '" + name + "' (known: bimodal, kernel-only, shifted-maxwellian)");
}

inline SpectralCoefficients load_initial(const RunConfig& cfg) {
  if (cfg.initial.rfind("preset:", 0) == 0) return preset(cfg.initial.substr(7), cfg);
  std::string text;
  try {
    text = io::read_file(cfg.initial);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("initial: ") + e.what());
  }
  try {
    return coefficients_from_csv(text);
  } catch (const std::exception& e) {
    throw ConfigError("initial " + cfg.initial + ": " + e.what());
  }
}

inline OperatorSpec operator_spec(const RunConfig& cfg) {
  if (cfg.op == "landau") return OperatorSpec::landau();
  if (cfg.op == "fractional-landau") return OperatorSpec::fractional_landau(cfg.s);
  return OperatorSpec::boltzmann(parse_kernel(cfg.kernel, cfg.s));
}

inline void prepare_output(const RunConfig& cfg) {
  std::error_code ec;
  std::filesystem::create_directories(cfg.out, ec);
  if (ec || !std::filesystem::is_directory(cfg.out)) {
    throw ConfigError("out: cannot create directory " + cfg.out.string());
  }
}

inline void apply_tolerance(const RunConfig& cfg) {
  if (cfg.tol) set_spectral_tolerance(*cfg.tol);
}

inline int run_eigs(const RunConfig& cfg) {
  const auto kernel = parse_kernel(cfg.kernel, cfg.s);
  const auto grid = cfg.grid();
  prepare_output(cfg);
  apply_tolerance(cfg);
  try {
    const auto rows = eigenvalue_table(grid, kernel);
    auto sidecar = eigenvalue_sidecar(grid, kernel);
    if (cfg.tol) sidecar["tol"] = *cfg.tol;
    io::atomic_write(cfg.out / "eigenvalues.csv", eigenvalue_csv(rows));
    io::atomic_write(cfg.out / "eigenvalues.json", sidecar.dump(2) + "\n");
    std::cout << "wrote " << rows.size() << " rows to " << (cfg.out / "eigenvalues.csv").string() << "\n";
  } catch (const QuadratureError& e) {
    nlohmann::ordered_json j;
    j["error"] = "quadrature";
    j["message"] = e.what();
    j["value"] = e.value();
    j["error_estimate"] = e.error_estimate();
    j["s"] = cfg.s;
    j["kernel"] = kernel.label();
    io::atomic_write(cfg.out / "eigs_failure.json", j.dump(2) + "\n");
    std::cerr << "eigs: " << e.what() << "\n";
    return kQuadratureFailure;
  }
  return kOk;
}

/// Full battery at the configured s and grid.
inline int run_verify(const RunConfig& cfg) {
  const auto kernel = parse_kernel(cfg.kernel, cfg.s);
  const auto grid = cfg.grid();
  prepare_output(cfg);
  apply_tolerance(cfg);
  nlohmann::ordered_json report;
  report["s"] = cfg.s;
  report["kernel"] = kernel.label();
  report["grid"] = {{"n_max", grid.n_max}, {"l_max", grid.l_max}, {"level_max", grid.level_max}};
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  bool all = true;
  auto record = [&](const std::string& name, bool ok, nlohmann::ordered_json detail, const std::string& text) {
    detail["name"] = name;
    detail["passed"] = ok;
    checks.push_back(detail);
    all = all && ok;
    std::cout << text;
  };

  try {
    BoltzmannSpectrum spectrum(kernel);
    spectrum.fill(grid);

    // kernel coincidence
    {
      bool ok = true;
      nlohmann::ordered_json bad = nlohmann::ordered_json::array();
      for (const auto& [n, l] : grid.radial_pairs()) {
        const ModeIndex m(n, l, 0);
        const bool zero_b = std::abs(spectrum(m)) <= 1e-10;
        const bool zero_l = landau_eigenvalue(m) == 0.0;
        if (zero_b != zero_l || spectrum(m) < -1e-10) {
          ok = false;
          bad.push_back(detail::mode_json(m));
        }
      }
      record("kernel_coincidence", ok, {{"offending", bad}},
             std::string("kernel coincidence  ") + (ok ? "PASS" : "FAIL") + "\n");
    }

    // ratio band and its stability under grid doubling
    const ModeGrid doubled{2 * grid.n_max, 2 * grid.l_max, 2 * grid.level_max};
    const auto band = verify_theorem2(cfg.s, grid, spectrum);
    const auto band_doubled = verify_theorem2(cfg.s, doubled, spectrum);
    record("ratio_band", band.passed(), band.to_json(), band.to_text());
    const double change = std::abs(band_doubled.width() / band.width() - 1.0);
    record("ratio_band_stability", change < 0.05,
           {{"width", band.width()}, {"width_doubled", band_doubled.width()}, {"relative_change", change}},
           "ratio band stability  change " + io::format_double(change) + "  " + (change < 0.05 ? "PASS" : "FAIL") +
               "\n");

    if (kernel.kind() == CrossSectionModel::Kind::normalized) {
      const auto l1 = lemma1_check(grid, cfg.s);
      record("sine_term_bound", l1.passed(), l1.to_json(), l1.to_text());

      std::vector<int> ns;
      for (int n = 1; n <= 2048; n *= 2) ns.push_back(n);
      const auto l2 = lemma2_check(cfg.s, 0, ns);
      record("grazing_asymptotics", l2.passed(), l2.to_json(), l2.to_text());

      const auto l4 = lemma4_check(std::max(2, grid.l_max), cfg.s, {0, 1, 4});
      record("lambda3_growth", l4.passed(), l4.to_json(), l4.to_text());

      double worst = 0.0;
      for (const auto& [n, l] : grid.radial_pairs()) {
        if (2 * n + l < 1) continue;
        worst = std::max(worst, std::abs(lambda_split(n, l, cfg.s).sum() - spectrum(ModeIndex(n, l, 0))));
      }
      record("split_identity", worst <= 1e-8, {{"max_abs_difference", worst}},
             "split identity  max diff " + io::format_double(worst) + "  " + (worst <= 1e-8 ? "PASS" : "FAIL") + "\n");

      const double cq = grazing_constant(cfg.s), cc = grazing_constant_closed_form(cfg.s);
      const bool gok = std::abs(cq - cc) <= 1e-8;
      record("grazing_constant", gok, {{"quadrature", cq}, {"closed_form", cc}},
             "grazing constant  " + io::format_double(cq) + " vs " + io::format_double(cc) + "  " +
                 (gok ? "PASS" : "FAIL") + "\n");
    }

    const auto hilb = hilb_suite({4, 16, 64, 256});
    record("hilb", hilb.passed(), hilb.to_json(), hilb.to_text());
  } catch (const QuadratureError& e) {
    report["checks"] = checks;
    report["error"] = e.what();
    report["passed"] = false;
    io::atomic_write(cfg.out / "verify_report.json", report.dump(2) + "\n");
    std::cerr << "verify: " << e.what() << "\n";
    return kQuadratureFailure;
  }

  report["checks"] = checks;
  report["passed"] = all;
  io::atomic_write(cfg.out / "verify_report.json", report.dump(2) + "\n");
  std::cout << (all ? "ALL CHECKS PASSED" : "SOME CHECKS FAILED") << "\n";
  return all ? kOk : kCheckFailed;
}

inline int run_evolve(const RunConfig& cfg) {
  const auto spec = operator_spec(cfg);
  const auto c0 = load_initial(cfg);
  prepare_output(cfg);
  apply_tolerance(cfg);
  try {
    const auto rows = evolution_trace(c0, spec, cfg.times);
    io::atomic_write(cfg.out / "trace.csv", trace_csv(rows));
    const double t_end = cfg.times.empty() ? 0.0 : *std::max_element(cfg.times.begin(), cfg.times.end());
    io::atomic_write(cfg.out / "final_coefficients.csv", to_csv(evolve(c0, spec, t_end)));
    nlohmann::ordered_json side;
    side["operator"] = spec.label();
    side["s"] = cfg.s;
    side["kernel"] = cfg.kernel;
    side["initial"] = cfg.initial;
    side["t_final"] = t_end;
    io::atomic_write(cfg.out / "trace.json", side.dump(2) + "\n");
    std::cout << "wrote " << rows.size() << " trace rows to " << (cfg.out / "trace.csv").string() << "\n";
  } catch (const QuadratureError& e) {
    std::cerr << "evolve: " << e.what() << "\n";
    return kQuadratureFailure;
  }
  return kOk;
}

inline int run_norms(const RunConfig& cfg) {
  const auto kernel = parse_kernel(cfg.kernel, cfg.s);
  const auto c = load_initial(cfg);
  prepare_output(cfg);
  apply_tolerance(cfg);
  try {
    const auto norms = coercive_norms(c, kernel);
    nlohmann::ordered_json j;
    j["s"] = cfg.s;
    j["kernel"] = kernel.label();
    j["initial"] = cfg.initial;
    j["norms"] = norms.to_json();
    j["dirichlet_over_norms"] = norms.ratio();
    io::atomic_write(cfg.out / "norms.json", j.dump(2) + "\n");
    std::cout << j.dump(2) << "\n";
  } catch (const QuadratureError& e) {
    std::cerr << "norms: " << e.what() << "\n";
    return kQuadratureFailure;
  }
  return kOk;
}

inline int dispatch(const RunConfig& cfg) {
  if (cfg.command == "eigs") return run_eigs(cfg);
  if (cfg.command == "verify") return run_verify(cfg);
  if (cfg.command == "evolve") return run_evolve(cfg);
  if (cfg.command == "norms") return run_norms(cfg);
  throw ConfigError("unknown command '" + cfg.command + "'");
}

/// Parses argv and runs the selected subcommand; returns the process exit code.
inline int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Spectral diagonalization of the linearized Landau and non-cutoff Boltzmann operators"};
  app.require_subcommand(1);

  struct Raw {
    double s = 0.5;
    std::string kernel, times, initial, op, out, config;
    int n_max = 0, l_max = 0, level = 0, radial = 0;
    double tol = 0.0;
  } raw;

  std::vector<CLI::App*> subs;
  const std::pair<const char*, const char*> commands[] = {
      {"eigs", "write the eigenvalue table and its JSON sidecar"},
      {"verify", "run the numerical checks and write verify_report.json"},
      {"evolve", "evolve an initial state and write its norm trace"},
      {"norms", "report coercive norms of an initial state"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", raw.config, "JSON config file; flags override it");
    sub->add_option("--s", raw.s, "singularity exponent in (0, 1)");
    sub->add_option("--kernel", raw.kernel, "normalized | cutoff:EPS");
    sub->add_option("--nmax", raw.n_max, "largest radial index n");
    sub->add_option("--lmax", raw.l_max, "largest degree l");
    sub->add_option("--level", raw.level, "largest 2n+l (default max(2 nmax, lmax))");
    sub->add_option("--radial-nodes", raw.radial, "radial quadrature nodes for velocity-space presets");
    sub->add_option("--tol", raw.tol, "relative quadrature tolerance");
    sub->add_option("--out", raw.out, "output directory");
    sub->add_option("--times", raw.times, "sample times t1,t2,...");
    sub->add_option("--initial", raw.initial, "coefficient CSV or preset:NAME");
    sub->add_option("--operator", raw.op, "landau | boltzmann | fractional-landau");
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    RunConfig cfg;
    CLI::App* sub = app.get_subcommands().front();
    cfg.command = sub->get_name();
    if (sub->count("--config")) apply_config_file(cfg, raw.config);
    if (sub->count("--s")) cfg.s = raw.s;
    if (sub->count("--kernel")) cfg.kernel = raw.kernel;
    if (sub->count("--nmax")) cfg.n_max = raw.n_max;
    if (sub->count("--lmax")) cfg.l_max = raw.l_max;
    if (sub->count("--level")) cfg.level_max = raw.level;
    if (sub->count("--radial-nodes")) cfg.radial_nodes = raw.radial;
    if (sub->count("--tol")) cfg.tol = raw.tol;
    if (sub->count("--out")) cfg.out = raw.out;
    if (sub->count("--times")) cfg.times = parse_times(raw.times);
    if (sub->count("--initial")) cfg.initial = raw.initial;
    if (sub->count("--operator")) cfg.op = raw.op;
    validate(cfg);
    return dispatch(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const NumericalFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kQuadratureFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  }
}

}  // namespace kinspec::cli
