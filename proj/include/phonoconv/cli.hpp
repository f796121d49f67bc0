#pragma once

#include <complex>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "phonoconv/closed_form.hpp"
#include "phonoconv/config.hpp"
#include "phonoconv/dark_bright.hpp"
#include "phonoconv/dynamics.hpp"
#include "phonoconv/errors.hpp"
#include "phonoconv/figures.hpp"
#include "phonoconv/io.hpp"
#include "phonoconv/steady_state.hpp"
#include "phonoconv/sweep.hpp"
#include "phonoconv/typo_ledger.hpp"

namespace phonoconv::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_config = 2;
inline constexpr int exit_numerical = 3;

enum class Verbosity { quiet, normal, debug };

struct RunConfig {
  std::string config_path;
  std::string output_dir;
  std::string format = "csv";
  Verbosity verbosity = Verbosity::normal;
  std::vector<std::string> overrides;
};

namespace detail {

using Rows = std::vector<std::pair<std::string, std::optional<double>>>;

/// Artifacts go to files under --out when given, else to stdout; status
/// lines then go to stderr so stdout stays machine-readable.
class Output {
 public:
  Output(const RunConfig& run, std::ostream& out, std::ostream& err)
      : run_(run), out_(out), err_(err) {}

  std::ostream& status() { return run_.output_dir.empty() ? err_ : out_; }
  bool quiet() const { return run_.verbosity == Verbosity::quiet; }
  bool debug() const { return run_.verbosity == Verbosity::debug; }
  const std::string& format() const { return run_.format; }

  void artifact(const std::string& file_name, const std::string& content) {
    if (run_.output_dir.empty()) {
      out_ << content;
      return;
    }
    const std::filesystem::path dir(run_.output_dir);
    std::filesystem::create_directories(dir);
    const auto path = dir / file_name;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot write '" + path.string() + "'");
    f << content;
    if (!f) throw ConfigError("failed writing '" + path.string() + "'");
    if (!quiet()) out_ << "wrote " << path.string() << '\n';
  }

 private:
  const RunConfig& run_;
  std::ostream& out_;
  std::ostream& err_;
};

inline std::string render_rows(const Rows& rows, const std::string& format) {
  std::ostringstream os;
  if (format == "json") {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& [k, v] : rows)
      j[k] = v && std::isfinite(*v) ? nlohmann::ordered_json(*v) : nlohmann::ordered_json();
    os << j.dump(2) << '\n';
  } else {
    os << "quantity,value\n";
    for (const auto& [k, v] : rows) os << k << ',' << (v ? format_double(*v) : "") << '\n';
  }
  return os.str();
}

inline void push_complex(Rows& rows, const std::string& name, std::complex<double> z) {
  rows.emplace_back(name + "_re", z.real());
  rows.emplace_back(name + "_im", z.imag());
}

template <class F>
std::optional<double> guarded(F&& f) {
  try {
    return f();
  } catch (const SingularPointError&) {
    return std::nullopt;
  }
}

inline std::optional<double> relative_deviation(std::optional<double> a, double ref) {
  if (!a) return std::nullopt;
  const double scale = std::max(std::abs(ref), std::abs(*a));
  return scale > 0.0 ? std::abs(*a - ref) / scale : 0.0;
}

inline ModelConfig load_model(const RunConfig& run) {
  ModelConfig cfg;
  if (!run.config_path.empty()) cfg = load_config(run.config_path);
  for (const auto& o : run.overrides) apply_override(cfg, o);
  validate(cfg.system);
  if (cfg.physical) {
    if (auto v = violations(cfg.physical->crystal); !v.empty())
      throw InvalidParameters(std::move(v));
  }
  return cfg;
}

inline cdouble parse_complex(std::string_view key, std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos)
    return {phonoconv::detail::parse_number(key, text), 0.0};
  return {phonoconv::detail::parse_number(key, text.substr(0, colon)),
          phonoconv::detail::parse_number(key, text.substr(colon + 1))};
}

inline ModeAmplitudes parse_initial(const std::vector<std::string>& items) {
  ModeAmplitudes m;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("--initial expects name=re:im, got '" + item + "'");
    const std::string name = item.substr(0, eq);
    const cdouble z = parse_complex(name, std::string_view(item).substr(eq + 1));
    if (name == "a1") m.a1 = z;
    else if (name == "a2") m.a2 = z;
    else if (name == "b") m.b = z;
    else throw ConfigError("--initial: unknown amplitude '" + name + "' (a1, a2, b)");
  }
  return m;
}

// ---------------------------------------------------------------------------

inline Rows steady_rows(const ModelConfig& cfg) {
  const SystemParams& p = cfg.system;
  const SteadyState s = solve_steady_numeric(p);
  Rows rows;
  push_complex(rows, "a1", s.amplitudes.a1);
  push_complex(rows, "a2", s.amplitudes.a2);
  push_complex(rows, "b", s.amplitudes.b);

  const double i1 = std::norm(s.amplitudes.a1), i2 = std::norm(s.amplitudes.a2);
  const auto i1c = guarded([&] { return intensity_mode1_closed(p); });
  const auto i2c = guarded([&] { return intensity_mode2_closed(p); });
  rows.emplace_back("i1_numeric", i1);
  rows.emplace_back("i1_closed_form", i1c);
  rows.emplace_back("i1_relative_deviation", relative_deviation(i1c, i1));
  rows.emplace_back("i2_numeric", i2);
  rows.emplace_back("i2_closed_form", i2c);
  rows.emplace_back("i2_relative_deviation", relative_deviation(i2c, i2));

  if (p.alpha_p > 0.0) {
    rows.emplace_back("eta", conversion_efficiency(p));
    rows.emplace_back("eta_closed_form", guarded([&] { return conversion_efficiency_closed(p); }));
    rows.emplace_back("eta_printed_form",
                      guarded([&] { return conversion_efficiency_printed(p); }));
  } else {
    rows.emplace_back("eta", std::nullopt);
  }
  rows.emplace_back("stability_margin", s.stability.margin);
  rows.emplace_back("stable", s.stability.stable() ? 1.0 : 0.0);
  rows.emplace_back("residual", s.residual);
  rows.emplace_back("conjugation_defect", s.conjugation_defect);
  rows.emplace_back("c1", cooperativity(p.g1, p.gamma_m, p.kappa1));
  rows.emplace_back("c2", cooperativity(p.g2, p.gamma_m, p.kappa2));

  if (cfg.physical && cfg.physical->omega1) {
    const auto& ph = *cfg.physical;
    rows.emplace_back("brillouin_frequency_rad_s",
                      brillouin_frequency(*ph.omega1, ph.crystal.n, ph.crystal.v_a,
                                          constants::speed_of_light));
    if (ph.omega_ac)
      rows.emplace_back("g0_rad_s", compute_g0(ph.crystal, *ph.omega1, *ph.omega_ac));
  }
  return rows;
}

inline int cmd_steady(const RunConfig& run, Output& out) {
  const ModelConfig cfg = load_model(run);
  const Rows rows = steady_rows(cfg);
  out.artifact("steady." + out.format(), render_rows(rows, out.format()));
  const SteadyState s = solve_steady_numeric(cfg.system);
  if (!s.stability.stable() && !out.quiet())
    out.status() << "warning: steady state is dynamically unstable (margin "
                 << format_double(s.stability.margin) << ")\n";
  return exit_ok;
}

inline int cmd_figure(const RunConfig& run, Output& out, const std::string& id_name,
                      std::optional<int> points) {
  const FigureId id = parse_figure_id(id_name);
  if (points && *points < 2) throw InvalidParameters({"points >= 2"});
  const FigureDataset ds = figure_dataset(id, points);
  const std::string ext = out.format();
  for (const auto& c : ds.curves) {
    std::ostringstream os;
    if (ext == "json") os << to_json(c.sweep).dump(2) << '\n';
    else write_csv(os, c.sweep);
    out.artifact(curve_file_stem(ds, c) + "." + ext, os.str());
  }
  out.artifact(std::string(to_string(id)) + "_manifest.json", manifest(ds, ext).dump(2) + "\n");
  if (out.debug()) {
    for (const auto& c : ds.curves)
      out.status() << c.label << ": argmax " << format_double(c.summary.argmax) << ", peak "
                   << format_double(c.summary.peak) << ", max margin "
                   << format_double(c.summary.max_margin) << '\n';
  }
  return exit_ok;
}

struct SweepArgs {
  std::string parameter = "c2";
  double start = 0.1;
  double stop = 15.0;
  std::optional<int> points;
  std::vector<std::string> observables{"i1", "i2", "eta"};
  std::string unstable = "flag";
};

inline int cmd_sweep(const RunConfig& run, Output& out, const SweepArgs& a) {
  const ModelConfig cfg = load_model(run);
  SweepSpec spec;
  spec.parameter = parse_sweep_parameter(a.parameter);
  spec.start = a.start;
  spec.stop = a.stop;
  spec.points = a.points.value_or(150);
  spec.unstable = a.unstable == "keep" ? UnstablePolicy::keep : UnstablePolicy::flag;
  std::vector<Observable> obs;
  for (const auto& o : a.observables) obs.push_back(parse_observable(o));
  const SweepResult r = run_sweep(cfg.system, spec, obs);
  std::ostringstream os;
  if (out.format() == "json") os << to_json(r).dump(2) << '\n';
  else write_csv(os, r);
  out.artifact("sweep." + out.format(), os.str());
  return exit_ok;
}

struct DynamicsArgs {
  std::optional<double> t_max;
  std::vector<std::string> initial;
  std::optional<double> settle_tol;
  double dt = 1e-2;
  double tol_abs = 1e-10;
  double tol_rel = 1e-10;
};

inline int cmd_dynamics(const RunConfig& run, Output& out, const DynamicsArgs& a) {
  const ModelConfig cfg = load_model(run);
  const SystemParams& p = cfg.system;

  if (a.settle_tol) {
    const ModeAmplitudes settled = settle(p, *a.settle_tol);
    const SteadyState s = solve_steady_numeric(p);
    Rows rows;
    push_complex(rows, "a1", settled.a1);
    push_complex(rows, "a2", settled.a2);
    push_complex(rows, "b", settled.b);
    const double drive = assemble_drift(p).drive.norm();
    rows.emplace_back("relative_residual", residual(p, settled) / drive);
    const double dev = (to_state(settled) - to_state(s.amplitudes)).norm() /
                       std::max(to_state(s.amplitudes).norm(), 1e-300);
    rows.emplace_back("relative_deviation_from_linear_solve", dev);
    out.artifact("settled." + out.format(), render_rows(rows, out.format()));
    return exit_ok;
  }

  IntegratorConfig ic;
  ic.dt_initial = a.dt;
  ic.tol_abs = a.tol_abs;
  ic.tol_rel = a.tol_rel;
  ic.t_max = a.t_max.value_or(ic.t_max);
  const Trajectory t = integrate(p, parse_initial(a.initial), ic);
  std::ostringstream os;
  if (out.format() == "json") os << to_json(t).dump(2) << '\n';
  else write_csv(os, t);
  out.artifact("trajectory." + out.format(), os.str());
  if (!out.quiet()) {
    const double drive = assemble_drift(p).drive.norm();
    const double r = residual(p, t.states.back());
    out.status() << "final time " << format_double(t.times.back()) << ", residual "
                 << format_double(r);
    if (drive > 0.0) out.status() << " (relative " << format_double(r / drive) << ")";
    out.status() << ", " << t.times.size() << " rows\n";
  }
  return exit_ok;
}

inline int cmd_darkbright(const RunConfig& run, Output& out) {
  const ModelConfig cfg = load_model(run);
  const SystemParams& p = cfg.system;
  check_dark_bright_constraints(p);
  const DarkBrightCoefficients co = coefficients(p);
  const DarkBrightState canonical = steady_dark_bright_numeric(p);
  const DarkBrightState closed = steady_dark_bright(p);

  Rows rows{{"delta_d", co.delta_d}, {"delta_b", co.delta_b},     {"g_bd", co.g_bd},
            {"g_bd_printed", coefficients(p, Form::verbatim).g_bd},
            {"g_12", co.g_12},       {"g1_tilde", co.g1_tilde},   {"g2_tilde", co.g2_tilde},
            {"a_1", co.a_1},         {"a_2", co.a_2},             {"g_tilde", co.g_tilde}};
  push_complex(rows, "a_b", canonical.a_b);
  push_complex(rows, "a_d", canonical.a_d);
  push_complex(rows, "a_b_closed_form", closed.a_b);
  push_complex(rows, "a_d_closed_form", closed.a_d);
  rows.emplace_back("pop_bright", std::norm(canonical.a_b));
  rows.emplace_back("pop_dark", std::norm(canonical.a_d));
  auto dev = [](cdouble x, cdouble ref) {
    return std::abs(x - ref) / std::max(std::abs(ref), 1e-300);
  };
  rows.emplace_back("a_b_relative_deviation", dev(closed.a_b, canonical.a_b));
  rows.emplace_back("a_d_relative_deviation", dev(closed.a_d, canonical.a_d));
  const double margin = stability_report(p).margin;
  rows.emplace_back("stability_margin", margin);
  out.artifact("darkbright." + out.format(), render_rows(rows, out.format()));
  if (!(margin < 0.0) && !out.quiet())
    out.status() << "warning: steady state is dynamically unstable (margin "
                 << format_double(margin) << ")\n";
  return exit_ok;
}

inline int cmd_ledger(const RunConfig& run, Output& out, std::optional<int> points) {
  if (points && *points < 2) throw InvalidParameters({"points >= 2"});
  (void)run;
  const TypoLedger ledger = build_ledger(points);
  if (out.format() == "json") {
    out.artifact("typo_ledger.json", to_json(ledger).dump(2) + "\n");
  } else {
    std::ostringstream os;
    write_markdown(os, ledger);
    out.artifact("TYPO_LEDGER.md", os.str());
  }
  return exit_ok;
}

}  // namespace detail

/// Entry point shared by the executable and the tests. argv[0] is the program name.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Far-infrared optomechanical mode-conversion model"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_help_all_flag("--help-all", "Expand all help");

  RunConfig run;
  std::string verbosity = "normal";
  std::optional<int> points;
  app.add_option("--config", run.config_path, "INI file with [physical] and [system] sections")
      ->check(CLI::ExistingFile);
  app.add_option("--out", run.output_dir, "Output directory (default: stdout)");
  app.add_option("--format", run.format, "csv | json (ledger: csv renders markdown)")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--set", run.overrides, "Override a config key: key=value or section.key=value")
      ->allow_extra_args(false);
  app.add_option("--verbosity", verbosity)->check(CLI::IsMember({"quiet", "normal", "debug"}));
  app.add_option("--points", points, "Grid points for figure/sweep/ledger");

  // One flag per system key, equivalent to --set key=value.
  std::vector<std::pair<std::string, std::optional<double>>> key_flags;
  key_flags.reserve(std::size(phonoconv::detail::system_keys));
  for (const auto& k : phonoconv::detail::system_keys) key_flags.emplace_back(std::string(k.name), std::nullopt);
  for (auto& [name, value] : key_flags) app.add_option("--" + name, value)->group("Parameters");

  auto* steady = app.add_subcommand("steady", "Steady state: amplitudes, intensities, efficiency");
  std::string figure_id;
  auto* figure = app.add_subcommand("figure", "Write the datasets behind a figure panel");
  figure->add_option("id", figure_id, "fig2a fig2b fig3a fig3b fig4a fig4b fig5")->required();

  detail::SweepArgs sweep_args;
  std::string observables;
  auto* sweep = app.add_subcommand("sweep", "One-parameter sweep");
  sweep->add_option("--param", sweep_args.parameter, "c2 g2 c1 g1 gamma_m delta2 g_m alpha_p");
  sweep->add_option("--start", sweep_args.start);
  sweep->add_option("--stop", sweep_args.stop);
  sweep->add_option("--observables", observables, "Comma list of i1 i2 eta pop_bright pop_dark margin");
  sweep->add_option("--unstable", sweep_args.unstable, "flag | keep")
      ->check(CLI::IsMember({"flag", "keep"}));

  detail::DynamicsArgs dyn;
  auto* dynamics = app.add_subcommand("dynamics", "Integrate the equations of motion");
  dynamics->add_option("--t-max", dyn.t_max, "Horizon in units of 1/kappa1");
  dynamics->add_option("--initial", dyn.initial, "Initial amplitude, e.g. a1=1:0 (repeatable)")
      ->allow_extra_args(false);
  dynamics->add_option("--settle", dyn.settle_tol, "Integrate from rest until residual < tol |d|");
  dynamics->add_option("--dt", dyn.dt);
  dynamics->add_option("--tol-abs", dyn.tol_abs);
  dynamics->add_option("--tol-rel", dyn.tol_rel);

  auto* darkbright = app.add_subcommand("darkbright", "Dark/bright coefficients and populations");
  auto* ledger = app.add_subcommand("ledger", "Printed-vs-corrected expression ledger");

  std::vector<const char*> argv;
  if (args.empty()) args.emplace_back("phonoconv");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_config;
  }

  run.verbosity = verbosity == "quiet"   ? Verbosity::quiet
                  : verbosity == "debug" ? Verbosity::debug
                                         : Verbosity::normal;
  for (const auto& [name, value] : key_flags)
    if (value) run.overrides.push_back(name + "=" + format_double(*value));
  if (!observables.empty()) {
    sweep_args.observables.clear();
    std::stringstream ss(observables);
    for (std::string item; std::getline(ss, item, ',');)
      if (!item.empty()) sweep_args.observables.push_back(item);
  }
  sweep_args.points = points;

  detail::Output output(run, out, err);
  try {
    if (*steady) return detail::cmd_steady(run, output);
    if (*figure) return detail::cmd_figure(run, output, figure_id, points);
    if (*sweep) return detail::cmd_sweep(run, output, sweep_args);
    if (*dynamics) return detail::cmd_dynamics(run, output, dyn);
    if (*darkbright) return detail::cmd_darkbright(run, output);
    if (*ledger) return detail::cmd_ledger(run, output, points);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return exit_config;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return exit_config;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return exit_config;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << '\n';
    return exit_numerical;
  }
  return exit_config;
}

inline int run(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return run(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace phonoconv::cli
