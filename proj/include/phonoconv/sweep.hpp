#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <future>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "phonoconv/closed_form.hpp"
#include "phonoconv/dark_bright.hpp"
#include "phonoconv/errors.hpp"
#include "phonoconv/physical_model.hpp"
#include "phonoconv/steady_state.hpp"

namespace phonoconv {

enum class SweepParameter { c2, g2, c1, g1, gamma_m, delta2, g_m, alpha_p };
enum class Observable { i1, i2, eta, pop_bright, pop_dark, margin };

/// What to do with rows whose steady state is dynamically unstable.
/// `flag` blanks their observables; `keep` evaluates them anyway and relies
/// on the stability-margin column to mark them.
enum class UnstablePolicy { flag, keep };

enum class RowFlag { none, singular, unstable };

inline std::string_view to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::c2: return "c2";
    case SweepParameter::g2: return "g2";
    case SweepParameter::c1: return "c1";
    case SweepParameter::g1: return "g1";
    case SweepParameter::gamma_m: return "gamma_m";
    case SweepParameter::delta2: return "delta2";
    case SweepParameter::g_m: return "g_m";
    case SweepParameter::alpha_p: return "alpha_p";
  }
  return "?";
}

inline std::string_view to_string(Observable o) {
  switch (o) {
    case Observable::i1: return "i1";
    case Observable::i2: return "i2";
    case Observable::eta: return "eta";
    case Observable::pop_bright: return "pop_bright";
    case Observable::pop_dark: return "pop_dark";
    case Observable::margin: return "margin";
  }
  return "?";
}

inline std::string_view to_string(RowFlag f) {
  switch (f) {
    case RowFlag::none: return "";
    case RowFlag::singular: return "singular";
    case RowFlag::unstable: return "unstable";
  }
  return "?";
}

inline SweepParameter parse_sweep_parameter(std::string_view name) {
  for (auto p : {SweepParameter::c2, SweepParameter::g2, SweepParameter::c1, SweepParameter::g1,
                 SweepParameter::gamma_m, SweepParameter::delta2, SweepParameter::g_m,
                 SweepParameter::alpha_p})
    if (to_string(p) == name) return p;
  throw ConfigError("unknown sweep parameter '" + std::string(name) + "'");
}

inline Observable parse_observable(std::string_view name) {
  for (auto o : {Observable::i1, Observable::i2, Observable::eta, Observable::pop_bright,
                 Observable::pop_dark, Observable::margin})
    if (to_string(o) == name) return o;
  throw ConfigError("unknown observable '" + std::string(name) + "'");
}

struct SweepSpec {
  SweepParameter parameter = SweepParameter::c2;
  double start = 0.1;
  double stop = 15.0;
  int points = 150;
  UnstablePolicy unstable = UnstablePolicy::flag;
};

inline std::vector<std::string> violations(const SweepSpec& s) {
  std::vector<std::string> out;
  if (!std::isfinite(s.start) || !std::isfinite(s.stop)) out.emplace_back("finite range");
  if (!(s.start < s.stop)) out.emplace_back("start < stop");
  if (s.points < 2) out.emplace_back("points >= 2");
  return out;
}

/// Linear grid; the last point is exactly `stop`.
inline std::vector<double> grid(const SweepSpec& s) {
  std::vector<double> xs(static_cast<std::size_t>(s.points));
  const double step = (s.stop - s.start) / static_cast<double>(s.points - 1);
  for (int k = 0; k < s.points; ++k) xs[static_cast<std::size_t>(k)] = s.start + step * k;
  xs.back() = s.stop;
  return xs;
}

/// Base parameters with the swept knob set to `value`. Cooperativity sweeps
/// move the coupling and keep gamma_m and kappa fixed; a delta2 sweep leaves delta1 alone.
inline SystemParams apply_parameter(SystemParams p, SweepParameter which, double value) {
  switch (which) {
    case SweepParameter::c2: p.g2 = coupling_from_cooperativity(value, p.gamma_m, p.kappa2); break;
    case SweepParameter::c1: p.g1 = coupling_from_cooperativity(value, p.gamma_m, p.kappa1); break;
    case SweepParameter::g2: p.g2 = value; break;
    case SweepParameter::g1: p.g1 = value; break;
    case SweepParameter::gamma_m: p.gamma_m = value; break;
    case SweepParameter::delta2: p.delta2 = value; break;
    case SweepParameter::g_m: p.g_m = value; break;
    case SweepParameter::alpha_p: p.alpha_p = value; break;
  }
  return p;
}

struct SweepColumn {
  Observable observable;
  std::vector<std::optional<double>> values;
};

struct SweepResult {
  SweepSpec spec;
  SystemParams base;
  std::vector<double> parameter_values;
  std::vector<SweepColumn> columns;
  std::vector<double> stability_margin;
  std::vector<RowFlag> flags;

  const SweepColumn& column(Observable o) const {
    for (const auto& c : columns)
      if (c.observable == o) return c;
    throw ConfigError("observable '" + std::string(to_string(o)) + "' not in sweep result");
  }
};

struct SweepRow {
  std::vector<std::optional<double>> values;
  double margin = std::numeric_limits<double>::quiet_NaN();
  RowFlag flag = RowFlag::none;
};

/// Observables at one parameter point. Intensities and populations are pump-normalized.
inline SweepRow evaluate_row(const SystemParams& p, const std::vector<Observable>& observables,
                             UnstablePolicy policy) {
  SweepRow row;
  row.values.assign(observables.size(), std::nullopt);
  try {
    const SteadyState steady = solve_steady_numeric(p);
    row.margin = steady.stability.margin;
    if (!steady.physical()) {
      row.flag = RowFlag::unstable;
      if (policy == UnstablePolicy::flag) return row;
    }
    const double pump_sq = p.alpha_p * p.alpha_p;
    for (std::size_t k = 0; k < observables.size(); ++k) {
      switch (observables[k]) {
        case Observable::i1: row.values[k] = std::norm(steady.amplitudes.a1) / pump_sq; break;
        case Observable::i2: row.values[k] = std::norm(steady.amplitudes.a2) / pump_sq; break;
        case Observable::eta:
          row.values[k] = p.kappa2_ext * std::norm(steady.amplitudes.a2) / pump_sq;
          break;
        case Observable::pop_bright:
          row.values[k] = std::norm(transform(steady.amplitudes, p.g1, p.g2).a_b) / pump_sq;
          break;
        case Observable::pop_dark:
          row.values[k] = std::norm(transform(steady.amplitudes, p.g1, p.g2).a_d) / pump_sq;
          break;
        case Observable::margin: row.values[k] = steady.stability.margin; break;
      }
    }
    // With the keep policy the flag column stays clear; the margin column carries stability.
    if (row.flag == RowFlag::unstable) row.flag = RowFlag::none;
  } catch (const NumericalError&) {
    row.values.assign(observables.size(), std::nullopt);
    row.flag = RowFlag::singular;
  } catch (const DomainError&) {
    row.values.assign(observables.size(), std::nullopt);
    row.flag = RowFlag::singular;
  }
  for (const auto& v : row.values) {
    if (v && !std::isfinite(*v)) {
      row.values.assign(observables.size(), std::nullopt);
      row.flag = RowFlag::singular;
      break;
    }
  }
  return row;
}

/// One-parameter sweep of the canonical steady state. Rows are computed
/// concurrently and assembled in grid order, so results are bit-identical
/// regardless of scheduling.
inline SweepResult run_sweep(const SystemParams& base, const SweepSpec& spec,
                             const std::vector<Observable>& observables) {
  if (auto v = violations(spec); !v.empty()) throw InvalidParameters(std::move(v));
  if (observables.empty()) throw ConfigError("sweep needs at least one observable");
  validate(base);

  SweepResult result;
  result.spec = spec;
  result.base = base;
  result.parameter_values = grid(spec);
  const std::size_t n = result.parameter_values.size();

  std::vector<SystemParams> points;
  points.reserve(n);
  for (double x : result.parameter_values) {
    SystemParams p = apply_parameter(base, spec.parameter, x);
    validate(p);
    if (!(p.alpha_p > 0.0))
      throw DomainError("pump-normalized observables need alpha_p > 0 at every grid point");
    points.push_back(p);
  }

  std::vector<SweepRow> rows(n);
  const std::size_t workers =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, 16);
  const std::size_t chunk = (n + workers - 1) / workers;
  std::vector<std::future<void>> jobs;
  for (std::size_t begin = 0; begin < n; begin += chunk) {
    const std::size_t end = std::min(n, begin + chunk);
    jobs.push_back(std::async(std::launch::async, [&, begin, end] {
      for (std::size_t k = begin; k < end; ++k)
        rows[k] = evaluate_row(points[k], observables, spec.unstable);
    }));
  }
  for (auto& j : jobs) j.get();

  result.columns.reserve(observables.size());
  for (std::size_t c = 0; c < observables.size(); ++c) {
    SweepColumn col{observables[c], {}};
    col.values.reserve(n);
    for (const auto& r : rows) col.values.push_back(r.values[c]);
    result.columns.push_back(std::move(col));
  }
  for (const auto& r : rows) {
    result.stability_margin.push_back(r.margin);
    result.flags.push_back(r.flag);
  }
  return result;
}

}  // namespace phonoconv
