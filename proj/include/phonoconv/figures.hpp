#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "phonoconv/errors.hpp"
#include "phonoconv/physical_model.hpp"
#include "phonoconv/sweep.hpp"

namespace phonoconv {

enum class FigureId { fig2a, fig2b, fig3a, fig3b, fig4a, fig4b, fig5 };

inline constexpr FigureId all_figures[] = {FigureId::fig2a, FigureId::fig2b, FigureId::fig3a,
                                           FigureId::fig3b, FigureId::fig4a, FigureId::fig4b,
                                           FigureId::fig5};

inline std::string_view to_string(FigureId id) {
  switch (id) {
    case FigureId::fig2a: return "fig2a";
    case FigureId::fig2b: return "fig2b";
    case FigureId::fig3a: return "fig3a";
    case FigureId::fig3b: return "fig3b";
    case FigureId::fig4a: return "fig4a";
    case FigureId::fig4b: return "fig4b";
    case FigureId::fig5: return "fig5";
  }
  return "?";
}

inline FigureId parse_figure_id(std::string_view name) {
  for (auto id : all_figures)
    if (to_string(id) == name) return id;
  throw ConfigError("unknown figure id '" + std::string(name) + "'");
}

/// Mode-conversion working point: kappa2 = 2, Delta2 = 0.9, Delta1 = Delta2 - Omega_m,
/// Omega_m = 1.242, G_m = 0.025, G1 = 0.4.
inline SystemParams conversion_base(double gamma_m, double g1 = 0.4) {
  SystemParams p;
  p.kappa2 = 2.0;
  p.kappa2_ext = 2.0;
  p.delta2 = 0.9;
  p.omega_m = 1.242;
  p.delta1 = p.delta2 - p.omega_m;
  p.g_m = 0.025;
  p.g1 = g1;
  p.gamma_m = gamma_m;
  p.g2 = 0.0;
  return p;
}

/// Dark/bright working point: Delta2 = 0, Delta1 = -Omega_m, kappa1 = kappa2,
/// G_m = 0.025, gamma_m = 0.2, G1 = 0.6, Omega_m = 1.242.
inline SystemParams dark_bright_base(double g2 = 0.6) {
  SystemParams p;
  p.kappa2 = 1.0;
  p.kappa2_ext = 1.0;
  p.omega_m = 1.242;
  p.delta2 = 0.0;
  p.delta1 = -p.omega_m;
  p.g_m = 0.025;
  p.gamma_m = 0.2;
  p.g1 = 0.6;
  p.g2 = g2;
  return p;
}

struct CurveSpec {
  std::string label;
  SystemParams base;
  SweepSpec sweep;
  Observable observable;
};

inline constexpr int default_points_conversion = 150;
inline constexpr int default_points_dark_bright = 100;

inline std::vector<CurveSpec> figure_curves(FigureId id, std::optional<int> points = std::nullopt) {
  const int n_conv = points.value_or(default_points_conversion);
  const int n_db = points.value_or(default_points_dark_bright);
  const SweepSpec c2_sweep{SweepParameter::c2, 0.1, 15.0, n_conv, UnstablePolicy::keep};
  const SweepSpec g2_sweep{SweepParameter::g2, 0.05, 1.2, n_db, UnstablePolicy::keep};

  auto by_gamma = [&](Observable o) {
    return std::vector<CurveSpec>{{"gamma_m_0.30", conversion_base(0.30), c2_sweep, o},
                                  {"gamma_m_0.45", conversion_base(0.45), c2_sweep, o}};
  };
  auto by_c1 = [&](Observable o) {
    constexpr double gamma = 0.3;
    return std::vector<CurveSpec>{
        {"c1_1.2", conversion_base(gamma, coupling_from_cooperativity(1.2, gamma, 1.0)), c2_sweep,
         o},
        {"c1_2.13", conversion_base(gamma, coupling_from_cooperativity(2.13, gamma, 1.0)),
         c2_sweep, o}};
  };

  switch (id) {
    case FigureId::fig2a: return by_gamma(Observable::i1);
    case FigureId::fig2b: return by_gamma(Observable::i2);
    case FigureId::fig3a: return by_c1(Observable::i1);
    case FigureId::fig3b: return by_c1(Observable::i2);
    case FigureId::fig4a: return by_gamma(Observable::eta);
    case FigureId::fig4b: return by_c1(Observable::eta);
    case FigureId::fig5:
      return {{"bright", dark_bright_base(), g2_sweep, Observable::pop_bright},
              {"dark", dark_bright_base(), g2_sweep, Observable::pop_dark}};
  }
  throw ConfigError("unknown figure id");
}

enum class Trend { increasing, decreasing, none };

inline std::string_view to_string(Trend t) {
  switch (t) {
    case Trend::increasing: return "strictly_increasing";
    case Trend::decreasing: return "strictly_decreasing";
    case Trend::none: return "not_monotone";
  }
  return "?";
}

struct CurveSummary {
  std::size_t valid_points = 0;
  double argmax = std::numeric_limits<double>::quiet_NaN();
  double peak = std::numeric_limits<double>::quiet_NaN();
  bool interior_peak = false;
  bool unimodal = false;  // rises (weakly) then falls (weakly); no rise after a fall
  Trend trend = Trend::none;
  bool all_stable = false;
  double max_margin = std::numeric_limits<double>::quiet_NaN();
};

inline CurveSummary summarize(const std::vector<double>& x,
                              const std::vector<std::optional<double>>& y,
                              const std::vector<double>& margins) {
  CurveSummary s;
  std::vector<double> xs, ys;
  for (std::size_t k = 0; k < y.size(); ++k) {
    if (y[k]) {
      xs.push_back(x[k]);
      ys.push_back(*y[k]);
    }
  }
  s.valid_points = ys.size();
  s.max_margin = -std::numeric_limits<double>::infinity();
  for (double m : margins) s.max_margin = std::max(s.max_margin, m);
  s.all_stable = !margins.empty() && s.max_margin < 0.0;
  if (ys.empty()) return s;

  const auto it = std::max_element(ys.begin(), ys.end());
  const auto idx = static_cast<std::size_t>(it - ys.begin());
  s.argmax = xs[idx];
  s.peak = *it;
  s.interior_peak = idx > 0 && idx + 1 < ys.size();

  bool fell = false, rise_after_fall = false, all_up = true, all_down = true;
  for (std::size_t k = 1; k < ys.size(); ++k) {
    if (ys[k] > ys[k - 1]) {
      all_down = false;
      if (fell) rise_after_fall = true;
    } else if (ys[k] < ys[k - 1]) {
      all_up = false;
      fell = true;
    } else {
      all_up = all_down = false;
    }
  }
  s.unimodal = !rise_after_fall;
  s.trend = ys.size() < 2 ? Trend::none
            : all_up      ? Trend::increasing
            : all_down    ? Trend::decreasing
                          : Trend::none;
  return s;
}

struct FigureCurve {
  std::string label;
  Observable observable;
  SweepResult sweep;
  CurveSummary summary;
};

struct FigureDataset {
  FigureId id;
  std::vector<FigureCurve> curves;
  /// Intensity panels are divided by this panel-wide maximum; 1 for efficiency panels.
  double normalization = 1.0;
  bool max_normalized = false;
};

inline bool is_intensity(Observable o) {
  return o == Observable::i1 || o == Observable::i2 || o == Observable::pop_bright ||
         o == Observable::pop_dark;
}

/// Datasets behind a figure panel: one sweep per plotted curve. Intensity
/// observables are pump-normalized and then divided by the panel maximum.
/// Unstable grid points keep their values (see the stability-margin column).
inline FigureDataset figure_dataset(FigureId id, std::optional<int> points = std::nullopt) {
  FigureDataset ds;
  ds.id = id;
  for (auto& spec : figure_curves(id, points)) {
    FigureCurve curve{spec.label, spec.observable,
                      run_sweep(spec.base, spec.sweep, {spec.observable}), {}};
    ds.curves.push_back(std::move(curve));
  }

  ds.max_normalized = is_intensity(ds.curves.front().observable);
  if (ds.max_normalized) {
    double peak = 0.0;
    for (const auto& c : ds.curves)
      for (const auto& v : c.sweep.columns.front().values)
        if (v) peak = std::max(peak, *v);
    if (peak > 0.0) {
      ds.normalization = peak;
      for (auto& c : ds.curves)
        for (auto& v : c.sweep.columns.front().values)
          if (v) *v /= peak;
    }
  }
  for (auto& c : ds.curves)
    c.summary = summarize(c.sweep.parameter_values, c.sweep.columns.front().values,
                          c.sweep.stability_margin);
  return ds;
}

}  // namespace phonoconv
