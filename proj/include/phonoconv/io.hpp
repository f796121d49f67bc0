#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <ostream>
#include <string>

#include <json.hpp>

#include "phonoconv/dynamics.hpp"
#include "phonoconv/figures.hpp"
#include "phonoconv/physical_model.hpp"
#include "phonoconv/sweep.hpp"

namespace phonoconv {

/// Shortest decimal that round-trips to the same double.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 32> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  (void)ec;
  return std::string(buf.data(), end);
}

inline nlohmann::json to_json(const SystemParams& p) {
  return {{"delta1", p.delta1},         {"delta2", p.delta2},         {"omega_m", p.omega_m},
          {"kappa1", p.kappa1},         {"kappa2", p.kappa2},         {"gamma_m", p.gamma_m},
          {"g_m", p.g_m},               {"g1", p.g1},                 {"g2", p.g2},
          {"kappa1_ext", p.kappa1_ext}, {"kappa2_ext", p.kappa2_ext}, {"alpha_p", p.alpha_p}};
}

inline nlohmann::json to_json(const SweepSpec& s) {
  return {{"parameter", std::string(to_string(s.parameter))},
          {"start", s.start},
          {"stop", s.stop},
          {"points", s.points},
          {"scale", "linear"},
          {"unstable_rows", s.unstable == UnstablePolicy::flag ? "flagged" : "kept"}};
}

/// CSV: swept parameter, observables, stability margin, flag. Flagged rows leave
/// the observable cells empty.
inline void write_csv(std::ostream& os, const SweepResult& r) {
  os << to_string(r.spec.parameter);
  for (const auto& c : r.columns) os << ',' << to_string(c.observable);
  os << ",stability_margin,flag\n";
  for (std::size_t k = 0; k < r.parameter_values.size(); ++k) {
    os << format_double(r.parameter_values[k]);
    for (const auto& c : r.columns) {
      os << ',';
      if (c.values[k]) os << format_double(*c.values[k]);
    }
    os << ',';
    if (std::isfinite(r.stability_margin[k])) os << format_double(r.stability_margin[k]);
    os << ',' << to_string(r.flags[k]) << '\n';
  }
}

inline nlohmann::json to_json(const SweepResult& r) {
  nlohmann::json columns = nlohmann::json::object();
  columns[std::string(to_string(r.spec.parameter))] = r.parameter_values;
  for (const auto& c : r.columns) {
    nlohmann::json col = nlohmann::json::array();
    for (const auto& v : c.values) col.push_back(v ? nlohmann::json(*v) : nlohmann::json());
    columns[std::string(to_string(c.observable))] = std::move(col);
  }
  nlohmann::json margin = nlohmann::json::array();
  for (double m : r.stability_margin)
    margin.push_back(std::isfinite(m) ? nlohmann::json(m) : nlohmann::json());
  columns["stability_margin"] = std::move(margin);
  nlohmann::json flags = nlohmann::json::array();
  for (auto f : r.flags) flags.push_back(std::string(to_string(f)));
  columns["flag"] = std::move(flags);
  return {{"spec", to_json(r.spec)}, {"base", to_json(r.base)}, {"columns", std::move(columns)}};
}

inline void write_csv(std::ostream& os, const Trajectory& t) {
  os << "t,a1_re,a1_im,a2_re,a2_im,b_re,b_im\n";
  for (std::size_t k = 0; k < t.times.size(); ++k) {
    const auto& s = t.states[k];
    os << format_double(t.times[k]) << ',' << format_double(s.a1.real()) << ','
       << format_double(s.a1.imag()) << ',' << format_double(s.a2.real()) << ','
       << format_double(s.a2.imag()) << ',' << format_double(s.b.real()) << ','
       << format_double(s.b.imag()) << '\n';
  }
}

inline nlohmann::json to_json(const Trajectory& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t k = 0; k < t.times.size(); ++k) {
    const auto& s = t.states[k];
    rows.push_back({t.times[k], s.a1.real(), s.a1.imag(), s.a2.real(), s.a2.imag(), s.b.real(),
                    s.b.imag()});
  }
  return {{"columns", {"t", "a1_re", "a1_im", "a2_re", "a2_im", "b_re", "b_im"}},
          {"rows", std::move(rows)}};
}

inline nlohmann::json to_json(const CurveSummary& s) {
  auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); };
  return {{"valid_points", s.valid_points},
          {"argmax", num(s.argmax)},
          {"peak", num(s.peak)},
          {"interior_peak", s.interior_peak},
          {"unimodal", s.unimodal},
          {"trend", std::string(to_string(s.trend))},
          {"all_stable", s.all_stable},
          {"max_stability_margin", num(s.max_margin)}};
}

inline std::string curve_file_stem(const FigureDataset& ds, const FigureCurve& c) {
  return std::string(to_string(ds.id)) + "_" + c.label;
}

/// Manifest naming each curve's file, parameters and summary.
inline nlohmann::json manifest(const FigureDataset& ds, const std::string& extension) {
  nlohmann::json curves = nlohmann::json::array();
  for (const auto& c : ds.curves) {
    curves.push_back({{"label", c.label},
                      {"file", curve_file_stem(ds, c) + "." + extension},
                      {"observable", std::string(to_string(c.observable))},
                      {"spec", to_json(c.sweep.spec)},
                      {"base", to_json(c.sweep.base)},
                      {"summary", to_json(c.summary)}});
  }
  return {{"figure", std::string(to_string(ds.id))},
          {"normalization",
           {{"pump_normalized", true},
            {"max_normalized_per_panel", ds.max_normalized},
            {"panel_maximum", ds.normalization}}},
          {"curves", std::move(curves)}};
}

}  // namespace phonoconv
