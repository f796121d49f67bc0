#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "phonoconv/figures.hpp"
#include "phonoconv/io.hpp"

namespace phonoconv {

/// Ordinal statement read off a figure, checked against the computed curves.
struct FigureClaim {
  std::string id;
  FigureId figure;
  std::string statement;
  bool holds = false;
  std::string detail;
  /// Curves the verdict was computed from; attached to the ledger when the claim fails.
  std::vector<std::string> curve_labels;
};

/// Lazily computed figure datasets, shared between claims.
class FigureCache {
 public:
  explicit FigureCache(std::optional<int> points = std::nullopt) : points_(points) {}

  const FigureDataset& get(FigureId id) {
    auto it = cache_.find(id);
    if (it == cache_.end()) it = cache_.emplace(id, figure_dataset(id, points_)).first;
    return it->second;
  }

 private:
  std::optional<int> points_;
  std::map<FigureId, FigureDataset> cache_;
};

inline const FigureCurve& find_curve(const FigureDataset& ds, const std::string& label) {
  for (const auto& c : ds.curves)
    if (c.label == label) return c;
  throw ConfigError("figure " + std::string(to_string(ds.id)) + " has no curve '" + label + "'");
}

namespace detail {

inline std::string fmt(double v) { return format_double(v); }

inline FigureClaim unimodal_claim(FigureCache& cache, FigureId id) {
  const auto& ds = cache.get(id);
  FigureClaim c{std::string(to_string(id)) + "_unimodal", id,
                "each emission-vs-C2 curve rises then falls (no rise after a fall)", true, "", {}};
  for (const auto& curve : ds.curves) {
    c.curve_labels.push_back(curve.label);
    c.holds = c.holds && curve.summary.unimodal;
    c.detail += curve.label + ": unimodal=" + (curve.summary.unimodal ? "yes" : "no") +
                ", argmax=" + fmt(curve.summary.argmax) + "; ";
  }
  return c;
}

inline FigureClaim argmax_order_claim(FigureCache& cache, FigureId id) {
  const auto& ds = cache.get(id);
  const auto& lo = find_curve(ds, "gamma_m_0.30").summary;
  const auto& hi = find_curve(ds, "gamma_m_0.45").summary;
  FigureClaim c{std::string(to_string(id)) + "_argmax_order", id,
                "the emission peak for gamma_m = 0.45 sits at a strictly smaller C2 than for 0.30",
                hi.argmax < lo.argmax,
                "argmax(0.45) = " + fmt(hi.argmax) + ", argmax(0.30) = " + fmt(lo.argmax),
                {"gamma_m_0.30", "gamma_m_0.45"}};
  return c;
}

}  // namespace detail

/// Every ordinal figure statement the model is held to.
inline std::vector<FigureClaim> figure_claims(FigureCache& cache) {
  std::vector<FigureClaim> out;
  for (auto id : {FigureId::fig2a, FigureId::fig2b}) {
    out.push_back(detail::unimodal_claim(cache, id));
    out.push_back(detail::argmax_order_claim(cache, id));
  }

  {
    const auto& ds = cache.get(FigureId::fig3b);
    const auto& weak = find_curve(ds, "c1_1.2").summary;
    const auto& strong = find_curve(ds, "c1_2.13").summary;
    out.push_back({"fig3b_c1_order", FigureId::fig3b,
                   "peak mode-2 emission is larger for C1 = 2.13 than for C1 = 1.2",
                   strong.peak > weak.peak,
                   "peak(2.13) = " + detail::fmt(strong.peak) + ", peak(1.2) = " +
                       detail::fmt(weak.peak),
                   {"c1_1.2", "c1_2.13"}});
  }

  {
    const auto& ds = cache.get(FigureId::fig4a);
    const auto& lo = find_curve(ds, "gamma_m_0.30").summary;
    const auto& hi = find_curve(ds, "gamma_m_0.45").summary;
    out.push_back({"fig4a_peak_order", FigureId::fig4a,
                   "peak efficiency for gamma_m = 0.30 exceeds that for 0.45 and lies at larger C2",
                   lo.peak > hi.peak && lo.argmax > hi.argmax,
                   "peak(0.30) = " + detail::fmt(lo.peak) + " at C2 = " + detail::fmt(lo.argmax) +
                       ", peak(0.45) = " + detail::fmt(hi.peak) + " at C2 = " +
                       detail::fmt(hi.argmax),
                   {"gamma_m_0.30", "gamma_m_0.45"}});
    out.push_back({"fig4a_peak_location", FigureId::fig4a,
                   "peak efficiency for gamma_m = 0.30 lies in C2 in [10, 14]",
                   lo.argmax >= 10.0 && lo.argmax <= 14.0,
                   "argmax(0.30) = " + detail::fmt(lo.argmax),
                   {"gamma_m_0.30"}});

    // Below C2 = 9 the larger damping converts better.
    const auto& x = find_curve(ds, "gamma_m_0.30").sweep.parameter_values;
    const auto& y_lo = find_curve(ds, "gamma_m_0.30").sweep.columns.front().values;
    const auto& y_hi = find_curve(ds, "gamma_m_0.45").sweep.columns.front().values;
    bool holds = true;
    double first_violation = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t k = 0; k < x.size() && x[k] <= 9.0; ++k) {
      if (y_lo[k] && y_hi[k] && !(*y_hi[k] > *y_lo[k])) {
        holds = false;
        first_violation = x[k];
        break;
      }
    }
    out.push_back({"fig4a_low_c2_order", FigureId::fig4a,
                   "up to C2 = 9 the efficiency is higher for gamma_m = 0.45 than for 0.30", holds,
                   holds ? "holds on every grid point with C2 <= 9"
                         : "first violation at C2 = " + detail::fmt(first_violation),
                   {"gamma_m_0.30", "gamma_m_0.45"}});
  }

  {
    const auto& ds = cache.get(FigureId::fig4b);
    const auto& weak = find_curve(ds, "c1_1.2").summary;
    const auto& strong = find_curve(ds, "c1_2.13").summary;
    out.push_back({"fig4b_c1_order", FigureId::fig4b,
                   "peak efficiency is larger for C1 = 2.13 than for C1 = 1.2",
                   strong.peak > weak.peak,
                   "peak(2.13) = " + detail::fmt(strong.peak) + ", peak(1.2) = " +
                       detail::fmt(weak.peak),
                   {"c1_1.2", "c1_2.13"}});
  }

  {
    const auto& ds = cache.get(FigureId::fig5);
    const auto& bright = find_curve(ds, "bright").summary;
    const auto& dark = find_curve(ds, "dark").summary;
    out.push_back({"fig5_bright_decreasing", FigureId::fig5,
                   "bright-mode population strictly decreases with G2",
                   bright.trend == Trend::decreasing,
                   "trend = " + std::string(to_string(bright.trend)) + ", argmax = " +
                       detail::fmt(bright.argmax),
                   {"bright"}});
    out.push_back({"fig5_dark_increasing", FigureId::fig5,
                   "dark-mode population strictly increases with G2",
                   dark.trend == Trend::increasing,
                   "trend = " + std::string(to_string(dark.trend)), {"dark"}});
  }

  for (auto id : all_figures) {
    const auto& ds = cache.get(id);
    FigureClaim c{std::string(to_string(id)) + "_stable", id,
                  "the steady state is dynamically stable at every grid point", true, "", {}};
    for (const auto& curve : ds.curves) {
      c.holds = c.holds && curve.summary.all_stable;
      c.detail += curve.label + ": max margin " + detail::fmt(curve.summary.max_margin) + "; ";
      if (!curve.summary.all_stable) c.curve_labels.push_back(curve.label);
    }
    out.push_back(std::move(c));
  }
  return out;
}

/// Computed curve behind a claim: parameter, observable, stability margin per grid point.
inline nlohmann::json claim_curves(FigureCache& cache, const FigureClaim& claim) {
  const auto& ds = cache.get(claim.figure);
  nlohmann::json out = nlohmann::json::array();
  for (const auto& label : claim.curve_labels) {
    const auto& curve = find_curve(ds, label);
    out.push_back({{"figure", std::string(to_string(ds.id))},
                   {"label", curve.label},
                   {"parameter", std::string(to_string(curve.sweep.spec.parameter))},
                   {"observable", std::string(to_string(curve.observable))},
                   {"panel_maximum", ds.normalization},
                   {"data", to_json(curve.sweep)["columns"]}});
  }
  return out;
}

}  // namespace phonoconv
