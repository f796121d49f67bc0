#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cstring>
#include <set>
#include <sstream>

#include "phonoconv/claims.hpp"
#include "phonoconv/io.hpp"
#include "phonoconv/sweep.hpp"
#include "phonoconv/typo_ledger.hpp"

using namespace phonoconv;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinRel;

namespace {

bool identical(const SweepResult& a, const SweepResult& b) {
  if (a.parameter_values != b.parameter_values || a.flags != b.flags) return false;
  if (std::memcmp(a.stability_margin.data(), b.stability_margin.data(),
                  a.stability_margin.size() * sizeof(double)) != 0)
    return false;
  for (std::size_t c = 0; c < a.columns.size(); ++c)
    for (std::size_t k = 0; k < a.columns[c].values.size(); ++k) {
      const auto& x = a.columns[c].values[k];
      const auto& y = b.columns[c].values[k];
      if (x.has_value() != y.has_value()) return false;
      if (x && std::memcmp(&*x, &*y, sizeof(double)) != 0) return false;
    }
  return true;
}

}  // namespace

TEST_CASE("sweep grid is linear and ends exactly at stop", "[sweep]") {
  const SweepSpec s{SweepParameter::c2, 0.1, 15.0, 150, UnstablePolicy::flag};
  const auto xs = grid(s);
  REQUIRE(xs.size() == 150);
  CHECK(xs.front() == 0.1);
  CHECK(xs.back() == 15.0);
  CHECK_THAT(xs[1] - xs[0], WithinRel((15.0 - 0.1) / 149.0, 1e-12));
  CHECK(violations(SweepSpec{SweepParameter::c2, 1.0, 1.0, 10, UnstablePolicy::flag}).size() == 1);
  CHECK(violations(SweepSpec{SweepParameter::c2, 0.0, 1.0, 1, UnstablePolicy::flag}).size() == 1);
}

TEST_CASE("cooperativity sweeps move only the coupling", "[sweep]") {
  const SystemParams base;
  const SystemParams p = apply_parameter(base, SweepParameter::c2, 6.0);
  CHECK_THAT(cooperativities(p).c2, WithinRel(6.0, 1e-14));
  CHECK(p.gamma_m == base.gamma_m);
  CHECK(p.g1 == base.g1);
  const SystemParams q = apply_parameter(base, SweepParameter::delta2, 0.5);
  CHECK(q.delta2 == 0.5);
  CHECK(q.delta1 == base.delta1);
}

TEST_CASE("a sweep over an unused knob is constant", "[sweep]") {
  SystemParams base;
  base.g2 = base.g_m = 0.0;
  const SweepSpec s{SweepParameter::g2, 0.0, 0.0 + 1e-9, 5, UnstablePolicy::flag};
  // g2 tiny: mode 2 is driven only through the phonon; i1 barely moves.
  const auto r = run_sweep(base, s, {Observable::i1});
  for (const auto& v : r.column(Observable::i1).values) {
    REQUIRE(v);
    CHECK_THAT(*v, WithinRel(*r.column(Observable::i1).values.front(), 1e-12));
  }

  const SweepSpec pump{SweepParameter::alpha_p, 0.5, 4.0, 8, UnstablePolicy::flag};
  const auto rp = run_sweep(SystemParams{}, pump, {Observable::i2, Observable::eta});
  for (const auto& v : rp.column(Observable::eta).values)
    CHECK_THAT(*v, WithinRel(*rp.column(Observable::eta).values.front(), 1e-12));
}

TEST_CASE("sweeps are deterministic", "[sweep]") {
  const SweepSpec s{SweepParameter::c2, 0.1, 15.0, 150, UnstablePolicy::keep};
  const std::vector<Observable> obs{Observable::i1, Observable::i2, Observable::eta,
                                    Observable::margin};
  const auto a = run_sweep(conversion_base(0.30), s, obs);
  const auto b = run_sweep(conversion_base(0.30), s, obs);
  CHECK(identical(a, b));
}

TEST_CASE("unstable rows are flagged and carry no values", "[sweep]") {
  const SweepSpec s{SweepParameter::g2, 0.05, 1.2, 24, UnstablePolicy::flag};
  const auto r = run_sweep(dark_bright_base(), s, {Observable::pop_bright, Observable::pop_dark});
  std::size_t flagged = 0;
  for (std::size_t k = 0; k < r.flags.size(); ++k) {
    if (r.flags[k] == RowFlag::unstable) {
      ++flagged;
      CHECK(r.stability_margin[k] >= 0.0);
      for (const auto& c : r.columns) CHECK_FALSE(c.values[k]);
    } else {
      CHECK(r.stability_margin[k] < 0.0);
    }
  }
  CHECK(flagged > 0);

  SweepSpec keep = s;
  keep.unstable = UnstablePolicy::keep;
  const auto rk = run_sweep(dark_bright_base(), keep, {Observable::pop_bright});
  for (std::size_t k = 0; k < rk.flags.size(); ++k) {
    CHECK(rk.flags[k] == RowFlag::none);
    CHECK(rk.columns.front().values[k]);
  }
}

TEST_CASE("singular rows are flagged", "[sweep]") {
  SystemParams p;
  p.g2 = p.g_m = 0.0;
  p.gamma_m = 1.0;
  p.omega_m = 1.242;
  p.delta1 = p.omega_m;
  const double threshold = std::sqrt(0.25 + p.omega_m * p.omega_m);
  const SweepSpec s{SweepParameter::g1, threshold - 0.5, threshold, 3, UnstablePolicy::keep};
  const auto r = run_sweep(p, s, {Observable::i1});
  CHECK(r.flags.back() == RowFlag::singular);
  CHECK_FALSE(r.columns.front().values.back());
}

TEST_CASE("sweep inputs are validated", "[sweep]") {
  CHECK_THROWS_AS(parse_sweep_parameter("kappa3"), ConfigError);
  CHECK_THROWS_AS(parse_observable("flux"), ConfigError);
  CHECK(parse_sweep_parameter("gamma_m") == SweepParameter::gamma_m);
  CHECK(parse_observable("pop_dark") == Observable::pop_dark);
  CHECK_THROWS_AS(run_sweep(SystemParams{}, SweepSpec{}, {}), ConfigError);
  CHECK_THROWS_AS(run_sweep(SystemParams{}, SweepSpec{SweepParameter::c2, 2.0, 1.0, 5,
                                                      UnstablePolicy::flag},
                            {Observable::i1}),
                  InvalidParameters);
  SystemParams dark;
  dark.alpha_p = 0.0;
  CHECK_THROWS_AS(run_sweep(dark, SweepSpec{}, {Observable::i1}), DomainError);
}

// ---------------------------------------------------------------------------

TEST_CASE("summaries", "[figures]") {
  const std::vector<double> x{0, 1, 2, 3, 4};
  const std::vector<double> stable(5, -0.1);
  auto s = summarize(x, {1.0, 2.0, 3.0, 2.5, 1.0}, stable);
  CHECK(s.unimodal);
  CHECK(s.interior_peak);
  CHECK(s.argmax == 2.0);
  CHECK(s.trend == Trend::none);
  CHECK(s.all_stable);

  s = summarize(x, {1.0, 3.0, 2.0, 2.5, 1.0}, {-0.1, -0.1, 0.2, -0.1, -0.1});
  CHECK_FALSE(s.unimodal);
  CHECK_FALSE(s.all_stable);
  CHECK(s.max_margin == 0.2);

  s = summarize(x, {5.0, 4.0, std::nullopt, 2.0, 1.0}, stable);
  CHECK(s.valid_points == 4);
  CHECK(s.trend == Trend::decreasing);
  s = summarize(x, {1.0, 1.0, 2.0, 3.0, 4.0}, stable);
  CHECK(s.trend == Trend::none);  // strict
}

TEST_CASE("figure datasets", "[figures]") {
  for (auto id : all_figures) {
    const auto ds = figure_dataset(id, 30);
    REQUIRE(ds.curves.size() == 2);
    for (const auto& c : ds.curves) {
      CHECK(c.sweep.parameter_values.size() == 30);
      CHECK(c.summary.valid_points == 30);
    }
    if (ds.max_normalized) {
      double peak = 0.0;
      for (const auto& c : ds.curves) peak = std::max(peak, c.summary.peak);
      CHECK(peak == 1.0);
    }
  }
  CHECK_FALSE(figure_dataset(FigureId::fig4a, 10).max_normalized);
  CHECK(figure_curves(FigureId::fig2a).front().sweep.points == 150);
  CHECK(figure_curves(FigureId::fig5).front().sweep.points == 100);
  CHECK(parse_figure_id("fig3b") == FigureId::fig3b);
  CHECK_THROWS_AS(parse_figure_id("fig6"), ConfigError);
}

TEST_CASE("figure claims at full resolution", "[figures][claims]") {
  FigureCache cache;
  std::map<std::string, FigureClaim> claims;
  for (auto& c : figure_claims(cache)) claims.emplace(c.id, c);

  for (const char* id : {"fig2a_unimodal", "fig2b_unimodal", "fig2a_argmax_order",
                         "fig2b_argmax_order", "fig3b_c1_order", "fig4a_peak_order",
                         "fig4a_peak_location", "fig4a_low_c2_order", "fig4b_c1_order",
                         "fig5_dark_increasing", "fig2a_stable", "fig2b_stable", "fig3a_stable",
                         "fig3b_stable", "fig4a_stable", "fig4b_stable"}) {
    INFO(id << ": " << claims.at(id).detail);
    CHECK(claims.at(id).holds);
  }
  // Known failures under the corrected model, reported in the ledger.
  CHECK_FALSE(claims.at("fig5_bright_decreasing").holds);
  CHECK_FALSE(claims.at("fig5_stable").holds);

  const auto& fig4a = cache.get(FigureId::fig4a);
  CHECK_THAT(find_curve(fig4a, "gamma_m_0.30").summary.peak, WithinRel(0.7834, 1e-3));
  CHECK_THAT(find_curve(fig4a, "gamma_m_0.45").summary.peak, WithinRel(0.6999, 1e-3));

  const auto curves = claim_curves(cache, claims.at("fig5_bright_decreasing"));
  REQUIRE(curves.size() == 1);
  CHECK(curves[0]["parameter"] == "g2");
  CHECK(curves[0]["data"]["pop_bright"].size() == 100);
}

TEST_CASE("argmax is stable under grid refinement", "[figures]") {
  const double coarse_step = (15.0 - 0.1) / 149.0;
  FigureCache coarse, fine(299);
  for (auto id : {FigureId::fig2a, FigureId::fig2b, FigureId::fig4a, FigureId::fig4b})
    for (const auto& c : coarse.get(id).curves) {
      const auto& f = find_curve(fine.get(id), c.label);
      INFO(to_string(id) << " " << c.label);
      CHECK(std::abs(c.summary.argmax - f.summary.argmax) < coarse_step);
    }
}

TEST_CASE("CSV and JSON serialization", "[io]") {
  const SweepSpec s{SweepParameter::g2, 0.05, 1.2, 6, UnstablePolicy::flag};
  const auto r = run_sweep(dark_bright_base(), s, {Observable::pop_bright, Observable::pop_dark});
  std::ostringstream os;
  write_csv(os, r);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "g2,pop_bright,pop_dark,stability_margin,flag");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 4);
    if (line.ends_with("unstable")) CHECK_THAT(line, ContainsSubstring(",,,"));
  }
  CHECK(rows == 6);

  const auto j = to_json(r);
  CHECK(j["spec"]["points"] == 6);
  CHECK(j["columns"]["g2"].size() == 6);
  CHECK(j["columns"]["flag"].size() == 6);
  CHECK(format_double(0.1) == "0.1");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("figure manifest", "[io]") {
  const auto ds = figure_dataset(FigureId::fig3a, 12);
  const auto m = manifest(ds, "csv");
  CHECK(m["figure"] == "fig3a");
  REQUIRE(m["curves"].size() == 2);
  CHECK(m["curves"][0]["file"] == "fig3a_c1_1.2.csv");
  CHECK(m["normalization"]["max_normalized_per_panel"] == true);
  CHECK(m["curves"][1]["summary"]["valid_points"] == 12);
}

// ---------------------------------------------------------------------------

TEST_CASE("typo ledger", "[ledger]") {
  const TypoLedger ledger = build_ledger(40);
  std::set<std::string> symbols;
  for (const auto& e : ledger.entries) symbols.insert(e.symbol);
  for (const char* s :
       {"m1", "m2", "l2", "A1R", "A1I", "mode-1 denominator", "h2", "eta", "G_bd", "R1", "R8",
        "B_R", "dark denominator", "A_B3", "A_B5", "A_B6", "f_a2", "J_a1", "a_D definition",
        "Omega_B", "gamma_m (fig2)", "Delta1 (fig4)", "kappa_e^ext"})
    CHECK(symbols.count(s) == 1);

  for (const auto& e : ledger.entries) {
    if (e.kind != EntryKind::correction || e.evaluations.empty()) continue;
    INFO(e.symbol);
    CHECK_FALSE(diverging(e, ledger.threshold).empty());
  }

  // Contexts form contiguous blocks.
  std::vector<std::string> seen;
  for (const auto& e : ledger.entries)
    if (seen.empty() || seen.back() != e.context) seen.push_back(e.context);
  CHECK(std::set<std::string>(seen.begin(), seen.end()).size() == seen.size());

  std::size_t failing = 0;
  for (const auto& r : ledger.claims) {
    if (r.claim.holds) {
      CHECK(r.curves.is_null());
    } else {
      ++failing;
      CHECK(r.curves.is_array());
      CHECK_FALSE(r.curves.empty());
    }
  }
  CHECK(failing >= 2);

  std::ostringstream md;
  write_markdown(md, ledger);
  CHECK_THAT(md.str(), ContainsSubstring("# Typo ledger"));
  CHECK_THAT(md.str(), ContainsSubstring("[FAILS] fig5_bright_decreasing"));
  CHECK_THAT(md.str(), ContainsSubstring("| g2 | pop_bright | stability_margin |"));
  const auto j = to_json(ledger);
  CHECK(j["entries"].size() == ledger.entries.size());
}

TEST_CASE("ledger relative difference", "[ledger]") {
  CHECK(relative_difference(0.0, 0.0) == 0.0);
  CHECK(relative_difference(1.0, -1.0) == 2.0);
  CHECK_THAT(relative_difference(1.0, 1.1), WithinRel(0.1 / 1.1, 1e-14));
}
