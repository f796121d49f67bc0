#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "phonoconv/closed_form.hpp"
#include "phonoconv/figures.hpp"
#include "phonoconv/steady_state.hpp"
#include "support.hpp"

using namespace phonoconv;
using testing_support::rel_err;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

SystemParams decoupled() {
  SystemParams p;
  p.g1 = p.g2 = p.g_m = 0.0;
  p.kappa1_ext = 0.7;
  p.alpha_p = 1.3;
  return p;
}

}  // namespace

TEST_CASE("decoupled limit is the driven Lorentzian", "[steady]") {
  const SystemParams p = decoupled();
  const auto s = solve_steady_numeric(p);
  const cdouble expected =
      std::sqrt(p.kappa1_ext) * p.alpha_p / cdouble(0.5 * p.kappa1, p.delta1);
  CHECK(rel_err(s.amplitudes.a1, expected) < 1e-12);
  CHECK(s.amplitudes.a2 == cdouble{});
  CHECK(s.amplitudes.b == cdouble{});
  CHECK_THAT(std::norm(s.amplitudes.a1), WithinRel(intensity_mode1_closed(p), 1e-12));
  CHECK(intensity_mode2_closed(p) == 0.0);
}

TEST_CASE("decoupled spectrum", "[steady][stability]") {
  SystemParams p = decoupled();
  p.gamma_m = 0.2;
  const auto r = stability_report(p);
  std::vector<cdouble> expected{{-0.5 * p.kappa1, p.delta1},  {-0.5 * p.kappa1, -p.delta1},
                                {-0.5 * p.kappa2, p.delta2},  {-0.5 * p.kappa2, -p.delta2},
                                {-0.5 * p.gamma_m, p.omega_m}, {-0.5 * p.gamma_m, -p.omega_m}};
  for (const auto& e : expected) {
    const bool found = std::any_of(r.eigenvalues.begin(), r.eigenvalues.end(),
                                   [&](cdouble z) { return std::abs(z - e) < 1e-12; });
    CHECK(found);
  }
  CHECK_THAT(r.margin, WithinAbs(-0.5 * std::min({p.kappa1, p.kappa2, p.gamma_m}), 1e-14));
}

TEST_CASE("eigenvalues come in conjugate pairs", "[stability]") {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 200; ++k) {
    const auto r = stability_report(testing_support::random_params(rng));
    for (const auto& z : r.eigenvalues) {
      const bool paired = std::any_of(r.eigenvalues.begin(), r.eigenvalues.end(), [&](cdouble w) {
        return std::abs(w - std::conj(z)) < 1e-9 * std::max(1.0, std::abs(z));
      });
      CHECK(paired);
    }
  }
}

TEST_CASE("figure working points are stable, except the dark/bright one", "[stability]") {
  CHECK(stability_report(SystemParams{}).margin < 0.0);
  CHECK(stability_report(conversion_base(0.30, 0.4)).margin < 0.0);
  // The dark/bright working point is beyond a parametric threshold (see the ledger).
  CHECK(stability_report(dark_bright_base(0.6)).margin > 0.0);
}

TEST_CASE("residual contract", "[steady]") {
  const SystemParams p;
  const auto s = solve_steady_numeric(p);
  CHECK(residual(p, s.amplitudes) < 1e-10 * s.drive_norm);
  CHECK_THAT(residual(p, ModeAmplitudes{}),
             WithinRel(std::sqrt(p.kappa1_ext) * p.alpha_p * std::sqrt(2.0), 1e-15));

  // First order in a real shift of a1: |M (e0 + e3)| eps.
  const DriftSystem sys = assemble_drift(p);
  const double column = (sys.matrix.col(0) + sys.matrix.col(3)).norm();
  for (double eps : {1e-3, 1e-5}) {
    ModeAmplitudes shifted = s.amplitudes;
    shifted.a1 += eps;
    CHECK_THAT(residual(p, shifted), WithinRel(column * eps, 1e-6));
  }
}

TEST_CASE("pure Stokes pair at threshold is singular", "[steady]") {
  SystemParams p;
  p.g2 = p.g_m = 0.0;
  p.gamma_m = 1.0;
  p.omega_m = 1.242;
  p.delta1 = p.omega_m;
  p.g1 = std::sqrt(0.25 + p.omega_m * p.omega_m);
  CHECK_THROWS_AS(solve_steady_numeric(p), SingularPointError);
}

TEST_CASE("Stokes sensitivity: with G1 = 0 the phonon follows mode 2", "[steady]") {
  SystemParams p;
  p.g1 = 0.0;
  const auto s = solve_steady_numeric(p);
  const cdouble expected =
      cdouble(0.0, p.g2) * s.amplitudes.a2 / cdouble(0.5 * p.gamma_m, p.omega_m);
  CHECK(rel_err(s.amplitudes.b, expected) < 1e-12);
}

TEST_CASE("drive linearity and efficiency invariance", "[steady][efficiency]") {
  std::mt19937_64 rng(5);
  int checked = 0;
  while (checked < 200) {
    SystemParams p = testing_support::random_params(rng);
    if (!(stability_report(p).margin < 0.0)) continue;
    ++checked;
    const auto base = solve_steady_numeric(p);
    SystemParams q = p;
    q.alpha_p = 7.0 * p.alpha_p;
    const auto scaled = solve_steady_numeric(q);
    CHECK(rel_err(scaled.amplitudes.a1, 7.0 * base.amplitudes.a1) < 1e-12);
    CHECK(rel_err(scaled.amplitudes.a2, 7.0 * base.amplitudes.a2) < 1e-12);
    CHECK(rel_err(scaled.amplitudes.b, 7.0 * base.amplitudes.b) < 1e-12);
    CHECK(rel_err(conversion_efficiency(q), conversion_efficiency(p)) < 1e-12);
  }
}

TEST_CASE("conversion efficiency basics", "[efficiency]") {
  SystemParams p;
  p.g2 = p.g_m = 0.0;
  CHECK(conversion_efficiency(p) == 0.0);
  p.alpha_p = 0.0;
  CHECK_THROWS_AS(conversion_efficiency(p), DomainError);

  const SystemParams fig2;
  const auto s = solve_steady_numeric(fig2);
  const double eta = conversion_efficiency(fig2);
  CHECK_THAT(eta, WithinRel(fig2.kappa2_ext * std::norm(s.amplitudes.a2), 1e-15));
  CHECK_THAT(conversion_efficiency_closed(fig2), WithinRel(eta, 1e-10));
  // Printed evaluator differs by more than rounding.
  CHECK(rel_err(conversion_efficiency_printed(fig2), eta) > 1e-3);
}

TEST_CASE("closed forms on the fig2b grid", "[closed-form]") {
  for (double gamma : {0.30, 0.45}) {
    const SystemParams base = conversion_base(gamma);
    for (int k = 0; k < 150; ++k) {
      const double c2 = 0.1 + (15.0 - 0.1) * k / 149.0;
      const SystemParams p = apply_parameter(base, SweepParameter::c2, c2);
      const auto s = solve_steady_numeric(p);
      CHECK(rel_err(intensity_mode2_closed(p), std::norm(s.amplitudes.a2)) < 1e-8);
      CHECK(rel_err(intensity_mode1_closed(p), std::norm(s.amplitudes.a1)) < 1e-8);
    }
  }
}

TEST_CASE("closed forms match the linear solve on a random ensemble", "[closed-form]") {
  std::mt19937_64 rng(20240611);
  int accepted = 0, draws = 0;
  double worst1 = 0.0, worst2 = 0.0, worst_eta = 0.0, worst_conj = 0.0;
  while (accepted < 1000 && draws < 50000) {
    ++draws;
    const SystemParams p = testing_support::random_params(rng);
    if (!testing_support::usable(p)) continue;
    ++accepted;
    const auto s = solve_steady_numeric(p);
    worst1 = std::max(worst1, rel_err(intensity_mode1_closed(p), std::norm(s.amplitudes.a1)));
    worst2 = std::max(worst2, rel_err(intensity_mode2_closed(p), std::norm(s.amplitudes.a2)));
    worst_eta = std::max(worst_eta, rel_err(conversion_efficiency_closed(p),
                                            conversion_efficiency(p)));
    worst_conj = std::max(worst_conj, s.conjugation_defect);
  }
  INFO("draws " << draws);
  REQUIRE(accepted == 1000);
  CHECK(worst1 < 1e-8);
  CHECK(worst2 < 1e-8);
  CHECK(worst_eta < 1e-8);
  CHECK(worst_conj < 1e-10);
}

TEST_CASE("closed-form intensities scale with the pump squared", "[closed-form]") {
  SystemParams p;
  const double i1 = intensity_mode1_closed(p), i2 = intensity_mode2_closed(p);
  p.alpha_p = 3.0;
  CHECK_THAT(intensity_mode1_closed(p), WithinRel(9.0 * i1, 1e-13));
  CHECK_THAT(intensity_mode2_closed(p), WithinRel(9.0 * i2, 1e-13));
}

TEST_CASE("printed closed forms disagree with the linear solve", "[closed-form]") {
  const SystemParams p;
  const auto s = solve_steady_numeric(p);
  CHECK(rel_err(intensity_mode1_closed(p, Form::verbatim), std::norm(s.amplitudes.a1)) > 1e-3);
  CHECK(rel_err(intensity_mode2_closed(p, Form::verbatim), std::norm(s.amplitudes.a2)) > 1e-3);
}

TEST_CASE("invalid parameters never reach the solver", "[steady]") {
  SystemParams p;
  p.kappa2 = -1.0;
  CHECK_THROWS_AS(solve_steady_numeric(p), InvalidParameters);
  CHECK_THROWS_AS(stability_report(p), InvalidParameters);
  CHECK_THROWS_AS(intensity_mode1_closed(p), InvalidParameters);
}
