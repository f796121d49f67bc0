#pragma once

#include <cmath>
#include <complex>

#include "phonoconv/errors.hpp"
#include "phonoconv/physical_model.hpp"
#include "phonoconv/steady_state.hpp"

namespace phonoconv {

/// Which rendition of a published closed form to evaluate. `corrected` is the
/// re-derived expression (exact against the linear solve); `verbatim` keeps the
/// printed expression, transcription errors included, for comparison.
enum class Form { corrected, verbatim };

/// Intermediate quantities of the closed-form intracavity intensities.
///
/// Elimination of b and then a2 (or a1) from the steady-state equations gives
///   U a1 - V a1* = W   and   R a2 - F a2* = H,
/// with U = l1 + i l2, V = m1 + i m2, W = n1 + i n2, R = r1 + i r2,
/// F = f1 + i f2 and H = h1 + i h2. The printed mode-1 expression treats V
/// as real; the corrected form keeps m2.
struct ClosedFormIntermediates {
  double pump = 0.0;  // A_p = sqrt(kappa1_ext) alpha_p
  double c1 = 0.0, c2 = 0.0;
  double d1 = 0.0, d2 = 0.0, d3 = 0.0, d4 = 0.0;
  cdouble n1_coupling{};    // N1 = G_m Omega_m + i G_m gamma_m / 2; only |N1|^2 enters
  double n2_coupling = 0.0; // N2 = G1 G2
  double n1 = 0.0, n2 = 0.0;
  double m1 = 0.0, m2 = 0.0;
  double l1 = 0.0, l2 = 0.0;
  double a1_re = 0.0, a1_im = 0.0;
  double denom1 = 0.0;  // l1^2 + l2^2 - m1^2 - m2^2
  double h1 = 0.0, h2 = 0.0;
  double f1 = 0.0, f2 = 0.0;
  double r1 = 0.0, r2 = 0.0;
  double a2_re = 0.0, a2_im = 0.0;
  double denom2 = 0.0;  // r1^2 + r2^2 - f1^2 - f2^2
};

inline ClosedFormIntermediates closed_form_intermediates(const SystemParams& params,
                                                         Form form = Form::corrected) {
  const SystemParams& p = validate(params);
  ClosedFormIntermediates q;
  const double om = p.omega_m, ga = p.gamma_m, k1 = p.kappa1, k2 = p.kappa2;
  const double phonon_sq = om * om + 0.25 * ga * ga;

  q.pump = std::sqrt(p.kappa1_ext) * p.alpha_p;
  q.c1 = cooperativity(p.g1, ga, k1);
  q.c2 = cooperativity(p.g2, ga, k2);

  q.d1 = 0.25 * k2 * ga - p.delta2 * om + 0.25 * q.c2 * ga * k2;
  q.d2 = 0.5 * p.delta2 * ga + 0.5 * om * k2;
  q.d3 = 0.25 * k1 * ga + p.delta1 * om - 0.25 * q.c1 * ga * k1;
  q.d4 = 0.5 * p.delta1 * ga - 0.5 * k1 * om;

  q.n1_coupling = cdouble(p.g_m * om, 0.5 * p.g_m * ga);
  const double n1_sq = std::norm(q.n1_coupling);
  // sqrt(C1) sqrt(C2) gamma_m sqrt(k1 k2) / 4 collapses to G1 G2.
  const double g1g2_from_c = std::sqrt(q.c1) * std::sqrt(q.c2) * ga * std::sqrt(k1 * k2) / 4.0;
  q.n2_coupling = form == Form::verbatim ? g1g2_from_c : p.g1 * p.g2;
  const double n2 = q.n2_coupling;

  const double dd = q.d1 * q.d1 + q.d2 * q.d2;
  const double ee = q.d3 * q.d3 + q.d4 * q.d4;

  q.n1 = q.pump * dd * ga / 2.0;
  q.n2 = -q.pump * om * dd;

  if (form == Form::verbatim) {
    q.m1 = -p.g_m * g1g2_from_c * (2.0 * q.d1 * om + q.d2 * om);
    q.m2 = 0.0;
    q.l1 = q.d3 * dd + n1_sq * q.d1 + n2 * n2 * q.d1;
    q.l2 = q.d4 * dd - n1_sq * q.d1 + n2 * n2 * q.d2;
    q.a1_re = q.n1 * (q.m1 + q.l1) + q.n2 * q.l2;
    q.a1_im = q.n2 * (q.l1 - q.m1) - q.n1 * q.l1;
  } else {
    q.m1 = -2.0 * p.g_m * n2 * om * q.d1;
    q.m2 = -p.g_m * n2 * ga * q.d1;
    q.l1 = q.d3 * dd + n1_sq * q.d1 + n2 * n2 * q.d1;
    q.l2 = q.d4 * dd - n1_sq * q.d2 + n2 * n2 * q.d2;
    q.a1_re = q.n1 * (q.l1 + q.m1) + q.n2 * (q.l2 + q.m2);
    q.a1_im = q.n2 * (q.l1 - q.m1) + q.n1 * (q.m2 - q.l2);
  }
  q.denom1 = q.l1 * q.l1 + q.l2 * q.l2 - q.m1 * q.m1 - q.m2 * q.m2;

  q.h1 = q.pump * (q.d4 * p.g_m * phonon_sq - n2 * (q.d3 * ga / 2.0 - om * q.d4));
  q.h2 = form == Form::verbatim
             ? q.pump * (q.d3 * p.g_m * phonon_sq - n2 * (q.d4 * ga / 2.0 - om * q.d3))
             : q.pump * (q.d3 * p.g_m * phonon_sq - n2 * (q.d4 * ga / 2.0 + om * q.d3));

  const double g1g2 = form == Form::verbatim ? g1g2_from_c : n2;
  q.f1 = -2.0 * p.g_m * g1g2 * om * q.d3;
  q.f2 = p.g_m * g1g2 * ga * q.d3;

  q.r1 = q.d1 * ee + q.d3 * (n1_sq + n2 * n2);
  q.r2 = q.d2 * ee + q.d4 * (n2 * n2 - n1_sq);

  q.a2_re = q.h1 * (q.f1 + q.r1) + q.h2 * (q.f2 + q.r2);
  q.a2_im = q.h1 * (q.f2 - q.r2) + q.h2 * (q.r1 - q.f1);
  q.denom2 = q.r1 * q.r1 + q.r2 * q.r2 - q.f1 * q.f1 - q.f2 * q.f2;
  return q;
}

/// |denominator| relative to the sum of squares it is built from; 0 at a singular point.
inline double mode1_singularity_measure(const ClosedFormIntermediates& q) {
  const double scale = q.l1 * q.l1 + q.l2 * q.l2 + q.m1 * q.m1 + q.m2 * q.m2;
  return scale > 0.0 ? std::abs(q.denom1) / scale : 0.0;
}

inline double mode2_singularity_measure(const ClosedFormIntermediates& q) {
  const double scale = q.r1 * q.r1 + q.r2 * q.r2 + q.f1 * q.f1 + q.f2 * q.f2;
  return scale > 0.0 ? std::abs(q.denom2) / scale : 0.0;
}

inline constexpr double closed_form_singular_threshold = 1e-13;

/// |a1|^2 from the closed form.
inline double intensity_mode1_closed(const SystemParams& params, Form form = Form::corrected) {
  const auto q = closed_form_intermediates(params, form);
  if (mode1_singularity_measure(q) <= closed_form_singular_threshold)
    throw SingularPointError("mode-1 closed form: vanishing denominator");
  const double den_sq = q.denom1 * q.denom1;
  return (q.a1_re * q.a1_re + q.a1_im * q.a1_im) / den_sq;
}

/// |a2|^2 from the closed form.
inline double intensity_mode2_closed(const SystemParams& params, Form form = Form::corrected) {
  const auto q = closed_form_intermediates(params, form);
  if (mode2_singularity_measure(q) <= closed_form_singular_threshold)
    throw SingularPointError("mode-2 closed form: vanishing denominator");
  const double den_sq = q.denom2 * q.denom2;
  return (q.a2_re * q.a2_re + q.a2_im * q.a2_im) / den_sq;
}

/// Mode-conversion efficiency: mode-2 output flux kappa2_ext |a2|^2 over input flux |alpha_p|^2,
/// with a2 from the canonical linear solve.
inline double conversion_efficiency(const SystemParams& params) {
  const SystemParams& p = validate(params);
  if (!(p.alpha_p > 0.0)) throw DomainError("conversion efficiency needs alpha_p > 0");
  const auto steady = solve_steady_numeric(p);
  return p.kappa2_ext * std::norm(steady.amplitudes.a2) / (p.alpha_p * p.alpha_p);
}

namespace detail {
inline double efficiency_closed(const SystemParams& params, Form form, bool squared_numerator) {
  const SystemParams& p = validate(params);
  if (!(p.alpha_p > 0.0)) throw DomainError("conversion efficiency needs alpha_p > 0");
  const auto q = closed_form_intermediates(p, form);
  if (mode2_singularity_measure(q) <= closed_form_singular_threshold)
    throw SingularPointError("conversion efficiency closed form: vanishing denominator");
  const double eta1 = p.kappa1_ext / p.kappa1;
  const double eta2 = p.kappa2_ext / p.kappa2;
  const double re = q.a2_re / q.pump;
  const double im = q.a2_im / q.pump;
  const double numerator = squared_numerator ? re * re + im * im : re + im;
  return eta1 * eta2 * p.kappa1 * p.kappa2 * numerator / (q.denom2 * q.denom2);
}
}  // namespace detail

/// Closed-form efficiency with squared numerator and corrected intermediates.
inline double conversion_efficiency_closed(const SystemParams& params) {
  return detail::efficiency_closed(params, Form::corrected, true);
}

/// Printed efficiency expression: unsquared numerator over printed intermediates.
inline double conversion_efficiency_printed(const SystemParams& params) {
  return detail::efficiency_closed(params, Form::verbatim, false);
}

}  // namespace phonoconv
