#pragma once

#include <algorithm>
#include <cmath>
#include <complex>

#include "phonoconv/closed_form.hpp"
#include "phonoconv/errors.hpp"
#include "phonoconv/physical_model.hpp"
#include "phonoconv/steady_state.hpp"

namespace phonoconv {

/// Optical amplitudes rotated onto the bright mode (G1 a1 + G2 a2)/G and the
/// dark mode (G2 a1 - G1 a2)/G, with G = sqrt(G1^2 + G2^2).
struct DarkBrightState {
  cdouble a_b{};
  cdouble a_d{};
};

/// Coefficients of the dark/bright-basis Hamiltonian under Delta2 = 0,
/// Delta1 = -Omega_m and equal optical decay rates.
struct DarkBrightCoefficients {
  double delta_d = 0.0;
  double delta_b = 0.0;
  double g_bd = 0.0;      // bright-dark hopping
  double g_12 = 0.0;      // dark-phonon coupling G1 G2 / G
  double g1_tilde = 0.0;  // G1^2 / G
  double g2_tilde = 0.0;  // G2^2 / G
  double a_1 = 0.0;       // bright-mode drive
  double a_2 = 0.0;       // dark-mode drive
  double g_tilde = 0.0;
};

/// Closed-form steady-state intermediates in the dark/bright basis.
///
/// The dark-mode equation is solved as
///   a_D = (a_d1 + i a_d2) a_B + (a_d3 + i a_d4) a_B* + (a_d5 + i a_d6) A2,
/// and the bright-mode equation, scaled by (kappa/2 + i Delta_B)(Omega_m^2 + gamma_m^2/4), as
///   (a_b1 - i a_b2) a_B - (a_b3 + i a_b4) a_B* = (r9 + i r10) A1 + (a_b5 + i a_b6) A2.
struct DarkBrightIntermediates {
  double f_a1 = 0.0, f_a2 = 0.0, g_a1 = 0.0, g_a2 = 0.0;
  double h_a1 = 0.0, h_a2 = 0.0, j_a1 = 0.0, j_a2 = 0.0;
  double a_b1 = 0.0, a_b2 = 0.0, a_b3 = 0.0, a_b4 = 0.0, a_b5 = 0.0, a_b6 = 0.0;
  double r1 = 0.0, r2 = 0.0, r3 = 0.0, r4 = 0.0, r5 = 0.0;
  double r6 = 0.0, r7 = 0.0, r8 = 0.0, r9 = 0.0, r10 = 0.0;
  double a_d1 = 0.0, a_d2 = 0.0, a_d3 = 0.0, a_d4 = 0.0, a_d5 = 0.0, a_d6 = 0.0;
  double b_r = 0.0;
  double dark_denominator = 0.0;    // vanishing -> singular
  double bright_denominator = 0.0;  // a_b1^2 + a_b2^2 - a_b3^2 - a_b4^2
};

inline DarkBrightState transform(const ModeAmplitudes& amps, double g1, double g2) {
  const double g = std::hypot(g1, g2);
  if (!(g > 0.0)) throw DomainError("dark/bright transformation undefined for G1 = G2 = 0");
  return {(g1 * amps.a1 + g2 * amps.a2) / g, (g2 * amps.a1 - g1 * amps.a2) / g};
}

/// Optical amplitudes from dark/bright amplitudes; the phonon slot is left at zero.
inline ModeAmplitudes inverse_transform(const DarkBrightState& db, double g1, double g2) {
  const double g = std::hypot(g1, g2);
  if (!(g > 0.0)) throw DomainError("dark/bright transformation undefined for G1 = G2 = 0");
  return {(g1 * db.a_b + g2 * db.a_d) / g, (g2 * db.a_b - g1 * db.a_d) / g, cdouble{}};
}

/// Throws ContractError unless Delta2 = 0, Delta1 = -Omega_m and kappa1 = kappa2.
inline void check_dark_bright_constraints(const SystemParams& params) {
  const SystemParams& p = validate(params);
  const double tol = 1e-12 * std::max(1.0, std::abs(p.omega_m));
  if (std::abs(p.delta2) > tol)
    throw ContractError("dark/bright basis requires delta2 = 0");
  if (std::abs(p.delta1 + p.omega_m) > tol)
    throw ContractError("dark/bright basis requires delta1 = -omega_m");
  if (std::abs(p.kappa1 - p.kappa2) > 1e-12)
    throw ContractError("dark/bright basis requires kappa1 = kappa2");
}

inline DarkBrightCoefficients coefficients(const SystemParams& params,
                                           Form form = Form::corrected) {
  check_dark_bright_constraints(params);
  const SystemParams& p = params;
  const double g_tilde = std::hypot(p.g1, p.g2);
  if (!(g_tilde > 0.0)) throw DomainError("dark/bright coefficients need G1^2 + G2^2 > 0");
  const double gsq = g_tilde * g_tilde;
  const double pump = std::sqrt(p.kappa1_ext) * p.alpha_p;

  DarkBrightCoefficients c;
  c.g_tilde = g_tilde;
  c.delta_d = (p.g2 * p.g2 * p.omega_m - 2.0 * p.g_m * p.g1 * p.g2) / gsq;
  c.delta_b = (p.g1 * p.g1 * p.omega_m + 2.0 * p.g_m * p.g1 * p.g2) / gsq;
  const double mixing = p.g_m * (p.g2 * p.g2 - p.g1 * p.g1);
  c.g_bd = form == Form::verbatim ? (p.g1 * p.g2 * p.omega_m + p.g_m + mixing) / gsq
                                  : (p.g1 * p.g2 * p.omega_m + mixing) / gsq;
  c.g_12 = p.g1 * p.g2 / g_tilde;
  c.g1_tilde = p.g1 * p.g1 / g_tilde;
  c.g2_tilde = p.g2 * p.g2 / g_tilde;
  c.a_1 = pump * p.g1 / g_tilde;
  c.a_2 = pump * p.g2 / g_tilde;
  return c;
}

namespace detail {

inline void fill_response_from_blocks(DarkBrightIntermediates& q, bool printed_fa2) {
  const double den = q.bright_denominator;
  q.f_a1 = (q.a_b1 * q.r9 - q.a_b2 * q.r10 + q.a_b3 * q.r9 + q.a_b4 * q.r10) / den;
  q.f_a2 = printed_fa2
               ? (q.a_b1 * q.r10 + q.a_b2 * q.r9 - q.a_b3 * q.r10 + q.a_b4 * q.r6) / den
               : (q.a_b1 * q.r10 + q.a_b2 * q.r9 - q.a_b3 * q.r10 + q.a_b4 * q.r9) / den;
  q.g_a1 = (q.a_b1 * q.a_b5 - q.a_b2 * q.a_b6 + q.a_b3 * q.a_b5 + q.a_b4 * q.a_b6) / den;
  q.g_a2 = (q.a_b2 * q.a_b5 + q.a_b1 * q.a_b6 - q.a_b3 * q.a_b6 + q.a_b4 * q.a_b5) / den;
  q.h_a1 = q.a_d1 * q.f_a1 - q.a_d2 * q.f_a2 + q.a_d3 * q.f_a1 + q.a_d4 * q.f_a2;
  q.h_a2 = q.a_d1 * q.f_a2 + q.a_d2 * q.f_a1 - q.a_d3 * q.f_a2 + q.a_d4 * q.f_a1;
  q.j_a1 = q.a_d1 * q.g_a1 - q.a_d2 * q.g_a2 + q.a_d3 * q.g_a1 + q.a_d4 * q.g_a2 + q.a_d5;
  q.j_a2 = q.a_d1 * q.g_a2 + q.a_d2 * q.g_a1 - q.a_d3 * q.g_a2 + q.a_d4 * q.g_a1 + q.a_d6;
}

inline constexpr double dark_bright_singular_threshold = 1e-13;

}  // namespace detail

inline DarkBrightIntermediates dark_bright_intermediates(const SystemParams& params,
                                                         Form form = Form::corrected) {
  const DarkBrightCoefficients co = coefficients(params, form);
  const SystemParams& p = params;
  const double kappa = p.kappa1, om = p.omega_m, ga = p.gamma_m;
  const double phonon_sq = om * om + 0.25 * ga * ga;
  const double db = co.delta_b, dd = co.delta_d;
  const double gt1 = co.g1_tilde, gt2 = co.g2_tilde, g12 = co.g_12, gbd = co.g_bd;
  const double sum_sq = gt1 * gt1 + gt2 * gt2;

  DarkBrightIntermediates q;
  q.r9 = 0.5 * kappa * phonon_sq;
  q.r10 = db * phonon_sq;

  if (form == Form::verbatim) {
    q.r1 = (db * db + 0.25 * kappa * kappa) * phonon_sq + om * sum_sq * db;
    q.r2 = 0.5 * om * kappa * sum_sq;
    q.r3 = -2.0 * sum_sq * om * db;
    q.r4 = sum_sq * om * kappa;
    q.r5 = -db * (gbd * phonon_sq + g12 * om * sum_sq);
    q.r6 = 0.5 * kappa * (gbd * phonon_sq + g12 * om * sum_sq);
    q.r7 = -g12 * om * db * sum_sq;
    q.r8 = 0.5 * g12 * om * kappa * sum_sq;
    q.b_r = om * sum_sq / phonon_sq;
    q.dark_denominator = dd * dd + 0.25 * kappa * kappa;
    const double den = q.dark_denominator;
    q.a_d1 = -dd * (gbd + g12 * q.b_r) / den;
    q.a_d2 = 0.5 * kappa * (gbd + g12 * q.b_r) / den;
    q.a_d3 = dd * g12 * q.b_r / den;
    q.a_d4 = -0.5 * kappa * g12 * q.b_r / den;
    q.a_d5 = 0.5 * kappa / den;
    q.a_d6 = dd / den;
    q.a_b1 = q.r1 - q.r5 * q.a_d1 + q.r6 * q.a_d2 - q.r7 * q.a_d3 - q.r8 * q.a_d4;
    q.a_b2 = q.r2 + q.r5 * q.a_d2 + q.r6 * q.a_d1 - q.r7 * q.a_d4 + q.r8 * q.a_d3;
    q.a_b3 = q.r3 + q.r5 * q.a_d3 - q.r6 * q.a_d4 + q.r7 * q.a_d1 - q.r8 * q.a_d2;
    q.a_b4 = q.r4 + q.r5 * q.a_d4 + q.r6 * q.a_d3 - q.r7 * q.a_d2 + q.r8 * q.a_d1;
    q.a_b5 = q.r5 * q.a_d5 - q.r6 * q.a_d6 + q.r7 * q.a_d5 - q.r8 * q.a_d6;
    q.a_b6 = q.r5 * q.a_d6 - q.r6 * q.a_d5 - q.r7 * q.a_d6 - q.r8 * q.a_d5;
  } else {
    const double diff_sq = gt1 * gt1 - gt2 * gt2;
    // Phonon-mediated pieces: G12 (G1~ dm + G2~ dm*) = sym + i anti, dm = gamma/2 + i Omega.
    const double sym = g12 * (gt1 + gt2) * 0.5 * ga;
    const double anti = g12 * om * (gt1 - gt2);
    const double hop = gbd * phonon_sq + anti;

    q.r1 = (db * db + 0.25 * kappa * kappa) * phonon_sq + om * db * sum_sq -
           0.25 * kappa * ga * diff_sq;
    q.r2 = 0.5 * om * kappa * sum_sq + 0.5 * db * ga * diff_sq;
    q.r3 = -2.0 * om * db * gt1 * gt2;
    q.r4 = om * kappa * gt1 * gt2;
    q.r5 = 0.5 * kappa * sym - db * hop;
    q.r6 = 0.5 * kappa * hop + db * sym;
    q.r7 = db * anti - 0.5 * kappa * sym;
    q.r8 = -0.5 * kappa * anti - db * sym;
    q.b_r = 2.0 * g12 * g12 * om / phonon_sq;
    q.dark_denominator = dd * dd + 0.25 * kappa * kappa + 2.0 * q.b_r * dd;

    // Dark-mode response: (kappa/2 - i(dd + b_r)) aD + i b_r aD* = A2 + P aB + T* aB*,
    // P = i G_bd + T, T = (sym + i anti) / phonon_sq.
    const cdouble t_coef(sym / phonon_sq, anti / phonon_sq);
    const cdouble p_coef = cdouble(0.0, gbd) + t_coef;
    const cdouble alpha_conj(0.5 * kappa, dd + q.b_r);
    const cdouble beta(0.0, q.b_r);
    const double den = q.dark_denominator;
    const cdouble c1 = (alpha_conj * p_coef - beta * t_coef) / den;
    const cdouble c2 = (alpha_conj * std::conj(t_coef) - beta * std::conj(p_coef)) / den;
    q.a_d1 = c1.real();
    q.a_d2 = c1.imag();
    q.a_d3 = c2.real();
    q.a_d4 = c2.imag();
    q.a_d5 = 0.5 * kappa / den;
    q.a_d6 = dd / den;

    q.a_b1 = q.r1 - q.r5 * q.a_d1 + q.r6 * q.a_d2 - q.r7 * q.a_d3 - q.r8 * q.a_d4;
    q.a_b2 = q.r2 + q.r5 * q.a_d2 + q.r6 * q.a_d1 - q.r7 * q.a_d4 + q.r8 * q.a_d3;
    q.a_b3 = q.r3 + q.r5 * q.a_d3 - q.r6 * q.a_d4 + q.r7 * q.a_d1 + q.r8 * q.a_d2;
    q.a_b4 = q.r4 + q.r5 * q.a_d4 + q.r6 * q.a_d3 - q.r7 * q.a_d2 + q.r8 * q.a_d1;
    q.a_b5 = q.r5 * q.a_d5 - q.r6 * q.a_d6 + q.r7 * q.a_d5 + q.r8 * q.a_d6;
    q.a_b6 = q.r5 * q.a_d6 + q.r6 * q.a_d5 - q.r7 * q.a_d6 + q.r8 * q.a_d5;
  }

  q.bright_denominator =
      q.a_b1 * q.a_b1 + q.a_b2 * q.a_b2 - q.a_b3 * q.a_b3 - q.a_b4 * q.a_b4;
  detail::fill_response_from_blocks(q, form == Form::verbatim);
  return q;
}

/// Closed-form steady dark/bright amplitudes a_B = A1 (f_a1 + i f_a2) + A2 (g_a1 + i g_a2),
/// a_D = A1 (h_a1 + i h_a2) + A2 (j_a1 + i j_a2).
inline DarkBrightState steady_dark_bright(const SystemParams& params, Form form = Form::corrected) {
  const DarkBrightCoefficients co = coefficients(params, form);
  const double kappa = params.kappa1;
  const double dark_scale = co.delta_d * co.delta_d + 0.25 * kappa * kappa;
  const auto q = dark_bright_intermediates(params, form);
  if (std::abs(q.dark_denominator) <= detail::dark_bright_singular_threshold * dark_scale)
    throw SingularPointError("dark-mode closed form: vanishing denominator");
  const double bright_scale =
      q.a_b1 * q.a_b1 + q.a_b2 * q.a_b2 + q.a_b3 * q.a_b3 + q.a_b4 * q.a_b4;
  if (!(std::abs(q.bright_denominator) > detail::dark_bright_singular_threshold * bright_scale))
    throw SingularPointError("bright-mode closed form: vanishing denominator");

  DarkBrightState s;
  s.a_b = co.a_1 * cdouble(q.f_a1, q.f_a2) + co.a_2 * cdouble(q.g_a1, q.g_a2);
  s.a_d = co.a_1 * cdouble(q.h_a1, q.h_a2) + co.a_2 * cdouble(q.j_a1, q.j_a2);
  return s;
}

/// Canonical dark/bright steady state: the rotated linear-solve amplitudes.
inline DarkBrightState steady_dark_bright_numeric(const SystemParams& params) {
  const auto steady = solve_steady_numeric(params);
  return transform(steady.amplitudes, params.g1, params.g2);
}

}  // namespace phonoconv
