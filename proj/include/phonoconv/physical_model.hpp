#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "phonoconv/errors.hpp"

namespace phonoconv {

namespace constants {
inline constexpr double speed_of_light = 299792458.0;   // m/s
inline constexpr double hbar = 1.054571817e-34;         // J s
inline constexpr double two_pi = 6.283185307179586476925;
}  // namespace constants

/// Quartz crystal and cavity geometry, SI units.
struct CrystalParams {
  double n = 2.15;        // refractive index
  double n_eff = 2.15;    // effective index of the optical mode
  double p13 = 0.27;      // photoelastic constant
  double rho = 2648.0;    // kg/m^3
  double area = 5.8e-9;   // m^2, crystal cross-section
  double l_ac = 5e-3;     // m, crystal thickness
  double l_opt = 1e-2;    // m, mirror spacing
  double v_a = 6327.0;    // m/s, longitudinal sound speed
};

/// Linearized three-mode model, every rate in units of kappa1.
///
/// The defaults are the mode-conversion working point used throughout the
/// figure suite: kappa2 = 2, Delta2 = 0.9, Delta1 = Delta2 - Omega_m,
/// Omega_m = 1.242, G_m = 0.025, G1 = 0.4, gamma_m = 0.3, with G2 set by a
/// mode-2 cooperativity of 4. Both output couplings equal the total decay.
struct SystemParams {
  double delta1 = 0.9 - 1.242;
  double delta2 = 0.9;
  double omega_m = 1.242;
  double kappa1 = 1.0;
  double kappa2 = 2.0;
  double gamma_m = 0.3;
  double g_m = 0.025;
  double g1 = 0.4;
  double g2 = 0.7745966692414834;  // sqrt(4 * 0.3 * 2) / 2
  double kappa1_ext = 1.0;
  double kappa2_ext = 2.0;
  double alpha_p = 1.0;

  bool operator==(const SystemParams&) const = default;
};

struct Cooperativities {
  double c1 = 0.0;
  double c2 = 0.0;
};

namespace detail {
inline void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value))
    throw DomainError(std::string(name) + " must be positive and finite");
}
}  // namespace detail

/// Single-photon optomechanical coupling rate g0 (rad/s) of the bulk acoustic mode.
inline double compute_g0(const CrystalParams& crystal, double omega1, double omega_m,
                         double hbar = constants::hbar) {
  detail::require_positive(crystal.n, "n");
  detail::require_positive(crystal.n_eff, "n_eff");
  detail::require_positive(crystal.p13, "p13");
  detail::require_positive(crystal.rho, "rho");
  detail::require_positive(crystal.area, "A");
  detail::require_positive(crystal.l_ac, "L_ac");
  detail::require_positive(crystal.l_opt, "L_opt");
  detail::require_positive(omega1, "omega1");
  detail::require_positive(omega_m, "omega_m");
  detail::require_positive(hbar, "hbar");

  const double n5 = std::pow(crystal.n, 5);
  const double prefactor = omega1 * omega1 * n5 * crystal.p13 /
                           (2.0 * constants::speed_of_light * crystal.n_eff * crystal.n_eff);
  const double zero_point = std::sqrt(hbar / (crystal.rho * crystal.area * crystal.l_ac * omega_m));
  return prefactor * zero_point * (crystal.l_ac / crystal.l_opt);
}

/// Phase-matched Brillouin frequency 2 omega_j n v_a / v_c. The light speed
/// v_c is explicit: pass the vacuum speed or c/n as the situation demands.
inline double brillouin_frequency(double omega_j, double n, double v_a, double v_c) {
  detail::require_positive(omega_j, "omega_j");
  detail::require_positive(n, "n");
  detail::require_positive(v_a, "v_a");
  detail::require_positive(v_c, "v_c");
  return 2.0 * omega_j * n * v_a / v_c;
}

/// C = 4 g^2 / (gamma_m kappa).
inline double cooperativity(double g, double gamma_m, double kappa) {
  if (!(gamma_m > 0.0) || !(kappa > 0.0))
    throw DomainError("cooperativity needs gamma_m > 0 and kappa > 0");
  return 4.0 * g * g / (gamma_m * kappa);
}

/// Nonnegative coupling g with cooperativity(g, gamma_m, kappa) == c.
inline double coupling_from_cooperativity(double c, double gamma_m, double kappa) {
  if (!(c >= 0.0)) throw DomainError("cooperativity must be >= 0");
  if (!(gamma_m > 0.0) || !(kappa > 0.0))
    throw DomainError("coupling_from_cooperativity needs gamma_m > 0 and kappa > 0");
  return 0.5 * std::sqrt(c * gamma_m * kappa);
}

inline Cooperativities cooperativities(const SystemParams& p) {
  return {cooperativity(p.g1, p.gamma_m, p.kappa1), cooperativity(p.g2, p.gamma_m, p.kappa2)};
}

/// Every violated invariant of a parameter set, as a human-readable condition.
inline std::vector<std::string> violations(const SystemParams& p) {
  std::vector<std::string> out;
  const double fields[] = {p.delta1, p.delta2,     p.omega_m,    p.kappa1,
                           p.kappa2, p.gamma_m,    p.g_m,        p.g1,
                           p.g2,     p.kappa1_ext, p.kappa2_ext, p.alpha_p};
  for (double f : fields) {
    if (!std::isfinite(f)) {
      out.emplace_back("all fields finite");
      break;
    }
  }
  if (p.kappa1 != 1.0) out.emplace_back("kappa1 == 1");
  if (!(p.kappa2 > 0.0)) out.emplace_back("kappa2 > 0");
  if (!(p.gamma_m > 0.0)) out.emplace_back("gamma_m > 0");
  if (!(p.omega_m > 0.0)) out.emplace_back("omega_m > 0");
  if (!(p.kappa1_ext > 0.0)) out.emplace_back("kappa1_ext > 0");
  if (!(p.kappa1_ext <= p.kappa1)) out.emplace_back("kappa1_ext <= kappa1");
  if (!(p.kappa2_ext > 0.0)) out.emplace_back("kappa2_ext > 0");
  if (!(p.kappa2_ext <= p.kappa2)) out.emplace_back("kappa2_ext <= kappa2");
  if (!(p.g_m >= 0.0)) out.emplace_back("g_m >= 0");
  if (!(p.g1 >= 0.0)) out.emplace_back("g1 >= 0");
  if (!(p.g2 >= 0.0)) out.emplace_back("g2 >= 0");
  if (!(p.alpha_p >= 0.0)) out.emplace_back("alpha_p >= 0");
  return out;
}

/// Returns the parameter set unchanged, or throws InvalidParameters listing every violation.
inline const SystemParams& validate(const SystemParams& p) {
  auto v = violations(p);
  if (!v.empty()) throw InvalidParameters(std::move(v));
  return p;
}

inline std::vector<std::string> violations(const CrystalParams& c) {
  std::vector<std::string> out;
  if (!(c.n > 0.0)) out.emplace_back("n > 0");
  if (!(c.n_eff > 0.0)) out.emplace_back("n_eff > 0");
  if (!(c.p13 > 0.0)) out.emplace_back("p13 > 0");
  if (!(c.rho > 0.0)) out.emplace_back("rho > 0");
  if (!(c.area > 0.0)) out.emplace_back("A > 0");
  if (!(c.l_ac > 0.0)) out.emplace_back("L_ac > 0");
  if (!(c.l_opt > 0.0)) out.emplace_back("L_opt > 0");
  if (!(c.v_a > 0.0)) out.emplace_back("v_a > 0");
  if (!(c.l_ac <= c.l_opt)) out.emplace_back("L_ac <= L_opt");
  if (!(c.n >= 1.0 && c.n <= 5.0)) out.emplace_back("1 <= n <= 5");
  return out;
}

inline const CrystalParams& validate(const CrystalParams& c) {
  auto v = violations(c);
  if (!v.empty()) throw InvalidParameters(std::move(v));
  return c;
}

}  // namespace phonoconv
