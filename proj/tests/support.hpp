#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include "phonoconv/closed_form.hpp"
#include "phonoconv/steady_state.hpp"

namespace testing_support {

using phonoconv::SystemParams;

inline double rel_err(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale > 0.0 ? std::abs(a - b) / scale : 0.0;
}

inline double rel_err(std::complex<double> a, std::complex<double> b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale > 0.0 ? std::abs(a - b) / scale : 0.0;
}

/// Broad random draw over the physically sensible box.
inline SystemParams random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto in = [&](double lo, double hi) { return lo + (hi - lo) * u(rng); };
  SystemParams p;
  p.delta1 = in(-3.0, 3.0);
  p.delta2 = in(-3.0, 3.0);
  p.omega_m = in(0.2, 3.0);
  p.kappa2 = in(0.2, 4.0);
  p.gamma_m = in(0.05, 2.0);
  p.g_m = in(0.0, 0.5);
  p.g1 = in(0.0, 1.2);
  p.g2 = in(0.0, 1.5);
  p.kappa1_ext = in(0.1, 1.0);
  p.kappa2_ext = in(0.1, 1.0) * p.kappa2;
  p.alpha_p = in(0.1, 5.0);
  return p;
}

/// Stable draw whose closed-form denominators stay clear of their singular sets.
inline bool usable(const SystemParams& p) {
  if (!(phonoconv::stability_report(p).margin < 0.0)) return false;
  const auto q = phonoconv::closed_form_intermediates(p);
  return phonoconv::mode1_singularity_measure(q) >= 1e-6 &&
         phonoconv::mode2_singularity_measure(q) >= 1e-6;
}

}  // namespace testing_support
