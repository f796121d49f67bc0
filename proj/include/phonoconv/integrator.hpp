#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <string>

#include <boost/numeric/odeint/stepper/generation.hpp>
#include <boost/numeric/odeint/stepper/runge_kutta_dopri5.hpp>

#include "phonoconv/errors.hpp"

namespace phonoconv::ode {

template <std::size_t N>
using State = std::array<double, N>;

struct StepControl {
  double h_initial = 1e-2;
  double tol_abs = 1e-10;
  double tol_rel = 1e-10;
  double h_min = 1e-12;
  std::size_t max_steps = 50'000'000;
};

/// Adaptive Dormand-Prince 5(4) integration of dy/dt = rhs(t, y) from t0 to t1,
/// stepped through Boost.Odeint's controlled stepper.
///
/// `rhs(t, y, dydt)` fills the derivative. `observer(t, y)` is called on the
/// initial state and after every accepted step; returning false stops early.
/// Returns the time reached. Throws IntegrationError when the step size falls
/// below h_min, max_steps is exhausted, or the state stops being finite.
template <std::size_t N, class Rhs, class Observer>
double integrate_adaptive(Rhs&& rhs, State<N>& y, double t0, double t1,
                          const StepControl& ctl, Observer&& observer) {
  namespace odeint = boost::numeric::odeint;
  double t = t0;
  if (!observer(t, y) || !(t1 > t0)) return t;

  auto stepper =
      odeint::make_controlled(ctl.tol_abs, ctl.tol_rel, odeint::runge_kutta_dopri5<State<N>>());
  auto system = [&rhs](const State<N>& x, State<N>& dxdt, double tt) { rhs(tt, x, dxdt); };
  double h = std::min(ctl.h_initial, t1 - t0);
  std::size_t steps = 0;

  while (t < t1) {
    if (++steps > ctl.max_steps)
      throw IntegrationError("step budget exhausted at t = " + std::to_string(t), t);
    const bool last = t + h >= t1;
    if (last) h = t1 - t;
    if (stepper.try_step(system, y, t, h) == odeint::success) {
      if (last) t = t1;
      if (!std::all_of(y.begin(), y.end(), [](double v) { return std::isfinite(v); }))
        throw IntegrationError("non-finite state at t = " + std::to_string(t), t);
      if (!observer(t, y)) return t;
    }
    if (!(h >= ctl.h_min) && t < t1)
      throw IntegrationError("step size underflow at t = " + std::to_string(t), t);
  }
  return t;
}

}  // namespace phonoconv::ode
