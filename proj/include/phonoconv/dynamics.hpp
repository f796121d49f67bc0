#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "phonoconv/errors.hpp"
#include "phonoconv/integrator.hpp"
#include "phonoconv/steady_state.hpp"

namespace phonoconv {

struct Trajectory {
  std::vector<double> times;             // units of 1/kappa1
  std::vector<ModeAmplitudes> states;
};

struct IntegratorConfig {
  double dt_initial = 1e-2;
  double tol_abs = 1e-10;
  double tol_rel = 1e-10;
  double t_max = 50.0;
};

inline std::vector<std::string> violations(const IntegratorConfig& c) {
  std::vector<std::string> out;
  if (!(c.dt_initial > 0.0)) out.emplace_back("dt_initial > 0");
  if (!(c.tol_abs > 0.0 && c.tol_abs <= 1e-2)) out.emplace_back("tol_abs in (0, 1e-2]");
  if (!(c.tol_rel > 0.0 && c.tol_rel <= 1e-2)) out.emplace_back("tol_rel in (0, 1e-2]");
  if (!(c.t_max >= 0.0) || !std::isfinite(c.t_max)) out.emplace_back("t_max >= 0");
  return out;
}

namespace detail {

using RealState = ode::State<12>;

// Real/imaginary split of the doubled complex state: slots 2k, 2k+1 hold Re, Im of x_k.
inline RealState pack(const Vector6c& x) {
  RealState y{};
  for (int k = 0; k < 6; ++k) {
    y[static_cast<std::size_t>(2 * k)] = x(k).real();
    y[static_cast<std::size_t>(2 * k + 1)] = x(k).imag();
  }
  return y;
}

inline Vector6c unpack(const RealState& y) {
  Vector6c x;
  for (int k = 0; k < 6; ++k)
    x(k) = cdouble(y[static_cast<std::size_t>(2 * k)], y[static_cast<std::size_t>(2 * k + 1)]);
  return x;
}

struct LinearRhs {
  const DriftSystem* sys;
  void operator()(double, const RealState& y, RealState& dydt) const {
    const Vector6c x = unpack(y);
    const Vector6c dx = sys->matrix * x + sys->drive;
    dydt = pack(dx);
  }
};

inline ode::StepControl step_control(const IntegratorConfig& c) {
  ode::StepControl ctl;
  ctl.h_initial = c.dt_initial;
  ctl.tol_abs = c.tol_abs;
  ctl.tol_rel = c.tol_rel;
  return ctl;
}

}  // namespace detail

/// Time evolution of the mean-field amplitudes from `initial`, one row per accepted step.
inline Trajectory integrate(const SystemParams& params, const ModeAmplitudes& initial,
                            const IntegratorConfig& config) {
  if (auto v = violations(config); !v.empty()) throw InvalidParameters(std::move(v));
  const DriftSystem sys = assemble_drift(params);
  auto y = detail::pack(to_state(initial));

  Trajectory traj;
  auto record = [&](double t, const detail::RealState& s) {
    traj.times.push_back(t);
    traj.states.push_back(from_state(detail::unpack(s)));
    return true;
  };
  ode::integrate_adaptive<12>(detail::LinearRhs{&sys}, y, 0.0, config.t_max,
                              detail::step_control(config), record);
  return traj;
}

/// Integrates from the zero state until the residual drops below tol * |drive|, with
/// horizon 50 / |margin|. Requires a stable parameter set.
inline ModeAmplitudes settle(const SystemParams& params, double tol) {
  if (!(tol > 0.0)) throw DomainError("settle tolerance must be positive");
  const StabilityReport stab = stability_report(params);
  if (!stab.stable())
    throw UnstableSystemError("settle requires a stable system; stability margin = " +
                                  std::to_string(stab.margin),
                              stab.margin);
  const DriftSystem sys = assemble_drift(params);
  const double target = tol * sys.drive.norm();

  IntegratorConfig cfg;
  cfg.tol_abs = std::clamp(tol * 1e-2, 1e-14, 1e-2);
  cfg.tol_rel = cfg.tol_abs;
  cfg.t_max = 50.0 / std::abs(stab.margin);

  auto y = detail::pack(Vector6c::Zero());
  double last_residual = sys.drive.norm();
  auto converged = [&](double, const detail::RealState& s) {
    last_residual = (sys.matrix * detail::unpack(s) + sys.drive).norm();
    return !(last_residual <= target);
  };
  ode::integrate_adaptive<12>(detail::LinearRhs{&sys}, y, 0.0, cfg.t_max,
                              detail::step_control(cfg), converged);
  if (!(last_residual <= target))
    throw SettlingError("did not settle within t_max = " + std::to_string(cfg.t_max) +
                            "; final residual " + std::to_string(last_residual),
                        last_residual);
  return from_state(detail::unpack(y));
}

}  // namespace phonoconv
