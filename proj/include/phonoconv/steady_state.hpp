#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "phonoconv/errors.hpp"
#include "phonoconv/physical_model.hpp"

namespace phonoconv {

using cdouble = std::complex<double>;
using Vector6c = Eigen::Matrix<cdouble, 6, 1>;
using Matrix6c = Eigen::Matrix<cdouble, 6, 6>;

struct ModeAmplitudes {
  cdouble a1{};
  cdouble a2{};
  cdouble b{};
};

/// Doubled state (a1, a2, b, a1*, a2*, b*).
inline Vector6c to_state(const ModeAmplitudes& m) {
  Vector6c x;
  x << m.a1, m.a2, m.b, std::conj(m.a1), std::conj(m.a2), std::conj(m.b);
  return x;
}

inline ModeAmplitudes from_state(const Vector6c& x) { return {x(0), x(1), x(2)}; }

/// Linear mean-field dynamics dx/dt = matrix * x + drive on the doubled state.
struct DriftSystem {
  Matrix6c matrix = Matrix6c::Zero();
  Vector6c drive = Vector6c::Zero();
};

/// Transcribes the three coupled amplitude equations and their conjugates.
/// Mode 1 couples to b* (Stokes); mode 2 couples to b (anti-Stokes).
inline DriftSystem assemble_drift(const SystemParams& params) {
  const SystemParams& p = validate(params);
  constexpr cdouble i{0.0, 1.0};
  DriftSystem sys;
  auto& m = sys.matrix;

  m(0, 0) = -(i * p.delta1 + 0.5 * p.kappa1);
  m(0, 1) = i * p.g_m;
  m(0, 5) = i * p.g1;

  m(1, 1) = -(i * p.delta2 + 0.5 * p.kappa2);
  m(1, 0) = i * p.g_m;
  m(1, 2) = i * p.g2;

  m(2, 2) = -(i * p.omega_m + 0.5 * p.gamma_m);
  m(2, 3) = i * p.g1;
  m(2, 1) = i * p.g2;

  // Conjugate rows: d/dt x*_r = sum_c conj(m(r, c)) x*_c, and x*_c lives at slot (c + 3) mod 6.
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 6; ++c) m(r + 3, (c + 3) % 6) = std::conj(m(r, c));

  const double pump = std::sqrt(p.kappa1_ext) * p.alpha_p;
  sys.drive(0) = pump;
  sys.drive(3) = pump;
  return sys;
}

struct StabilityReport {
  std::array<cdouble, 6> eigenvalues{};
  double margin = 0.0;  // max real part

  bool stable() const noexcept { return margin < 0.0; }
};

inline StabilityReport stability_report(const SystemParams& params) {
  const DriftSystem sys = assemble_drift(params);
  Eigen::ComplexEigenSolver<Matrix6c> solver(sys.matrix, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success)
    throw NumericalError("eigenvalue solver did not converge for the drift matrix");
  StabilityReport report;
  report.margin = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < 6; ++k) {
    report.eigenvalues[static_cast<std::size_t>(k)] = solver.eigenvalues()(k);
    report.margin = std::max(report.margin, solver.eigenvalues()(k).real());
  }
  std::sort(report.eigenvalues.begin(), report.eigenvalues.end(),
            [](cdouble a, cdouble b) {
              return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
            });
  return report;
}

/// Norm of the right-hand side of the dynamics at amps (time derivatives set to zero).
inline double residual(const SystemParams& params, const ModeAmplitudes& amps) {
  const DriftSystem sys = assemble_drift(params);
  return (sys.matrix * to_state(amps) + sys.drive).norm();
}

struct SteadyState {
  ModeAmplitudes amplitudes;
  double residual = 0.0;
  double drive_norm = 0.0;
  /// max |x_{k+3} - conj(x_k)| relative to the state norm.
  double conjugation_defect = 0.0;
  StabilityReport stability;

  /// The fixed point attracts nearby trajectories only if the system is stable.
  bool physical() const noexcept { return stability.stable(); }
};

inline constexpr double max_condition_number = 1e12;

/// Canonical steady state: solves matrix * x = -drive on the full doubled system.
/// Unstable parameter sets still return a solution, flagged through physical().
inline SteadyState solve_steady_numeric(const SystemParams& params) {
  const DriftSystem sys = assemble_drift(params);
  Eigen::PartialPivLU<Matrix6c> lu(sys.matrix);
  const double rcond = lu.rcond();
  if (!(rcond * max_condition_number > 1.0))
    throw SingularPointError("no unique steady state: drift matrix condition estimate exceeds 1e12");

  const Vector6c x = lu.solve(-sys.drive);

  SteadyState out;
  out.amplitudes = from_state(x);
  out.drive_norm = sys.drive.norm();
  out.residual = (sys.matrix * x + sys.drive).norm();
  const double scale = std::max(x.norm(), std::numeric_limits<double>::min());
  double defect = 0.0;
  for (int k = 0; k < 3; ++k) defect = std::max(defect, std::abs(x(k + 3) - std::conj(x(k))));
  out.conjugation_defect = x.norm() > 0.0 ? defect / scale : 0.0;
  out.stability = stability_report(params);
  return out;
}

}  // namespace phonoconv
