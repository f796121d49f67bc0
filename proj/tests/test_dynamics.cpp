#include <catch2/catch_amalgamated.hpp>

#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "phonoconv/dynamics.hpp"
#include "phonoconv/figures.hpp"
#include "support.hpp"

using namespace phonoconv;
using testing_support::rel_err;

namespace {

double max_rel(const ModeAmplitudes& a, const ModeAmplitudes& b) {
  return std::max({rel_err(a.a1, b.a1), rel_err(a.a2, b.a2), rel_err(a.b, b.b)});
}

// Stable point that also satisfies the dark/bright constraints.
SystemParams constrained_stable() {
  SystemParams p = dark_bright_base(0.6);
  p.g1 = 0.2;
  return p;
}

}  // namespace

TEST_CASE("free decay of mode 1", "[dynamics]") {
  SystemParams p;
  p.g1 = p.g2 = p.g_m = 0.0;
  p.alpha_p = 0.0;
  for (double t : {1.0, 5.0, 10.0}) {
    IntegratorConfig cfg;
    cfg.t_max = t;
    const Trajectory traj = integrate(p, {1.0, 0.0, 0.0}, cfg);
    REQUIRE(traj.times.back() == t);
    const cdouble expected = std::exp(-cdouble(0.5 * p.kappa1, p.delta1) * t);
    CHECK(std::abs(traj.states.back().a1 - expected) < 1e-8);
    CHECK(std::abs(traj.states.back().a2) == 0.0);
  }
}

TEST_CASE("trajectory invariants", "[dynamics]") {
  IntegratorConfig cfg;
  cfg.t_max = 20.0;
  const ModeAmplitudes x0{cdouble(0.3, -0.1), cdouble(0.0, 0.2), cdouble(-0.5, 0.0)};
  const Trajectory traj = integrate(SystemParams{}, x0, cfg);
  REQUIRE(traj.times.size() == traj.states.size());
  REQUIRE(traj.times.size() > 2);
  CHECK(traj.times.front() == 0.0);
  CHECK(traj.states.front().a1 == x0.a1);
  CHECK(traj.states.front().b == x0.b);
  for (std::size_t k = 1; k < traj.times.size(); ++k) CHECK(traj.times[k] > traj.times[k - 1]);
}

TEST_CASE("zero horizon returns the initial state only", "[dynamics]") {
  IntegratorConfig cfg;
  cfg.t_max = 0.0;
  const ModeAmplitudes x0{cdouble(1.0, 2.0), {}, {}};
  const Trajectory traj = integrate(SystemParams{}, x0, cfg);
  REQUIRE(traj.times.size() == 1);
  CHECK(traj.states[0].a1 == x0.a1);
}

TEST_CASE("integrator configuration is validated", "[dynamics]") {
  IntegratorConfig cfg;
  cfg.tol_rel = 0.1;
  CHECK_THROWS_AS(integrate(SystemParams{}, {}, cfg), InvalidParameters);
  cfg = {};
  cfg.t_max = -1.0;
  CHECK_THROWS_AS(integrate(SystemParams{}, {}, cfg), InvalidParameters);
}

TEST_CASE("doubled state keeps its conjugate structure", "[dynamics]") {
  const SystemParams p;
  const DriftSystem sys = assemble_drift(p);
  auto y = detail::pack(to_state({cdouble(0.4, 0.1), cdouble(-0.2, 0.3), cdouble(0.1, 0.0)}));
  ode::StepControl ctl;
  ctl.tol_abs = ctl.tol_rel = 1e-10;
  double worst = 0.0;
  ode::integrate_adaptive<12>(detail::LinearRhs{&sys}, y, 0.0, 30.0, ctl,
                              [&](double, const detail::RealState& s) {
                                const Vector6c x = detail::unpack(s);
                                for (int k = 0; k < 3; ++k)
                                  worst = std::max(worst, std::abs(x(k + 3) - std::conj(x(k))));
                                return true;
                              });
  CHECK(worst < 1e-9);  // 10x the solver tolerance
}

TEST_CASE("matrix-exponential oracle at t = 1", "[dynamics]") {
  using Matrix7c = Eigen::Matrix<cdouble, 7, 7>;
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int checked = 0;
  while (checked < 25) {
    const SystemParams p = testing_support::random_params(rng);
    if (!(stability_report(p).margin < 0.0)) continue;
    ++checked;
    const ModeAmplitudes x0{cdouble(u(rng), u(rng)), cdouble(u(rng), u(rng)),
                            cdouble(u(rng), u(rng))};
    const DriftSystem sys = assemble_drift(p);
    // exp([[M, d], [0, 0]]) = [[exp(M), (int_0^1 exp(M s) ds) d], [0, 1]]
    Matrix7c aug = Matrix7c::Zero();
    aug.topLeftCorner<6, 6>() = sys.matrix;
    aug.topRightCorner<6, 1>() = sys.drive;
    const Matrix7c e = aug.exp();
    const Vector6c expected = e.topLeftCorner<6, 6>() * to_state(x0) + e.topRightCorner<6, 1>();

    IntegratorConfig cfg;
    cfg.t_max = 1.0;
    const Trajectory traj = integrate(p, x0, cfg);
    const Vector6c got = to_state(traj.states.back());
    CHECK((got - expected).norm() <= 1e-7 * std::max(1.0, expected.norm()));
  }
}

TEST_CASE("normal decoupled dynamics stays inside the margin envelope", "[dynamics]") {
  SystemParams p;
  p.g1 = p.g2 = p.g_m = 0.0;
  p.alpha_p = 0.0;
  p.gamma_m = 0.7;
  const double margin = stability_report(p).margin;
  IntegratorConfig cfg;
  cfg.t_max = 15.0;
  const Trajectory traj = integrate(p, {1.0, cdouble(0.0, 1.0), 0.5}, cfg);
  auto norm = [](const ModeAmplitudes& m) { return to_state(m).norm(); };
  const double n0 = norm(traj.states.front());
  for (std::size_t k = 0; k < traj.times.size(); ++k)
    CHECK(norm(traj.states[k]) <= n0 * std::exp(margin * traj.times[k]) * (1.0 + 1e-8));
}

TEST_CASE("fig2 working point relaxes to the linear solve", "[dynamics]") {
  const SystemParams p;
  IntegratorConfig cfg;
  cfg.t_max = 50.0 / std::abs(stability_report(p).margin);
  const Trajectory traj = integrate(p, {}, cfg);
  CHECK(max_rel(traj.states.back(), solve_steady_numeric(p).amplitudes) < 1e-6);
}

TEST_CASE("settle agrees with the linear solve", "[dynamics][settle]") {
  SystemParams decoupled;
  decoupled.g1 = decoupled.g2 = decoupled.g_m = 0.0;
  const cdouble lorentz = std::sqrt(decoupled.kappa1_ext) * decoupled.alpha_p /
                          cdouble(0.5 * decoupled.kappa1, decoupled.delta1);
  CHECK(rel_err(settle(decoupled, 1e-10).a1, lorentz) < 1e-8);

  for (const SystemParams& p : {SystemParams{}, constrained_stable(), conversion_base(0.45, 0.4)}) {
    const auto expected = solve_steady_numeric(p).amplitudes;
    CHECK(max_rel(settle(p, 1e-9), expected) < 1e-6);
  }
}

TEST_CASE("halving the settle tolerance moves the state less than the looser tolerance",
          "[dynamics][settle]") {
  const SystemParams p;
  const Vector6c loose = to_state(settle(p, 1e-6));
  const Vector6c tight = to_state(settle(p, 5e-7));
  CHECK((loose - tight).norm() / tight.norm() < 1e-6);
}

TEST_CASE("settle refuses unstable parameter sets", "[dynamics][settle]") {
  // The dark/bright working point at G2 = 0.6 already has a positive margin.
  CHECK_THROWS_AS(settle(dark_bright_base(0.6), 1e-8), UnstableSystemError);

  SystemParams p;
  p.g1 = 0.4;
  while (stability_report(p).margin < 0.0) p.g1 *= 1.25;
  try {
    settle(p, 1e-8);
    FAIL("expected UnstableSystemError");
  } catch (const UnstableSystemError& e) {
    CHECK(e.margin() > 0.0);
  }
  CHECK_THROWS_AS(settle(SystemParams{}, 0.0), DomainError);
}
