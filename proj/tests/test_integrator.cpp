#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "nsk1d/integrator.hpp"
#include "test_helpers.hpp"

using namespace nsk1d;

namespace {

Params quiet_params(double alpha, double beta, double gamma, std::size_t m) {
  Params p;
  p.alpha = alpha;
  p.beta = beta;
  p.gamma = gamma;
  p.galerkin_order = m;
  p.trunc_radius = 1e3;
  p.noise.family = NoiseFamily::off;
  return p;
}

State single_mode_state(std::size_t n, const Params& p, double a, int k, double b) {
  Field rho = Field::sample(n, [a, k](double x) { return 1.0 + a * std::cos(kTwoPi * k * x); });
  Field u = Field::sample(n, [b, k](double x) { return b * std::sin(kTwoPi * k * x); });
  State s;
  s.r = project(rho_to_r(rho, p.beta), p.galerkin_order);
  s.u = project(u, p.galerkin_order);
  s.params = p;
  return s;
}

double state_distance(const State& a, const State& b) {
  return std::sqrt(std::pow(norm_l2(a.r - b.r), 2) + std::pow(norm_l2(a.u - b.u), 2));
}

// 2x2 complex matrix exponential via eigen-decomposition; oracle for the
// per-mode linear block.
struct Mat2 {
  cplx a, b, c, d;
};

std::array<cplx, 2> expm_apply(const Mat2& m, cplx x1, cplx x2, double t) {
  const cplx tr = m.a + m.d;
  const cplx det = m.a * m.d - m.b * m.c;
  const cplx disc = std::sqrt(tr * tr - 4.0 * det);
  const cplx l1 = 0.5 * (tr + disc);
  const cplx l2 = 0.5 * (tr - disc);
  // eigenvectors (b, l - a) unless degenerate
  const cplx v1x = m.b, v1y = l1 - m.a;
  const cplx v2x = m.b, v2y = l2 - m.a;
  const cplx den = v1x * v2y - v1y * v2x;
  // solve [v1 v2] c = x
  const cplx c1 = (x1 * v2y - v2x * x2) / den;
  const cplx c2 = (v1x * x2 - x1 * v1y) / den;
  const cplx e1 = std::exp(l1 * t), e2 = std::exp(l2 * t);
  return {c1 * e1 * v1x + c2 * e2 * v2x, c1 * e1 * v1y + c2 * e2 * v2y};
}

}  // namespace

TEST_CASE("equilibrium is a fixed point of both steppers", "[integrator]") {
  const std::size_t n = 64;
  Params p = quiet_params(1.0, -1.0, 2.0, 16);
  State s = single_mode_state(n, p, 0.0, 1, 0.0);
  State e1 = step_em(s, 1e-3);
  State e2 = step_imex(s, 1e-3);
  REQUIRE(state_distance(e1, s) < 1e-14);
  REQUIRE(state_distance(e2, s) < 1e-14);
  REQUIRE(e1.time == 1e-3);
}

TEST_CASE("frozen constant drift advances u linearly and exactly", "[integrator]") {
  // constant forcing on the equilibrium state: the drift stays identically
  // equal to the forcing, so u(t) = c t exactly, step by step
  const std::size_t n = 64;
  Params p = quiet_params(1.0, -1.0, 2.0, 16);
  State s = single_mode_state(n, p, 0.0, 1, 0.0);
  Forcing f;
  f.amplitude = 0.7;
  f.wavenumber = 0;
  Schedule sched;
  sched.t_end = 0.01;
  sched.dt = 1e-3;
  sched.method = Method::explicit_em;
  sched.record_every = 1;
  auto res = simulate_path(s, sched, 1, &f);
  REQUIRE_FALSE(res.stop.stopped);
  const State& last = res.trajectory.snapshots.back();
  const double expect = 0.7 * last.time;
  REQUIRE(std::abs(integrate(last.u) - expect) < 1e-13);
  REQUIRE(last.u.max() - last.u.min() < 1e-13);
}

TEST_CASE("imex step leaves a constant state unchanged", "[integrator]") {
  const std::size_t n = 64;
  Params p = quiet_params(1.0, 0.0, 2.0, 16);
  Field rho = Field::sample(n, [](double) { return 1.3; });
  State s;
  s.r = rho_to_r(rho, p.beta);
  s.u = Field(n);
  s.params = p;
  State out = step_imex(s, 1e-2);
  REQUIRE(state_distance(out, s) < 1e-13);
}

TEST_CASE("imex trapezoidal block matches the exact exponential to O(dt^2)",
          "[integrator]") {
  // frozen-coefficient linear block at rho = 1: compare one implicit solve
  // against the matrix exponential, per mode
  const double mu_prime = 1.0, nu = 1.0;
  for (int k : {1, 2, 5}) {
    const double xi = kTwoPi * k;
    Mat2 m{cplx(0, 0), cplx(0, -xi * mu_prime), cplx(0, -xi * xi * xi * mu_prime),
           cplx(-nu * xi * xi, 0)};
    const cplx r0(0.3, -0.1), u0(0.05, 0.2);
    double prev_err = -1.0;
    for (double dt : {1e-4, 5e-5, 2.5e-5}) {
      // (I - dt/2 m) x1 = (I + dt/2 m) x0
      const double h = 0.5 * dt;
      const cplx b1 = r0 + h * m.b * u0;
      const cplx b2 = u0 + h * (m.c * r0 + m.d * u0);
      const cplx m12 = -h * m.b, m21 = -h * m.c;
      const cplx m22 = 1.0 - h * m.d;
      const cplx det = m22 - m12 * m21;
      const cplx r1 = (b1 * m22 - m12 * b2) / det;
      const cplx u1 = (b2 - m21 * b1) / det;
      const auto exact = expm_apply(m, r0, u0, dt);
      const double err = std::abs(r1 - exact[0]) + std::abs(u1 - exact[1]);
      // trapezoidal local error ~ dt^3/12 ||A^3 x||, well inside O(dt^2)
      const double a2 = std::abs(m.b * m.c) + std::abs(m.d * m.d);
      REQUIRE(err < 10.0 * dt * dt * a2);
      if (prev_err > 0) REQUIRE(err < 0.15 * prev_err);  // order-3 local shrinkage
      prev_err = err;
    }
  }
}

TEST_CASE("imex converges to the explicit trajectory as dt -> 0", "[integrator]") {
  const std::size_t n = 64;
  Params p = quiet_params(1.0, -1.0, 2.0, 8);
  State ic = single_mode_state(n, p, 0.1, 1, 0.05);
  const double t_end = 0.01;

  auto run = [&](Method m, double dt) {
    Schedule sched;
    sched.t_end = t_end;
    sched.dt = dt;
    sched.method = m;
    sched.record_every = 1 << 20;
    auto res = simulate_path(ic, sched, 1);
    REQUIRE_FALSE(res.stop.stopped);
    return res.trajectory.snapshots.back();
  };

  double prev = -1.0;
  for (double dt : {1e-4, 5e-5, 2.5e-5}) {
    const double gap = state_distance(run(Method::imex_em, dt), run(Method::explicit_em, dt));
    if (prev > 0) REQUIRE(gap < 0.75 * prev);  // at least order-1 shrinkage
    prev = gap;
  }
}

TEST_CASE("detect_stop classifications", "[integrator]") {
  const std::size_t n = 64;
  Params p = quiet_params(1.0, -1.0, 2.0, 16);
  SECTION("small smooth state, large R: not stopped") {
    State s = single_mode_state(n, p, 0.1, 1, 0.1);
    auto rep = detect_stop(s, p);
    REQUIRE_FALSE(rep.stopped);
    REQUIRE(rep.reason == StopReason::none);
  }
  SECTION("norm threshold") {
    Params tight = p;
    tight.trunc_radius = 1.0;
    State s = single_mode_state(n, tight, 0.0, 1, 0.0);
    s.r = Field::sample(n, [](double) { return 2.0; });  // ||r||_W2inf = 2 >= R
    auto rep = detect_stop(s, tight);
    REQUIRE(rep.stopped);
    REQUIRE(rep.reason == StopReason::norm_threshold);
  }
  SECTION("nonfinite state") {
    State s = single_mode_state(n, p, 0.1, 1, 0.1);
    auto v = s.u.physical();
    v[3] = std::nan("");
    s.u = Field::from_physical(v);
    auto rep = detect_stop(s, p);
    REQUIRE(rep.stopped);
    REQUIRE(rep.reason == StopReason::nonfinite);
  }
  SECTION("density floor") {
    Params pf = quiet_params(1.0, 0.0, 2.0, 16);
    State s;
    s.params = pf;
    s.r = Field::sample(n, [](double) { return 1e-6; });  // rho = (r/2)^2 = 2.5e-13
    s.u = Field(n);
    auto rep = detect_stop(s, pf);
    REQUIRE(rep.stopped);
    REQUIRE(rep.reason == StopReason::density_floor);
  }
}

TEST_CASE("simulate_path honors t_end = 0 and reproduces bitwise", "[integrator]") {
  const std::size_t n = 64;
  Params p = quiet_params(1.0, -1.0, 2.0, 16);
  p.noise.family = NoiseFamily::multiplicative_sin;
  State ic = single_mode_state(n, p, 0.1, 1, 0.1);

  Schedule z;
  z.t_end = 0.0;
  z.dt = 1e-3;
  auto res0 = simulate_path(ic, z, 42);
  REQUIRE(res0.trajectory.snapshots.size() == 1);
  REQUIRE(state_distance(res0.trajectory.snapshots[0], ic) == 0.0);

  Schedule sched;
  sched.t_end = 0.005;
  sched.dt = 1e-4;
  sched.record_every = 5;
  auto a = simulate_path(ic, sched, 42);
  auto b = simulate_path(ic, sched, 42);
  REQUIRE(a.trajectory.snapshots.size() == b.trajectory.snapshots.size());
  for (std::size_t i = 0; i < a.trajectory.snapshots.size(); ++i) {
    REQUIRE(a.trajectory.snapshots[i].r.spectral() == b.trajectory.snapshots[i].r.spectral());
    REQUIRE(a.trajectory.snapshots[i].u.spectral() == b.trajectory.snapshots[i].u.spectral());
  }
  auto c = simulate_path(ic, sched, 43);
  REQUIRE(state_distance(a.trajectory.snapshots.back(), c.trajectory.snapshots.back()) > 0.0);
}

TEST_CASE("equilibrium stays constant without noise", "[integrator]") {
  const std::size_t n = 64;
  Params p = quiet_params(1.0, -1.0, 2.0, 16);
  State ic = single_mode_state(n, p, 0.0, 1, 0.0);
  Schedule sched;
  sched.t_end = 0.01;
  sched.dt = 1e-3;
  auto res = simulate_path(ic, sched, 0);
  for (const auto& snap : res.trajectory.snapshots)
    REQUIRE(state_distance(snap, ic) < 1e-14);
}

TEST_CASE("stop times are monotone in the threshold R", "[integrator]") {
  // a state pushed by strong constant forcing so the cutoff argument grows;
  // smaller R must stop earlier
  const std::size_t n = 64;
  Params p1 = quiet_params(1.0, -1.0, 2.0, 16);
  p1.trunc_radius = 3.0;
  Params p2 = p1;
  p2.trunc_radius = 6.0;
  Forcing f;
  f.amplitude = 30.0;
  f.wavenumber = 1;
  Schedule sched;
  sched.t_end = 0.5;
  sched.dt = 1e-3;
  sched.record_every = 1;

  State ic1 = single_mode_state(n, p1, 0.05, 1, 0.0);
  State ic2 = single_mode_state(n, p2, 0.05, 1, 0.0);
  auto r1 = simulate_path(ic1, sched, 5, &f);
  auto r2 = simulate_path(ic2, sched, 5, &f);
  REQUIRE(r1.stop.stopped);
  REQUIRE(r2.stop.stopped);
  REQUIRE(r1.stop.reason == StopReason::norm_threshold);
  REQUIRE(*r1.stop.tau_R <= *r2.stop.tau_R);
}

TEST_CASE("deterministic self-convergence at order >= 1 for both methods", "[integrator]") {
  const std::size_t n = 64;
  Params p = quiet_params(1.0, -1.0, 2.0, 16);
  State ic = single_mode_state(n, p, 0.15, 1, 0.1);
  const double t_end = 0.01;

  for (Method m : {Method::explicit_em, Method::imex_em}) {
    auto run = [&](double dt) {
      Schedule sched;
      sched.t_end = t_end;
      sched.dt = dt;
      sched.method = m;
      sched.record_every = 1 << 20;
      return simulate_path(ic, sched, 1).trajectory.snapshots.back();
    };
    // keep dt below the explicit stability bound ~ 1/xi_max^2 at m = 16
    const State ref = run(t_end / 8192);
    std::vector<double> errs;
    for (int lev = 7; lev <= 9; ++lev) errs.push_back(state_distance(run(t_end / (1 << lev)), ref));
    for (std::size_t i = 1; i < errs.size(); ++i) REQUIRE(errs[i] < 0.6 * errs[i - 1]);
  }
}
