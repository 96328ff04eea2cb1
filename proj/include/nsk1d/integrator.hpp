#pragma once

// Time advancement of the truncated Galerkin system with Ito noise.
//
// explicit_em: Euler-Maruyama, drift and noise explicit.
// imex_em:     the constant-coefficient linearization at the spatial mean
//              state (viscous nu dxx on u, the skew third-order capillary
//              coupling between r and u) is solved implicitly per mode as a
//              2x2 backward-Euler system; the nonlinear remainder and the
//              noise stay explicit. The capillary block makes explicit
//              stepping dt = O(dx^3), so this is the default.

#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nsk1d/diagnostics.hpp"
#include "nsk1d/dynamics.hpp"
#include "nsk1d/noise.hpp"

namespace nsk1d {

enum class Method { explicit_em, imex_em };

inline std::string to_string(Method m) {
  return m == Method::explicit_em ? "explicit_em" : "imex_em";
}

inline Method method_from_string(const std::string& s) {
  if (s == "explicit_em") return Method::explicit_em;
  if (s == "imex_em") return Method::imex_em;
  throw std::invalid_argument("unknown method: " + s);
}

struct Schedule {
  double t_end = 0.1;
  double dt = 1e-4;
  Method method = Method::imex_em;
  std::size_t record_every = 10;

  std::uint64_t n_steps() const {
    return static_cast<std::uint64_t>(std::llround(t_end / dt));
  }
  void validate() const {
    if (!(t_end >= 0.0)) throw std::invalid_argument("schedule: t_end must be >= 0");
    if (!(dt > 0.0)) throw std::invalid_argument("schedule: dt must be > 0");
    if (t_end > 0.0 && dt > t_end) throw std::invalid_argument("schedule: dt must be <= t_end");
    if (record_every < 1) throw std::invalid_argument("schedule: record_every must be >= 1");
  }
};

enum class StopReason { none, norm_threshold, density_floor, nonfinite };

inline std::string to_string(StopReason r) {
  switch (r) {
    case StopReason::none: return "none";
    case StopReason::norm_threshold: return "norm_threshold";
    case StopReason::density_floor: return "density_floor";
    case StopReason::nonfinite: return "nonfinite";
  }
  return "?";
}

struct StoppingReport {
  bool stopped = false;
  std::optional<double> tau_R;
  StopReason reason = StopReason::none;
  double y_max = 0.0;
};

// Stop classification for one state: nonfinite data first, then the
// W^{2,inf} threshold, then the density floor.
inline StoppingReport detect_stop(const State& s, const Params& p) {
  StoppingReport rep;
  if (!s.r.finite() || !s.u.finite()) {
    rep.stopped = true;
    rep.reason = StopReason::nonfinite;
    rep.tau_R = s.time;
    return rep;
  }
  const double y = cutoff_argument(s);
  rep.y_max = y;
  if (y >= p.trunc_radius) {
    rep.stopped = true;
    rep.reason = StopReason::norm_threshold;
    rep.tau_R = s.time;
    return rep;
  }
  double rho_min = 0.0;
  try {
    rho_min = r_to_rho(s.r, p.beta).min();
  } catch (const DensityError&) {
    rho_min = -1.0;
  }
  if (rho_min < p.density_floor) {
    rep.stopped = true;
    rep.reason = StopReason::density_floor;
    rep.tau_R = s.time;
  }
  return rep;
}

// One explicit Euler-Maruyama step from a precomputed tendency.
inline State step_em_from_tendency(const State& s, const Tendency& t, double dt,
                                   const WienerIncrement* inc) {
  State out = s;
  out.r = s.r + dt * t.dr;
  out.u = s.u + dt * t.du_drift;
  if (inc && s.params.noise.family != NoiseFamily::off) out.u += noise_term(s, *inc, t.theta);
  out.time = s.time + dt;
  return out;
}

inline State step_em(const State& s, double dt, const WienerIncrement* inc = nullptr) {
  if (!(dt > 0.0)) throw std::invalid_argument("step_em: dt must be > 0");
  return step_em_from_tendency(s, galerkin_tendency(s), dt, inc);
}

namespace detail {

// Per-mode linear block of the mean-state linearization, scaled by theta:
//   d/dt [r_k, u_k] = theta * [[0, -i xi mu'], [-i xi^3 mu', -nu xi^2]] [r_k, u_k].
struct ImexBlock {
  cplx a12, a21;
  double a22;
};

inline ImexBlock imex_block(double xi, double mu_prime_bar, double nu_bar, double theta) {
  ImexBlock b;
  b.a12 = cplx(0.0, -xi * mu_prime_bar) * theta;
  b.a21 = cplx(0.0, -xi * xi * xi * mu_prime_bar) * theta;
  b.a22 = -nu_bar * xi * xi * theta;
  return b;
}

}  // namespace detail

// Semi-implicit step: trapezoidal (Crank-Nicolson) solve of the mean-state
// linear block, explicit on the remainder and the noise. Converges to the
// explicit trajectory as dt -> 0. The trapezoidal block integrates the stiff
// skew capillary coupling to O(dt^3) per step; a backward-Euler block leaves
// an O(dt^2 ||A^2 x||) local error that dominates the energy and mass drift
// at production step sizes.
inline State step_imex_from_tendency(const State& s, const Tendency& t, double dt,
                                     const WienerIncrement* inc) {
  const Params& p = s.params;
  const double mu_prime_bar = mu_k_prime_scalar(t.rho_bar, p.beta);
  const double nu_bar = std::pow(t.rho_bar, p.alpha - 1.0);
  const Grid g(s.r.size());
  const std::size_t n = s.r.size();

  std::vector<cplx> r_new = s.r.spectral();
  std::vector<cplx> u_new = s.u.spectral();
  const auto& dr = t.dr.spectral();
  const auto& du = t.du_drift.spectral();

  std::vector<cplx> noise_spec;
  if (inc && p.noise.family != NoiseFamily::off)
    noise_spec = noise_term(s, *inc, t.theta).spectral();

  const double hdt = 0.5 * dt;
  for (std::size_t j = 0; j < n; ++j) {
    const double xi = kTwoPi * static_cast<double>(g.wavenumber(j));
    const auto blk = detail::imex_block(xi, mu_prime_bar, nu_bar, t.theta);

    // explicit remainder: full drift minus the linear block at the current state
    const cplx nr = dr[j] - blk.a12 * u_new[j];
    const cplx nu = du[j] - blk.a21 * r_new[j] - blk.a22 * u_new[j];

    // (I - dt/2 A) x+ = (I + dt/2 A) x + dt N + noise
    cplx rhs_r_j = r_new[j] + hdt * blk.a12 * u_new[j] + dt * nr;
    cplx rhs_u_j = u_new[j] + hdt * (blk.a21 * r_new[j] + blk.a22 * u_new[j]) + dt * nu;
    if (!noise_spec.empty()) rhs_u_j += noise_spec[j];

    const cplx m12 = -hdt * blk.a12;
    const cplx m21 = -hdt * blk.a21;
    const double m22 = 1.0 - hdt * blk.a22;
    const cplx det = m22 - m12 * m21;  // m11 = 1
    r_new[j] = (rhs_r_j * m22 - m12 * rhs_u_j) / det;
    u_new[j] = (rhs_u_j - m21 * rhs_r_j) / det;
  }

  State out = s;
  out.r = Field::from_spectral(std::move(r_new));
  out.u = Field::from_spectral(std::move(u_new));
  out.time = s.time + dt;
  return out;
}

inline State step_imex(const State& s, double dt, const WienerIncrement* inc = nullptr) {
  if (!(dt > 0.0)) throw std::invalid_argument("step_imex: dt must be > 0");
  return step_imex_from_tendency(s, galerkin_tendency(s), dt, inc);
}

struct Trajectory {
  std::vector<double> times;
  std::vector<State> snapshots;  // recorded every record_every steps plus the final state
};

struct PathResult {
  Trajectory trajectory;
  StoppingReport stop;
  std::vector<DiagnosticsRecord> diagnostics;
};

// Optional constant-in-time forcing, cutoff-scaled like the other momentum
// terms; off when amplitude is zero.
struct Forcing {
  double amplitude = 0.0;
  std::size_t wavenumber = 0;  // 0 = spatially constant

  bool enabled() const { return amplitude != 0.0; }
  Field field(std::size_t n) const {
    if (wavenumber == 0) {
      std::vector<double> v(n, amplitude);
      return Field::from_physical(std::move(v));
    }
    return Field::sample(n, [this](double x) {
      return amplitude * std::cos(kTwoPi * static_cast<double>(wavenumber) * x);
    });
  }
};

// Advance one path until t_end or a stop. The Wiener path supplies aggregated
// increments when `substeps` > 1 so refinement levels share one realization.
// Fully deterministic given (ic, params, schedule, path).
inline PathResult simulate_path(const State& ic, const Schedule& schedule, const WienerPath& path,
                                std::uint64_t substeps = 1, const Forcing* forcing = nullptr) {
  schedule.validate();
  ic.params.validate();

  PathResult res;
  State s = ic;
  const std::uint64_t n_steps = schedule.n_steps();
  const bool noise_on = ic.params.noise.family != NoiseFamily::off;
  const Field f_ext = forcing && forcing->enabled() ? project(forcing->field(ic.grid_size()),
                                                              ic.params.galerkin_order)
                                                    : Field();

  auto record = [&](const State& st) {
    res.trajectory.times.push_back(st.time);
    res.trajectory.snapshots.push_back(st);
    res.diagnostics.push_back(compute_diagnostics(st));
  };

  double y_max = 0.0;
  for (std::uint64_t step = 0; step <= n_steps; ++step) {
    // stop checks on the current state
    if (!s.r.finite() || !s.u.finite()) {
      res.stop = {true, s.time, StopReason::nonfinite, y_max};
      record(s);
      return res;
    }
    Tendency t;
    try {
      t = galerkin_tendency(s);
    } catch (const DensityError&) {
      res.stop = {true, s.time, StopReason::density_floor, y_max};
      record(s);
      return res;
    }
    y_max = std::max(y_max, t.y);
    if (t.y >= s.params.trunc_radius) {
      res.stop = {true, s.time, StopReason::norm_threshold, y_max};
      record(s);
      return res;
    }
    if (t.rho_min < s.params.density_floor) {
      res.stop = {true, s.time, StopReason::density_floor, y_max};
      record(s);
      return res;
    }

    if (step % schedule.record_every == 0 || step == n_steps) record(s);
    if (step == n_steps) break;

    WienerIncrement inc;
    const WienerIncrement* inc_ptr = nullptr;
    if (noise_on) {
      inc = substeps == 1 ? path.increment(step) : path.coarse_increment(step, substeps);
      inc_ptr = &inc;
    }
    if (!f_ext.empty()) t.du_drift += t.theta * f_ext;

    s = schedule.method == Method::explicit_em ? step_em_from_tendency(s, t, schedule.dt, inc_ptr)
                                               : step_imex_from_tendency(s, t, schedule.dt, inc_ptr);
  }
  res.stop.y_max = y_max;
  return res;
}

inline PathResult simulate_path(const State& ic, const Schedule& schedule, std::uint64_t seed,
                                const Forcing* forcing = nullptr) {
  NoiseSpec spec = ic.params.noise;
  spec.seed = seed;
  WienerPath path(spec, schedule.dt);
  return simulate_path(ic, schedule, path, 1, forcing);
}

}  // namespace nsk1d
