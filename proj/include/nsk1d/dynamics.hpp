#pragma once

// Right-hand sides of the truncated augmented system in the variables (r, u):
//
//   dt r = -theta_R(y) [ u dx r + mu_k'(rho) dx u ]
//   dt u = -theta_R(y) [ u dx u + dx p(rho)/rho ]
//        +  theta_R(y) [ dx(mu(rho) dx u)/rho + dx(mu_k'(rho) dxx r) + dx r dxx r ]
//        +  theta_R(y) F(rho, u) dW
//
// with y = ||r||_{W^2,inf} + ||u||_{W^2,inf} and everything projected onto
// trigonometric polynomials of degree <= m. Products are formed on the padded
// grid and projected once at the end.

#include <cmath>
#include <limits>
#include <optional>

#include "nsk1d/constitutive.hpp"
#include "nsk1d/field.hpp"
#include "nsk1d/noise.hpp"
#include "nsk1d/params.hpp"

namespace nsk1d {

struct State {
  Field r;
  Field u;
  double time = 0.0;
  Params params;

  std::size_t grid_size() const { return r.size(); }
};

// Pointwise functions of rho needed by one tendency evaluation, all derived
// from a single padded evaluation of r.
struct DerivedFields {
  Field rho;
  Field inv_rho;     // 1/rho
  Field mu_rho;      // rho^alpha
  Field h_rho;       // pressure potential, dx h = dx p / rho
  double rho_min = 0.0;
  double rho_bar = 0.0;  // spatial mean of rho on the padded grid
};

inline DerivedFields derive_fields(const State& s) {
  const double beta = s.params.beta;
  const double alpha = s.params.alpha;
  const double gamma = s.params.gamma;
  PaddedEval per(s.r);
  require_r_in_range(per, beta);

  DerivedFields d;
  d.rho = per.map([beta](double z) { return rho_of_r_scalar(z, beta); });
  d.inv_rho = per.map([beta](double z) { return 1.0 / rho_of_r_scalar(z, beta); });
  d.mu_rho = per.map([beta, alpha](double z) { return std::pow(rho_of_r_scalar(z, beta), alpha); });
  d.h_rho = per.map(
      [beta, gamma](double z) { return pressure_potential_scalar(rho_of_r_scalar(z, beta), gamma); });

  double mn = std::numeric_limits<double>::infinity();
  double acc = 0.0;
  for (double z : per.values()) {
    const double rho = rho_of_r_scalar(z, beta);
    mn = std::min(mn, rho);
    acc += rho;
  }
  d.rho_min = mn;
  d.rho_bar = acc / static_cast<double>(per.values().size());
  if (!(d.rho_min >= s.params.density_floor))
    throw DensityError("derive_fields: density below floor");
  return d;
}

// Argument of the cutoff: y = ||r||_{W^2,inf} + ||u||_{W^2,inf} (grid sup).
inline double cutoff_argument(const State& s) { return norm_w2inf(s.r) + norm_w2inf(s.u); }

// Smooth non-increasing switch: 1 on [0, R], 0 on [R+1, inf), quintic
// smoothstep in between (C^2).
inline double cutoff_theta(double y, double R) {
  if (!(y >= 0.0)) throw std::invalid_argument("cutoff_theta: y must be >= 0");
  if (!(R > 0.0)) throw std::invalid_argument("cutoff_theta: R must be > 0");
  if (y <= R) return 1.0;
  if (y >= R + 1.0) return 0.0;
  const double t = y - R;
  const double s = t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
  return 1.0 - s;
}

struct Tendency {
  Field dr;        // projected drift of r
  Field du_drift;  // projected drift of u (noise excluded)
  // evaluation metadata, reused by the stepper and stop detection
  double y = 0.0;
  double theta = 0.0;
  double rho_min = 0.0;
  double rho_bar = 0.0;
};

namespace detail {

// Untruncated r-drift on the full grid: -(u dx r + mu_k' dx u).
inline Field rhs_r_raw(const State& s, const DerivedFields& /*d*/) {
  const double beta = s.params.beta;
  Field out = dealias_product(s.u, derivative(s.r, 1));
  if (beta == -1.0) {
    out += derivative(s.u, 1);  // mu_k' = 1
  } else {
    out += 0.5 * (beta + 1.0) * dealias_product(s.r, derivative(s.u, 1));
  }
  return -out;
}

// Untruncated u-drift on the full grid.
inline Field drift_u_raw(const State& s, const DerivedFields& d) {
  const double beta = s.params.beta;
  const Field du = derivative(s.u, 1);
  const Field drr = derivative(s.r, 2);

  Field out = -dealias_product(s.u, du);
  out -= derivative(d.h_rho, 1);
  out += dealias_product(d.inv_rho, derivative(dealias_product(d.mu_rho, du), 1));
  if (beta == -1.0) {
    out += derivative(s.r, 3);
  } else {
    out += derivative(0.5 * (beta + 1.0) * dealias_product(s.r, drr), 1);
  }
  out += dealias_product(derivative(s.r, 1), drr);
  return out;
}

}  // namespace detail

// Projected, cutoff-scaled r-equation right-hand side.
inline Field rhs_r(const State& s) {
  const DerivedFields d = derive_fields(s);
  const double theta = cutoff_theta(cutoff_argument(s), s.params.trunc_radius);
  Field out = project(detail::rhs_r_raw(s, d), s.params.galerkin_order);
  if (theta != 1.0) out *= theta;
  return out;
}

// Projected, cutoff-scaled u-equation drift.
inline Field drift_u(const State& s) {
  const DerivedFields d = derive_fields(s);
  const double theta = cutoff_theta(cutoff_argument(s), s.params.trunc_radius);
  Field out = project(detail::drift_u_raw(s, d), s.params.galerkin_order);
  if (theta != 1.0) out *= theta;
  return out;
}

// Full projected tendency; noise is applied separately by the stepper so the
// same drift serves both the explicit and the semi-implicit method.
inline Tendency galerkin_tendency(const State& s) {
  const DerivedFields d = derive_fields(s);
  Tendency t;
  t.y = cutoff_argument(s);
  t.theta = cutoff_theta(t.y, s.params.trunc_radius);
  t.rho_min = d.rho_min;
  t.rho_bar = d.rho_bar;
  t.dr = project(detail::rhs_r_raw(s, d), s.params.galerkin_order);
  t.du_drift = project(detail::drift_u_raw(s, d), s.params.galerkin_order);
  if (t.theta != 1.0) {
    t.dr *= t.theta;
    t.du_drift *= t.theta;
  }
  return t;
}

// sum_k F_k(x, rho(x), u(x)) dW_k for the state's noise spec.
inline Field apply_noise(const State& s, const WienerIncrement& inc) {
  return apply_noise_field(s.params.noise, s.u, inc);
}

// Cutoff-scaled, projected noise contribution for one increment.
inline Field noise_term(const State& s, const WienerIncrement& inc, double theta) {
  Field w = project(apply_noise(s, inc), s.params.galerkin_order);
  if (theta != 1.0) w *= theta;
  return w;
}

}  // namespace nsk1d
