#pragma once

// Evaluators for every functional the estimates control: energy, BD entropy,
// both entropy dissipations, vacuum bounds, the localization coefficient, the
// L4/L2 functional-inequality ratio, and residuals of the formal balances.

#include <cmath>
#include <optional>
#include <vector>

#include "nsk1d/constitutive.hpp"
#include "nsk1d/dynamics.hpp"
#include "nsk1d/field.hpp"
#include "nsk1d/params.hpp"

namespace nsk1d {

// Per-step scalar diagnostics; the CSV column order follows field order here.
struct DiagnosticsRecord {
  double t = 0.0;
  double H = 0.0;        // energy
  double E = 0.0;        // BD entropy
  double D_ag = 0.0;     // pressure entropy dissipation
  double D_ab = 0.0;     // capillary entropy dissipation
  double visc = 0.0;     // int mu(rho) |dx u|^2
  double mass = 0.0;
  double rho_min = 0.0;
  double rho_max = 0.0;
  double inv_rho_max = 0.0;
  double y = 0.0;        // cutoff argument
  double theta = 0.0;    // theta_R(y)
  double a1 = 0.0;       // localization coefficient a(t)
};

namespace detail {

// int a*b*c dx, exact for band-limited fields.
inline double integral3(const Field& a, const Field& b, const Field& c) {
  return inner(dealias_product(a, b), c);
}

}  // namespace detail

// H = int( rho u^2 / 2 + F(rho) + k(rho) |dx rho|^2 / 2 ).
inline double energy(const State& s) {
  const Field rho = r_to_rho(s.r, s.params.beta);
  require_positive(rho, s.params.density_floor, "energy");
  const Field drho = derivative(rho, 1);
  const Field krho = PaddedEval(rho).map(
      [b = s.params.beta](double z) { return std::pow(z, b); });
  double h = 0.5 * detail::integral3(rho, s.u, s.u);
  h += integrate(pressure_F(rho, s.params.gamma, s.params.density_floor));
  h += 0.5 * detail::integral3(krho, drho, drho);
  return h;
}

// E = same functional with the effective velocity V in place of u.
inline double bd_entropy(const State& s) {
  const Field rho = r_to_rho(s.r, s.params.beta);
  require_positive(rho, s.params.density_floor, "bd_entropy");
  const Field V = effective_velocity(rho, s.u, s.params.alpha, s.params.density_floor);
  const Field drho = derivative(rho, 1);
  const Field krho = PaddedEval(rho).map(
      [b = s.params.beta](double z) { return std::pow(z, b); });
  double e = 0.5 * detail::integral3(rho, V, V);
  e += integrate(pressure_F(rho, s.params.gamma, s.params.density_floor));
  e += 0.5 * detail::integral3(krho, drho, drho);
  return e;
}

// int mu(rho) |dx u|^2.
inline double viscous_dissipation(const State& s) {
  const Field rho = r_to_rho(s.r, s.params.beta);
  const Field mu = PaddedEval(rho).map(
      [a = s.params.alpha](double z) { return std::pow(z, a); });
  const Field du = derivative(s.u, 1);
  return detail::integral3(mu, du, du);
}

// D_{alpha,gamma} = 4 gamma/(gamma+alpha-1)^2 int |dx rho^((gamma+alpha-1)/2)|^2,
// reducing to gamma int |dx log rho|^2 on the degenerate exponent.
inline double dissipation_pressure(const Field& rho, double alpha, double gamma,
                                   double floor = kDefaultDensityFloor) {
  require_positive(rho, floor, "dissipation_pressure");
  const double e = gamma + alpha - 1.0;
  if (std::abs(e) < kDegenerateThetaTol) {
    const Field w = PaddedEval(rho).map([](double z) { return std::log(z); });
    const Field dw = derivative(w, 1);
    return gamma * inner(dw, dw);
  }
  const Field w = PaddedEval(rho).map([e](double z) { return std::pow(z, 0.5 * e); });
  const Field dw = derivative(w, 1);
  return 4.0 * gamma / (e * e) * inner(dw, dw);
}

inline double dissipation_pressure(const State& s) {
  return dissipation_pressure(r_to_rho(s.r, s.params.beta), s.params.alpha, s.params.gamma,
                              s.params.density_floor);
}

// int g^4 dx computed as int (g^2)^2 with one alias-free square.
inline double integral_fourth_power(const Field& g) {
  const Field g2 = dealias_product(g, g);
  return inner(g2, g2);
}

// D_{alpha,beta} = 4/s^2 int |dxx rho^(s/2)|^2 + c(alpha,beta) int |dx rho^(s/4)|^4
// with s = alpha+beta+1. On the degenerate line s = 0 the limit is
// int |dxx log rho|^2 + alpha(1-alpha)/2 int |dx log rho|^4.
inline double dissipation_capillary(const Field& rho, double alpha, double beta,
                                    double floor = kDefaultDensityFloor) {
  require_positive(rho, floor, "dissipation_capillary");
  const double s = alpha + beta + 1.0;
  if (std::abs(s) < kDegenerateThetaTol) {
    const Field w = PaddedEval(rho).map([](double z) { return std::log(z); });
    const Field dww = derivative(w, 2);
    const double quartic = integral_fourth_power(derivative(w, 1));
    return inner(dww, dww) + 0.5 * alpha * (1.0 - alpha) * quartic;
  }
  const Field w_half = PaddedEval(rho).map([s](double z) { return std::pow(z, 0.5 * s); });
  const Field w_quarter = PaddedEval(rho).map([s](double z) { return std::pow(z, 0.25 * s); });
  const Field dww = derivative(w_half, 2);
  const double c = capillary_constant(alpha, beta);
  return 4.0 / (s * s) * inner(dww, dww) + c * integral_fourth_power(derivative(w_quarter, 1));
}

inline double dissipation_capillary(const State& s) {
  return dissipation_capillary(r_to_rho(s.r, s.params.beta), s.params.alpha, s.params.beta,
                               s.params.density_floor);
}

// int |dx f^(1/2)|^4 / int (dxx f)^2 for positive f; 0/0 for constant f maps
// to 0 (the inequality is vacuous there). One-dimensional fields only.
inline double check_functional_inequality(const Field& f) {
  if (!(f.min() > 0.0)) throw DensityError("check_functional_inequality: f must be positive");
  const Field root = PaddedEval(f).map([](double z) { return std::sqrt(z); });
  const double num = integral_fourth_power(derivative(root, 1));
  const Field fxx = derivative(f, 2);
  const double den = inner(fxx, fxx);
  if (den <= 1e-300) return 0.0;
  return num / den;
}

// Grid extrema of rho and 1/rho.
struct VacuumBounds {
  double rho_min = 0.0;
  double rho_max = 0.0;
  double inv_rho_max = 0.0;
};

inline VacuumBounds vacuum_bounds(const Field& rho, double floor = kDefaultDensityFloor) {
  require_positive(rho, floor, "vacuum_bounds");
  VacuumBounds v;
  v.rho_min = rho.min();
  v.rho_max = rho.max();
  v.inv_rho_max = 1.0 / v.rho_min;
  return v;
}

// Localization coefficient
//   a(t) = ( ||rho^((-beta-2)/2)||^2 + ||rho^((-2 alpha+1)/2)||^2_Linf )
//            * ||dxx rho^((alpha+beta+1)/2)||^2_L2
//        + ||rho^(-(alpha-1)/2)||^2_Linf ( ||dx u||^2 + ||u||^2 )
//        + ||rho^((2 gamma-alpha-beta-2)/2)||^2_Linf.
// The first norm is read as Linf in `value`; the L2 reading is also reported.
struct LocalizationCoefficient {
  double value = 0.0;     // first norm as Linf
  double value_l2 = 0.0;  // first norm as L2
};

inline LocalizationCoefficient localization_coefficient(const State& s) {
  const Params& p = s.params;
  const Field rho = r_to_rho(s.r, p.beta);
  require_positive(rho, p.density_floor, "localization_coefficient");
  PaddedEval pe(rho);

  auto linf_pow = [&](double e) {
    double m = 0.0;
    for (double z : pe.values()) m = std::max(m, std::abs(std::pow(z, e)));
    return m;
  };
  auto l2_pow = [&](double e) {
    const Field w = pe.map([e](double z) { return std::pow(z, e); });
    return norm_l2(w);
  };

  const double s_exp = 0.5 * (p.alpha + p.beta + 1.0);
  Field w_theta = p.degenerate_theta()
                      ? pe.map([](double z) { return std::log(z); })
                      : pe.map([s_exp](double z) { return std::pow(z, s_exp); });
  const Field dxx_w = derivative(w_theta, 2);
  const double curv = inner(dxx_w, dxx_w);

  const double n1_inf = linf_pow(0.5 * (-p.beta - 2.0));
  const double n1_l2 = l2_pow(0.5 * (-p.beta - 2.0));
  const double n2 = linf_pow(0.5 * (-2.0 * p.alpha + 1.0));
  const double n3 = linf_pow(-0.5 * (p.alpha - 1.0));
  const double n4 = linf_pow(0.5 * (2.0 * p.gamma - p.alpha - p.beta - 2.0));

  const double du2 = [&] {
    const Field du = derivative(s.u, 1);
    return inner(du, du);
  }();
  const double u2 = inner(s.u, s.u);

  LocalizationCoefficient out;
  out.value = (n1_inf * n1_inf + n2 * n2) * curv + n3 * n3 * (du2 + u2) + n4 * n4;
  out.value_l2 = (n1_l2 * n1_l2 + n2 * n2) * curv + n3 * n3 * (du2 + u2) + n4 * n4;
  return out;
}

inline double mass(const State& s) { return integrate(r_to_rho(s.r, s.params.beta)); }

inline DiagnosticsRecord compute_diagnostics(const State& s) {
  DiagnosticsRecord rec;
  rec.t = s.time;
  const Field rho = r_to_rho(s.r, s.params.beta);
  rec.H = energy(s);
  rec.E = bd_entropy(s);
  rec.D_ag = dissipation_pressure(rho, s.params.alpha, s.params.gamma, s.params.density_floor);
  rec.D_ab = dissipation_capillary(rho, s.params.alpha, s.params.beta, s.params.density_floor);
  rec.visc = viscous_dissipation(s);
  rec.mass = integrate(rho);
  const VacuumBounds v = vacuum_bounds(rho, s.params.density_floor);
  rec.rho_min = v.rho_min;
  rec.rho_max = v.rho_max;
  rec.inv_rho_max = v.inv_rho_max;
  rec.y = cutoff_argument(s);
  rec.theta = cutoff_theta(rec.y, s.params.trunc_radius);
  rec.a1 = localization_coefficient(s).value;
  return rec;
}

// ---- residuals of the formal balances --------------------------------------

namespace detail {

// Trapezoid accumulation of column `get` against the recorded times.
template <typename Get>
std::vector<double> trapezoid_series(const std::vector<DiagnosticsRecord>& recs, Get&& get) {
  std::vector<double> out(recs.size(), 0.0);
  for (std::size_t i = 1; i < recs.size(); ++i) {
    const double dt = recs[i].t - recs[i - 1].t;
    out[i] = out[i - 1] + 0.5 * dt * (get(recs[i]) + get(recs[i - 1]));
  }
  return out;
}

}  // namespace detail

// R_H(t) = H(t) + int_0^t visc - H(0); identically zero for the exact
// unforced flow.
inline std::vector<double> energy_residual(const std::vector<DiagnosticsRecord>& recs) {
  std::vector<double> out(recs.size(), 0.0);
  if (recs.empty()) return out;
  const auto acc = detail::trapezoid_series(recs, [](const DiagnosticsRecord& r) { return r.visc; });
  for (std::size_t i = 0; i < recs.size(); ++i) out[i] = recs[i].H + acc[i] - recs[0].H;
  return out;
}

// R_E(t) = E(t) + int_0^t (D_ag + D_ab) - E(0).
inline std::vector<double> entropy_residual(const std::vector<DiagnosticsRecord>& recs) {
  std::vector<double> out(recs.size(), 0.0);
  if (recs.empty()) return out;
  const auto acc = detail::trapezoid_series(
      recs, [](const DiagnosticsRecord& r) { return r.D_ag + r.D_ab; });
  for (std::size_t i = 0; i < recs.size(); ++i) out[i] = recs[i].E + acc[i] - recs[0].E;
  return out;
}

// int_0^t a(s) ds on the recorded grid and the first time it crosses M
// (numerical analogue of the localization stopping time).
inline std::vector<double> localization_integral(const std::vector<DiagnosticsRecord>& recs) {
  return detail::trapezoid_series(recs, [](const DiagnosticsRecord& r) { return r.a1; });
}

inline std::optional<double> localization_crossing(const std::vector<DiagnosticsRecord>& recs,
                                                   double level) {
  const auto acc = localization_integral(recs);
  for (std::size_t i = 0; i < acc.size(); ++i)
    if (acc[i] > level) return recs[i].t;
  return std::nullopt;
}

}  // namespace nsk1d
