#pragma once

// Constitutive laws and changes of variables: the transformed density r, the
// gradient variable A(rho), the auxiliary coefficient mu_k'(rho), effective
// velocity V, the Korteweg divergence and the pressure energy density.
//
// Power laws are evaluated pointwise on the dealiasing-padded grid and
// truncated back (exact dealiasing is impossible for fractional powers).

#include <cmath>
#include <stdexcept>
#include <string>

#include "nsk1d/field.hpp"
#include "nsk1d/params.hpp"

namespace nsk1d {

struct DensityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr double kDefaultDensityFloor = 1e-8;

// ---- scalar kernels -------------------------------------------------------

// r(rho) = 2/(beta+1) rho^((beta+1)/2), log rho at beta = -1.
inline double r_of_rho_scalar(double rho, double beta) {
  if (beta == -1.0) return std::log(rho);
  return 2.0 / (beta + 1.0) * std::pow(rho, 0.5 * (beta + 1.0));
}

// Inverse map: rho = ((beta+1)/2 r)^(2/(beta+1)), exp(r) at beta = -1.
inline double rho_of_r_scalar(double r, double beta) {
  if (beta == -1.0) return std::exp(r);
  return std::pow(0.5 * (beta + 1.0) * r, 2.0 / (beta + 1.0));
}

// mu_k'(rho) = sqrt(rho k(rho)) = rho^((beta+1)/2).
inline double mu_k_prime_scalar(double rho, double beta) {
  return std::pow(rho, 0.5 * (beta + 1.0));
}

// F(rho): rho^gamma/(gamma-1) for gamma > 1, rho log rho at gamma = 1.
inline double pressure_energy_scalar(double rho, double gamma) {
  if (gamma == 1.0) return rho * std::log(rho);
  return std::pow(rho, gamma) / (gamma - 1.0);
}

// Pressure potential h with h'(rho) = p'(rho)/rho, so that dx p(rho)/rho is
// the exact gradient of h(rho).
inline double pressure_potential_scalar(double rho, double gamma) {
  if (gamma == 1.0) return std::log(rho);
  return gamma / (gamma - 1.0) * std::pow(rho, gamma - 1.0);
}

// ---- field-level checks ---------------------------------------------------

inline void require_positive(const Field& f, double floor, const char* what) {
  const double m = f.min();
  if (!(m >= floor))
    throw DensityError(std::string(what) + ": minimum " + std::to_string(m) +
                       " below floor " + std::to_string(floor));
}

// r must lie in the range of r(rho): positive for beta > -1, negative for
// beta < -1, unrestricted for beta = -1.
inline void require_r_in_range(const PaddedEval& r_vals, double beta) {
  if (beta == -1.0) return;
  if (beta > -1.0) {
    if (!(r_vals.min() > 0.0)) throw DensityError("r out of range: must be > 0 for beta > -1");
  } else {
    if (!(r_vals.max() < 0.0)) throw DensityError("r out of range: must be < 0 for beta < -1");
  }
}

// ---- field operations -----------------------------------------------------

inline Field rho_to_r(const Field& rho, double beta, double floor = kDefaultDensityFloor) {
  PaddedEval pe(rho);
  if (!(pe.min() >= floor)) throw DensityError("rho_to_r: nonpositive density");
  return pe.map([beta](double z) { return r_of_rho_scalar(z, beta); });
}

inline Field r_to_rho(const Field& r, double beta) {
  PaddedEval pe(r);
  require_r_in_range(pe, beta);
  return pe.map([beta](double z) { return rho_of_r_scalar(z, beta); });
}

// A(rho) = rho^((beta-1)/2) dx rho; equals dx r(rho) to spectral accuracy.
inline Field capillary_gradient_A(const Field& rho, double beta, double floor = kDefaultDensityFloor) {
  PaddedEval pe(rho);
  if (!(pe.min() >= floor)) throw DensityError("capillary_gradient_A: nonpositive density");
  Field w = pe.map([beta](double z) { return std::pow(z, 0.5 * (beta - 1.0)); });
  return dealias_product(w, derivative(rho, 1));
}

inline Field mu_k_prime(const Field& rho, double beta, double floor = kDefaultDensityFloor) {
  PaddedEval pe(rho);
  if (!(pe.min() >= floor)) throw DensityError("mu_k_prime: nonpositive density");
  return pe.map([beta](double z) { return mu_k_prime_scalar(z, beta); });
}

// V = u + rho^(alpha-2) dx rho.
inline Field effective_velocity(const Field& rho, const Field& u, double alpha,
                                double floor = kDefaultDensityFloor) {
  PaddedEval pe(rho);
  if (!(pe.min() >= floor)) throw DensityError("effective_velocity: nonpositive density");
  Field w = pe.map([alpha](double z) { return std::pow(z, alpha - 2.0); });
  return u + dealias_product(w, derivative(rho, 1));
}

// dx K = rho dx( dx(k(rho) dx rho) - k'(rho)/2 |dx rho|^2 ).
inline Field korteweg_divergence(const Field& rho, double beta, double floor = kDefaultDensityFloor) {
  PaddedEval pe(rho);
  if (!(pe.min() >= floor)) throw DensityError("korteweg_divergence: nonpositive density");
  const Field drho = derivative(rho, 1);
  Field k_rho = pe.map([beta](double z) { return std::pow(z, beta); });
  Field inner_term = derivative(dealias_product(k_rho, drho), 1);
  if (beta != 0.0) {
    Field kp_rho = pe.map([beta](double z) { return beta * std::pow(z, beta - 1.0); });
    inner_term -= 0.5 * dealias_product(kp_rho, dealias_product(drho, drho));
  }
  return dealias_product(rho, derivative(inner_term, 1));
}

inline Field pressure_F(const Field& rho, double gamma, double floor = kDefaultDensityFloor) {
  PaddedEval pe(rho);
  if (!(pe.min() >= floor)) throw DensityError("pressure_F: nonpositive density");
  return pe.map([gamma](double z) { return pressure_energy_scalar(z, gamma); });
}

}  // namespace nsk1d
