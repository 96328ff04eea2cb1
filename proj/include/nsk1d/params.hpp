#pragma once

// Physical parameters and the (alpha, beta) regime classification: strong
// coercivity, no-vacuum, the entropy-dissipation constant c(alpha, beta) and
// the equivalent discriminant whose sign characterizes strong coercivity.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace nsk1d {

struct DegenerateThetaError : std::domain_error {
  using std::domain_error::domain_error;
};

// alpha + beta + 1 below this is treated as the degenerate line, where the
// closed-form constants are undefined and the logarithmic variable takes over.
inline constexpr double kDegenerateThetaTol = 1e-9;

enum class NoiseFamily { multiplicative_sin, additive_basis, off };

inline std::string to_string(NoiseFamily f) {
  switch (f) {
    case NoiseFamily::multiplicative_sin: return "multiplicative_sin";
    case NoiseFamily::additive_basis: return "additive_basis";
    case NoiseFamily::off: return "off";
  }
  return "?";
}

inline NoiseFamily noise_family_from_string(const std::string& s) {
  if (s == "multiplicative_sin") return NoiseFamily::multiplicative_sin;
  if (s == "additive_basis") return NoiseFamily::additive_basis;
  if (s == "off") return NoiseFamily::off;
  throw std::invalid_argument("unknown noise family: " + s);
}

// Truncated cylindrical Wiener description: K modes, weights f_k = k^(-p),
// coefficient family, seed for reproducible paths.
struct NoiseSpec {
  std::size_t mode_count = 16;
  double weight_decay = 2.0;  // p > 1 so sum f_k converges
  NoiseFamily family = NoiseFamily::multiplicative_sin;
  std::uint64_t seed = 0;

  double weight(std::size_t k) const {
    return std::pow(static_cast<double>(k), -weight_decay);
  }
  double weight_sum() const {
    double s = 0.0;
    for (std::size_t k = 1; k <= mode_count; ++k) s += weight(k);
    return s;
  }
};

struct Params {
  double alpha = 1.0;   // viscosity exponent, mu(rho) = rho^alpha
  double beta = -1.0;   // capillarity exponent, k(rho) = rho^beta
  double gamma = 2.0;   // pressure exponent, p(rho) = rho^gamma
  double trunc_radius = 1e3;      // R of the cutoff theta_R
  std::size_t galerkin_order = 32;  // m
  double density_floor = 1e-8;
  NoiseSpec noise;

  double theta_exponent() const { return alpha + beta + 1.0; }
  bool degenerate_theta() const { return std::abs(theta_exponent()) < kDegenerateThetaTol; }

  void validate() const {
    if (alpha < 0) throw std::invalid_argument("params: alpha must be >= 0");
    if (gamma < 1) throw std::invalid_argument("params: gamma must be >= 1");
    if (trunc_radius <= 0) throw std::invalid_argument("params: trunc_radius must be > 0");
    if (galerkin_order < 4) throw std::invalid_argument("params: galerkin_order must be >= 4");
    if (density_floor <= 0) throw std::invalid_argument("params: density_floor must be > 0");
    if (noise.weight_decay <= 1) throw std::invalid_argument("params: noise.weight_decay must be > 1");
    if (noise.mode_count < 1) throw std::invalid_argument("params: noise.mode_count must be >= 1");
  }
};

struct RegimeReport {
  double alpha = 0.0;
  double beta = 0.0;
  bool scc = false;
  bool nv = false;
  double c_ab = 0.0;          // entropy-dissipation constant, NaN when degenerate
  double discriminant = 0.0;  // NaN when degenerate
  bool degenerate_theta = false;
};

// Strong coercivity: 2*alpha - 4 <= beta <= 2*alpha - 1 (within tol at the
// boundaries).
inline bool scc_holds(double alpha, double beta, double tol = 0.0) {
  return beta >= 2.0 * alpha - 4.0 - tol && beta <= 2.0 * alpha - 1.0 + tol;
}

// No-vacuum: alpha <= 1/2 or beta <= -2.
inline bool nv_holds(double alpha, double beta) {
  if (alpha < 0) throw std::invalid_argument("nv_holds: alpha must be >= 0");
  return alpha <= 0.5 || beta <= -2.0;
}

// Tame capillarity, 2*alpha - 3 <= beta <= 2*alpha - 1. Not used by the main
// classification; exposed as an optional flag only.
inline bool tame_capillarity_holds(double alpha, double beta) {
  return beta >= 2.0 * alpha - 3.0 && beta <= 2.0 * alpha - 1.0;
}

inline void require_nondegenerate_theta(double alpha, double beta) {
  if (std::abs(alpha + beta + 1.0) < kDegenerateThetaTol)
    throw DegenerateThetaError("alpha + beta + 1 is degenerate (theta = 0 line)");
}

// c(alpha,beta) = 64/s^2 * [ (alpha-beta-1)(1-alpha)/s^2 - beta/(3 s) ],
// s = alpha + beta + 1.
inline double capillary_constant(double alpha, double beta) {
  require_nondegenerate_theta(alpha, beta);
  const double s = alpha + beta + 1.0;
  const double bracket = (alpha - beta - 1.0) * (1.0 - alpha) / (s * s) - beta / (3.0 * s);
  return 64.0 / (s * s) * bracket;
}

// g(alpha,beta) = (alpha-beta-1)(1-alpha)/s^2 - beta/(3 s) + 1/9; g >= 0 is
// equivalent to the strong coercivity band.
inline double scc_discriminant(double alpha, double beta) {
  require_nondegenerate_theta(alpha, beta);
  const double s = alpha + beta + 1.0;
  return (alpha - beta - 1.0) * (1.0 - alpha) / (s * s) - beta / (3.0 * s) + 1.0 / 9.0;
}

inline RegimeReport classify_regime(double alpha, double beta) {
  RegimeReport r;
  r.alpha = alpha;
  r.beta = beta;
  r.scc = scc_holds(alpha, beta);
  r.nv = nv_holds(alpha, beta);
  r.degenerate_theta = std::abs(alpha + beta + 1.0) < kDegenerateThetaTol;
  if (r.degenerate_theta) {
    r.c_ab = std::nan("");
    r.discriminant = std::nan("");
  } else {
    r.c_ab = capillary_constant(alpha, beta);
    r.discriminant = scc_discriminant(alpha, beta);
  }
  return r;
}

// Dense sweep over [alpha_lo, alpha_hi] x [beta_lo, beta_hi]. Beta values
// within half a step of an SCC boundary are snapped onto it so the boundary
// rows are hit exactly rather than up to grid rounding.
inline std::vector<RegimeReport> regime_atlas(double alpha_lo, double alpha_hi, double beta_lo,
                                              double beta_hi, double step) {
  if (step <= 0) throw std::invalid_argument("regime_atlas: step must be > 0");
  std::vector<RegimeReport> out;
  const double eps = step * 1e-9;
  for (double a = alpha_lo; a <= alpha_hi + eps; a += step) {
    for (double b = beta_lo; b <= beta_hi + eps; b += step) {
      double beta = b;
      const double upper = 2.0 * a - 1.0;
      const double lower = 2.0 * a - 4.0;
      if (std::abs(beta - upper) < 0.5 * step) beta = upper;
      else if (std::abs(beta - lower) < 0.5 * step) beta = lower;
      out.push_back(classify_regime(a, beta));
    }
  }
  return out;
}

}  // namespace nsk1d
