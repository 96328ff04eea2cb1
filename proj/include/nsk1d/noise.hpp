#pragma once

// Truncated cylindrical Wiener process and the multiplicative superposition
// operator. Increments are a pure function of (seed, step, mode) through a
// counter-based generator (Philox4x32-10), so paths replay bitwise across
// runs and across thread schedules, and coarse increments are sums of fine
// ones generated at the finest planned resolution.

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "nsk1d/field.hpp"
#include "nsk1d/params.hpp"

namespace nsk1d {

namespace rng {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11 constants).
inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                               std::array<std::uint32_t, 2> key) {
  constexpr std::uint32_t kM0 = 0xD2511F53u, kM1 = 0xCD9E8D57u;
  constexpr std::uint32_t kW0 = 0x9E3779B9u, kW1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * ctr[2];
    const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kW0;
    key[1] += kW1;
  }
  return ctr;
}

inline double u64_to_unit_open(std::uint64_t v) {
  // (0, 1]: never returns 0 so log() below is safe.
  return (static_cast<double>(v >> 11) + 1.0) * 0x1.0p-53;
}

// One standard normal per (seed, stream, step, draw) via Box-Muller.
inline double normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t step,
                     std::uint32_t draw) {
  const std::array<std::uint32_t, 4> ctr = {
      static_cast<std::uint32_t>(step), static_cast<std::uint32_t>(step >> 32),
      static_cast<std::uint32_t>(stream), draw};
  const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed),
                                            static_cast<std::uint32_t>(seed >> 32)};
  const auto out = philox4x32(ctr, key);
  const std::uint64_t a = (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
  const std::uint64_t b = (static_cast<std::uint64_t>(out[2]) << 32) | out[3];
  const double u1 = u64_to_unit_open(a);
  const double u2 = u64_to_unit_open(b);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

// Derived seed for one ensemble member; disjoint streams per path index.
inline std::uint64_t path_seed(std::uint64_t master_seed, std::uint64_t path_index) {
  std::uint64_t z = master_seed + (path_index + 1) * 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace rng

struct WienerIncrement {
  std::vector<double> dW;  // length K, i.i.d. N(0, dt)
  double dt = 0.0;
};

// Components i.i.d. N(0, dt), a pure function of (spec.seed, step_index, k).
inline WienerIncrement wiener_increments(const NoiseSpec& spec, double dt,
                                         std::uint64_t step_index) {
  if (!(dt > 0.0)) throw std::invalid_argument("wiener_increments: dt must be > 0");
  WienerIncrement inc;
  inc.dt = dt;
  inc.dW.resize(spec.mode_count);
  const double sd = std::sqrt(dt);
  for (std::size_t k = 0; k < spec.mode_count; ++k)
    inc.dW[k] = sd * rng::normal(spec.seed, k + 1, step_index, 0);
  return inc;
}

// A Wiener path sampled at a fixed base step. Runs at coarser steps aggregate
// base increments, so every refinement level sees the same underlying path:
// the sum of fine increments over a coarse step IS the coarse increment.
class WienerPath {
 public:
  WienerPath(const NoiseSpec& spec, double dt_base) : spec_(spec), dt_base_(dt_base) {
    if (!(dt_base > 0.0)) throw std::invalid_argument("WienerPath: dt_base must be > 0");
  }

  const NoiseSpec& spec() const { return spec_; }
  double dt_base() const { return dt_base_; }

  WienerIncrement increment(std::uint64_t step) const {
    return wiener_increments(spec_, dt_base_, step);
  }

  // Increment over [j*substeps, (j+1)*substeps) base steps.
  WienerIncrement coarse_increment(std::uint64_t coarse_step, std::uint64_t substeps) const {
    if (substeps == 0) throw std::invalid_argument("WienerPath: substeps must be >= 1");
    WienerIncrement acc;
    acc.dt = dt_base_ * static_cast<double>(substeps);
    acc.dW.assign(spec_.mode_count, 0.0);
    for (std::uint64_t s = 0; s < substeps; ++s) {
      const WienerIncrement fine = increment(coarse_step * substeps + s);
      for (std::size_t k = 0; k < spec_.mode_count; ++k) acc.dW[k] += fine.dW[k];
    }
    return acc;
  }

 private:
  NoiseSpec spec_;
  double dt_base_;
};

// Basis functions used by the additive family.
inline double additive_basis_fn(std::size_t k, double x) { return std::sin(kTwoPi * static_cast<double>(k) * x); }

// Coefficient F_k(x, rho, u) of the superposition operator.
inline double eval_coefficient(const NoiseSpec& spec, std::size_t k, double x, double rho,
                               double u) {
  if (k < 1 || k > spec.mode_count) throw std::invalid_argument("eval_coefficient: k out of range");
  (void)rho;
  switch (spec.family) {
    case NoiseFamily::multiplicative_sin: return spec.weight(k) * std::sin(u);
    case NoiseFamily::additive_basis: return spec.weight(k) * additive_basis_fn(k, x);
    case NoiseFamily::off: return 0.0;
  }
  return 0.0;
}

// sum_k F_k(x, rho(x), u(x)) dW_k as a field on u's grid. The density
// weighting of the momentum form is absorbed by the velocity form of the
// equations; neither shipped family samples rho pointwise.
inline Field apply_noise_field(const NoiseSpec& spec, const Field& u,
                               const WienerIncrement& inc) {
  if (inc.dW.size() != spec.mode_count)
    throw std::invalid_argument("apply_noise_field: increment size mismatch");
  switch (spec.family) {
    case NoiseFamily::off: return Field(u.size());
    case NoiseFamily::multiplicative_sin: {
      double scale = 0.0;
      for (std::size_t k = 1; k <= spec.mode_count; ++k) scale += spec.weight(k) * inc.dW[k - 1];
      PaddedEval pe(u);
      return pe.map([scale](double z) { return scale * std::sin(z); });
    }
    case NoiseFamily::additive_basis: {
      // sum f_k dW_k sin(2 pi k x), assembled spectrally.
      const std::size_t n = u.size();
      std::vector<cplx> c(n, cplx(0.0, 0.0));
      for (std::size_t k = 1; k <= spec.mode_count && k < n / 2; ++k) {
        const double a = spec.weight(k) * inc.dW[k - 1];
        // sin(2 pi k x) = (e^{i2pikx} - e^{-i2pikx}) / (2i)
        c[k] += cplx(0.0, -0.5 * a);
        c[n - k] += cplx(0.0, 0.5 * a);
      }
      return Field::from_spectral(std::move(c));
    }
  }
  return Field(u.size());
}

// Monte Carlo audit of the growth hypotheses: vanishing at (rho,u) = (0,0),
// the linear-growth envelope, and boundedness of partial derivatives up to
// order 3 (central finite differences). Lists any violation per hypothesis.
struct GrowthBoundsReport {
  bool f1_ok = true;      // F_k(., 0, 0) = 0
  bool growth_ok = true;  // |F_k| <= f_k (1 + |u|)
  bool f2_ok = true;      // |d^l F_k| <= f_k for l = 1..3 in each variable
  bool weights_summable = true;
  std::size_t samples = 0;
  std::size_t f1_violations = 0;
  std::size_t growth_violations = 0;
  std::size_t f2_violations = 0;
  bool all_ok() const { return f1_ok && growth_ok && f2_ok && weights_summable; }
};

inline GrowthBoundsReport verify_growth_bounds(const NoiseSpec& spec, std::size_t samples) {
  if (samples < 1) throw std::invalid_argument("verify_growth_bounds: samples must be >= 1");
  GrowthBoundsReport rep;
  rep.samples = samples;

  // sum f_k finite and monotone in K.
  double acc = 0.0;
  for (std::size_t k = 1; k <= spec.mode_count; ++k) {
    const double next = acc + spec.weight(k);
    if (!(next > acc) || !std::isfinite(next)) rep.weights_summable = false;
    acc = next;
  }

  const double h = 1e-4;          // FD step
  const double fd_slack = 5e-3;   // envelope slack for FD truncation/rounding
  for (std::size_t i = 0; i < samples; ++i) {
    const std::size_t k = 1 + i % spec.mode_count;
    const double x = 0.5 + 0.5 * std::tanh(rng::normal(spec.seed, 9002, i, 0));
    const double rho = 0.1 + std::abs(rng::normal(spec.seed, 9003, i, 0));
    const double u = 3.0 * rng::normal(spec.seed, 9004, i, 0);
    const double fk = spec.weight(k);

    if (std::abs(eval_coefficient(spec, k, x, 0.0, 0.0)) > 1e-14) {
      rep.f1_ok = false;
      ++rep.f1_violations;
    }
    if (std::abs(eval_coefficient(spec, k, x, rho, u)) > fk * (1.0 + std::abs(u)) * (1.0 + 1e-12)) {
      rep.growth_ok = false;
      ++rep.growth_violations;
    }

    auto at = [&](double xx, double rr, double uu) {
      return eval_coefficient(spec, k, xx - std::floor(xx), rr, uu);
    };
    auto d1 = [&](auto&& g) { return std::abs((g(h) - g(-h)) / (2 * h)); };
    auto d2 = [&](auto&& g) { return std::abs((g(h) - 2 * g(0.0) + g(-h)) / (h * h)); };
    auto d3 = [&](auto&& g) {
      return std::abs((g(2 * h) - 2 * g(h) + 2 * g(-h) - g(-2 * h)) / (2 * h * h * h));
    };
    auto gx = [&](double e) { return at(x + e, rho, u); };
    auto gr = [&](double e) { return at(x, rho + e, u); };
    auto gu = [&](double e) { return at(x, rho, u + e); };

    bool f2_bad = false;
    for (auto&& g : {std::function<double(double)>(gx), std::function<double(double)>(gr),
                     std::function<double(double)>(gu)}) {
      if (d1(g) > fk * (1.0 + fd_slack)) f2_bad = true;
      if (d2(g) > fk * (1.0 + fd_slack)) f2_bad = true;
      if (d3(g) > fk * (1.0 + fd_slack)) f2_bad = true;
    }
    if (f2_bad) {
      rep.f2_ok = false;
      ++rep.f2_violations;
    }
  }
  return rep;
}

}  // namespace nsk1d
