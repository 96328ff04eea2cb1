#pragma once

// Shared helpers for the test suite: seeded random trigonometric polynomials
// and brute-force spectral oracles kept independent of the library's padded
// evaluation path.

#include <cmath>
#include <complex>
#include <vector>

#include "nsk1d/field.hpp"
#include "nsk1d/noise.hpp"

namespace testutil {

using nsk1d::cplx;
using nsk1d::Field;

// Random real trig polynomial of degree <= deg with coefficient scale decaying
// like k^(-decay); deterministic in seed.
inline Field random_trig_poly(std::size_t n, std::size_t deg, std::uint64_t seed,
                              double amplitude = 1.0, double decay = 1.0) {
  std::vector<cplx> c(n, cplx(0.0, 0.0));
  for (std::size_t k = 1; k <= deg; ++k) {
    const double scale = amplitude * std::pow(static_cast<double>(k), -decay);
    const double re = scale * nsk1d::rng::normal(seed, 2 * k, 0, 0);
    const double im = scale * nsk1d::rng::normal(seed, 2 * k + 1, 0, 0);
    c[k] = 0.5 * cplx(re, im);
    c[n - k] = std::conj(c[k]);
  }
  c[0] = cplx(amplitude * nsk1d::rng::normal(seed, 1, 0, 0), 0.0);
  return Field::from_spectral(std::move(c));
}

// Shifted to have minimum at least `floor`.
inline Field random_positive_poly(std::size_t n, std::size_t deg, std::uint64_t seed,
                                  double floor = 0.1, double amplitude = 1.0, double decay = 1.0) {
  Field f = random_trig_poly(n, deg, seed, amplitude, decay);
  const double mn = f.min();
  std::vector<double> v = f.physical();
  for (double& z : v) z += floor - mn;
  return Field::from_physical(std::move(v));
}

// O(n^2) circular convolution of spectral coefficients: the independent
// oracle for the padded product.
inline Field convolution_oracle(const Field& f, const Field& g) {
  const std::size_t n = f.size();
  const auto& a = f.spectral();
  const auto& b = g.spectral();
  // signed-mode coefficient lookup, zero outside |k| <= n/2
  auto coef = [n](const std::vector<cplx>& c, long long k) -> cplx {
    if (k > static_cast<long long>(n / 2) || k < -static_cast<long long>(n / 2)) return {0.0, 0.0};
    // the shared Nyquist bin splits between +-n/2
    if (k == static_cast<long long>(n / 2) || k == -static_cast<long long>(n / 2))
      return 0.5 * c[n / 2];
    return k >= 0 ? c[static_cast<std::size_t>(k)] : c[static_cast<std::size_t>(n + k)];
  };
  std::vector<cplx> out(n, cplx(0.0, 0.0));
  const long long half = static_cast<long long>(n / 2);
  for (long long k = -half + 1; k < half; ++k) {
    cplx acc(0.0, 0.0);
    for (long long j = -half; j <= half; ++j) acc += coef(a, j) * coef(b, k - j);
    if (k >= 0) out[static_cast<std::size_t>(k)] = acc;
    else out[static_cast<std::size_t>(static_cast<long long>(n) + k)] = acc;
  }
  // Nyquist of the product: sum of the +-n/2 contributions into the shared bin
  cplx ny(0.0, 0.0);
  for (long long j = -half; j <= half; ++j)
    ny += coef(a, j) * coef(b, half - j) + coef(a, j) * coef(b, -half - j);
  out[n / 2] = ny;
  return Field::from_spectral(std::move(out));
}

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

}  // namespace testutil
