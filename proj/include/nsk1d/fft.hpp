#pragma once

// Radix-2 complex FFT with per-size twiddle tables. Sizes are powers of two;
// the grids in this project never exceed a few thousand points, so a cached
// iterative transform is all we need.

#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace nsk1d {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

namespace detail {

// twiddles[j] = exp(-2*pi*i*j/n), j < n/2, computed directly per entry so no
// rounding accumulates across butterflies.
inline const std::vector<cplx>& twiddle_table(std::size_t n) {
  static std::mutex mtx;
  static std::map<std::size_t, std::unique_ptr<std::vector<cplx>>> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto& slot = cache[n];
  if (!slot) {
    auto table = std::make_unique<std::vector<cplx>>(n / 2);
    for (std::size_t j = 0; j < n / 2; ++j) {
      const double ang = -kTwoPi * static_cast<double>(j) / static_cast<double>(n);
      (*table)[j] = cplx(std::cos(ang), std::sin(ang));
    }
    slot = std::move(table);
  }
  return *slot;
}

inline void fft_raw(std::vector<cplx>& a, bool inverse) {
  const std::size_t n = a.size();
  if (n <= 1) return;
  if (!is_pow2(n)) throw std::invalid_argument("fft: size must be a power of two");
  const auto& tw = twiddle_table(n);

  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t stride = n / len;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t j = 0; j < len / 2; ++j) {
        cplx w = tw[j * stride];
        if (inverse) w = std::conj(w);
        const cplx u = a[i + j];
        const cplx v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
      }
    }
  }
}

}  // namespace detail

// Forward transform: coefficients c_k = (1/n) sum_j f_j exp(-2*pi*i*j*k/n),
// i.e. the trigonometric-polynomial Fourier coefficients on the unit torus.
inline std::vector<cplx> fft_forward(const std::vector<cplx>& values) {
  std::vector<cplx> a = values;
  detail::fft_raw(a, false);
  const double inv_n = 1.0 / static_cast<double>(a.size());
  for (auto& c : a) c *= inv_n;
  return a;
}

// Inverse transform: f_j = sum_k c_k exp(+2*pi*i*j*k/n).
inline std::vector<cplx> fft_inverse(const std::vector<cplx>& coeffs) {
  std::vector<cplx> a = coeffs;
  detail::fft_raw(a, true);
  return a;
}

}  // namespace nsk1d
