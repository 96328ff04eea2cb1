#pragma once

// Periodic grid and real scalar fields on the unit torus, held in a dual
// physical/spectral representation. Spectral coefficients follow the
// convention c_k = (1/n) sum_j f_j exp(-2*pi*i*j*k/n), so c_0 is the mean and
// integrate() is spectrally exact for trigonometric polynomials.
//
// Nonlinear pointwise operations (products, power laws) are evaluated on a
// grid padded to twice the size and truncated back, which makes quadratic
// products alias-free and bounds the aliasing error of non-polynomial maps.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "nsk1d/fft.hpp"

namespace nsk1d {

struct GridMismatchError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Collocation grid on the unit-length torus, n points, n a power of two.
struct Grid {
  std::size_t n_points = 0;
  static constexpr double length = 1.0;

  explicit Grid(std::size_t n) : n_points(n) {
    if (!is_pow2(n) || n < 2) throw std::invalid_argument("Grid: n_points must be a power of two >= 2");
  }
  double x(std::size_t j) const { return static_cast<double>(j) / static_cast<double>(n_points); }
  // Signed wavenumber of spectral bin j; bin n/2 carries the +-n/2 pair.
  long long wavenumber(std::size_t j) const {
    return j <= n_points / 2 ? static_cast<long long>(j)
                             : static_cast<long long>(j) - static_cast<long long>(n_points);
  }
};

class Field {
 public:
  Field() = default;
  explicit Field(std::size_t n) : n_(check_n(n)), phys_(n, 0.0), phys_ok_(true) {}
  explicit Field(const Grid& g) : Field(g.n_points) {}

  static Field from_physical(std::vector<double> values) {
    Field f;
    f.n_ = check_n(values.size());
    f.phys_ = std::move(values);
    f.phys_ok_ = true;
    return f;
  }

  static Field from_spectral(std::vector<cplx> coeffs) {
    Field f;
    f.n_ = check_n(coeffs.size());
    f.spec_ = std::move(coeffs);
    f.spec_ok_ = true;
    return f;
  }

  template <typename Fn>
  static Field sample(std::size_t n, Fn&& fn) {
    Grid g(n);
    std::vector<double> v(n);
    for (std::size_t j = 0; j < n; ++j) v[j] = fn(g.x(j));
    return from_physical(std::move(v));
  }

  std::size_t size() const { return n_; }
  bool empty() const { return n_ == 0; }
  Grid grid() const { return Grid(n_); }

  const std::vector<double>& physical() const {
    if (!phys_ok_) sync_physical();
    return phys_;
  }
  const std::vector<cplx>& spectral() const {
    if (!spec_ok_) sync_spectral();
    return spec_;
  }

  double min() const { return *std::min_element(physical().begin(), physical().end()); }
  double max() const { return *std::max_element(physical().begin(), physical().end()); }
  double max_abs() const {
    double m = 0.0;
    for (double v : physical()) m = std::max(m, std::abs(v));
    return m;
  }
  bool finite() const {
    if (phys_ok_) {
      for (double v : phys_)
        if (!std::isfinite(v)) return false;
      return true;
    }
    for (const cplx& c : spec_)
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
    return true;
  }

  Field& operator+=(const Field& o) { return combine(o, 1.0); }
  Field& operator-=(const Field& o) { return combine(o, -1.0); }
  Field& operator*=(double s) {
    std::vector<cplx> c = spectral();
    for (auto& v : c) v *= s;
    *this = from_spectral(std::move(c));
    return *this;
  }

  friend Field operator+(Field a, const Field& b) { return a += b; }
  friend Field operator-(Field a, const Field& b) { return a -= b; }
  friend Field operator*(Field a, double s) { return a *= s; }
  friend Field operator*(double s, Field a) { return a *= s; }
  friend Field operator-(Field a) { return a *= -1.0; }

 private:
  static std::size_t check_n(std::size_t n) {
    if (!is_pow2(n) || n < 2) throw std::invalid_argument("Field: size must be a power of two >= 2");
    return n;
  }

  Field& combine(const Field& o, double sign) {
    if (o.n_ != n_) throw GridMismatchError("Field arithmetic: grid size mismatch");
    std::vector<cplx> c = spectral();
    const auto& oc = o.spectral();
    for (std::size_t j = 0; j < n_; ++j) c[j] += sign * oc[j];
    *this = from_spectral(std::move(c));
    return *this;
  }

  void sync_spectral() const {
    std::vector<cplx> tmp(n_);
    for (std::size_t j = 0; j < n_; ++j) tmp[j] = cplx(phys_[j], 0.0);
    spec_ = fft_forward(tmp);
    spec_ok_ = true;
  }

  void sync_physical() const {
    std::vector<cplx> tmp = fft_inverse(spec_);
    phys_.resize(n_);
    for (std::size_t j = 0; j < n_; ++j) phys_[j] = tmp[j].real();
    phys_ok_ = true;
  }

  std::size_t n_ = 0;
  mutable std::vector<double> phys_;
  mutable std::vector<cplx> spec_;
  mutable bool phys_ok_ = false;
  mutable bool spec_ok_ = false;
};

namespace detail {

// Zero-pad spectral coefficients from n to 2n bins (coefficients unchanged);
// the Nyquist bin is split between +n/2 and -n/2 to keep the field real.
inline std::vector<cplx> pad_spectrum(const std::vector<cplx>& c) {
  const std::size_t n = c.size();
  std::vector<cplx> out(2 * n, cplx(0.0, 0.0));
  for (std::size_t j = 0; j < n / 2; ++j) out[j] = c[j];
  for (std::size_t j = 1; j < n / 2; ++j) out[2 * n - j] = c[n - j];
  out[n / 2] = 0.5 * c[n / 2];
  out[2 * n - n / 2] = 0.5 * c[n / 2];
  return out;
}

// Inverse of pad_spectrum's layout: keep modes |k| < n/2, fold +-n/2 into the
// shared Nyquist bin.
inline std::vector<cplx> truncate_spectrum(const std::vector<cplx>& c) {
  const std::size_t n2 = c.size();
  const std::size_t n = n2 / 2;
  std::vector<cplx> out(n, cplx(0.0, 0.0));
  for (std::size_t j = 0; j < n / 2; ++j) out[j] = c[j];
  for (std::size_t j = 1; j < n / 2; ++j) out[n - j] = c[n2 - j];
  out[n / 2] = c[n / 2] + c[n2 - n / 2];
  return out;
}

}  // namespace detail

// Pointwise evaluation of a field on the doubled (dealiasing) grid. Several
// pointwise maps of one field can share a single inverse transform.
class PaddedEval {
 public:
  explicit PaddedEval(const Field& f) : n_(f.size()) {
    std::vector<cplx> padded = detail::pad_spectrum(f.spectral());
    std::vector<cplx> phys = fft_inverse(padded);
    values_.resize(2 * n_);
    for (std::size_t j = 0; j < 2 * n_; ++j) values_[j] = phys[j].real();
  }

  const std::vector<double>& values() const { return values_; }
  double min() const { return *std::min_element(values_.begin(), values_.end()); }
  double max() const { return *std::max_element(values_.begin(), values_.end()); }

  template <typename Fn>
  Field map(Fn&& fn) const {
    std::vector<cplx> tmp(2 * n_);
    for (std::size_t j = 0; j < 2 * n_; ++j) tmp[j] = cplx(fn(values_[j]), 0.0);
    std::vector<cplx> coeffs = fft_forward(tmp);
    return Field::from_spectral(detail::truncate_spectrum(coeffs));
  }

 private:
  std::size_t n_;
  std::vector<double> values_;
};

// Spectral derivative: mode k multiplied by (i*2*pi*k)^order. Odd-order
// derivatives of the Nyquist bin vanish on the grid and are zeroed.
inline Field derivative(const Field& f, int order) {
  if (order < 1) throw std::invalid_argument("derivative: order must be >= 1");
  const std::size_t n = f.size();
  const Grid g(n);
  std::vector<cplx> c = f.spectral();
  for (std::size_t j = 0; j < n; ++j) {
    const double xi = kTwoPi * static_cast<double>(g.wavenumber(j));
    if (j == n / 2) {
      if (order % 2 == 1) {
        c[j] = 0.0;
      } else {
        double m = 1.0;
        for (int p = 0; p < order / 2; ++p) m *= -xi * xi;
        c[j] *= m;
      }
      continue;
    }
    cplx m(1.0, 0.0);
    for (int p = 0; p < order; ++p) m *= cplx(0.0, xi);
    c[j] *= m;
  }
  return Field::from_spectral(std::move(c));
}

// L2-orthogonal projection onto trigonometric polynomials of degree <= m.
inline Field project(const Field& f, std::size_t m) {
  const std::size_t n = f.size();
  if (m > n / 2) throw std::invalid_argument("project: m must be <= n/2");
  const Grid g(n);
  std::vector<cplx> c = f.spectral();
  for (std::size_t j = 0; j < n; ++j) {
    if (std::llabs(g.wavenumber(j)) > static_cast<long long>(m)) c[j] = 0.0;
    if (j == n / 2 && n / 2 > m) c[j] = 0.0;
  }
  return Field::from_spectral(std::move(c));
}

// Alias-free pointwise product via padding to the doubled grid. Exact for
// fields band-limited to n/2, which every Field on the n-grid is.
inline Field dealias_product(const Field& f, const Field& g) {
  if (f.size() != g.size()) throw GridMismatchError("dealias_product: grid size mismatch");
  const std::size_t n = f.size();
  std::vector<cplx> fa = fft_inverse(detail::pad_spectrum(f.spectral()));
  std::vector<cplx> ga = fft_inverse(detail::pad_spectrum(g.spectral()));
  std::vector<cplx> prod(2 * n);
  for (std::size_t j = 0; j < 2 * n; ++j) prod[j] = cplx(fa[j].real() * ga[j].real(), 0.0);
  std::vector<cplx> coeffs = fft_forward(prod);
  return Field::from_spectral(detail::truncate_spectrum(coeffs));
}

// integral over the torus = zeroth Fourier coefficient.
inline double integrate(const Field& f) { return f.spectral()[0].real(); }

// L2 inner product by Parseval; exact for band-limited fields.
inline double inner(const Field& f, const Field& g) {
  if (f.size() != g.size()) throw GridMismatchError("inner: grid size mismatch");
  const auto& fc = f.spectral();
  const auto& gc = g.spectral();
  double acc = 0.0;
  for (std::size_t j = 0; j < fc.size(); ++j)
    acc += fc[j].real() * gc[j].real() + fc[j].imag() * gc[j].imag();
  return acc;
}

inline double norm_l2(const Field& f) { return std::sqrt(std::max(0.0, inner(f, f))); }

// Sobolev norm ( sum_k (1+|2 pi k|^2)^s |c_k|^2 )^(1/2); at s=0 this matches
// integrate(f*f).
inline double norm_hs(const Field& f, double s) {
  if (s < 0) throw std::invalid_argument("norm_hs: s must be >= 0");
  const Grid g(f.size());
  const auto& c = f.spectral();
  double acc = 0.0;
  for (std::size_t j = 0; j < c.size(); ++j) {
    const double xi = kTwoPi * static_cast<double>(g.wavenumber(j));
    acc += std::pow(1.0 + xi * xi, s) * std::norm(c[j]);
  }
  return std::sqrt(acc);
}

// Grid sup of |f| + |f'| + |f''| (derivatives spectral). A collocation
// maximum, documented as grid-sup: exact suprema are not chased because the
// cutoff argument only feeds the smooth switch theta_R.
inline double norm_w2inf(const Field& f) {
  return f.max_abs() + derivative(f, 1).max_abs() + derivative(f, 2).max_abs();
}

}  // namespace nsk1d
