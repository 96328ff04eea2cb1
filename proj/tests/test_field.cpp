#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "nsk1d/field.hpp"
#include "test_helpers.hpp"

using namespace nsk1d;
using testutil::random_trig_poly;

namespace {
Field sin_mode(std::size_t n, int k, double amp = 1.0) {
  return Field::sample(n, [k, amp](double x) { return amp * std::sin(kTwoPi * k * x); });
}
}  // namespace

TEST_CASE("round trip physical -> spectral -> physical", "[field]") {
  Field f = random_trig_poly(256, 100, 42);
  const auto orig = f.physical();
  Field g = Field::from_spectral(f.spectral());
  const auto back = g.physical();
  double scale = f.max_abs();
  for (std::size_t j = 0; j < orig.size(); ++j)
    REQUIRE(std::abs(back[j] - orig[j]) <= 1e-12 * scale);
}

TEST_CASE("spectral coefficients of a real field are conjugate symmetric", "[field]") {
  Field f = Field::sample(128, [](double x) { return std::exp(std::sin(kTwoPi * x)); });
  const auto& c = f.spectral();
  for (std::size_t k = 1; k < 64; ++k) {
    REQUIRE(std::abs(c[k].real() - c[128 - k].real()) < 1e-14);
    REQUIRE(std::abs(c[k].imag() + c[128 - k].imag()) < 1e-14);
  }
}

TEST_CASE("derivative of sin(2 pi x)", "[field]") {
  const std::size_t n = 64;
  Field d1 = derivative(sin_mode(n, 1), 1);
  Field expect = Field::sample(n, [](double x) { return kTwoPi * std::cos(kTwoPi * x); });
  REQUIRE(norm_l2(d1 - expect) < 1e-12);

  Field d2 = derivative(sin_mode(n, 1), 2);
  Field expect2 = Field::sample(n, [](double x) { return -4 * kPi * kPi * std::sin(kTwoPi * x); });
  REQUIRE(norm_l2(d2 - expect2) < 1e-10);
}

TEST_CASE("derivative of a constant vanishes", "[field]") {
  Field c = Field::sample(32, [](double) { return 3.7; });
  for (int order : {1, 2, 3}) REQUIRE(derivative(c, order).max_abs() < 1e-14);
}

TEST_CASE("projection", "[field]") {
  const std::size_t n = 64;
  SECTION("mode above the cutoff is annihilated") {
    REQUIRE(project(sin_mode(n, 8), 4).max_abs() < 1e-14);
  }
  SECTION("mode below the cutoff is unchanged") {
    Field f = sin_mode(n, 1);
    REQUIRE(norm_l2(project(f, 4) - f) < 1e-14);
  }
  SECTION("idempotence") {
    Field f = random_trig_poly(n, 30, 7);
    Field p1 = project(f, 10);
    Field p2 = project(p1, 10);
    REQUIRE(norm_l2(p2 - p1) < 1e-15);
  }
}

TEST_CASE("derivative commutes with projection on retained modes", "[field]") {
  Field f = random_trig_poly(128, 60, 11);
  Field a = project(derivative(f, 1), 20);
  Field b = derivative(project(f, 20), 1);
  REQUIRE(norm_l2(a - b) < 1e-10 * std::max(1.0, norm_l2(a)));
}

TEST_CASE("dealias_product basics", "[field]") {
  const std::size_t n = 64;
  SECTION("multiplication by one is the identity") {
    Field one = Field::sample(n, [](double) { return 1.0; });
    Field g = random_trig_poly(n, 20, 3);
    REQUIRE(norm_l2(dealias_product(one, g) - g) < 1e-13);
  }
  SECTION("sin^2 = (1 - cos(4 pi x))/2") {
    Field s = sin_mode(n, 1);
    Field prod = dealias_product(s, s);
    const auto& c = prod.spectral();
    REQUIRE(std::abs(c[0] - cplx(0.5, 0.0)) < 1e-14);
    REQUIRE(std::abs(c[2] - cplx(-0.25, 0.0)) < 1e-14);
    REQUIRE(std::abs(c[n - 2] - cplx(-0.25, 0.0)) < 1e-14);
    for (std::size_t j : {1ul, 3ul, 4ul, 5ul}) REQUIRE(std::abs(c[j]) < 1e-14);
  }
  SECTION("grid mismatch is an error") {
    REQUIRE_THROWS_AS(dealias_product(Field(32), Field(64)), GridMismatchError);
  }
}

TEST_CASE("dealias_product matches the brute-force convolution oracle", "[field]") {
  const std::size_t n = 64;
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    Field f = random_trig_poly(n, n / 2 - 1, seed);
    Field g = random_trig_poly(n, n / 2 - 1, seed + 100);
    Field got = dealias_product(f, g);
    Field want = testutil::convolution_oracle(f, g);
    REQUIRE(norm_l2(got - want) < 1e-12 * std::max(1.0, norm_l2(want)));
  }
}

TEST_CASE("top-third modes produce no retained aliasing", "[field]") {
  // two modes in the top third of the spectrum: their product's aliased images
  // land above n/2 and must not pollute retained modes
  const std::size_t n = 64;
  Field f = sin_mode(n, 28);
  Field g = sin_mode(n, 30);
  Field got = dealias_product(f, g);
  Field want = testutil::convolution_oracle(f, g);
  REQUIRE(norm_l2(got - want) < 1e-13);
}

TEST_CASE("integrate", "[field]") {
  const std::size_t n = 64;
  SECTION("orthogonality of the mean") {
    Field f = Field::sample(n, [](double x) { return 1.0 + 0.3 * std::cos(kTwoPi * x); });
    REQUIRE(std::abs(integrate(f) - 1.0) < 1e-14);
  }
  SECTION("sin^2 integrates to 1/2") {
    Field s = sin_mode(n, 1);
    REQUIRE(std::abs(integrate(dealias_product(s, s)) - 0.5) < 1e-14);
  }
  SECTION("zero") { REQUIRE(integrate(Field(n)) == 0.0); }
}

TEST_CASE("norm_hs", "[field]") {
  const std::size_t n = 64;
  REQUIRE(norm_hs(Field(n), 0.0) == 0.0);
  REQUIRE(std::abs(norm_hs(sin_mode(n, 1), 0.0) - std::sqrt(0.5)) < 1e-14);
  Field f = random_trig_poly(n, 20, 9);
  REQUIRE(std::abs(norm_hs(f, 0.0) * norm_hs(f, 0.0) - integrate(dealias_product(f, f))) <
          1e-12 * std::max(1.0, norm_hs(f, 0.0)));
}

TEST_CASE("norm_w2inf", "[field]") {
  const std::size_t n = 64;
  Field c = Field::sample(n, [](double) { return -2.5; });
  REQUIRE(std::abs(norm_w2inf(c) - 2.5) < 1e-14);
  REQUIRE(norm_w2inf(Field(n)) == 0.0);
  const double expect = 1.0 + kTwoPi + 4 * kPi * kPi;
  REQUIRE(std::abs(norm_w2inf(sin_mode(n, 1)) - expect) < 1e-3);
}

TEST_CASE("Parseval identity on random trig polynomials", "[field]") {
  const std::size_t n = 128;
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    Field f = random_trig_poly(n, 40, 1000 + seed);
    Field g = random_trig_poly(n, 40, 2000 + seed);
    const double lhs = integrate(dealias_product(f, g));
    double rhs = 0.0;
    const auto& fc = f.spectral();
    const auto& gc = g.spectral();
    for (std::size_t j = 0; j < n; ++j) rhs += (fc[j] * std::conj(gc[j])).real();
    REQUIRE(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, norm_l2(f) * norm_l2(g)));
  }
}

TEST_CASE("grid wavenumbers and coordinates", "[field]") {
  Grid g(8);
  REQUIRE(g.wavenumber(0) == 0);
  REQUIRE(g.wavenumber(3) == 3);
  REQUIRE(g.wavenumber(5) == -3);
  REQUIRE(g.wavenumber(7) == -1);
  REQUIRE(g.x(4) == 0.5);
  REQUIRE_THROWS(Grid(12));
}
