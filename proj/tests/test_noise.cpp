#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "nsk1d/noise.hpp"

using namespace nsk1d;

TEST_CASE("wiener increments are reproducible", "[noise]") {
  NoiseSpec spec;
  spec.seed = 1234;
  auto a = wiener_increments(spec, 1e-3, 57);
  auto b = wiener_increments(spec, 1e-3, 57);
  REQUIRE(a.dW == b.dW);
  auto c = wiener_increments(spec, 1e-3, 58);
  REQUIRE(a.dW != c.dW);
}

TEST_CASE("wiener increment moments", "[noise]") {
  NoiseSpec spec;
  spec.seed = 99;
  const double dt = 0.01;
  const std::size_t N = 100000;
  double sum = 0.0, sumsq = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double v = wiener_increments(spec, dt, i).dW[0];
    sum += v;
    sumsq += v * v;
  }
  const double mean = sum / N;
  const double var = sumsq / N - mean * mean;
  REQUIRE(std::abs(mean) <= 4.0 * std::sqrt(dt / N));
  REQUIRE(std::abs(var - dt) <= 0.05 * dt);
}

TEST_CASE("refinement consistency: fine increments sum to the coarse one", "[noise]") {
  NoiseSpec spec;
  spec.seed = 7;
  WienerPath path(spec, 1e-4);
  for (std::uint64_t j : {0ull, 3ull, 11ull}) {
    auto coarse = path.coarse_increment(j, 8);
    std::vector<double> acc(spec.mode_count, 0.0);
    for (std::uint64_t s = 0; s < 8; ++s) {
      auto fine = path.increment(j * 8 + s);
      for (std::size_t k = 0; k < spec.mode_count; ++k) acc[k] += fine.dW[k];
    }
    for (std::size_t k = 0; k < spec.mode_count; ++k)
      REQUIRE(std::abs(coarse.dW[k] - acc[k]) <= 1e-12);
  }
}

TEST_CASE("path seeds are disjoint streams", "[noise]") {
  REQUIRE(rng::path_seed(1, 0) != rng::path_seed(1, 1));
  REQUIRE(rng::path_seed(1, 0) != rng::path_seed(2, 0));
  REQUIRE(rng::path_seed(5, 3) == rng::path_seed(5, 3));
}

TEST_CASE("eval_coefficient families", "[noise]") {
  NoiseSpec spec;
  SECTION("vanishes at (rho, u) = (0, 0)") {
    for (std::size_t k = 1; k <= spec.mode_count; ++k)
      REQUIRE(eval_coefficient(spec, k, 0.33, 0.0, 0.0) == 0.0);
  }
  SECTION("growth envelope |F_k| <= f_k (1 + |u|)") {
    for (std::size_t i = 0; i < 500; ++i) {
      const std::size_t k = 1 + i % spec.mode_count;
      const double x = 0.5 + 0.49 * std::sin(double(i));
      const double rho = std::abs(std::cos(3.0 * i));
      const double u = 5.0 * std::sin(7.0 * i);
      REQUIRE(std::abs(eval_coefficient(spec, k, x, rho, u)) <=
              spec.weight(k) * (1.0 + std::abs(u)) + 1e-15);
    }
  }
  SECTION("finite-difference du F_k bounded by f_k") {
    const double h = 1e-4;
    for (double u : {-2.0, -0.5, 0.0, 1.0, 3.0}) {
      for (std::size_t k : {1ul, 2ul, 8ul}) {
        const double fd = (eval_coefficient(spec, k, 0.2, 1.0, u + h) -
                           eval_coefficient(spec, k, 0.2, 1.0, u - h)) /
                          (2 * h);
        REQUIRE(std::abs(fd) <= spec.weight(k) * (1.0 + 1e-6));
      }
    }
  }
  SECTION("off family is identically zero") {
    NoiseSpec off = spec;
    off.family = NoiseFamily::off;
    REQUIRE(eval_coefficient(off, 3, 0.1, 1.0, 2.0) == 0.0);
  }
}

TEST_CASE("apply_noise_field", "[noise]") {
  const std::size_t n = 64;
  NoiseSpec spec;
  spec.seed = 3;
  Field u0(n);

  SECTION("off gives the zero field") {
    NoiseSpec off = spec;
    off.family = NoiseFamily::off;
    auto inc = wiener_increments(off, 1e-3, 0);
    REQUIRE(apply_noise_field(off, u0, inc).max_abs() == 0.0);
  }
  SECTION("u = 0 under multiplicative sin gives zero") {
    auto inc = wiener_increments(spec, 1e-3, 0);
    REQUIRE(apply_noise_field(spec, u0, inc).max_abs() < 1e-15);
  }
  SECTION("single mode, u = pi/2: constant field f_1 dW_1") {
    NoiseSpec one = spec;
    one.mode_count = 1;
    auto inc = wiener_increments(one, 1e-3, 5);
    Field u_half_pi = Field::sample(n, [](double) { return kPi / 2.0; });
    Field got = apply_noise_field(one, u_half_pi, inc);
    const double expect = one.weight(1) * inc.dW[0];
    REQUIRE(std::abs(integrate(got) - expect) < 1e-12 * std::max(1.0, std::abs(expect)));
    REQUIRE((got - Field::sample(n, [&](double) { return expect; })).max_abs() < 1e-12);
  }
}

TEST_CASE("growth-bound audit", "[noise]") {
  NoiseSpec spec;
  spec.seed = 11;
  SECTION("default multiplicative family passes") {
    auto rep = verify_growth_bounds(spec, 2000);
    REQUIRE(rep.all_ok());
  }
  SECTION("additive basis family violates the vanishing hypothesis") {
    NoiseSpec add = spec;
    add.family = NoiseFamily::additive_basis;
    auto rep = verify_growth_bounds(add, 2000);
    REQUIRE_FALSE(rep.f1_ok);
  }
  SECTION("off family passes vacuously") {
    NoiseSpec off = spec;
    off.family = NoiseFamily::off;
    auto rep = verify_growth_bounds(off, 100);
    REQUIRE(rep.all_ok());
  }
}
