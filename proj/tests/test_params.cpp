#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "nsk1d/fft.hpp"
#include "nsk1d/params.hpp"

using namespace nsk1d;

TEST_CASE("scc_holds", "[params]") {
  REQUIRE(scc_holds(1.0, -1.0, 0.0));
  REQUIRE_FALSE(scc_holds(0.0, 0.0, 0.0));
  REQUIRE(scc_holds(1.0, 1.0, 0.0));  // upper boundary beta = 2 alpha - 1
  REQUIRE(scc_holds(2.0, 0.0, 0.0));  // lower boundary beta = 2 alpha - 4
  REQUIRE_FALSE(scc_holds(2.0, -0.1, 0.0));
  REQUIRE(scc_holds(2.0, -0.1, 0.2));  // tolerance widens the band
}

TEST_CASE("nv_holds", "[params]") {
  REQUIRE(nv_holds(0.5, -1.0));  // alpha boundary
  REQUIRE_FALSE(nv_holds(1.0, -1.0));
  REQUIRE(nv_holds(2.0, -2.0));  // beta boundary
  REQUIRE_THROWS(nv_holds(-0.5, 0.0));
}

TEST_CASE("capillary_constant closed-form values", "[params]") {
  REQUIRE(std::abs(capillary_constant(1.0, -1.0) - 64.0 / 3.0) < 1e-12);
  REQUIRE(std::abs(capillary_constant(0.0, 0.0) - (-64.0)) < 1e-12);
  REQUIRE(std::abs(capillary_constant(1.0, 0.0)) < 1e-12);
  REQUIRE_THROWS_AS(capillary_constant(1.0, -2.0), DegenerateThetaError);
}

TEST_CASE("scc_discriminant closed-form values", "[params]") {
  REQUIRE(std::abs(scc_discriminant(1.0, -1.0) - 4.0 / 9.0) < 1e-12);
  REQUIRE(std::abs(scc_discriminant(1.0, 1.0)) < 1e-12);  // upper boundary
  REQUIRE(std::abs(scc_discriminant(2.0, 0.0)) < 1e-12);  // lower boundary
  REQUIRE_THROWS_AS(scc_discriminant(0.0, -1.0), DegenerateThetaError);
}

TEST_CASE("discriminant equivalence with the SCC band", "[params]") {
  // dense sample; skip a neighborhood of the degenerate line
  for (int ia = 0; ia <= 60; ++ia) {
    for (int ib = -80; ib <= 60; ++ib) {
      const double a = ia * 0.05;
      double b = ib * 0.05;
      const double upper = 2 * a - 1, lower = 2 * a - 4;
      if (std::abs(b - upper) < 0.025) b = upper;
      else if (std::abs(b - lower) < 0.025) b = lower;
      if (std::abs(a + b + 1.0) < 1e-3) continue;
      REQUIRE(scc_holds(a, b, 0.0) == (scc_discriminant(a, b) >= -1e-12));
    }
  }
}

TEST_CASE("discriminant vanishes on both boundaries", "[params]") {
  for (int ia = 0; ia <= 60; ++ia) {
    const double a = ia * 0.05;
    const double upper = 2 * a - 1, lower = 2 * a - 4;
    if (std::abs(a + upper + 1.0) >= 1e-3) REQUIRE(std::abs(scc_discriminant(a, upper)) <= 1e-12);
    if (std::abs(a + lower + 1.0) >= 1e-3) REQUIRE(std::abs(scc_discriminant(a, lower)) <= 1e-12);
  }
}

TEST_CASE("relation between c(alpha,beta) and the discriminant", "[params]") {
  for (int ia = 0; ia <= 30; ++ia) {
    for (int ib = -40; ib <= 30; ++ib) {
      const double a = ia * 0.1, b = ib * 0.1;
      if (std::abs(a + b + 1.0) < 1e-3) continue;
      const double s = a + b + 1.0;
      const double lhs = capillary_constant(a, b) * s * s / 64.0 + 1.0 / 9.0;
      REQUIRE(std::abs(lhs - scc_discriminant(a, b)) < 1e-12);
    }
  }
}

TEST_CASE("regime_atlas sweep", "[params]") {
  auto grid = regime_atlas(0.0, 1.0, -2.0, 0.0, 1.0);
  REQUIRE(grid.size() == 6);  // alpha in {0,1}, beta in {-2,-1,0}

  auto find = [&](double a, double b) {
    for (const auto& r : grid)
      if (std::abs(r.alpha - a) < 1e-12 && std::abs(r.beta - b) < 1e-12) return r;
    FAIL("grid point not found");
    return RegimeReport{};
  };
  const auto p = find(1.0, -1.0);
  REQUIRE(p.scc);
  REQUIRE_FALSE(p.nv);
  REQUIRE_FALSE(p.degenerate_theta);

  const auto q = find(1.0, -2.0);
  REQUIRE(q.degenerate_theta);
  REQUIRE(std::isnan(q.c_ab));
}

TEST_CASE("tame capillarity classifier", "[params]") {
  REQUIRE(tame_capillarity_holds(1.0, -1.0));
  REQUIRE_FALSE(tame_capillarity_holds(2.0, 0.0));  // inside SCC but below 2a-3
  REQUIRE(tame_capillarity_holds(1.0, 1.0));
}

TEST_CASE("params validation", "[params]") {
  Params p;
  REQUIRE_NOTHROW(p.validate());
  p.gamma = 0.5;
  REQUIRE_THROWS(p.validate());
  p = Params{};
  p.galerkin_order = 2;
  REQUIRE_THROWS(p.validate());
  p = Params{};
  p.alpha = 1.0;
  p.beta = -2.0;
  REQUIRE(p.degenerate_theta());
}

TEST_CASE("noise weights summable and monotone in K", "[params]") {
  NoiseSpec spec;
  double prev = 0.0;
  for (std::size_t K = 1; K <= 64; ++K) {
    NoiseSpec s2 = spec;
    s2.mode_count = K;
    const double sum = s2.weight_sum();
    REQUIRE(std::isfinite(sum));
    REQUIRE(sum > prev);
    prev = sum;
  }
  REQUIRE(prev < kPi * kPi / 6.0 + 1e-9);
}
