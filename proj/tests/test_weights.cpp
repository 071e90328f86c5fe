#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "wkgeom/draws.hpp"
#include "wkgeom/weights.hpp"

using namespace wkgeom;
using Catch::Matchers::WithinAbs;

namespace {
const MomentumPolytope kInterval = MomentumPolytope::interval(-1.0, 1.0);
}

TEST_CASE("constant weight") {
  WeightParams wp;
  wp.value = 1.0;
  const WeightFunction v = make_weight(WeightFamily::Constant, wp, kInterval);
  REQUIRE_THAT(v.value(0.3), WithinAbs(1.0, 0.0));
  REQUIRE_THAT(v.d1(0.3), WithinAbs(0.0, 0.0));
  REQUIRE_THAT(v.d2(0.3), WithinAbs(0.0, 0.0));
  REQUIRE(v.positive_on_polytope());
}

TEST_CASE("exponential weight derivatives") {
  WeightParams wp;
  wp.xi = {1.0};
  const WeightFunction v = make_weight(WeightFamily::Exponential, wp, kInterval);
  for (double p : {-0.9, 0.0, 0.7}) {
    REQUIRE_THAT(v.value(p), WithinAbs(std::exp(p), 1e-15));
    REQUIRE_THAT(v.d1(p), WithinAbs(std::exp(p), 1e-15));
    REQUIRE_THAT(v.d2(p), WithinAbs(std::exp(p), 1e-15));
  }
}

TEST_CASE("power weight rejects nonpositive base") {
  WeightParams wp;
  wp.xi = {1.0};
  wp.c = 0.5;  // p + 0.5 <= 0 at p = -1
  REQUIRE_THROWS_AS(make_weight(WeightFamily::Power, wp, kInterval), NotPositiveOnPError);
}

TEST_CASE("positivity flag") {
  WeightParams wp;
  wp.xi = {1.0};
  wp.c = 0.0;  // w = mu, sign-changing
  const WeightFunction w = make_weight(WeightFamily::Affine, wp, kInterval);
  REQUIRE_FALSE(w.positive_on_polytope());
  wp.require_positive = true;
  REQUIRE_THROWS_AS(make_weight(WeightFamily::Affine, wp, kInterval), NotPositiveOnPError);
}

TEST_CASE("derivative consistency against central differences (all families)") {
  CounterRng rng(42);
  const double h = 1e-5;
  for (int fam = 0; fam < 5; ++fam) {
    for (int rep = 0; rep < 6; ++rep) {
      const WeightFunction w = random_weight(rng, kInterval, fam % 2 == 0, fam);
      for (int k = 0; k < 8; ++k) {
        const double p = rng.uniform(-0.8, 0.8);
        const double fd1 = (w.value(p + h) - w.value(p - h)) / (2.0 * h);
        const double fd2 = (w.value(p + h) - 2.0 * w.value(p) + w.value(p - h)) / (h * h);
        const double s1 = std::max(1.0, std::abs(w.d1(p)));
        const double s2 = std::max(1.0, std::abs(w.d2(p)));
        REQUIRE_THAT(w.d1(p), WithinAbs(fd1, 1e-6 * s1));
        REQUIRE_THAT(w.d2(p), WithinAbs(fd2, 1e-4 * s2));
      }
    }
  }
}

TEST_CASE("scaling is exact pointwise") {
  CounterRng rng(5);
  for (int fam = 0; fam < 5; ++fam) {
    const WeightFunction w = random_weight(rng, kInterval, false, fam);
    const WeightFunction w3 = w.scaled(3.25);
    for (double p : {-0.7, 0.1, 0.9}) {
      REQUIRE_THAT(w3.value(p), WithinAbs(3.25 * w.value(p), 1e-15 * std::abs(w.value(p))));
      REQUIRE_THAT(w3.d1(p), WithinAbs(3.25 * w.d1(p), 1e-14 * (1.0 + std::abs(w.d1(p)))));
      REQUIRE_THAT(w3.d2(p), WithinAbs(3.25 * w.d2(p), 1e-14 * (1.0 + std::abs(w.d2(p)))));
    }
  }
}

TEST_CASE("affine product weight has exact product-rule derivatives") {
  WeightParams wp;
  wp.xi = {0.5};
  const WeightFunction w = make_weight(WeightFamily::Exponential, wp, kInterval);
  AffineFunction ell;
  ell.a = 2.0;
  ell.b[0] = -0.3;
  const WeightFunction lw = w.times_affine(ell);
  for (double p : {-0.6, 0.0, 0.8}) {
    const double e = std::exp(0.5 * p);
    REQUIRE_THAT(lw.value(p), WithinAbs(e * ell(p), 1e-15));
    REQUIRE_THAT(lw.d1(p), WithinAbs(0.5 * e * ell(p) + e * (-0.3), 1e-14));
    REQUIRE_THAT(lw.d2(p), WithinAbs(0.25 * e * ell(p) + 2.0 * 0.5 * e * (-0.3), 1e-14));
  }
}

TEST_CASE("2-D weight on the simplex") {
  const auto P = MomentumPolytope::build(
      2, {Facet{{1, 0}, 0.0}, Facet{{0, 1}, 0.0}, Facet{{-1, -1}, 1.0}});
  WeightParams wp;
  wp.xi = {0.4, -0.2};
  const WeightFunction v = make_weight(WeightFamily::Exponential, wp, P);
  const Point p{0.25, 0.5};
  const double e = std::exp(0.4 * 0.25 - 0.2 * 0.5);
  REQUIRE_THAT(v.value(p), WithinAbs(e, 1e-15));
  REQUIRE_THAT(v.grad(p)[0], WithinAbs(0.4 * e, 1e-15));
  REQUIRE_THAT(v.grad(p)[1], WithinAbs(-0.2 * e, 1e-15));
  REQUIRE_THAT(v.hess(p)[1], WithinAbs(0.4 * -0.2 * e, 1e-15));
}
