#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "wkgeom/polytope.hpp"
#include "wkgeom/rng.hpp"

using namespace wkgeom;

namespace {

MomentumPolytope standard_simplex() {
  return MomentumPolytope::build(
      2, {Facet{{1, 0}, 0.0}, Facet{{0, 1}, 0.0}, Facet{{-1, -1}, 1.0}});
}

MomentumPolytope unit_square() {
  return MomentumPolytope::build(2, {Facet{{1, 0}, 0.0}, Facet{{0, 1}, 0.0},
                                     Facet{{-1, 0}, 1.0}, Facet{{0, -1}, 1.0}});
}

// exact polygon integral of x^i y^j via the divergence theorem, edge
// integrals by a 1-D Gauss rule of ample order
double polygon_monomial(const MomentumPolytope& P, int i, int j) {
  const auto& V = P.vertices();
  const Quad1D g = gauss_legendre(Interval{0.0, 1.0}, 24);
  double total = 0.0;
  for (size_t e = 0; e < V.size(); ++e) {
    const Point& A = V[e];
    const Point& B = V[(e + 1) % V.size()];
    const double dy = B[1] - A[1];
    total += dy * g.integrate([&](double t) {
      const double x = A[0] + t * (B[0] - A[0]);
      const double y = A[1] + t * (B[1] - A[1]);
      return std::pow(x, i + 1) * std::pow(y, j) / (i + 1.0);
    });
  }
  return total;
}

}  // namespace

TEST_CASE("two half-lines make an interval") {
  const auto P = MomentumPolytope::build(1, {Facet{{1, 0}, 1.0}, Facet{{-1, 0}, 1.0}});
  const Interval I = P.as_interval();
  REQUIRE_THAT(I.a, Catch::Matchers::WithinAbs(-1.0, 1e-15));
  REQUIRE_THAT(I.b, Catch::Matchers::WithinAbs(1.0, 1e-15));
}

TEST_CASE("standard simplex is accepted as Delzant") {
  const auto P = standard_simplex();
  REQUIRE(P.vertices().size() == 3);
}

TEST_CASE("non-unimodular vertex pair is rejected") {
  REQUIRE_THROWS_AS(MomentumPolytope::build(2, {Facet{{1, 0}, 0.0}, Facet{{0, 1}, 0.0},
                                                Facet{{-1, -2}, 1.0}}),
                    NotDelzantError);
}

TEST_CASE("unbounded and empty-interior inputs are rejected") {
  REQUIRE_THROWS_AS(MomentumPolytope::build(2, {Facet{{1, 0}, 0.0}, Facet{{0, 1}, 0.0},
                                                Facet{{1, 1}, 1.0}}),
                    UnboundedError);
  REQUIRE_THROWS_AS(MomentumPolytope::build(1, {Facet{{1, 0}, 1.0}, Facet{{1, 0}, 2.0}}),
                    UnboundedError);
  REQUIRE_THROWS_AS(MomentumPolytope::build(1, {Facet{{1, 0}, -1.0}, Facet{{-1, 0}, 0.0}}),
                    EmptyInteriorError);
  REQUIRE_THROWS_AS(MomentumPolytope::build(2, {Facet{{2, 0}, 0.0}, Facet{{0, 1}, 0.0},
                                                Facet{{-1, -1}, 1.0}}),
                    BadParamsError);
}

TEST_CASE("interval quadrature matches antiderivatives") {
  const auto P = MomentumPolytope::interval(-1.0, 1.0);
  const QuadratureRule rule = quadrature(P, 5);
  REQUIRE_THAT(rule.integrate([](const Point& p) { return p[0] * p[0]; }),
               Catch::Matchers::WithinAbs(2.0 / 3.0, 1e-14));
  REQUIRE_THAT(rule.integrate_boundary([](const Point&) { return 1.0; }), Catch::Matchers::WithinAbs(2.0, 1e-15));
}

TEST_CASE("interval quadrature is exact to the declared degree") {
  CounterRng rng(3);
  const auto P = MomentumPolytope::interval(-0.5, 2.0);
  for (int order : {4, 9, 32}) {
    const QuadratureRule rule = quadrature(P, order);
    std::vector<double> coef(static_cast<size_t>(rule.exact_degree) + 1);
    for (auto& c : coef) c = rng.uniform(-1.0, 1.0);
    auto poly = [&](const Point& p) {
      double v = 0.0;
      for (size_t k = coef.size(); k-- > 0;) v = v * p[0] + coef[k];
      return v;
    };
    double exact = 0.0;  // antiderivative oracle
    for (size_t k = 0; k < coef.size(); ++k)
      exact += coef[k] * (std::pow(2.0, k + 1.0) - std::pow(-0.5, k + 1.0)) / (k + 1.0);
    REQUIRE_THAT(rule.integrate(poly), Catch::Matchers::WithinRel(exact, 1e-12));
  }
}

TEST_CASE("square boundary measure has total lattice length 4") {
  const auto P = unit_square();
  const QuadratureRule rule = quadrature(P, 8);
  REQUIRE_THAT(rule.integrate_boundary([](const Point&) { return 1.0; }),
               Catch::Matchers::WithinAbs(4.0, 1e-12));
  REQUIRE_THAT(rule.integrate([](const Point&) { return 1.0; }), Catch::Matchers::WithinAbs(1.0, 1e-12));
}

TEST_CASE("simplex dsigma: each facet has lattice length 1") {
  const auto P = standard_simplex();
  const QuadratureRule rule = quadrature(P, 8);
  for (size_t f = 0; f < 3; ++f)
    REQUIRE_THAT(rule.integrate_facet(f, [](const Point&) { return 1.0; }), Catch::Matchers::WithinAbs(1.0, 1e-12));
}

TEST_CASE("2-D interior quadrature: random polynomials to declared degree") {
  CounterRng rng(17);
  const auto P = standard_simplex();
  const int order = 10;
  const QuadratureRule rule = quadrature(P, order);
  for (int rep = 0; rep < 5; ++rep) {
    double quad = 0.0, exact = 0.0;
    for (int i = 0; i + 0 <= rule.exact_degree; ++i) {
      for (int j = 0; i + j <= rule.exact_degree; ++j) {
        const double c = rng.uniform(-1.0, 1.0);
        quad += c * rule.integrate([&](const Point& p) { return std::pow(p[0], i) * std::pow(p[1], j); });
        exact += c * polygon_monomial(P, i, j);
      }
    }
    REQUIRE_THAT(quad, Catch::Matchers::WithinAbs(exact, 1e-12));
  }
}

TEST_CASE("dsigma consistency on facets: L_F vanishes, affine pullbacks match") {
  const auto P = standard_simplex();
  const QuadratureRule rule = quadrature(P, 12);
  // L_F vanishes on its own facet
  for (size_t f = 0; f < P.facets().size(); ++f) {
    const double v = rule.integrate_facet(f, [&](const Point& p) { return P.facets()[f].L(p, 2); });
    REQUIRE_THAT(v, Catch::Matchers::WithinAbs(0.0, 1e-13));
  }
  // facet integral of an affine function equals the 1-D edge quadrature at
  // unit lattice speed
  const auto& vs = P.facet_vertices(2);  // hypotenuse facet of the simplex
  const Point A = P.vertices()[vs[0]];
  const Point B = P.vertices()[vs[1]];
  auto aff = [](const Point& p) { return 1.0 + 2.0 * p[0] - 0.5 * p[1]; };
  const Quad1D g = gauss_legendre(Interval{0.0, 1.0}, 16);  // lattice parameter
  const double oracle = g.integrate([&](double s) {
    return aff({A[0] + s * (B[0] - A[0]), A[1] + s * (B[1] - A[1])});
  });
  REQUIRE_THAT(rule.integrate_facet(2, aff), Catch::Matchers::WithinAbs(oracle, 1e-12));
}

TEST_CASE("quadrature weights are positive") {
  for (const auto& P : {standard_simplex(), unit_square()}) {
    const QuadratureRule rule = quadrature(P, 6);
    for (const auto& n : rule.interior) REQUIRE(n.w > 0.0);
    for (const auto& fr : rule.facet)
      for (const auto& n : fr) REQUIRE(n.w > 0.0);
  }
  for (const auto& n : quadrature(MomentumPolytope::interval(0.0, 2.0), 16).interior)
    REQUIRE(n.w > 0.0);
}

TEST_CASE("vertex/facet duality") {
  for (const auto& P : {standard_simplex(), unit_square()}) {
    for (size_t vi = 0; vi < P.vertices().size(); ++vi) {
      int on = 0;
      for (const auto& F : P.facets())
        if (std::abs(F.L(P.vertices()[vi], 2)) <= 1e-12) ++on;
      REQUIRE(on == 2);
    }
  }
}

TEST_CASE("affine moments on the interval") {
  const auto P = MomentumPolytope::interval(-1.0, 1.0);
  const auto rule = quadrature(P, 16);

  const MomentData m1 = affine_moments(P, [](const Point&) { return 1.0; }, rule);
  REQUIRE_THAT(m1.gram[0], Catch::Matchers::WithinAbs(2.0, 1e-13));
  REQUIRE_THAT(m1.gram[1], Catch::Matchers::WithinAbs(0.0, 1e-14));
  REQUIRE_THAT(m1.gram[3], Catch::Matchers::WithinAbs(2.0 / 3.0, 1e-13));
  REQUIRE_FALSE(m1.singular);

  const MomentData m2 = affine_moments(P, [](const Point& p) { return p[0]; }, rule);
  REQUIRE_THAT(m2.gram[0], Catch::Matchers::WithinAbs(0.0, 1e-14));
  REQUIRE_THAT(m2.gram[1], Catch::Matchers::WithinAbs(2.0 / 3.0, 1e-13));
  REQUIRE_THAT(m2.gram[3], Catch::Matchers::WithinAbs(0.0, 1e-14));

  const MomentData m0 = affine_moments(P, [](const Point&) { return 0.0; }, rule);
  REQUIRE(m0.singular);
}
