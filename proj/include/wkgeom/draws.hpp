#pragma once

#include <limits>
#include <vector>

#include "wkgeom/rng.hpp"
#include "wkgeom/toric.hpp"

namespace wkgeom {

/// Random admissible relative potential: Chebyshev coefficients with a
/// 1/(k+1)^2 decay profile, halved until the potential is strictly convex
/// with a safety margin (Q >= margin * |P|).
inline ChebSeries random_relative_potential(CounterRng& rng, Interval P, int degree = 8,
                                            double amp = 0.6, double margin = 0.15) {
  std::vector<double> c(static_cast<size_t>(degree) + 1);
  for (size_t k = 0; k < c.size(); ++k)
    c[k] = amp * rng.uniform(-1.0, 1.0) / ((k + 1.0) * (k + 1.0));
  ChebSeries f(P, std::move(c));
  for (int halvings = 0; halvings < 60; ++halvings) {
    SymplecticPotential u(P, f);
    double qmin = std::numeric_limits<double>::infinity();
    for (double x : ChebSeries::nodes(P, 4 * degree + 33)) qmin = std::min(qmin, u.Q(x));
    if (qmin >= margin * P.length()) return f;
    f *= 0.5;
  }
  return ChebSeries::zero(P);
}

/// Random weight in one of the five families.  `family_index` < 0 draws the
/// family too; `positive` guarantees positivity on P (construction-checked).
inline WeightFunction random_weight(CounterRng& rng, const MomentumPolytope& P, bool positive,
                                    int family_index = -1) {
  const int fam = family_index >= 0 ? family_index % 5 : static_cast<int>(rng.next_u64() % 5);
  const int d = P.dim();
  auto min_over_vertices = [&](const std::vector<double>& xi) {
    double mn = std::numeric_limits<double>::infinity();
    for (const auto& vtx : P.vertices()) {
      double s = 0.0;
      for (int i = 0; i < d; ++i) s += xi[static_cast<size_t>(i)] * vtx[static_cast<size_t>(i)];
      mn = std::min(mn, s);
    }
    return mn;
  };
  WeightParams wp;
  wp.require_positive = positive;
  wp.xi.resize(static_cast<size_t>(d));
  switch (fam) {
    case 0: {  // constant
      wp.value = rng.uniform(0.4, 2.5);
      return make_weight(WeightFamily::Constant, wp, P);
    }
    case 1: {  // affine
      for (auto& x : wp.xi) x = rng.uniform(-0.4, 0.4);
      const double mn = min_over_vertices(wp.xi);
      wp.c = positive ? rng.uniform(0.3, 1.2) - mn : rng.uniform(-0.3, 0.3);
      return make_weight(WeightFamily::Affine, wp, P);
    }
    case 2: {  // exponential
      for (auto& x : wp.xi) x = rng.uniform(-0.7, 0.7);
      wp.amplitude = rng.uniform(0.5, 1.8);
      return make_weight(WeightFamily::Exponential, wp, P);
    }
    case 3: {  // power
      for (auto& x : wp.xi) x = rng.uniform(-0.8, 0.8);
      wp.c = rng.uniform(0.4, 1.5) - min_over_vertices(wp.xi);
      wp.alpha = rng.uniform(-2.2, 2.6);
      return make_weight(WeightFamily::Power, wp, P);
    }
    default: {  // polynomial in mu (or the first coordinate)
      wp.xi.assign(static_cast<size_t>(d), 0.0);
      wp.xi[0] = 1.0;
      wp.coeffs.resize(4);
      for (size_t k = 0; k < wp.coeffs.size(); ++k)
        wp.coeffs[k] = rng.uniform(-0.6, 0.6) / (k + 1.0);
      if (positive) {
        // lift above zero at the default quadrature nodes and vertices
        WeightParams probe = wp;
        probe.require_positive = false;
        const WeightFunction w0 = make_weight(WeightFamily::Polynomial, probe, P);
        double mn = std::numeric_limits<double>::infinity();
        for (const auto& n : default_quadrature(P).interior) mn = std::min(mn, w0.value(n.p));
        for (const auto& vtx : P.vertices()) mn = std::min(mn, w0.value(vtx));
        if (mn < 0.3) wp.coeffs[0] += 0.3 - mn;
      }
      return make_weight(WeightFamily::Polynomial, wp, P);
    }
  }
}

}  // namespace wkgeom
