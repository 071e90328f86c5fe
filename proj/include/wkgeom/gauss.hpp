#pragma once

#include <cmath>
#include <vector>

#include "wkgeom/chebyshev.hpp"

namespace wkgeom {

/// One-dimensional quadrature rule: sum_i w[i] f(x[i]).
struct Quad1D {
  std::vector<double> x;
  std::vector<double> w;

  template <class F>
  double integrate(F&& f) const {
    double s = 0.0;
    for (size_t i = 0; i < x.size(); ++i) s += w[i] * f(x[i]);
    return s;
  }
};

/// n-point Gauss-Legendre rule on [-1,1] (exact for degree <= 2n-1).
/// Nodes by Newton iteration on P_n with the three-term recurrence.
inline Quad1D gauss_legendre(int n) {
  Quad1D q;
  q.x.resize(static_cast<size_t>(n));
  q.w.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    q.x[static_cast<size_t>(i)] = x;
    q.w[static_cast<size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return q;
}

/// Gauss-Legendre rule mapped to an interval.
inline Quad1D gauss_legendre(Interval dom, int n) {
  Quad1D q = gauss_legendre(n);
  const double half = 0.5 * dom.length();
  for (size_t i = 0; i < q.x.size(); ++i) {
    q.x[i] = dom.from_unit(q.x[i]);
    q.w[i] *= half;
  }
  return q;
}

}  // namespace wkgeom
