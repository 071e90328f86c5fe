#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "wkgeom/gauss.hpp"
#include "wkgeom/linalg.hpp"

namespace wkgeom {

using Point = std::array<double, 2>;  // 1-D data uses component 0 only

/// Half-plane {p : <normal,p> + offset >= 0} with a primitive inward
/// integer normal.
struct Facet {
  std::array<std::int64_t, 2> normal{1, 0};
  double offset = 0.0;

  double L(const Point& p, int dim) const {
    double s = offset;
    for (int i = 0; i < dim; ++i) s += static_cast<double>(normal[static_cast<size_t>(i)]) * p[static_cast<size_t>(i)];
    return s;
  }
  double norm2() const {
    double s = 0.0;
    for (auto v : normal) s += static_cast<double>(v) * static_cast<double>(v);
    return std::sqrt(s);
  }
};

namespace detail {
inline std::int64_t gcd64(std::int64_t a, std::int64_t b) {
  a = std::abs(a);
  b = std::abs(b);
  while (b) {
    a %= b;
    std::swap(a, b);
  }
  return a;
}
}  // namespace detail

/// Momentum polytope P = {p : <n_F,p> + c_F >= 0 for all F} in dimension
/// 1 or 2, Delzant in dimension 2.  Immutable after construction.
class MomentumPolytope {
 public:
  static MomentumPolytope build(int dim, std::vector<Facet> facets) {
    MomentumPolytope P;
    P.dim_ = dim;
    P.facets_ = std::move(facets);
    if (dim != 1 && dim != 2) throw BadParamsError("dimension must be 1 or 2");
    if (P.facets_.size() < static_cast<size_t>(dim) + 1)
      throw BadParamsError("need at least dim+1 facets");
    for (const auto& F : P.facets_) {
      std::int64_t g = detail::gcd64(F.normal[0], dim == 2 ? F.normal[1] : 0);
      if (g != 1) throw BadParamsError("facet normal is not a primitive integer vector");
      if (dim == 1 && F.normal[1] != 0) throw BadParamsError("1-D normal must be scalar");
    }
    if (dim == 1) {
      P.build1d();
    } else {
      P.build2d();
    }
    return P;
  }

  /// Convenience: interval [a,b] as a 1-D polytope.
  static MomentumPolytope interval(double a, double b) {
    return build(1, {Facet{{1, 0}, -a}, Facet{{-1, 0}, b}});
  }

  int dim() const { return dim_; }
  const std::vector<Facet>& facets() const { return facets_; }
  const std::vector<Point>& vertices() const { return vertices_; }

  Interval as_interval() const {
    if (dim_ != 1) throw BadParamsError("not a 1-D polytope");
    return Interval{vertices_[0][0], vertices_[1][0]};
  }

  Point barycenter() const {
    Point c{0.0, 0.0};
    for (const auto& v : vertices_) {
      c[0] += v[0];
      c[1] += v[1];
    }
    c[0] /= static_cast<double>(vertices_.size());
    c[1] /= static_cast<double>(vertices_.size());
    return c;
  }

  /// Vertices incident to facet f (indices into vertices()).
  const std::vector<size_t>& facet_vertices(size_t f) const { return facet_vertices_[f]; }

 private:
  void build1d() {
    if (facets_.size() != 2) throw BadParamsError("1-D polytope needs exactly two facets");
    const auto& F0 = facets_[0];
    const auto& F1 = facets_[1];
    if (F0.normal[0] * F1.normal[0] != -1) throw UnboundedError("1-D normals must point inward from both sides");
    double a, b;
    if (F0.normal[0] == 1) {
      a = -F0.offset;
      b = F1.offset;
    } else {
      a = -F1.offset;
      b = F0.offset;
    }
    if (!(a < b)) throw EmptyInteriorError("interval has empty interior");
    // order vertices (a, b) and attach each to its facet
    vertices_ = {{a, 0.0}, {b, 0.0}};
    facet_vertices_.assign(2, {});
    for (size_t f = 0; f < 2; ++f)
      facet_vertices_[f].push_back(facets_[f].normal[0] == 1 ? 0 : 1);
  }

  void build2d() {
    const size_t m = facets_.size();
    const double scale = facet_scale();
    const double tol = 1e-9 * scale;
    std::vector<Point> verts;
    std::vector<std::array<size_t, 2>> vert_facets;
    for (size_t i = 0; i < m; ++i) {
      for (size_t j = i + 1; j < m; ++j) {
        const auto& A = facets_[i];
        const auto& B = facets_[j];
        const double det = static_cast<double>(A.normal[0] * B.normal[1] - A.normal[1] * B.normal[0]);
        if (det == 0.0) continue;
        const Point p{(-A.offset * static_cast<double>(B.normal[1]) + B.offset * static_cast<double>(A.normal[1])) / det,
                      (-static_cast<double>(A.normal[0]) * B.offset + static_cast<double>(B.normal[0]) * A.offset) / det};
        bool inside = true;
        for (size_t k = 0; k < m && inside; ++k) {
          if (k == i || k == j) continue;
          inside = facets_[k].L(p, 2) >= -tol;
        }
        if (!inside) continue;
        bool dup = false;
        for (const auto& q : verts)
          if (std::hypot(q[0] - p[0], q[1] - p[1]) < tol) dup = true;
        if (dup) continue;
        verts.push_back(p);
        vert_facets.push_back({i, j});
      }
    }
    if (verts.size() < 3) throw UnboundedError("facets do not cut out a bounded polygon");

    // interior point check
    Point c{0.0, 0.0};
    for (const auto& v : verts) {
      c[0] += v[0];
      c[1] += v[1];
    }
    c[0] /= static_cast<double>(verts.size());
    c[1] /= static_cast<double>(verts.size());
    for (const auto& F : facets_)
      if (F.L(c, 2) <= tol) throw EmptyInteriorError("no interior point strictly inside all facets");

    // CCW order around the interior point
    std::vector<size_t> idx(verts.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](size_t u, size_t v) {
      return std::atan2(verts[u][1] - c[1], verts[u][0] - c[0]) <
             std::atan2(verts[v][1] - c[1], verts[v][0] - c[0]);
    });
    vertices_.clear();
    std::vector<std::array<size_t, 2>> vf;
    for (size_t k : idx) {
      vertices_.push_back(verts[k]);
      vf.push_back(vert_facets[k]);
    }

    facet_vertices_.assign(m, {});
    for (size_t f = 0; f < m; ++f)
      for (size_t v = 0; v < vertices_.size(); ++v)
        if (std::abs(facets_[f].L(vertices_[v], 2)) < tol) facet_vertices_[f].push_back(v);
    for (size_t f = 0; f < m; ++f)
      if (facet_vertices_[f].size() != 2)
        throw UnboundedError("facet " + std::to_string(f) + " does not support a bounded edge");

    // Delzant: incident normals at each vertex form a determinant +-1 basis
    for (size_t v = 0; v < vertices_.size(); ++v) {
      const auto& A = facets_[vf[v][0]];
      const auto& B = facets_[vf[v][1]];
      const std::int64_t det = A.normal[0] * B.normal[1] - A.normal[1] * B.normal[0];
      if (det != 1 && det != -1)
        throw NotDelzantError("vertex normal determinant is " + std::to_string(det));
    }
  }

  double facet_scale() const {
    double s = 1.0;
    for (const auto& F : facets_) s = std::max(s, std::abs(F.offset));
    return s;
  }

  int dim_ = 1;
  std::vector<Facet> facets_;
  std::vector<Point> vertices_;
  std::vector<std::vector<size_t>> facet_vertices_;
};

/// Quadrature for the interior Lebesgue measure and the per-facet lattice
/// boundary measure dsigma (defined by dsigma ^ dL_F = Lebesgue, L_F built
/// from the primitive inward normal: dsigma = arclength / |n_F|_2, unit
/// atoms in dimension 1).
struct QuadratureRule {
  struct Node {
    Point p;
    double w;
  };
  std::vector<Node> interior;
  std::vector<std::vector<Node>> facet;  // one rule per facet
  int exact_degree = 0;

  template <class F>
  double integrate(F&& f) const {
    double s = 0.0;
    for (const auto& n : interior) s += n.w * f(n.p);
    return s;
  }
  template <class F>
  double integrate_facet(size_t fi, F&& f) const {
    double s = 0.0;
    for (const auto& n : facet[fi]) s += n.w * f(n.p);
    return s;
  }
  template <class F>
  double integrate_boundary(F&& f) const {
    double s = 0.0;
    for (size_t fi = 0; fi < facet.size(); ++fi) s += integrate_facet(fi, f);
    return s;
  }
};

/// Interior rule: Gauss-Legendre in dimension 1 (exact to degree 2*order-1);
/// fan triangulation from the barycenter with tensor Gauss rules per
/// triangle in dimension 2 (exact at least to total degree order for
/// order >= 2).
inline QuadratureRule quadrature(const MomentumPolytope& P, int order) {
  if (order < 1) throw BadParamsError("quadrature order must be >= 1");
  QuadratureRule rule;
  if (P.dim() == 1) {
    const Interval I = P.as_interval();
    Quad1D q = gauss_legendre(I, order);
    for (size_t i = 0; i < q.x.size(); ++i) rule.interior.push_back({{q.x[i], 0.0}, q.w[i]});
    rule.exact_degree = 2 * order - 1;
    rule.facet.resize(2);
    for (size_t f = 0; f < 2; ++f) {
      const auto& vs = P.facet_vertices(f);
      rule.facet[f].push_back({P.vertices()[vs[0]], 1.0});
    }
    return rule;
  }

  const Point c = P.barycenter();
  const Quad1D g = gauss_legendre(order);
  const auto& V = P.vertices();
  const size_t nv = V.size();
  for (size_t e = 0; e < nv; ++e) {
    const Point& v1 = V[e];
    const Point& v2 = V[(e + 1) % nv];
    const double area2 = (v1[0] - c[0]) * (v2[1] - c[1]) - (v2[0] - c[0]) * (v1[1] - c[1]);
    // Duffy map of the unit square onto triangle (c, v1, v2)
    for (size_t i = 0; i < g.x.size(); ++i) {
      const double u = 0.5 * (g.x[i] + 1.0);
      for (size_t j = 0; j < g.x.size(); ++j) {
        const double t = 0.5 * (g.x[j] + 1.0);
        const Point p{c[0] + u * ((1.0 - t) * (v1[0] - c[0]) + t * (v2[0] - c[0])),
                      c[1] + u * ((1.0 - t) * (v1[1] - c[1]) + t * (v2[1] - c[1]))};
        const double w = 0.25 * g.w[i] * g.w[j] * u * area2;
        rule.interior.push_back({p, w});
      }
    }
  }
  rule.exact_degree = std::min(order, 2 * order - 2);

  rule.facet.resize(P.facets().size());
  for (size_t f = 0; f < P.facets().size(); ++f) {
    const auto& vs = P.facet_vertices(f);
    const Point& A = V[vs[0]];
    const Point& B = V[vs[1]];
    const double len = std::hypot(B[0] - A[0], B[1] - A[1]);
    const double mass = len / P.facets()[f].norm2();  // lattice length
    for (size_t i = 0; i < g.x.size(); ++i) {
      const double t = 0.5 * (g.x[i] + 1.0);
      rule.facet[f].push_back({{A[0] + t * (B[0] - A[0]), A[1] + t * (B[1] - A[1])},
                               0.5 * g.w[i] * mass});
    }
  }
  return rule;
}

/// Default orders: 32 nodes for dim 1, 12 per triangle direction for dim 2.
inline QuadratureRule default_quadrature(const MomentumPolytope& P) {
  return quadrature(P, P.dim() == 1 ? 32 : 12);
}

/// Zeroth/first moments and the Gram matrix of {1, mu_1..mu_l} with respect
/// to f dmu, with a smallest-eigenvalue estimate.  `singular` flags a
/// numerically singular Gram matrix (possible for sign-changing f).
struct MomentData {
  double mass = 0.0;
  std::array<double, 2> first{0.0, 0.0};
  std::vector<double> gram;  // (dim+1)^2 row-major
  double min_eigenvalue = 0.0;
  bool singular = false;
};

template <class F>
MomentData affine_moments(const MomentumPolytope& P, F&& f, const QuadratureRule& rule) {
  const int d = P.dim();
  const size_t n = static_cast<size_t>(d) + 1;
  MomentData md;
  md.gram.assign(n * n, 0.0);
  auto basis = [&](const Point& p, size_t k) { return k == 0 ? 1.0 : p[k - 1]; };
  for (const auto& node : rule.interior) {
    const double fv = f(node.p) * node.w;
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) md.gram[i * n + j] += fv * basis(node.p, i) * basis(node.p, j);
  }
  md.mass = md.gram[0];
  for (int i = 0; i < d; ++i) md.first[static_cast<size_t>(i)] = md.gram[static_cast<size_t>(i) + 1];
  const auto ev = symmetric_eigenvalues(md.gram, n);
  double mn = ev[0], mx = 0.0;
  for (double e : ev) {
    mn = std::min(mn, std::abs(e));
    mx = std::max(mx, std::abs(e));
  }
  md.min_eigenvalue = mn;
  md.singular = mn <= 1e-12 * std::max(1.0, mx);
  return md;
}

template <class F>
MomentData affine_moments(const MomentumPolytope& P, F&& f) {
  return affine_moments(P, std::forward<F>(f), default_quadrature(P));
}

}  // namespace wkgeom
