#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "wkgeom/errors.hpp"

namespace wkgeom {

/// Closed interval [a,b] with the affine map to the Chebyshev reference
/// interval [-1,1].
struct Interval {
  double a = -1.0;
  double b = 1.0;

  double length() const { return b - a; }
  double midpoint() const { return 0.5 * (a + b); }
  double to_unit(double x) const { return (2.0 * x - a - b) / (b - a); }
  double from_unit(double t) const { return 0.5 * ((b - a) * t + a + b); }
  bool contains(double x) const { return x >= a && x <= b; }
};

/// Chebyshev series sum_k c_k T_k(t(x)) on an interval, plain-sum convention
/// (c_0 is not halved).  Evaluation by Clenshaw recurrence; differentiation
/// and antidifferentiation in coefficient space.
class ChebSeries {
 public:
  ChebSeries() : dom_{}, c_{0.0} {}
  ChebSeries(Interval dom, std::vector<double> coeffs)
      : dom_(dom), c_(std::move(coeffs)) {
    if (c_.empty()) c_.push_back(0.0);
  }

  static ChebSeries zero(Interval dom) { return ChebSeries(dom, {0.0}); }
  static ChebSeries constant(Interval dom, double v) { return ChebSeries(dom, {v}); }

  /// Interpolation at the n Chebyshev points of the first kind (all strictly
  /// interior), degree n-1.
  template <class F>
  static ChebSeries fit(Interval dom, F&& f, int n) {
    std::vector<double> fx(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) {
      const double t = std::cos(M_PI * (j + 0.5) / n);
      fx[static_cast<size_t>(j)] = f(dom.from_unit(t));
    }
    std::vector<double> c(static_cast<size_t>(n), 0.0);
    for (int k = 0; k < n; ++k) {
      double s = 0.0;
      for (int j = 0; j < n; ++j) s += fx[static_cast<size_t>(j)] * std::cos(k * M_PI * (j + 0.5) / n);
      c[static_cast<size_t>(k)] = (k == 0 ? 1.0 : 2.0) * s / n;
    }
    // chop the rounding-noise tail so repeated differentiation does not
    // amplify spurious high modes
    double mx = 0.0;
    for (double v : c) mx = std::max(mx, std::abs(v));
    size_t keep = c.size();
    while (keep > 1 && std::abs(c[keep - 1]) < 1e-13 * mx) --keep;
    c.resize(keep);
    return ChebSeries(dom, std::move(c));
  }

  /// First-kind Chebyshev nodes on the interval (strictly interior).
  static std::vector<double> nodes(Interval dom, int n) {
    std::vector<double> x(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) x[static_cast<size_t>(j)] = dom.from_unit(std::cos(M_PI * (j + 0.5) / n));
    return x;
  }

  double operator()(double x) const {
    const double t = dom_.to_unit(x);
    double b1 = 0.0, b2 = 0.0;
    for (size_t k = c_.size(); k-- > 1;) {
      const double bk = 2.0 * t * b1 - b2 + c_[k];
      b2 = b1;
      b1 = bk;
    }
    return t * b1 - b2 + c_[0];
  }

  ChebSeries derivative() const {
    const size_t n = c_.size();
    if (n <= 1) return ChebSeries(dom_, {0.0});
    std::vector<double> d(n, 0.0);  // one slot of slack, trimmed below
    for (size_t k = n - 1; k >= 1; --k) {
      d[k - 1] = (k + 1 < n ? d[k + 1] : 0.0) + 2.0 * static_cast<double>(k) * c_[k];
    }
    d[0] *= 0.5;
    d.resize(n - 1);
    const double scale = 2.0 / dom_.length();
    for (double& v : d) v *= scale;
    return ChebSeries(dom_, std::move(d));
  }

  /// Antiderivative F with F(x0) = y0.
  ChebSeries antiderivative(double x0, double y0) const {
    const size_t n = c_.size();
    std::vector<double> A(n + 1, 0.0);
    const double half = 0.5 * dom_.length();
    auto c = [&](size_t k) { return k < n ? c_[k] : 0.0; };
    if (n >= 1) A[1] = half * (c(0) - 0.5 * c(2));
    for (size_t k = 2; k <= n; ++k) A[k] = half * (c(k - 1) - c(k + 1)) / (2.0 * static_cast<double>(k));
    ChebSeries F(dom_, std::move(A));
    F.c_[0] += y0 - F(x0);
    return F;
  }

  /// Quotient of the series by (t - t0) in the unit variable (the remainder
  /// is discarded).  Exact coefficient-space division: used to deflate
  /// series with known endpoint zeros without ever dividing small values.
  ChebSeries deflate_unit_root(double t0) const {
    const size_t n = c_.size();
    if (n <= 1) return ChebSeries(dom_, {0.0});
    std::vector<double> q(n - 1, 0.0);
    auto qat = [&](size_t k) { return k < q.size() ? q[k] : 0.0; };
    q[n - 2] = 2.0 * c_[n - 1];
    for (size_t k = n - 2; k >= 2; --k) q[k - 1] = 2.0 * (c_[k] + t0 * qat(k)) - qat(k + 1);
    if (n >= 2) q[0] = c_[1] + t0 * qat(1) - 0.5 * qat(2);
    return ChebSeries(dom_, std::move(q));
  }

  /// Quotient by (mu - x0) on the interval (x0 given in interval units).
  ChebSeries deflate_root(double x0) const {
    ChebSeries q = deflate_unit_root(dom_.to_unit(x0));
    q *= 2.0 / dom_.length();
    return q;
  }

  ChebSeries& operator+=(const ChebSeries& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0.0);
    for (size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    return *this;
  }
  ChebSeries& operator-=(const ChebSeries& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0.0);
    for (size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
    return *this;
  }
  ChebSeries& operator*=(double s) {
    for (double& v : c_) v *= s;
    return *this;
  }
  friend ChebSeries operator+(ChebSeries x, const ChebSeries& y) { return x += y; }
  friend ChebSeries operator-(ChebSeries x, const ChebSeries& y) { return x -= y; }
  friend ChebSeries operator*(double s, ChebSeries x) { return x *= s; }

  const Interval& domain() const { return dom_; }
  const std::vector<double>& coefficients() const { return c_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }

  double max_abs_coefficient() const {
    double m = 0.0;
    for (double v : c_) m = std::max(m, std::abs(v));
    return m;
  }

 private:
  Interval dom_;
  std::vector<double> c_;
};

}  // namespace wkgeom
