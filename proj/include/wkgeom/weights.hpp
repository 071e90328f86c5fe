#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "wkgeom/polytope.hpp"

namespace wkgeom {

/// p -> a + <b,p> on t^*.
struct AffineFunction {
  double a = 0.0;
  std::array<double, 2> b{0.0, 0.0};

  double operator()(const Point& p) const { return a + b[0] * p[0] + b[1] * p[1]; }
  double operator()(double mu) const { return a + b[0] * mu; }
};

enum class WeightFamily { Constant, Affine, Exponential, Power, Polynomial };

inline const char* to_string(WeightFamily f) {
  switch (f) {
    case WeightFamily::Constant: return "constant";
    case WeightFamily::Affine: return "affine";
    case WeightFamily::Exponential: return "exponential";
    case WeightFamily::Power: return "power";
    case WeightFamily::Polynomial: return "polynomial";
  }
  return "?";
}

struct WeightParams {
  std::vector<double> xi;       // direction, one entry per polytope dimension
  double c = 0.0;               // affine constant / base offset
  double alpha = 1.0;           // power exponent
  double value = 1.0;           // constant family
  std::vector<double> coeffs;   // polynomial family, in s = <xi,p>+c
  double amplitude = 1.0;
  bool require_positive = false;
};

/// Smooth weight function on the momentum polytope with closed-form value,
/// gradient and Hessian.  The exponential and power families with
/// user-chosen parameters cover the soliton-type applications.  An
/// optional affine multiplier supports products like ell*w without leaving
/// closed forms.  Immutable; freely shareable.
class WeightFunction {
 public:
  WeightFunction() = default;

  double value(const Point& p) const {
    double v = base_value(p);
    if (aff_) v *= (*aff_)(p);
    return v;
  }
  std::array<double, 2> grad(const Point& p) const {
    std::array<double, 2> g = base_grad(p);
    if (aff_) {
      const double m = (*aff_)(p);
      const double bv = base_value(p);
      for (int i = 0; i < 2; ++i) g[static_cast<size_t>(i)] = g[static_cast<size_t>(i)] * m + bv * aff_->b[static_cast<size_t>(i)];
    }
    return g;
  }
  /// Row-major 2x2; 1-D data uses entry (0,0).
  std::array<double, 4> hess(const Point& p) const {
    std::array<double, 4> h = base_hess(p);
    if (aff_) {
      const double m = (*aff_)(p);
      const auto g = base_grad(p);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          h[static_cast<size_t>(2 * i + j)] = h[static_cast<size_t>(2 * i + j)] * m +
                                              g[static_cast<size_t>(i)] * aff_->b[static_cast<size_t>(j)] +
                                              g[static_cast<size_t>(j)] * aff_->b[static_cast<size_t>(i)];
    }
    return h;
  }

  // 1-D conveniences
  double value(double mu) const { return value(Point{mu, 0.0}); }
  double d1(double mu) const { return grad(Point{mu, 0.0})[0]; }
  double d2(double mu) const { return hess(Point{mu, 0.0})[0]; }

  /// Exact pointwise scaling (closed form; multiplies the amplitude).
  WeightFunction scaled(double lambda) const {
    WeightFunction w = *this;
    w.params_.amplitude *= lambda;
    return w;
  }

  /// Exact product with an affine function of the momentum.
  WeightFunction times_affine(const AffineFunction& ell) const {
    if (aff_) throw BadParamsError("weight already carries an affine factor");
    WeightFunction w = *this;
    w.aff_ = ell;
    return w;
  }

  WeightFamily family() const { return family_; }
  const WeightParams& params() const { return params_; }
  bool positive_on_polytope() const { return positive_on_polytope_; }
  int dim() const { return dim_; }

  friend WeightFunction make_weight(WeightFamily, WeightParams, const MomentumPolytope&);

 private:
  double s_of(const Point& p) const {
    double s = params_.c;
    for (int i = 0; i < dim_; ++i) s += params_.xi[static_cast<size_t>(i)] * p[static_cast<size_t>(i)];
    return s;
  }
  double xi_at(int i) const { return i < dim_ ? params_.xi[static_cast<size_t>(i)] : 0.0; }

  double base_value(const Point& p) const {
    const double A = params_.amplitude;
    switch (family_) {
      case WeightFamily::Constant: return A * params_.value;
      case WeightFamily::Affine: return A * s_of(p);
      case WeightFamily::Exponential: return A * std::exp(s_of(p) - params_.c);
      case WeightFamily::Power: return A * std::pow(s_of(p), params_.alpha);
      case WeightFamily::Polynomial: {
        const double s = s_of(p);
        double v = 0.0;
        for (size_t k = params_.coeffs.size(); k-- > 0;) v = v * s + params_.coeffs[k];
        return A * v;
      }
    }
    return 0.0;
  }
  double base_scalar_d1(const Point& p) const {  // d/ds of the base profile
    const double A = params_.amplitude;
    switch (family_) {
      case WeightFamily::Constant: return 0.0;
      case WeightFamily::Affine: return A;
      case WeightFamily::Exponential: return A * std::exp(s_of(p) - params_.c);
      case WeightFamily::Power: return A * params_.alpha * std::pow(s_of(p), params_.alpha - 1.0);
      case WeightFamily::Polynomial: {
        const double s = s_of(p);
        double v = 0.0;
        for (size_t k = params_.coeffs.size(); k-- > 1;) v = v * s + static_cast<double>(k) * params_.coeffs[k];
        return A * v;
      }
    }
    return 0.0;
  }
  double base_scalar_d2(const Point& p) const {
    const double A = params_.amplitude;
    switch (family_) {
      case WeightFamily::Constant:
      case WeightFamily::Affine: return 0.0;
      case WeightFamily::Exponential: return A * std::exp(s_of(p) - params_.c);
      case WeightFamily::Power:
        return A * params_.alpha * (params_.alpha - 1.0) * std::pow(s_of(p), params_.alpha - 2.0);
      case WeightFamily::Polynomial: {
        const double s = s_of(p);
        double v = 0.0;
        for (size_t k = params_.coeffs.size(); k-- > 2;) v = v * s + static_cast<double>(k) * static_cast<double>(k - 1) * params_.coeffs[k];
        return A * v;
      }
    }
    return 0.0;
  }
  std::array<double, 2> base_grad(const Point& p) const {
    const double d = base_scalar_d1(p);
    return {d * xi_at(0), d * xi_at(1)};
  }
  std::array<double, 4> base_hess(const Point& p) const {
    const double d = base_scalar_d2(p);
    return {d * xi_at(0) * xi_at(0), d * xi_at(0) * xi_at(1),
            d * xi_at(1) * xi_at(0), d * xi_at(1) * xi_at(1)};
  }

  WeightFamily family_ = WeightFamily::Constant;
  WeightParams params_;
  std::optional<AffineFunction> aff_;
  bool positive_on_polytope_ = false;
  int dim_ = 1;
};

/// Builds a weight on P, validating parameters and (when requested or
/// required by the family) positivity at the quadrature nodes and vertices.
inline WeightFunction make_weight(WeightFamily family, WeightParams params,
                                  const MomentumPolytope& P) {
  WeightFunction w;
  w.family_ = family;
  w.dim_ = P.dim();
  if (family != WeightFamily::Constant) {
    if (params.xi.size() != static_cast<size_t>(P.dim())) {
      if (family == WeightFamily::Polynomial && params.xi.empty()) {
        params.xi.assign(static_cast<size_t>(P.dim()), 0.0);
        params.xi[0] = 1.0;  // default coordinate
      } else {
        throw BadParamsError("xi must have one entry per dimension");
      }
    }
  } else {
    params.xi.assign(static_cast<size_t>(P.dim()), 0.0);
  }
  if (family == WeightFamily::Polynomial && params.coeffs.empty())
    throw BadParamsError("polynomial weight needs coefficients");
  if (!(params.amplitude != 0.0)) throw BadParamsError("amplitude must be nonzero");
  w.params_ = std::move(params);

  const QuadratureRule rule = default_quadrature(P);
  auto check_points = [&](auto&& fn, double& mn) {
    for (const auto& n : rule.interior) mn = std::min(mn, fn(n.p));
    for (const auto& v : P.vertices()) mn = std::min(mn, fn(v));
  };
  if (family == WeightFamily::Power) {
    double mn = std::numeric_limits<double>::infinity();
    check_points([&](const Point& p) { return w.s_of(p); }, mn);
    if (!(mn > 0.0))
      throw NotPositiveOnPError("power-weight base <xi,p>+c is not positive on P (min " +
                                std::to_string(mn) + ")");
  }
  double mn = std::numeric_limits<double>::infinity();
  check_points([&](const Point& p) { return w.value(p); }, mn);
  w.positive_on_polytope_ = mn > 0.0;
  if (w.params_.require_positive && !w.positive_on_polytope_)
    throw NotPositiveOnPError("weight is not positive on P (min " + std::to_string(mn) + ")");
  return w;
}

}  // namespace wkgeom
