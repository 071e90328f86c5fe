#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "wkgeom/chebyshev.hpp"
#include "wkgeom/gauss.hpp"
#include "wkgeom/weights.hpp"

namespace wkgeom {

// Conventions for the 1-D toric chart (P = [a,b], angle coordinate of the
// torus suppressed):
//   - a metric is the momentum profile H = 1/u'' of a strictly convex
//     symplectic potential u = u_G + f, with Guillemin reference u_G;
//   - omega = dmu ^ dtheta, so every X-integral of a momentum function is
//     (2 pi) times the P-integral;
//   - the Riemannian Laplacian is  Delta f = -(H f')'  and the scalar
//     curvature is  Scal = -H''  (the unique signs under which the three
//     terms of the weighted curvature sum to -(vH)'');
//   - chart points are labelled by the reference momentum mu0; the complex
//     (log-affine) coordinate is y = u_G'(mu0) = s/2 with
//     s = log((mu0-a)/(b-mu0)).

namespace toric_detail {

inline double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

/// mu for the logistic chart variable s = log((mu-a)/(b-mu)), overflow-safe.
inline double sigma_of_s(double s) {
  return s >= 0.0 ? 1.0 / (1.0 + std::exp(-s)) : std::exp(s) / (1.0 + std::exp(s));
}

inline double mu_of_s(Interval P, double s) { return P.a + P.length() * sigma_of_s(s); }

inline double s_of_mu(Interval P, double mu) { return std::log((mu - P.a) / (P.b - mu)); }

}  // namespace toric_detail

/// Symplectic potential u = u_G + f on P, stored by its relative part f
/// (Chebyshev series).  Strict convexity of u is equivalent to positivity
/// of  Q(mu) = (b-a) + 2(mu-a)(b-mu) f''(mu)  (u'' = Q / (2(mu-a)(b-mu))).
class SymplecticPotential {
 public:
  SymplecticPotential(Interval P, ChebSeries f)
      : P_(P), f_(std::move(f)) {
    d1_ = f_.derivative();
    d2_ = d1_.derivative();
    d3_ = d2_.derivative();
    d4_ = d3_.derivative();
    d1_bound_ = 0.0;
    for (double c : d1_.coefficients()) d1_bound_ += std::abs(c);
  }
  static SymplecticPotential reference(Interval P) {
    return SymplecticPotential(P, ChebSeries::zero(P));
  }

  const Interval& domain() const { return P_; }
  const ChebSeries& f() const { return f_; }
  double f_value(double mu) const { return f_(mu); }
  double f_d1(double mu) const { return d1_(mu); }
  double f_d2(double mu) const { return d2_(mu); }
  double f_d3(double mu) const { return d3_(mu); }
  double f_d4(double mu) const { return d4_(mu); }
  double f_d1_bound() const { return d1_bound_; }

  double guillemin(double mu) const {
    using toric_detail::xlogx;
    return 0.5 * (xlogx(mu - P_.a) + xlogx(P_.b - mu));
  }
  double guillemin_d1(double mu) const { return 0.5 * std::log((mu - P_.a) / (P_.b - mu)); }
  double guillemin_d2(double mu) const { return 0.5 * (1.0 / (mu - P_.a) + 1.0 / (P_.b - mu)); }

  double u(double mu) const { return guillemin(mu) + f_(mu); }
  double du(double mu) const { return guillemin_d1(mu) + d1_(mu); }
  double d2u(double mu) const { return guillemin_d2(mu) + d2_(mu); }

  /// Q = (b-a) + 2(mu-a)(b-mu) f''.
  double Q(double mu) const { return P_.length() + 2.0 * (mu - P_.a) * (P_.b - mu) * d2_(mu); }

  /// Gauge at the barycenter: subtract the affine part so the gauged u has
  /// u(mu_c) = 0, u'(mu_c) = 0.  The metric content (u'') is unchanged.
  SymplecticPotential gauged() const {
    const double mc = P_.midpoint();
    const double u0 = u(mc);
    const double s0 = du(mc);  // guillemin slope vanishes at the barycenter
    ChebSeries g = f_;
    // subtract u0 + s0 * (mu - mc) in the T_0, T_1 basis
    std::vector<double> c = g.coefficients();
    if (c.size() < 2) c.resize(2, 0.0);
    c[0] -= u0;
    c[1] -= s0 * 0.5 * P_.length();  // T_1 = (mu - mu_c) / (half length)
    return SymplecticPotential(P_, ChebSeries(P_, std::move(c)));
  }

  /// Throws NotConvex when u'' <= 0 somewhere on a dense interior node set.
  void require_admissible(int n_check = 0) const {
    const int n = n_check > 0 ? n_check : 2 * f_.degree() + 33;
    for (double x : ChebSeries::nodes(P_, n)) {
      if (!(Q(x) > 0.0))
        throw NotConvexError("symplectic potential not strictly convex near mu = " + std::to_string(x));
    }
  }
  bool is_admissible(int n_check = 0) const {
    const int n = n_check > 0 ? n_check : 2 * f_.degree() + 33;
    for (double x : ChebSeries::nodes(P_, n))
      if (!(Q(x) > 0.0)) return false;
    return true;
  }

 private:
  Interval P_;
  ChebSeries f_, d1_, d2_, d3_, d4_;
  double d1_bound_ = 0.0;
};

/// Momentum profile H > 0 on (a,b) with H(a) = H(b) = 0, H'(a) = 2,
/// H'(b) = -2 (Abreu boundary behavior).  Houses the metric: |xi|^2 = H for
/// the torus generator, Scal = -H''.
class MomentumProfile {
 public:
  using Fn = std::function<double(double)>;

  MomentumProfile() = default;
  MomentumProfile(Interval P, Fn h, Fn dh, Fn d2h)
      : P_(P), h_(std::move(h)), dh_(std::move(dh)), d2h_(std::move(d2h)) {}

  /// H = 2(mu-a)(b-mu)/Q from a symplectic potential; the boundary behavior
  /// is exact by construction.
  static MomentumProfile from_potential(const SymplecticPotential& u) {
    const Interval P = u.domain();
    auto N = [P](double x) { return 2.0 * (x - P.a) * (P.b - x); };
    auto dN = [P](double x) { return 2.0 * (P.a + P.b - 2.0 * x); };
    auto Qf = [u](double x) { return u.Q(x); };
    auto dQ = [P, u](double x) {
      return 2.0 * (P.a + P.b - 2.0 * x) * u.f_d2(x) + 2.0 * (x - P.a) * (P.b - x) * u.f_d3(x);
    };
    auto d2Q = [P, u](double x) {
      return -4.0 * u.f_d2(x) + 4.0 * (P.a + P.b - 2.0 * x) * u.f_d3(x) +
             2.0 * (x - P.a) * (P.b - x) * u.f_d4(x);
    };
    auto h = [N, Qf](double x) { return N(x) / Qf(x); };
    auto dh = [N, dN, Qf, dQ](double x) {
      const double q = Qf(x);
      return (dN(x) * q - N(x) * dQ(x)) / (q * q);
    };
    auto d2h = [N, dN, Qf, dQ, d2Q](double x) {
      const double q = Qf(x), dq = dQ(x);
      return -4.0 / q - 2.0 * dN(x) * dq / (q * q) - N(x) * d2Q(x) / (q * q) +
             2.0 * N(x) * dq * dq / (q * q * q);
    };
    return MomentumProfile(P, h, dh, d2h);
  }

  /// H = (vH)/v from a solved product series and the weight v.
  static MomentumProfile from_product(Interval P, ChebSeries vH, const WeightFunction& v) {
    auto vH1 = vH.derivative();
    auto vH2 = vH1.derivative();
    auto h = [vH, v](double x) { return vH(x) / v.value(x); };
    auto dh = [vH, vH1, v](double x) {
      const double vv = v.value(x);
      return (vH1(x) * vv - vH(x) * v.d1(x)) / (vv * vv);
    };
    auto d2h = [vH, vH1, vH2, v](double x) {
      const double vv = v.value(x), v1 = v.d1(x), v2 = v.d2(x);
      return (vH2(x) * vv * vv - 2.0 * vH1(x) * v1 * vv + vH(x) * (2.0 * v1 * v1 - v2 * vv)) /
             (vv * vv * vv);
    };
    return MomentumProfile(P, h, dh, d2h);
  }

  const Interval& domain() const { return P_; }
  double operator()(double mu) const { return h_(mu); }
  double d1(double mu) const { return dh_(mu); }
  double d2(double mu) const { return d2h_(mu); }

  /// max(|H(a)|, |H(b)|, |H'(a)-2|, |H'(b)+2|).
  double boundary_residual() const {
    return std::max(std::max(std::abs(h_(P_.a)), std::abs(h_(P_.b))),
                    std::max(std::abs(dh_(P_.a) - 2.0), std::abs(dh_(P_.b) + 2.0)));
  }

  /// Minimum over a dense interior node set; > 0 for a genuine metric.
  double interior_min(int n = 257) const {
    double mn = std::numeric_limits<double>::infinity();
    for (double x : ChebSeries::nodes(P_, n)) mn = std::min(mn, h_(x));
    return mn;
  }

 private:
  Interval P_;
  Fn h_, dh_, d2h_;
};

/// Guillemin reference profile H_G = 2(mu-a)(b-mu)/(b-a).
inline MomentumProfile guillemin_profile(Interval P) {
  if (!(P.a < P.b)) throw BadParamsError("empty interval");
  const double L = P.length();
  return MomentumProfile(
      P, [P, L](double x) { return 2.0 * (x - P.a) * (P.b - x) / L; },
      [P, L](double x) { return 2.0 * (P.a + P.b - 2.0 * x) / L; },
      [L](double) { return -4.0 / L; });
}

/// H = 1/(u_G'' + f''); throws NotConvex when the datum is not a metric.
inline MomentumProfile profile_from_relative_potential(Interval P, const ChebSeries& f) {
  SymplecticPotential u(P, f);
  u.require_admissible();
  return MomentumProfile::from_potential(u);
}

/// Scal = -H''.
inline std::function<double(double)> scalar_curvature(const MomentumProfile& H) {
  return [H](double mu) { return -H.d2(mu); };
}

/// Riemannian Laplacian Delta f = -(H f')'.
inline std::function<double(double)> laplacian(const MomentumProfile& H, const ChebSeries& f) {
  auto f1 = f.derivative();
  auto f2 = f1.derivative();
  return [H, f1, f2](double mu) { return -(H.d1(mu) * f1(mu) + H(mu) * f2(mu)); };
}

/// Ricci momentum m_Ric = (1/2) Delta(m) = -H'/2, the theta-momentum of the
/// Ricci form -(H''/2) dmu ^ dtheta under theta(xi,.) = -d<m_theta,xi>.
inline std::function<double(double)> ricci_momentum(const MomentumProfile& H) {
  return [H](double mu) { return -0.5 * H.d1(mu); };
}

/// The three terms of the weighted scalar curvature at mu:
/// { v Scal, 2 Delta(v o m), Tr(G o Hess v) } = { -v H'', -2(Hv')', v'' H }.
inline std::array<double, 3> weighted_scal_terms(const MomentumProfile& H,
                                                 const WeightFunction& v, double mu) {
  const double hv = H(mu), h1 = H.d1(mu), h2 = H.d2(mu);
  const double v0 = v.value(mu), v1 = v.d1(mu), v2 = v.d2(mu);
  return {-v0 * h2, -2.0 * (h1 * v1 + hv * v2), v2 * hv};
}

/// Scal_v = v Scal + 2 Delta(v o m) + Tr(G o Hess v); identically -(vH)''.
inline std::function<double(double)> weighted_scalar_curvature(const MomentumProfile& H,
                                                               const WeightFunction& v) {
  return [H, v](double mu) {
    const auto t = weighted_scal_terms(H, v, mu);
    return t[0] + t[1] + t[2];
  };
}

namespace toric_detail {

/// Solves u'(mu) = y in the logistic variable s (monotone; Newton with
/// bisection safeguard).  Returns s with |G(s)| <= 1e-14 (1+|y|).
inline double solve_chart(const SymplecticPotential& u, double y) {
  const Interval P = u.domain();
  const double B = 1.0 + u.f_d1_bound();
  double lo = 2.0 * (y - B), hi = 2.0 * (y + B);
  auto G = [&](double s) { return 0.5 * s + u.f_d1(mu_of_s(P, s)) - y; };
  auto dG = [&](double s) {
    const double mu = mu_of_s(P, s);
    return 0.5 + u.f_d2(mu) * (mu - P.a) * (P.b - mu) / P.length();
  };
  double s = 2.0 * y;  // exact for f' = 0
  const double tol = 1e-14 * (1.0 + std::abs(y));
  for (int it = 0; it < 200; ++it) {
    const double g = G(s);
    if (std::abs(g) <= tol) return s;
    if (g > 0.0) hi = std::min(hi, s);
    else lo = std::max(lo, s);
    double step = g / dG(s);
    double snew = s - step;
    if (!(snew > lo && snew < hi)) snew = 0.5 * (lo + hi);
    s = snew;
  }
  return s;
}

}  // namespace toric_detail

/// One chart point: reference momentum mu0, the momentum mu1 of u at the
/// same complex point, the density ratio r = omega_phi/omega = dmu1/dmu0,
/// and the Kahler potential phi = L[u_G+f](y) - L[u_G](y).
struct ChartPoint {
  double mu0 = 0.0;
  double mu1 = 0.0;
  double r = 1.0;
  double phi = 0.0;
};

/// Chart point of u = u_G + f against the Guillemin reference at the
/// complex coordinate y (interior points only).
inline ChartPoint chart_at_y(const SymplecticPotential& u, double y) {
  using namespace toric_detail;
  const Interval P = u.domain();
  ChartPoint cp;
  cp.mu0 = mu_of_s(P, 2.0 * y);
  const double s1 = solve_chart(u, y);
  cp.mu1 = mu_of_s(P, s1);
  const double q0 = P.length();  // Q of the reference
  cp.r = (cp.mu1 - P.a) * (P.b - cp.mu1) * q0 /
         (u.Q(cp.mu1) * (cp.mu0 - P.a) * (P.b - cp.mu0));
  cp.phi = (cp.mu1 - cp.mu0) * y - u.guillemin(cp.mu1) + u.guillemin(cp.mu0) - u.f_value(cp.mu1);
  return cp;
}

/// Chart data of the potential u = u_G + f against the Guillemin reference,
/// at the given reference momenta.  Endpoints are handled by their one-sided
/// limits: mu1 = mu0, r = exp(-+2 f'(endpoint)), phi = -f(endpoint).
inline std::vector<ChartPoint> build_chart(const SymplecticPotential& u,
                                           const std::vector<double>& mu0s) {
  using namespace toric_detail;
  const Interval P = u.domain();
  std::vector<ChartPoint> out;
  out.reserve(mu0s.size());
  for (double mu0 : mu0s) {
    ChartPoint cp;
    cp.mu0 = mu0;
    if (mu0 <= P.a) {
      cp.mu1 = P.a;
      cp.r = std::exp(-2.0 * u.f_d1(P.a));
      cp.phi = -u.f_value(P.a);
    } else if (mu0 >= P.b) {
      cp.mu1 = P.b;
      cp.r = std::exp(2.0 * u.f_d1(P.b));
      cp.phi = -u.f_value(P.b);
    } else {
      cp = chart_at_y(u, 0.5 * s_of_mu(P, mu0));
      cp.mu0 = mu0;
    }
    out.push_back(cp);
  }
  return out;
}

/// Monotone correspondence mu -> mu' solving u_dst'(mu') = u_src'(mu).
/// When `gauge` is set (the default for the public operation), both
/// potentials are first gauged at the barycenter, so affine parts are
/// removed and u_dst = u_src + linear yields the identity map.
class LegendreMap {
 public:
  LegendreMap(SymplecticPotential src, SymplecticPotential dst, bool gauge = true)
      : src_(gauge ? src.gauged() : src), dst_(gauge ? dst.gauged() : dst) {}

  double forward(double mu) const {
    const Interval P = src_.domain();
    if (mu <= P.a) return P.a;
    if (mu >= P.b) return P.b;
    const double y = src_.du(mu);
    return toric_detail::mu_of_s(P, toric_detail::solve_chart(dst_, y));
  }

  /// dmu'/dmu = u_src''(mu) / u_dst''(mu') = H_dst(mu') / H_src(mu).
  double derivative(double mu) const {
    const double mup = forward(mu);
    return src_.d2u(mu) / dst_.d2u(mup);
  }

  LegendreMap inverse() const { return LegendreMap(dst_, src_, false); }

  const SymplecticPotential& source() const { return src_; }
  const SymplecticPotential& destination() const { return dst_; }

 private:
  SymplecticPotential src_, dst_;
};

inline LegendreMap legendre_correspondence(const SymplecticPotential& u_src,
                                           const SymplecticPotential& u_dst) {
  u_src.require_admissible();
  u_dst.require_admissible();
  return LegendreMap(u_src, u_dst, /*gauge=*/true);
}

/// Momentum-polytope invariance report (image of the momentum map equals
/// [a,b]; m_phi - m_omega agrees with the torus-invariant derivative of phi
/// through the chart).
struct MomentumImageReport {
  double image_deviation = 0.0;     // endpoint gap of the momentum image
  double relation_deviation = 0.0;  // sup |H0 dphi/dmu0 - (mu1 - mu0)|
  bool image_monotone = true;       // gaps shrink as the probe approaches dP
  double max_deviation() const { return std::max(image_deviation, relation_deviation); }
  bool pass(double tol = 1e-10) const { return image_monotone && max_deviation() <= tol; }
};

inline MomentumImageReport momentum_image_check(const SymplecticPotential& u, double tol = 1e-10) {
  using namespace toric_detail;
  u.require_admissible();
  const Interval P = u.domain();
  MomentumImageReport rep;

  // (i) endpoint limits of the Legendre dual: the phi-momentum image fills
  // the polytope.  Probe reference momenta approaching each endpoint.
  double prev_lo = std::numeric_limits<double>::infinity();
  double prev_hi = std::numeric_limits<double>::infinity();
  for (int k = 4; k <= 13; ++k) {
    const double delta = P.length() * std::pow(10.0, -k);
    const double ya = 0.5 * s_of_mu(P, P.a + delta);
    const double gap_a = P.length() * sigma_of_s(solve_chart(u, ya));
    const double yb = 0.5 * s_of_mu(P, P.b - delta);
    const double gap_b = P.length() * (1.0 - sigma_of_s(solve_chart(u, yb)));
    if (gap_a > prev_lo * (1.0 + 1e-9) || gap_b > prev_hi * (1.0 + 1e-9)) rep.image_monotone = false;
    prev_lo = gap_a;
    prev_hi = gap_b;
  }
  rep.image_deviation = std::max(prev_lo, prev_hi);

  // (ii) <m_phi,xi> = <m_omega,xi> + (d^c phi)(xi): the angular-invariant
  // derivative of phi in the complex coordinate y is mu1 - mu0, so over any
  // chart segment  phi(y + dy) - phi(y) = int (mu1 - mu0) dy'.  Checked on
  // short segments with a Gauss rule (spectrally convergent).
  {
    const double dy = 0.2;
    const int nsub = 8;  // short panels keep the rule convergent even with
                         // poles of the correspondence near the chart
    const Quad1D g = gauss_legendre(24);
    double dev = 0.0;
    for (int k = 0; k < 16; ++k) {
      const double y0 = -2.5 + 5.0 * k / 15.0;
      const double dphi = chart_at_y(u, y0 + dy).phi - chart_at_y(u, y0).phi;
      double integral = 0.0;
      for (int sub = 0; sub < nsub; ++sub) {
        const double lo = y0 + dy * sub / nsub;
        const double len = dy / nsub;
        for (size_t i = 0; i < g.x.size(); ++i) {
          const ChartPoint cp = chart_at_y(u, lo + 0.5 * len * (g.x[i] + 1.0));
          integral += 0.5 * len * g.w[i] * (cp.mu1 - cp.mu0);
        }
      }
      dev = std::max(dev, std::abs(dphi - integral));
    }
    rep.relation_deviation = dev;
  }

  if (!rep.pass(tol))
    throw CheckFailedError("momentum image check failed, max deviation " +
                           std::to_string(rep.max_deviation()));
  return rep;
}

/// Recovers the relative potential of a profile: f'' = 1/H - u_G'' fitted in
/// Chebyshev form, twice antidifferentiated with the barycenter gauge
/// f(mu_c) = f'(mu_c) = 0.
inline ChebSeries relative_potential_from_profile(const MomentumProfile& H, int degree) {
  const Interval P = H.domain();
  const MomentumProfile HG = guillemin_profile(P);
  auto s = [&](double x) {
    // (H_G - H) / (H_G H): both factors vanish to matching order at dP
    return (HG(x) - H(x)) / (HG(x) * H(x));
  };
  ChebSeries f2 = ChebSeries::fit(P, s, degree + 1);
  const double mc = P.midpoint();
  return f2.antiderivative(mc, 0.0).antiderivative(mc, 0.0);
}

}  // namespace wkgeom
