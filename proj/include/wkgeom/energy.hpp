#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "wkgeom/toric.hpp"

namespace wkgeom {

// All X-integrals carry the uniform angular factor (2 pi)^l; distances,
// L^2 norms and volumes use the same factor, so mixed identities (the
// sub-slope bound) are convention-consistent.
inline constexpr double kAngularFactor = 2.0 * M_PI;

/// Fixed reference (1,1)-forms carrying a momentum: the Kahler form itself
/// (m_theta = mu0, density 1) and the Ricci form of the Guillemin reference
/// (m_theta = -H0'/2, density -H0''/2 against dmu0 ^ dtheta).
enum class ThetaForm { Omega, Ricci };

struct ToricOptions {
  int quad_order = 96;   // Gauss order of P-integrals (chart integrands
                         // converge geometrically but need ~3 digits per
                         // 24 nodes; 32 is enough only for moment systems)
  int eps_order = 32;    // Gauss order of the inner transform integrals
  int path_steps = 64;   // Gauss order of path quadratures in t
};

/// d(f0,f1) = sqrt((2 pi) int (f1-f0)^2 dmu): the constant speed of the
/// linear segment u_t = u0 + (1-t) f0 + t f1.
inline double mabuchi_distance(Interval P, const ChebSeries& f0, const ChebSeries& f1,
                               const ToricOptions& opt = {}) {
  const Quad1D q = gauss_legendre(P, opt.quad_order);
  const double s = q.integrate([&](double x) {
    const double d = f1(x) - f0(x);
    return d * d;
  });
  return std::sqrt(kAngularFactor * s);
}

/// c_{v,w} = 2 int_{dP} v dsigma / int_P w dmu, or 1 when int_P w dmu
/// vanishes.  When a profile is supplied, cross-checks the boundary value
/// against int_P Scal_v(H) dmu / int_P w dmu.
inline double c_constant(const MomentumPolytope& P, const WeightFunction& v,
                         const WeightFunction& w, const MomentumProfile* H = nullptr,
                         int order = 0) {
  const QuadratureRule rule = order > 0 ? quadrature(P, order) : default_quadrature(P);
  const double num = 2.0 * rule.integrate_boundary([&](const Point& p) { return v.value(p); });
  const double den = rule.integrate([&](const Point& p) { return w.value(p); });
  const double den_abs = rule.integrate([&](const Point& p) { return std::abs(w.value(p)); });
  if (std::abs(den) < 1e-12 * den_abs) return 1.0;
  const double c = num / den;
  if (H != nullptr) {
    if (P.dim() != 1) throw BadParamsError("profile cross-check needs a 1-D polytope");
    auto scal_v = weighted_scalar_curvature(*H, v);
    const Quad1D q = gauss_legendre(P.as_interval(), std::max(order, 200));
    const double c2 = q.integrate([&](double x) { return scal_v(x); }) / den;
    if (std::abs(c - c2) > 1e-9 * std::max(1.0, std::abs(c)))
      throw CheckFailedError("c-constant boundary/interior mismatch: " + std::to_string(c) +
                             " vs " + std::to_string(c2));
  }
  return c;
}

/// The (v,w)-extremal affine function: the unique affine ell with
/// int_P ell a w dmu = 2 int_{dP} a v dsigma for all affine a (the
/// H-independent value of <Scal_v, a>).
inline AffineFunction extremal_affine(const MomentumPolytope& P, const WeightFunction& v,
                                      const WeightFunction& w, int order = 0) {
  const QuadratureRule rule = order > 0 ? quadrature(P, order) : default_quadrature(P);
  const MomentData md = affine_moments(P, [&](const Point& p) { return w.value(p); }, rule);
  if (md.singular)
    throw SingularGramError("weighted affine Gram matrix is numerically singular");
  const size_t n = static_cast<size_t>(P.dim()) + 1;
  std::vector<double> rhs(n, 0.0);
  for (size_t i = 0; i < n; ++i) {
    rhs[i] = 2.0 * rule.integrate_boundary([&](const Point& p) {
      return (i == 0 ? 1.0 : p[i - 1]) * v.value(p);
    });
  }
  const std::vector<double> sol = solve_dense(md.gram, rhs);
  AffineFunction ell;
  ell.a = sol[0];
  for (int i = 0; i < P.dim(); ++i) ell.b[static_cast<size_t>(i)] = sol[static_cast<size_t>(i) + 1];
  return ell;
}

namespace energy_detail {

inline double theta_density(ThetaForm th, const MomentumProfile& H0, double mu0) {
  return th == ThetaForm::Omega ? 1.0 : -0.5 * H0.d2(mu0);
}
inline double theta_momentum(ThetaForm th, const MomentumProfile& H0, double mu0) {
  return th == ThetaForm::Omega ? mu0 : -0.5 * H0.d1(mu0);
}

struct Chart {
  Quad1D q;
  std::vector<ChartPoint> pts;
};

inline Chart make_chart(Interval P, const ChebSeries& f, const ToricOptions& opt) {
  SymplecticPotential u(P, f);
  u.require_admissible();
  Chart ch;
  ch.q = gauss_legendre(P, opt.quad_order);
  ch.pts = build_chart(u, ch.q.x);
  return ch;
}

inline double Ew_on(const Chart& ch, const WeightFunction& w, const Quad1D& eq) {
  double total = 0.0;
  for (size_t i = 0; i < ch.q.x.size(); ++i) {
    const ChartPoint& cp = ch.pts[i];
    double w01 = 0.0, w11 = 0.0;
    for (size_t k = 0; k < eq.x.size(); ++k) {
      const double e = eq.x[k];
      const double wv = w.value(e * cp.mu1 + (1.0 - e) * cp.mu0);
      w01 += eq.w[k] * e * wv;
      w11 += eq.w[k] * (1.0 - e) * wv;
    }
    total += ch.q.w[i] * cp.phi * (w01 * cp.r + w11);
  }
  return kAngularFactor * total;
}

inline double Ev_theta_on(const Chart& ch, const MomentumProfile& H0, const WeightFunction& v,
                          ThetaForm theta, const Quad1D& eq) {
  double total = 0.0;
  for (size_t i = 0; i < ch.q.x.size(); ++i) {
    const ChartPoint& cp = ch.pts[i];
    double V0 = 0.0, V1 = 0.0, V2 = 0.0;
    for (size_t k = 0; k < eq.x.size(); ++k) {
      const double e = eq.x[k];
      const double m = e * cp.mu1 + (1.0 - e) * cp.mu0;
      V0 += eq.w[k] * v.value(m);
      const double dv = v.d1(m);
      V1 += eq.w[k] * e * dv;
      V2 += eq.w[k] * (1.0 - e) * dv;
    }
    const double rho = theta_density(theta, H0, cp.mu0);
    const double mth = theta_momentum(theta, H0, cp.mu0);
    total += ch.q.w[i] * cp.phi * (V0 * rho + mth * (V1 * cp.r + V2));
  }
  return kAngularFactor * total;
}

inline double Hv_on(const Chart& ch, const WeightFunction& v) {
  double total = 0.0;
  for (size_t i = 0; i < ch.q.x.size(); ++i) {
    const ChartPoint& cp = ch.pts[i];
    total += ch.q.w[i] * std::log(cp.r) * v.value(cp.mu1) * cp.r;
  }
  return kAngularFactor * total;
}

}  // namespace energy_detail

/// E_w by the n = 1 specialization of the extension formula:
/// E_w = int_X phi [ w_{0,1}(m_phi) omega_phi + w_{1,1}(m_phi) omega ],
/// w_{j,1} = int_0^1 e^{1-j}(1-e)^j w(e m_phi + (1-e) m_omega) de with both
/// momenta evaluated at the same chart point.
inline double energy_Ew(Interval P, const ChebSeries& f, const WeightFunction& w,
                        const ToricOptions& opt = {}) {
  using namespace energy_detail;
  const Chart ch = make_chart(P, f, opt);
  return Ew_on(ch, w, gauss_legendre(Interval{0.0, 1.0}, opt.eps_order));
}

/// Path-quadrature oracle for E_w along t -> t phi (fixed chart, the family
/// omega_{t phi} = (1-t) omega + t omega_phi).
inline double energy_Ew_path_oracle(Interval P, const ChebSeries& f, const WeightFunction& w,
                                    const ToricOptions& opt = {}) {
  using namespace energy_detail;
  const Chart ch = make_chart(P, f, opt);
  const Quad1D tq = gauss_legendre(Interval{0.0, 1.0}, opt.path_steps);
  double total = 0.0;
  for (size_t k = 0; k < tq.x.size(); ++k) {
    const double t = tq.x[k];
    double inner = 0.0;
    for (size_t i = 0; i < ch.q.x.size(); ++i) {
      const ChartPoint& cp = ch.pts[i];
      inner += ch.q.w[i] * cp.phi * w.value((1.0 - t) * cp.mu0 + t * cp.mu1) *
               ((1.0 - t) + t * cp.r);
    }
    total += tq.w[k] * inner;
  }
  return kAngularFactor * total;
}

/// E_v^theta by the n = 1 extension formula derived from its first
/// variation: at each chart point, with p = m_phi, q = m_omega,
///   E = int_X phi [ V0 theta + m_theta (V1 omega_phi + V2 omega) ],
///   V0 = int v(ep+(1-e)q) de, V1 = int e v'(.) de, V2 = int (1-e) v'(.) de.
inline double energy_Ev_theta(Interval P, const ChebSeries& f, const WeightFunction& v,
                              ThetaForm theta, const ToricOptions& opt = {}) {
  using namespace energy_detail;
  const Chart ch = make_chart(P, f, opt);
  return Ev_theta_on(ch, guillemin_profile(P), v, theta,
                     gauss_legendre(Interval{0.0, 1.0}, opt.eps_order));
}

/// Path-quadrature oracle for E_v^theta (its defining first variation along
/// t -> t phi).
inline double energy_Ev_theta_path_oracle(Interval P, const ChebSeries& f,
                                          const WeightFunction& v, ThetaForm theta,
                                          const ToricOptions& opt = {}) {
  using namespace energy_detail;
  const Chart ch = make_chart(P, f, opt);
  const MomentumProfile H0 = guillemin_profile(P);
  const Quad1D tq = gauss_legendre(Interval{0.0, 1.0}, opt.path_steps);
  double total = 0.0;
  for (size_t k = 0; k < tq.x.size(); ++k) {
    const double t = tq.x[k];
    double inner = 0.0;
    for (size_t i = 0; i < ch.q.x.size(); ++i) {
      const ChartPoint& cp = ch.pts[i];
      const double m = (1.0 - t) * cp.mu0 + t * cp.mu1;
      const double rho = theta_density(theta, H0, cp.mu0);
      const double mth = theta_momentum(theta, H0, cp.mu0);
      inner += ch.q.w[i] * cp.phi * (v.value(m) * rho + v.d1(m) * mth * ((1.0 - t) + t * cp.r));
    }
    total += tq.w[k] * inner;
  }
  return kAngularFactor * total;
}

/// Entropy H_v = int_X log(omega_phi^n / omega^n) v(m_phi) omega_phi^{[n]}:
/// in the chart, (2 pi) int log(r) v(mu1) r dmu0 with r the density ratio at
/// the same point.
inline double entropy_Hv(Interval P, const ChebSeries& f, const WeightFunction& v,
                         const ToricOptions& opt = {}) {
  using namespace energy_detail;
  const Chart ch = make_chart(P, f, opt);
  return Hv_on(ch, v);
}

/// First variation of E_w along the linear symplectic path u_t = u_f + t g
/// (t-independent: E_w is affine along such paths).
inline double first_variation_Ew(Interval P, const ChebSeries& g, const WeightFunction& w,
                                 const ToricOptions& opt = {}) {
  const Quad1D q = gauss_legendre(P, opt.quad_order);
  return -kAngularFactor * q.integrate([&](double x) { return g(x) * w.value(x); });
}

/// First variation of E_v^theta at f along u_t = u_f + t g.
inline double first_variation_Ev_theta(Interval P, const ChebSeries& f, const ChebSeries& g,
                                       const WeightFunction& v, ThetaForm theta,
                                       const ToricOptions& opt = {}) {
  using namespace energy_detail;
  const Chart ch = make_chart(P, f, opt);
  const MomentumProfile H0 = guillemin_profile(P);
  double total = 0.0;
  for (size_t i = 0; i < ch.q.x.size(); ++i) {
    const ChartPoint& cp = ch.pts[i];
    const double rho = theta_density(theta, H0, cp.mu0);
    const double mth = theta_momentum(theta, H0, cp.mu0);
    total += ch.q.w[i] * (-g(cp.mu1)) * (v.value(cp.mu1) * rho + v.d1(cp.mu1) * mth * cp.r);
  }
  return kAngularFactor * total;
}

/// First variation of M_{v,w} at f along u_t = u_f + t g, reduced to
/// momentum coordinates:
///   dM/dt = (2 pi) int_P g (Scal_v(H_f) - c w) dmu.
inline double first_variation_M(Interval P, const ChebSeries& f, const ChebSeries& g,
                                const WeightFunction& v, const WeightFunction& w, double c,
                                const ToricOptions& opt = {}) {
  const MomentumProfile H = profile_from_relative_potential(P, f);
  auto scal_v = weighted_scalar_curvature(H, v);
  const Quad1D q = gauss_legendre(P, opt.quad_order);
  return kAngularFactor *
         q.integrate([&](double x) { return g(x) * (scal_v(x) - c * w.value(x)); });
}

/// Independent path oracle for the Mabuchi energy: Gauss quadrature in t of
/// the defining first variation along u_t = u0 + t f, using phi_dot = -f(mu)
/// and the momentum-coordinate identity for X-integrals.
inline double mabuchi_path_oracle(Interval P, const ChebSeries& f, const WeightFunction& v,
                                  const WeightFunction& w, int steps = 0,
                                  const ToricOptions& opt = {}) {
  const MomentumPolytope poly = MomentumPolytope::interval(P.a, P.b);
  const double c = c_constant(poly, v, w);
  const Quad1D q = gauss_legendre(P, opt.quad_order);
  const Quad1D tq = gauss_legendre(Interval{0.0, 1.0}, steps > 0 ? steps : opt.path_steps);
  double total = 0.0;
  for (size_t k = 0; k < tq.x.size(); ++k) {
    const double t = tq.x[k];
    ChebSeries ft = f;
    ft *= t;
    const MomentumProfile Ht = profile_from_relative_potential(P, ft);
    auto scal_v = weighted_scalar_curvature(Ht, v);
    total += tq.w[k] *
             q.integrate([&](double x) { return f(x) * (scal_v(x) - c * w.value(x)); });
  }
  return kAngularFactor * total;
}

/// Constant-speed check data: int_X phi_dot^2 omega_t computed through the
/// reference chart (t-independent along linear paths, invariant I7).
inline double path_speed_squared(Interval P, const ChebSeries& f0, const ChebSeries& f1,
                                 double t, const ToricOptions& opt = {}) {
  using namespace energy_detail;
  ChebSeries ft = f1;
  ft *= t;
  ChebSeries f0part = f0;
  f0part *= (1.0 - t);
  ft += f0part;
  const Chart ch = make_chart(P, ft, opt);
  double total = 0.0;
  for (size_t i = 0; i < ch.q.x.size(); ++i) {
    const ChartPoint& cp = ch.pts[i];
    const double g = f1(cp.mu1) - f0(cp.mu1);
    total += ch.q.w[i] * g * g * cp.r;
  }
  return kAngularFactor * total;
}

/// Evaluated functionals at one potential.  The Chen-Tian assembly
/// M = H_v - 2 E_v^Ric + c E_w is re-asserted at construction.
struct EnergyReport {
  double H_v = 0.0;
  double E_vRic = 0.0;
  double E_w = 0.0;
  double c_vw = 0.0;
  AffineFunction ell;
  double M = 0.0;
  double M_rel = std::numeric_limits<double>::quiet_NaN();
  double vol_v = 0.0;
  double vol = 0.0;
  double distance = 0.0;  // d(0, f)
};

/// Assembles the (v,w)-Mabuchi energy by the Chen-Tian decomposition; with
/// `relative`, also M^rel = M_{v, ell_ext w} whose own c-constant equals 1
/// by the defining projection (asserted, not assumed).
inline EnergyReport mabuchi_energy(Interval P, const ChebSeries& f, const WeightFunction& v,
                                   const WeightFunction& w, bool relative = false,
                                   const ToricOptions& opt = {}) {
  using namespace energy_detail;
  const MomentumPolytope poly = MomentumPolytope::interval(P.a, P.b);
  const Chart ch = make_chart(P, f, opt);  // one chart serves every functional
  const Quad1D eq = gauss_legendre(Interval{0.0, 1.0}, opt.eps_order);
  const MomentumProfile H0 = guillemin_profile(P);
  EnergyReport rep;
  rep.H_v = Hv_on(ch, v);
  rep.E_vRic = Ev_theta_on(ch, H0, v, ThetaForm::Ricci, eq);
  rep.E_w = Ew_on(ch, w, eq);
  rep.c_vw = c_constant(poly, v, w, nullptr, opt.quad_order);
  rep.M = rep.H_v - 2.0 * rep.E_vRic + rep.c_vw * rep.E_w;
  const Quad1D q = gauss_legendre(P, opt.quad_order);
  rep.vol_v = kAngularFactor * q.integrate([&](double x) { return v.value(x); });
  rep.vol = kAngularFactor * P.length();
  rep.distance = mabuchi_distance(P, ChebSeries::zero(P), f, opt);
  const double check = rep.H_v - 2.0 * rep.E_vRic + rep.c_vw * rep.E_w;
  if (std::abs(rep.M - check) > 1e-9 * std::max(1.0, std::abs(rep.M)))
    throw CheckFailedError("Chen-Tian assembly inconsistent");
  if (relative) {
    if (!v.positive_on_polytope() || !w.positive_on_polytope())
      throw BadParamsError("relative Mabuchi energy needs v > 0 and w > 0 on P");
    rep.ell = extremal_affine(poly, v, w, opt.quad_order);
    const WeightFunction lw = w.times_affine(rep.ell);
    const double c_rel = c_constant(poly, v, lw, nullptr, opt.quad_order);
    if (std::abs(c_rel - 1.0) > 1e-9)
      throw CheckFailedError("c-constant of (v, ell_ext w) is " + std::to_string(c_rel) +
                             ", expected 1: defect in ell_ext");
    rep.M_rel = rep.H_v - 2.0 * rep.E_vRic + c_rel * Ew_on(ch, lw, eq);
  }
  return rep;
}

}  // namespace wkgeom
