#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "wkgeom/draws.hpp"
#include "wkgeom/geodesic.hpp"

namespace wkgeom {

/// Double-quadrature integration of (vH)'' = -ell w with left-endpoint data
/// (vH)(a) = 0, (vH)'(a) = 2 v(a).  The right-endpoint residuals
/// r1 = |(vH)(b)|, r2 = |(vH)'(b) + 2 v(b)| vanish exactly when ell solves
/// the two boundary-moment equations (invariant I14).
inline ChebSeries integrate_product_profile(Interval P, const AffineFunction& ell,
                                            const WeightFunction& v, const WeightFunction& w,
                                            int degree) {
  const ChebSeries lw =
      ChebSeries::fit(P, [&](double x) { return ell(x) * w.value(x); }, degree + 1);
  const ChebSeries A2 = lw.antiderivative(P.a, 0.0).antiderivative(P.a, 0.0);
  // vH = 2 v(a) (mu - a) - A2
  const double va = v.value(P.a);
  std::vector<double> lin(2, 0.0);
  lin[0] = 2.0 * va * (P.midpoint() - P.a);
  lin[1] = 2.0 * va * 0.5 * P.length();
  ChebSeries vH(P, std::move(lin));
  vH -= A2;
  return vH;
}

/// Relative potential of a solved product profile, going through
/// coefficient-space deflation of the endpoint zeros:
///   vH = (mu-a)(b-mu) g,  f'' = [v/g - (b-a)/2] / ((mu-a)(b-mu)),
/// with both divisions done on coefficients (the pointwise quotient near
/// the boundary would lose ~1/d of the working precision).
inline ChebSeries relative_potential_from_product(Interval P, const ChebSeries& vH,
                                                  const WeightFunction& v, int degree) {
  ChebSeries g = vH.deflate_root(P.a).deflate_root(P.b);
  g *= -1.0;  // (b-mu) = -(mu-b)
  const double half_len = 0.5 * P.length();
  const ChebSeries bracket =
      ChebSeries::fit(P, [&](double x) { return v.value(x) / g(x) - half_len; }, degree + 1);
  ChebSeries f2 = bracket.deflate_root(P.a).deflate_root(P.b);
  f2 *= -1.0;
  const double mc = P.midpoint();
  return f2.antiderivative(mc, 0.0).antiderivative(mc, 0.0);
}

/// Solution of the weighted extremal equation Scal_v(H)/w = ell on the
/// interval.  The T^c-orbit preserves the profile H; only the
/// symplectic-potential gauge moves.
struct ExtremalSolution {
  Interval P;
  MomentumProfile H;
  ChebSeries vH;
  WeightFunction v;
  AffineFunction ell;
  double r1 = 0.0;       // |(vH)(b)|
  double r2 = 0.0;       // |(vH)'(b) + 2 v(b)|
  double min_H = 0.0;    // min of H over interior nodes
  double scale = 1.0;    // max(1, max |vH|)
  int degree = 64;
  int quad_order = 32;

  /// f with barycenter gauge reproducing H (for geodesics through the
  /// solution and the gauge probes).
  ChebSeries relative_potential() const {
    return relative_potential_from_product(P, vH, v, degree);
  }
};

struct ExtremalOptions {
  int quad_order = 32;
  int degree = 64;
  double residual_tol = 1e-10;  // on r1, r2 relative to scale
};

/// Infeasibility signal shared by the solver and its tests.
inline void require_positive_interior(const MomentumProfile& H, int nodes = 289) {
  const double mn = H.interior_min(nodes);
  if (!(mn > 0.0))
    throw NotPositiveError("profile is nonpositive in the interior (min " + std::to_string(mn) +
                           "): no invariant weighted extremal metric of this form");
}

/// ell := the (v,w)-extremal affine function; (vH) by double quadrature of
/// (vH)'' = -ell w; errors: NotPositive when H <= 0 somewhere in the
/// interior (no torus-invariant weighted extremal metric of this form
/// exists for these weights).
inline ExtremalSolution solve_extremal_profile(Interval P, const WeightFunction& v,
                                               const WeightFunction& w,
                                               const ExtremalOptions& opt = {}) {
  if (!v.positive_on_polytope()) throw NotPositiveOnPError("extremal solve needs v > 0 on P");
  if (!w.positive_on_polytope()) throw NotPositiveOnPError("extremal solve needs w > 0 on P");
  const MomentumPolytope poly = MomentumPolytope::interval(P.a, P.b);
  ExtremalSolution sol;
  sol.P = P;
  sol.v = v;
  sol.degree = opt.degree;
  sol.quad_order = opt.quad_order;
  sol.ell = extremal_affine(poly, v, w, opt.quad_order);
  sol.vH = integrate_product_profile(P, sol.ell, v, w, opt.degree);
  sol.r1 = std::abs(sol.vH(P.b));
  sol.r2 = std::abs(sol.vH.derivative()(P.b) + 2.0 * v.value(P.b));
  sol.scale = std::max(1.0, sol.vH.max_abs_coefficient());
  if (sol.r1 > opt.residual_tol * sol.scale || sol.r2 > opt.residual_tol * sol.scale)
    throw CheckFailedError("extremal solver endpoint residuals r1 = " + std::to_string(sol.r1) +
                           ", r2 = " + std::to_string(sol.r2));
  sol.H = MomentumProfile::from_product(P, sol.vH, v);
  sol.min_H = sol.H.interior_min(4 * opt.degree + 33);
  require_positive_interior(sol.H, 4 * opt.degree + 33);
  return sol;
}

struct VerifyResult {
  double residual_sup = 0.0;     // sup |Scal_v(H) - ell w|
  AffineFunction ell_reprojected;
};

/// Residual of the extremal equation with ell recovered by the weighted
/// projection of Scal_v(H) onto affine functions (interior quadrature only,
/// independent of the boundary-moment route).
inline VerifyResult verify_extremal(const MomentumProfile& H, const WeightFunction& v,
                                    const WeightFunction& w, int order = 32) {
  if (!w.positive_on_polytope()) throw NotPositiveOnPError("verify_extremal needs w > 0");
  const Interval P = H.domain();
  const MomentumPolytope poly = MomentumPolytope::interval(P.a, P.b);
  const QuadratureRule rule = quadrature(poly, order);
  auto scal_v = weighted_scalar_curvature(H, v);
  const MomentData md = affine_moments(poly, [&](const Point& p) { return w.value(p); }, rule);
  if (md.singular) throw SingularGramError("weighted Gram matrix singular");
  std::vector<double> rhs(2, 0.0);
  for (size_t i = 0; i < 2; ++i)
    rhs[i] = rule.integrate([&](const Point& p) { return (i == 0 ? 1.0 : p[0]) * scal_v(p[0]); });
  const auto sol = solve_dense(md.gram, rhs);
  VerifyResult out;
  out.ell_reprojected.a = sol[0];
  out.ell_reprojected.b[0] = sol[1];
  double sup = 0.0;
  for (double x : ChebSeries::nodes(P, 257))
    sup = std::max(sup, std::abs(scal_v(x) - out.ell_reprojected(x) * w.value(x)));
  out.residual_sup = sup;
  return out;
}

struct UniquenessConfig {
  int quad_order = 32;
  int degree = 64;
};

struct UniquenessReport {
  std::vector<UniquenessConfig> configs;
  double max_profile_diff = 0.0;   // pairwise sup |H_i - H_j|
  double max_ell_diff = 0.0;       // pairwise coefficient gap of ell
  double gauge_profile_diff = 0.0; // profile change under f -> f + linear
  double gauge_residual_diff = 0.0;
  double gauge_Mrel_diff = 0.0;
  bool pass = false;

  void require() const {
    if (!pass)
      throw UniquenessViolatedError("solver profiles diverge: sup |dH| = " +
                                    std::to_string(max_profile_diff) + ", |d ell| = " +
                                    std::to_string(max_ell_diff));
  }
};

/// Desk-scale uniqueness of the invariant extremal metric modulo T^c:
/// solves across several quadrature/representation configurations and under
/// a linear gauge of the symplectic potential, and asserts the profile (and
/// the relative energy) do not move.
inline UniquenessReport uniqueness_probe(Interval P, const WeightFunction& v,
                                         const WeightFunction& w,
                                         std::vector<UniquenessConfig> configs = {},
                                         double tol_H = 1e-8, double tol_ell = 1e-10) {
  if (configs.empty()) configs = {{24, 48}, {32, 64}, {48, 96}};
  UniquenessReport rep;
  rep.configs = configs;
  std::vector<ExtremalSolution> sols;
  for (const auto& cfg : configs) {
    ExtremalOptions opt;
    opt.quad_order = cfg.quad_order;
    opt.degree = cfg.degree;
    sols.push_back(solve_extremal_profile(P, v, w, opt));
  }
  const auto grid = ChebSeries::nodes(P, 201);
  for (size_t i = 0; i < sols.size(); ++i) {
    for (size_t j = i + 1; j < sols.size(); ++j) {
      double dh = 0.0;
      for (double x : grid) dh = std::max(dh, std::abs(sols[i].H(x) - sols[j].H(x)));
      rep.max_profile_diff = std::max(rep.max_profile_diff, dh);
      rep.max_ell_diff = std::max(rep.max_ell_diff,
                                  std::max(std::abs(sols[i].ell.a - sols[j].ell.a),
                                           std::abs(sols[i].ell.b[0] - sols[j].ell.b[0])));
    }
  }

  // T^c gauge: adding an affine function to the symplectic potential leaves
  // H, the equation residual and the relative energy unchanged.
  const ChebSeries f_sol = sols[0].relative_potential();
  ChebSeries f_gauged = f_sol;
  {
    std::vector<double> c = f_gauged.coefficients();
    if (c.size() < 2) c.resize(2, 0.0);
    c[0] += 0.37;
    c[1] += 0.21;  // T_1 = linear in mu
    f_gauged = ChebSeries(P, std::move(c));
  }
  const MomentumProfile Hs = profile_from_relative_potential(P, f_sol);
  const MomentumProfile Hg = profile_from_relative_potential(P, f_gauged);
  for (double x : grid)
    rep.gauge_profile_diff = std::max(rep.gauge_profile_diff, std::abs(Hs(x) - Hg(x)));
  rep.gauge_residual_diff = std::abs(verify_extremal(Hs, v, w).residual_sup -
                                     verify_extremal(Hg, v, w).residual_sup);
  const EnergyReport es = mabuchi_energy(P, f_sol, v, w, true);
  const EnergyReport eg = mabuchi_energy(P, f_gauged, v, w, true);
  rep.gauge_Mrel_diff = std::abs(es.M_rel - eg.M_rel);

  const double mrel_scale = 1.0 + std::abs(es.M_rel);
  rep.pass = rep.max_profile_diff <= tol_H && rep.max_ell_diff <= tol_ell &&
             rep.gauge_profile_diff <= tol_H && rep.gauge_residual_diff <= 1e-8 &&
             rep.gauge_Mrel_diff <= 1e-8 * mrel_scale;
  return rep;
}

struct SubslopeResult {
  double lhs = 0.0;       // M_{v,w}(f1) - M_{v,w}(f0)
  double rhs = 0.0;       // -d * ||Scal_v(phi0) - c w||_{L2(omega_phi0)}
  double margin = 0.0;    // lhs - rhs
  double distance = 0.0;
  double norm = 0.0;      // ||Scal_v(phi0) - c w||_{L2(omega_phi0)}
  double vol_v = 0.0;
  double rhs_spec_normalized = 0.0;  // -d/vol_v * ||.||_{L2(mu_phi0)} (reported only)
  double rhs_without_c = 0.0;        // norm taken without the c factor (reported only)
  double scale = 1.0;
  bool pass = false;

  void require() const {
    if (!pass)
      throw InequalityViolatedError("sub-slope inequality violated: margin " +
                                    std::to_string(margin));
  }
};

/// Sub-slope bound along the segment f0 -> f1: the asserted inequality is
///   M(f1) - M(f0) >= -d(f0,f1) ||Scal_v(phi0) - c_{v,w} w(m_{phi0})||_{L2(omega_{phi0}^{[n]})},
/// which is scale-invariant under the v -> v/vol_v normalization.  The
/// variants with the volume-normalized measure and without the c factor are
/// reported alongside.
inline SubslopeResult subslope_check(Interval P, const ChebSeries& f0, const ChebSeries& f1,
                                     const WeightFunction& v, const WeightFunction& w,
                                     double tol = 1e-7, const ToricOptions& opt = {}) {
  const MomentumPolytope poly = MomentumPolytope::interval(P.a, P.b);
  SubslopeResult out;
  const EnergyReport rep0 = mabuchi_energy(P, f0, v, w, false, opt);
  const EnergyReport rep1 = mabuchi_energy(P, f1, v, w, false, opt);
  out.lhs = rep1.M - rep0.M;
  out.distance = mabuchi_distance(P, f0, f1, opt);
  out.vol_v = rep0.vol_v;

  const MomentumProfile H0 = profile_from_relative_potential(P, f0);
  auto scal_v = weighted_scalar_curvature(H0, v);
  const double c = rep0.c_vw;
  const Quad1D q = gauss_legendre(P, opt.quad_order);
  const double n2 = kAngularFactor * q.integrate([&](double x) {
    const double F = scal_v(x) - c * w.value(x);
    return F * F;
  });
  const double n2_noc = kAngularFactor * q.integrate([&](double x) {
    const double F = scal_v(x) - w.value(x);
    return F * F;
  });
  out.norm = std::sqrt(std::max(0.0, n2));
  out.rhs = -out.distance * out.norm;
  out.rhs_spec_normalized = -out.distance / out.vol_v * out.norm / std::sqrt(rep0.vol);
  out.rhs_without_c = -out.distance * std::sqrt(std::max(0.0, n2_noc));
  out.margin = out.lhs - out.rhs;
  out.scale = 1.0 + std::max(std::abs(out.lhs), std::abs(out.rhs));
  out.pass = out.margin >= -tol * out.scale;
  return out;
}

struct MinimizationReport {
  double M_rel_solution = 0.0;
  double min_margin = 0.0;  // min over draws of M_rel(f) - M_rel(solution)
  int draws = 0;
  double scan_min_d2 = 0.0;       // I13: min second difference through the solution
  bool scan_argmin_at_center = true;
  bool pass = false;

  void require() const {
    if (!pass)
      throw MinimalityViolatedError("relative Mabuchi energy not minimal at the solution "
                                    "(margin " + std::to_string(min_margin) + ")");
  }
};

/// Minimization witness: M^rel at the solution is below
/// M^rel at seeded random admissible perturbations, and geodesic scans
/// through the solution are convex with their minimum at the solution
/// parameter (invariant I13).
inline MinimizationReport minimization_check(const ExtremalSolution& solution,
                                             const WeightFunction& v, const WeightFunction& w,
                                             int samples, std::uint64_t seed,
                                             double perturb_amp = 0.4,
                                             const ToricOptions& opt = {}) {
  const Interval P = solution.P;
  CounterRng rng(seed);
  const ChebSeries f_sol = solution.relative_potential();
  const EnergyReport rep_sol = mabuchi_energy(P, f_sol, v, w, true, opt);
  MinimizationReport rep;
  rep.M_rel_solution = rep_sol.M_rel;
  rep.draws = samples;
  rep.min_margin = std::numeric_limits<double>::infinity();
  const double tol = 1e-8 * (1.0 + std::abs(rep_sol.M_rel));
  for (int k = 0; k < samples; ++k) {
    ChebSeries delta = random_relative_potential(rng, P, 8, perturb_amp);
    ChebSeries fk = f_sol;
    fk += delta;
    if (!SymplecticPotential(P, fk).is_admissible()) {
      delta *= 0.25;
      fk = f_sol;
      fk += delta;
      if (!SymplecticPotential(P, fk).is_admissible()) continue;
    }
    const EnergyReport ek = mabuchi_energy(P, fk, v, w, true, opt);
    rep.min_margin = std::min(rep.min_margin, ek.M_rel - rep_sol.M_rel);
  }

  // I13: geodesic scans through the solution (convex, minimum at the
  // solution parameter up to one sample)
  rep.scan_min_d2 = std::numeric_limits<double>::infinity();
  double scan_tol = 1e-6;
  for (int s = 0; s < 3; ++s) {
    ChebSeries delta = random_relative_potential(rng, P, 6, 0.5 * perturb_amp);
    ChebSeries fa = f_sol, fb = f_sol;
    fa -= delta;
    fb += delta;
    if (!SymplecticPotential(P, fa).is_admissible() ||
        !SymplecticPotential(P, fb).is_admissible())
      continue;
    const int N = 21;
    std::vector<double> vals(N);
    for (int i = 0; i < N; ++i) {
      const double t = static_cast<double>(i) / (N - 1);
      ChebSeries ft = fb;
      ft -= fa;
      ft *= t;
      ft += fa;
      vals[static_cast<size_t>(i)] = mabuchi_energy(P, ft, v, w, true, opt).M_rel;
    }
    double scan_scale = 1.0;
    for (double x : vals) scan_scale = std::max(scan_scale, 1.0 + std::abs(x));
    scan_tol = std::max(scan_tol, 1e-6 * scan_scale);
    int argmin = 0;
    for (int i = 1; i < N; ++i)
      if (vals[static_cast<size_t>(i)] < vals[static_cast<size_t>(argmin)]) argmin = i;
    if (std::abs(argmin - (N - 1) / 2) > 1) rep.scan_argmin_at_center = false;
    for (int i = 1; i + 1 < N; ++i)
      rep.scan_min_d2 = std::min(rep.scan_min_d2, vals[static_cast<size_t>(i + 1)] -
                                                      2.0 * vals[static_cast<size_t>(i)] +
                                                      vals[static_cast<size_t>(i - 1)]);
  }
  rep.pass = rep.min_margin >= -tol && rep.scan_argmin_at_center && rep.scan_min_d2 >= -scan_tol;
  return rep;
}

}  // namespace wkgeom
