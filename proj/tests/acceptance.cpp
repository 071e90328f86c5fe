// Acceptance suite: one pass/fail line per check, exit 1 on any failure.
// Every tolerance is pinned here; seeds make each check reproducible.

#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "wkgeom/wkgeom.hpp"

using namespace wkgeom;

namespace {

const Interval kP{-1.0, 1.0};
const MomentumPolytope kPoly = MomentumPolytope::interval(-1.0, 1.0);

WeightFunction constant_weight(double value = 1.0) {
  WeightParams wp;
  wp.value = value;
  return make_weight(WeightFamily::Constant, wp, kPoly);
}
WeightFunction exp_weight(double xi) {
  WeightParams wp;
  wp.xi = {xi};
  return make_weight(WeightFamily::Exponential, wp, kPoly);
}
WeightFunction power_weight(double c, double alpha) {
  WeightParams wp;
  wp.xi = {1.0};
  wp.c = c;
  wp.alpha = alpha;
  return make_weight(WeightFamily::Power, wp, kPoly);
}

struct Check {
  std::string name;
  std::function<std::string()> body;  // returns "" on pass, else the failure detail
};

std::string fail(const char* what, double value, double bound) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s: %.3e vs bound %.3e", what, value, bound);
  return buf;
}

// ---------------------------------------------------------------- criteria

std::string criterion_fubini_study() {
  const WeightFunction one = constant_weight();
  const ExtremalSolution sol = solve_extremal_profile(kP, one, one);
  // vH = H = 1 - mu^2 = T_0/2 - T_2/2
  double cerr = 0.0;
  const auto& c = sol.vH.coefficients();
  for (size_t k = 0; k < std::max<size_t>(c.size(), 3); ++k) {
    const double ck = k < c.size() ? c[k] : 0.0;
    const double target = k == 0 ? 0.5 : (k == 2 ? -0.5 : 0.0);
    cerr = std::max(cerr, std::abs(ck - target));
  }
  if (cerr > 1e-10) return fail("coefficient error", cerr, 1e-10);
  const double ell_err = std::max(std::abs(sol.ell.a - 2.0), std::abs(sol.ell.b[0]));
  if (ell_err > 1e-10) return fail("ell error", ell_err, 1e-10);
  return "";
}

std::string criterion_c_constant_branch() {
  const WeightFunction one = constant_weight();
  WeightParams wp;
  wp.xi = {1.0};
  const WeightFunction mu = make_weight(WeightFamily::Affine, wp, kPoly);  // zero mean
  if (c_constant(kPoly, one, mu) != 1.0) return "zero-mean branch did not return exactly 1";
  const double c = c_constant(kPoly, one, one);
  if (std::abs(c - 2.0) > 1e-12) return fail("c(1,1)", std::abs(c - 2.0), 1e-12);
  return "";
}

std::string criterion_chen_tian() {
  CounterRng rng(30001);
  ToricOptions opt;
  opt.quad_order = 320;
  opt.path_steps = 96;
  for (int k = 0; k < 20; ++k) {
    const WeightFunction v = random_weight(rng, kPoly, true, k % 5);
    const WeightFunction w = random_weight(rng, kPoly, k % 2 == 0, (k + 2) % 5);
    const ChebSeries f = random_relative_potential(rng, kP, 8, 0.45, 0.3);
    const EnergyReport rep = mabuchi_energy(kP, f, v, w, false, opt);
    const double Mo = mabuchi_path_oracle(kP, f, v, w, 96, opt);
    const double gap = std::abs(rep.M - Mo);
    if (gap > 1e-7 * (1.0 + std::abs(Mo)))
      return fail(("draw " + std::to_string(k) + " gap").c_str(), gap,
                  1e-7 * (1.0 + std::abs(Mo)));
  }
  return "";
}

std::string criterion_convexity() {
  CounterRng rng(30004);
  const WeightFunction families[3] = {constant_weight(), exp_weight(0.4),
                                      power_weight(1.7, -1.5)};
  ToricOptions opt;
  opt.quad_order = 256;
  for (int k = 0; k < 50; ++k) {
    const WeightFunction& v = families[k % 3];
    const ChebSeries f0 = random_relative_potential(rng, kP, 8, 0.45, 0.3);
    const ChebSeries f1 = random_relative_potential(rng, kP, 8, 0.45, 0.3);
    const GeodesicPath path = make_geodesic(kP, f0, f1);
    const ScanResult scan = scan_energies(path, 41, v, v, 1e-6, 1e-8, 1e-9, opt);
    if (scan.min_d2M < -1e-6 * scan.scale)
      return fail(("draw " + std::to_string(k) + " min d2M").c_str(), scan.min_d2M,
                  -1e-6 * scan.scale);
    if (!scan.verdicts[1].pass)
      return "draw " + std::to_string(k) + ": E_w chord deviation exceeded 1e-8 scale";
    const SecondVariation sv = second_variation_check(path, 0.5, v, ThetaForm::Omega, 2e-3, opt);
    if (!(sv.closed_form > 0.0)) return "d2 E_v^omega not positive on a non-constant path";
    const double gap = std::abs(sv.finite_difference - sv.closed_form);
    if (gap > 1e-5 * sv.closed_form)
      return fail(("draw " + std::to_string(k) + " d2E FD gap").c_str(), gap,
                  1e-5 * sv.closed_form);
  }
  return "";
}

std::string criterion_geodesic_equation() {
  CounterRng rng(30005);
  double bound = 0.0;
  for (int k = 0; k < 5; ++k) {
    const ChebSeries f0 = random_relative_potential(rng, kP, 8, 0.45, 0.3);
    const ChebSeries f1 = random_relative_potential(rng, kP, 8, 0.45, 0.3);
    const GeodesicPath path = make_geodesic(kP, f0, f1);
    const double speed2 = path.speed() * path.speed();
    const double res = geodesic_residual(path, 5, 21);
    bound = 1e-6 * (1.0 + speed2);
    if (res > bound) return fail(("draw " + std::to_string(k) + " residual").c_str(), res, bound);
  }
  // control: u_t = u0 + t^2 f is not a geodesic and exceeds the bound 10x
  const ChebSeries f = random_relative_potential(rng, kP, 6, 0.35, 0.35);
  PathFamily fam;
  fam.f_of_t = [&](double t) {
    ChebSeries ft = f;
    ft *= t * t;
    return ft;
  };
  fam.fdot_of_t = [&](double t) {
    ChebSeries d = f;
    d *= 2.0 * t;
    return d;
  };
  const double res = geodesic_residual_general(kP, fam, 1, 21, 1e-3);
  if (res < 10.0 * bound) return fail("control-path residual (should exceed)", res, 10.0 * bound);
  return "";
}

std::string criterion_subslope() {
  CounterRng rng(30006);
  for (int k = 0; k < 50; ++k) {
    const WeightFunction v = random_weight(rng, kPoly, true, k % 5);
    const WeightFunction w = random_weight(rng, kPoly, k % 3 != 0, (k + 1) % 5);
    const ChebSeries f0 = random_relative_potential(rng, kP, 8, 0.45, 0.3);
    const ChebSeries f1 = random_relative_potential(rng, kP, 8, 0.45, 0.3);
    const SubslopeResult res = subslope_check(kP, f0, f1, v, w);
    if (res.margin < -1e-7 * res.scale)
      return fail(("pair " + std::to_string(k) + " margin").c_str(), res.margin,
                  -1e-7 * res.scale);
  }
  // at the solved cscK profile: vanishing norm and global minimality
  const WeightFunction one = constant_weight();
  const ExtremalSolution sol = solve_extremal_profile(kP, one, one);
  const ChebSeries f_sol = sol.relative_potential();
  for (int k = 0; k < 50; ++k) {
    const ChebSeries f1 = random_relative_potential(rng, kP, 8, 0.5, 0.25);
    const SubslopeResult res = subslope_check(kP, f_sol, f1, one, one);
    if (res.norm > 1e-9) return fail("rhs norm at the solution", res.norm, 1e-9);
    if (res.lhs < -1e-9) return fail("M(f) - M(solution)", res.lhs, -1e-9);
  }
  return "";
}

std::string criterion_uniqueness() {
  for (const WeightFunction& v : {constant_weight(), exp_weight(0.5)}) {
    const UniquenessReport rep = uniqueness_probe(kP, v, v);
    if (rep.max_profile_diff > 1e-8)
      return fail("profile sup-difference", rep.max_profile_diff, 1e-8);
    if (rep.max_ell_diff > 1e-10) return fail("ell difference", rep.max_ell_diff, 1e-10);
    if (rep.gauge_profile_diff > 1e-8)
      return fail("gauge moved the profile", rep.gauge_profile_diff, 1e-8);
    if (rep.gauge_residual_diff > 1e-8)
      return fail("gauge moved the residual", rep.gauge_residual_diff, 1e-8);
    if (!rep.pass) return "uniqueness probe reported failure";
  }
  return "";
}

std::string criterion_eps_geodesics() {
  CounterRng rng(30008);
  const ChebSeries f0 = random_relative_potential(rng, kP, 6, 0.3, 0.4);
  const ChebSeries f1 = random_relative_potential(rng, kP, 6, 0.3, 0.4);
  std::vector<EpsGeodesicSolution> sols;
  for (double eps : {1e-1, 1e-2, 1e-3})
    sols.push_back(epsilon_geodesic(kP, f0, f1, eps, 25, 25));
  double scale = 1.0;
  for (const auto& s : sols) scale = std::max(scale, s.sup_abs());
  for (size_t k = 0; k + 1 < sols.size(); ++k) {
    double mn = 0.0;
    for (size_t i = 0; i < sols[k].phi.size(); ++i)
      mn = std::min(mn, sols[k + 1].phi[i] - sols[k].phi[i]);
    if (mn < -1e-8 * scale) return fail("eps-monotonicity", mn, -1e-8 * scale);
  }
  const auto lin = linear_geodesic_grid(kP, f0, f1, sols[0].mu, sols[0].t);
  double prev = std::numeric_limits<double>::infinity();
  for (const auto& s : sols) {
    double d = 0.0;
    for (size_t i = 0; i < s.phi.size(); ++i) d = std::max(d, std::abs(s.phi[i] - lin[i]));
    if (d > prev * (1.0 + 1e-12)) return fail("distance to linear geodesic increased", d, prev);
    prev = d;
  }
  return "";
}

std::string criterion_invariance_suite() {
  CounterRng rng(30009);
  // I1: weighted Abreu identity at 1e-8
  for (int rep = 0; rep < 10; ++rep) {
    const ChebSeries f = random_relative_potential(rng, kP, 8, 0.45, 0.5);
    const MomentumProfile H = profile_from_relative_potential(kP, f);
    const WeightFunction v = random_weight(rng, kPoly, true, rep % 5);
    auto sv = weighted_scalar_curvature(H, v);
    double sup = 0.0, scale = 1.0;
    for (double x : ChebSeries::nodes(kP, 65)) {
      const double d2 = v.d2(x) * H(x) + 2.0 * v.d1(x) * H.d1(x) + v.value(x) * H.d2(x);
      sup = std::max(sup, std::abs(sv(x) + d2));
      scale = std::max(scale, std::abs(d2));
    }
    const ChebSeries vh = ChebSeries::fit(kP, [&](double x) { return v.value(x) * H(x); }, 256);
    const ChebSeries vh2 = vh.derivative().derivative();
    for (double x : ChebSeries::nodes(kP, 65))
      if (std::abs(x) <= 0.9) sup = std::max(sup, std::abs(sv(x) + vh2(x)));
    if (sup > 1e-8 * (1.0 + scale)) return fail("I1", sup, 1e-8 * (1.0 + scale));
  }
  // I5: H-independence of int Scal_v a dmu at 1e-9
  {
    const WeightFunction v = exp_weight(0.35);
    const QuadratureRule rule = quadrature(kPoly, 200);
    const MomentumProfile HG = guillemin_profile(kP);
    const ChebSeries f = random_relative_potential(rng, kP, 8, 0.45, 0.4);
    const MomentumProfile Hf = profile_from_relative_potential(kP, f);
    for (int i = 0; i < 2; ++i) {
      auto a = [&](double mu) { return i == 0 ? 1.0 : mu; };
      const double rhs =
          2.0 * rule.integrate_boundary([&](const Point& p) { return a(p[0]) * v.value(p); });
      for (const MomentumProfile* H : {&HG, &Hf}) {
        auto sv = weighted_scalar_curvature(*H, v);
        const double lhs = rule.integrate([&](const Point& p) { return sv(p[0]) * a(p[0]); });
        if (std::abs(lhs - rhs) > 1e-9 * (1.0 + std::abs(rhs)))
          return fail("I5", std::abs(lhs - rhs), 1e-9 * (1.0 + std::abs(rhs)));
      }
    }
  }
  // I6/I15: projection vs boundary-moment ell at 1e-9
  {
    const WeightFunction v = exp_weight(0.4);
    const WeightFunction w = power_weight(1.8, 1.2);
    const AffineFunction ref = extremal_affine(kPoly, v, w, 200);
    for (int k = 0; k < 3; ++k) {
      const ChebSeries f = random_relative_potential(rng, kP, 8, 0.4, 0.35);
      const MomentumProfile H = profile_from_relative_potential(kP, f);
      const VerifyResult ver = verify_extremal(H, v, w, 200);
      const double gap = std::max(std::abs(ver.ell_reprojected.a - ref.a),
                                  std::abs(ver.ell_reprojected.b[0] - ref.b[0]));
      if (gap > 1e-9) return fail("I6/I15", gap, 1e-9);
    }
  }
  // I9: first variations vs finite differences at 1e-5 relative
  {
    const ChebSeries f = random_relative_potential(rng, kP, 8, 0.4, 0.35);
    const ChebSeries g = random_relative_potential(rng, kP, 6, 0.3, 0.35);
    const WeightFunction v = exp_weight(0.3);
    WeightParams wp;
    wp.xi = {0.4};
    wp.c = 1.1;
    const WeightFunction w = make_weight(WeightFamily::Affine, wp, kPoly);
    ToricOptions opt;
    opt.quad_order = 240;
    const double c = c_constant(kPoly, v, w);
    const double h = 5e-3;
    auto fd = [&](auto&& F) {
      const double d1 = (F(h) - F(-h)) / (2.0 * h);
      const double d2 = (F(2.0 * h) - F(-2.0 * h)) / (4.0 * h);
      return (4.0 * d1 - d2) / 3.0;
    };
    auto shift = [&](double t) {
      ChebSeries ft = g;
      ft *= t;
      ft += f;
      return ft;
    };
    const double dEw = first_variation_Ew(kP, g, w, opt);
    const double nEw = fd([&](double t) { return energy_Ew(kP, shift(t), w, opt); });
    if (std::abs(dEw - nEw) > 1e-5 * (1.0 + std::abs(dEw)))
      return fail("I9 E_w", std::abs(dEw - nEw), 1e-5 * (1.0 + std::abs(dEw)));
    for (ThetaForm th : {ThetaForm::Omega, ThetaForm::Ricci}) {
      const double dE = first_variation_Ev_theta(kP, f, g, v, th, opt);
      const double nE = fd([&](double t) { return energy_Ev_theta(kP, shift(t), v, th, opt); });
      if (std::abs(dE - nE) > 1e-5 * (1.0 + std::abs(dE)))
        return fail("I9 E_v^theta", std::abs(dE - nE), 1e-5 * (1.0 + std::abs(dE)));
    }
    const double dM = first_variation_M(kP, f, g, v, w, c, opt);
    const double nM = fd([&](double t) { return mabuchi_energy(kP, shift(t), v, w, false, opt).M; });
    if (std::abs(dM - nM) > 1e-5 * (1.0 + std::abs(dM)))
      return fail("I9 M", std::abs(dM - nM), 1e-5 * (1.0 + std::abs(dM)));
  }
  return "";
}

std::string criterion_momentum_image() {
  CounterRng rng(30010);
  for (int k = 0; k < 20; ++k) {
    const ChebSeries f = random_relative_potential(rng, kP, 8, 0.6, 0.15);
    const SymplecticPotential u(kP, f);
    const MomentumImageReport rep = momentum_image_check(u);
    if (rep.max_deviation() > 1e-10) return fail("deviation", rep.max_deviation(), 1e-10);
  }
  return "";
}

}  // namespace

int main() {
  const std::vector<Check> checks = {
      {"fubini-study-closed-form", criterion_fubini_study},
      {"c-constant-branches", criterion_c_constant_branch},
      {"chen-tian-identity", criterion_chen_tian},
      {"mabuchi-convexity", criterion_convexity},
      {"geodesic-equation", criterion_geodesic_equation},
      {"sub-slope-bound", criterion_subslope},
      {"uniqueness-modulo-torus", criterion_uniqueness},
      {"eps-geodesic-family", criterion_eps_geodesics},
      {"invariance-suite", criterion_invariance_suite},
      {"momentum-polytope-invariance", criterion_momentum_image},
  };
  int failures = 0;
  for (size_t i = 0; i < checks.size(); ++i) {
    std::string detail;
    try {
      detail = checks[i].body();
    } catch (const Error& e) {
      detail = std::string("exception: ") + e.what();
    }
    const bool ok = detail.empty();
    failures += ok ? 0 : 1;
    std::printf("[%s] %02zu %-30s%s%s\n", ok ? "PASS" : "FAIL", i + 1, checks[i].name.c_str(),
                ok ? "" : " -- ", detail.c_str());
  }
  return failures == 0 ? 0 : 1;
}
