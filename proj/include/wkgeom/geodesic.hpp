#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "wkgeom/energy.hpp"
#include "wkgeom/verdict.hpp"

namespace wkgeom {

/// Segment in the space of invariant potentials, linear in symplectic
/// potentials: u_t = u0 + (1-t) f0 + t f1.  Convex combinations of strictly
/// convex potentials stay strictly convex, so every u_t is admissible.
class GeodesicPath {
 public:
  GeodesicPath(Interval P, ChebSeries f0, ChebSeries f1)
      : P_(P), f0_(std::move(f0)), f1_(std::move(f1)) {
    SymplecticPotential(P_, f0_).require_admissible();
    SymplecticPotential(P_, f1_).require_admissible();
    g_ = f1_;
    g_ -= f0_;
  }

  const Interval& domain() const { return P_; }
  const ChebSeries& f0() const { return f0_; }
  const ChebSeries& f1() const { return f1_; }
  const ChebSeries& direction() const { return g_; }

  ChebSeries at(double t) const {
    ChebSeries f = g_;
    f *= t;
    f += f0_;
    return f;
  }

  double speed(const ToricOptions& opt = {}) const {
    return mabuchi_distance(P_, f0_, f1_, opt);
  }

 private:
  Interval P_;
  ChebSeries f0_, f1_, g_;
};

inline GeodesicPath make_geodesic(Interval P, const ChebSeries& f0, const ChebSeries& f1) {
  return GeodesicPath(P, f0, f1);
}

/// General t-family of potentials for residual probes: f_of_t gives the
/// relative potential, fdot_of_t its t-derivative.
struct PathFamily {
  std::function<ChebSeries(double)> f_of_t;
  std::function<ChebSeries(double)> fdot_of_t;
};

/// sup_{t,chart} | phi_ddot - |d phi_dot|^2_phi |.  phi_ddot is a central
/// second difference in t at fixed chart point (step h, one Richardson
/// level, the Legendre correspondence re-solved per sample);
/// |d phi_dot|^2 = H_t (u_dot')^2 at the moving momentum.
inline double geodesic_residual_general(Interval P, const PathFamily& path, int t_samples,
                                        int chart_samples, double h = 1e-3) {
  const auto nodes = ChebSeries::nodes(P, chart_samples);
  double sup = 0.0;
  for (int k = 0; k < t_samples; ++k) {
    const double t =
        t_samples == 1 ? 0.5 : 2.0 * h + (1.0 - 4.0 * h) * k / (t_samples - 1.0);
    std::array<std::vector<ChartPoint>, 5> charts;
    for (int m = -2; m <= 2; ++m) {
      SymplecticPotential u(P, path.f_of_t(t + m * h));
      charts[static_cast<size_t>(m + 2)] = build_chart(u, nodes);
    }
    const ChebSeries ft = path.f_of_t(t);
    const ChebSeries udot = path.fdot_of_t(t);
    const ChebSeries dudot = udot.derivative();
    const MomentumProfile Ht = profile_from_relative_potential(P, ft);
    for (size_t i = 0; i < nodes.size(); ++i) {
      const double pm2 = charts[0][i].phi, pm1 = charts[1][i].phi, p0 = charts[2][i].phi,
                   pp1 = charts[3][i].phi, pp2 = charts[4][i].phi;
      const double Dh = (pp1 - 2.0 * p0 + pm1) / (h * h);
      const double D2h = (pp2 - 2.0 * p0 + pm2) / (4.0 * h * h);
      const double phi_ddot = (4.0 * Dh - D2h) / 3.0;
      const double mu_t = charts[2][i].mu1;
      const double grad_sq = Ht(mu_t) * dudot(mu_t) * dudot(mu_t);
      sup = std::max(sup, std::abs(phi_ddot - grad_sq));
    }
  }
  return sup;
}

/// Residual of the geodesic equation phi_ddot = |d phi_dot|^2 on the linear
/// path (analytically zero; the returned value is the finite-difference
/// floor).
inline double geodesic_residual(const GeodesicPath& path, int t_samples = 7,
                                int chart_samples = 33, double h = 1e-3) {
  PathFamily fam;
  fam.f_of_t = [&path](double t) { return path.at(t); };
  fam.fdot_of_t = [&path](double) { return path.direction(); };
  return geodesic_residual_general(path.domain(), fam, t_samples, chart_samples, h);
}

struct ScanRow {
  double t = 0.0;
  double E_w = 0.0;
  double E_vRic = 0.0;
  double H_v = 0.0;
  double M = 0.0;
  double M_rel = std::numeric_limits<double>::quiet_NaN();
  double d2M = std::numeric_limits<double>::quiet_NaN();
};

struct ScanResult {
  std::vector<ScanRow> rows;
  std::vector<Verdict> verdicts;
  double scale = 1.0;       // 1 + max |M| over the scan
  double min_d2M = 0.0;
  void require() const { require_all(verdicts); }
};

/// Samples the functionals along the path and checks: (a) convexity of M
/// (min undivided second difference >= -tol_conv * scale), (b) E_w affine
/// (chord deviation <= tol_affine * scale), (c) constant speed (I7).
/// M_rel is included when both weights are positive on P.
inline ScanResult scan_energies(const GeodesicPath& path, int N, const WeightFunction& v,
                                const WeightFunction& w, double tol_conv = 1e-6,
                                double tol_affine = 1e-8, double tol_speed = 1e-10,
                                const ToricOptions& opt = {}) {
  if (N < 5) throw BadParamsError("scan needs N >= 5");
  const Interval P = path.domain();
  const bool rel = v.positive_on_polytope() && w.positive_on_polytope();
  ScanResult res;
  res.rows.resize(static_cast<size_t>(N));
  std::vector<double> speed2(static_cast<size_t>(N));
  for (int i = 0; i < N; ++i) {
    const double t = static_cast<double>(i) / (N - 1);
    const EnergyReport rep = mabuchi_energy(P, path.at(t), v, w, rel, opt);
    ScanRow& row = res.rows[static_cast<size_t>(i)];
    row.t = t;
    row.E_w = rep.E_w;
    row.E_vRic = rep.E_vRic;
    row.H_v = rep.H_v;
    row.M = rep.M;
    row.M_rel = rep.M_rel;
    ToricOptions sopt = opt;  // the speed check needs the tighter chart rule
    sopt.quad_order = std::max(256, opt.quad_order + 64);
    speed2[static_cast<size_t>(i)] = path_speed_squared(P, path.f0(), path.f1(), t, sopt);
  }
  double maxM = 0.0, maxEw = 0.0;
  for (const auto& r : res.rows) {
    maxM = std::max(maxM, std::abs(r.M));
    maxEw = std::max(maxEw, std::abs(r.E_w));
  }
  res.scale = 1.0 + maxM;
  const double scaleEw = 1.0 + maxEw;

  double min_d2 = std::numeric_limits<double>::infinity();
  double worst_t = 0.0;
  for (int i = 1; i + 1 < N; ++i) {
    const double d2 = res.rows[static_cast<size_t>(i + 1)].M - 2.0 * res.rows[static_cast<size_t>(i)].M +
                      res.rows[static_cast<size_t>(i - 1)].M;
    res.rows[static_cast<size_t>(i)].d2M = d2;
    if (d2 < min_d2) {
      min_d2 = d2;
      worst_t = res.rows[static_cast<size_t>(i)].t;
    }
  }
  res.min_d2M = min_d2;
  res.verdicts.push_back({"convexity-M", min_d2 >= -tol_conv * res.scale,
                          min_d2 + tol_conv * res.scale, "t = " + std::to_string(worst_t)});

  double chord_dev = 0.0;
  for (const auto& r : res.rows) {
    const double chord = (1.0 - r.t) * res.rows.front().E_w + r.t * res.rows.back().E_w;
    chord_dev = std::max(chord_dev, std::abs(r.E_w - chord));
  }
  res.verdicts.push_back({"Ew-affine", chord_dev <= tol_affine * scaleEw,
                          tol_affine * scaleEw - chord_dev, ""});

  double speed_dev = 0.0;
  for (double s : speed2) speed_dev = std::max(speed_dev, std::abs(s - speed2[0]));
  res.verdicts.push_back({"constant-speed", speed_dev <= tol_speed * (1.0 + speed2[0]),
                          tol_speed * (1.0 + speed2[0]) - speed_dev, ""});
  return res;
}

struct SecondVariation {
  double closed_form = 0.0;
  double finite_difference = 0.0;
};

/// d^2/dt^2 E_v^theta at parameter t: closed form
///   (2 pi) int rho_theta(mu0) H_t(mu_t) (g'(mu_t))^2 v(mu_t) dmu0
/// against a Richardson-extrapolated central second difference of the
/// energy.  For theta = omega the closed form is strictly positive on
/// non-constant paths.
inline SecondVariation second_variation_check(const GeodesicPath& path, double t,
                                              const WeightFunction& v, ThetaForm theta,
                                              double h = 2e-3, const ToricOptions& opt = {}) {
  const Interval P = path.domain();
  SecondVariation out;
  t = std::min(std::max(t, 2.0 * h), 1.0 - 2.0 * h);  // keep the FD stencil inside [0,1]

  SymplecticPotential ut(P, path.at(t));
  ut.require_admissible();
  const Quad1D q = gauss_legendre(P, opt.quad_order);
  const auto chart = build_chart(ut, q.x);
  const MomentumProfile H0 = guillemin_profile(P);
  const MomentumProfile Ht = profile_from_relative_potential(P, path.at(t));
  const ChebSeries dg = path.direction().derivative();
  double cf = 0.0;
  for (size_t i = 0; i < q.x.size(); ++i) {
    const double rho = energy_detail::theta_density(theta, H0, chart[i].mu0);
    const double gp = dg(chart[i].mu1);
    cf += q.w[i] * rho * Ht(chart[i].mu1) * gp * gp * v.value(chart[i].mu1);
  }
  out.closed_form = kAngularFactor * cf;

  ToricOptions fopt = opt;  // FD differences need extra digits in E itself
  fopt.quad_order = std::max(192, opt.quad_order);
  auto E = [&](double s) { return energy_Ev_theta(P, path.at(s), v, theta, fopt); };
  const double e0 = E(t);
  const double Dh = (E(t + h) - 2.0 * e0 + E(t - h)) / (h * h);
  const double D2h = (E(t + 2.0 * h) - 2.0 * e0 + E(t - 2.0 * h)) / (4.0 * h * h);
  out.finite_difference = (4.0 * Dh - D2h) / 3.0;
  return out;
}

}  // namespace wkgeom
