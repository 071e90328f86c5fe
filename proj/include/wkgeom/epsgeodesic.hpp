#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "wkgeom/geodesic.hpp"
#include "wkgeom/linalg.hpp"

namespace wkgeom {

// The elliptic regularization of the geodesic boundary value problem,
// reduced by torus and S^1 invariance to the strip
// (reference momentum, t) in [a,b] x [0,1]:
//
//     D * Phi_tt - H0 (Phi_tmu)^2 = eps,   D = 1 + (H0 Phi_mu)_mu,
//
// where derivatives in mu are at fixed t, H0 is the Guillemin profile of
// the reference (so the lateral boundary needs no data: H0 vanishes there),
// and D is the fiberwise metric density omega_{phi_t}/omega.  Dirichlet
// rows at t = 0,1 carry the endpoint Kahler potentials.  The discrete
// operator is a property-validated approximation device, not an exact
// reduction: its contract is boundary-data exactness, monotonicity in eps
// and consistency with the linear geodesic as eps decreases.

/// Discrete solution of the eps-regularized problem on a tensor grid.
struct EpsGeodesicSolution {
  double eps = 0.0;
  std::vector<double> mu;        // n_mu nodes, includes the endpoints
  std::vector<double> t;         // n_t nodes, includes 0 and 1
  std::vector<double> phi;       // row-major, phi[i * n_mu + j] at (t_i, mu_j)
  std::vector<double> newton_trace;  // max-norm residual per iteration
  bool converged = false;

  double at(size_t i, size_t j) const { return phi[i * mu.size() + j]; }
  double sup_abs() const {
    double m = 0.0;
    for (double v : phi) m = std::max(m, std::abs(v));
    return m;
  }
};

namespace epsgeo_detail {

struct Stencil {
  size_t nm = 0, nt = 0;
  double dmu = 0.0, dt = 0.0;
  std::vector<double> H0, dH0;

  double phi_mu(const std::vector<double>& p, size_t i, size_t j) const {
    const size_t base = i * nm;
    if (j == 0) return (-3.0 * p[base] + 4.0 * p[base + 1] - p[base + 2]) / (2.0 * dmu);
    if (j == nm - 1)
      return (3.0 * p[base + j] - 4.0 * p[base + j - 1] + p[base + j - 2]) / (2.0 * dmu);
    return (p[base + j + 1] - p[base + j - 1]) / (2.0 * dmu);
  }
  double phi_mumu(const std::vector<double>& p, size_t i, size_t j) const {
    if (j == 0 || j == nm - 1) return 0.0;  // multiplied by H0 = 0 on the boundary
    const size_t base = i * nm;
    return (p[base + j + 1] - 2.0 * p[base + j] + p[base + j - 1]) / (dmu * dmu);
  }
  double phi_tt(const std::vector<double>& p, size_t i, size_t j) const {
    return (p[(i + 1) * nm + j] - 2.0 * p[i * nm + j] + p[(i - 1) * nm + j]) / (dt * dt);
  }
  double phi_tmu(const std::vector<double>& p, size_t i, size_t j) const {
    if (j == 0 || j == nm - 1) return 0.0;
    return (p[(i + 1) * nm + j + 1] - p[(i + 1) * nm + j - 1] - p[(i - 1) * nm + j + 1] +
            p[(i - 1) * nm + j - 1]) /
           (4.0 * dt * dmu);
  }
  double density(const std::vector<double>& p, size_t i, size_t j) const {
    return 1.0 + dH0[j] * phi_mu(p, i, j) + H0[j] * phi_mumu(p, i, j);
  }
  double residual(const std::vector<double>& p, size_t i, size_t j, double eps) const {
    const double ptm = phi_tmu(p, i, j);
    return density(p, i, j) * phi_tt(p, i, j) - H0[j] * ptm * ptm - eps;
  }
};

}  // namespace epsgeo_detail

/// Damped-Newton solve of the discretized problem.  Boundary rows are the
/// endpoint potentials exactly; the initial iterate is linear in t.
inline EpsGeodesicSolution epsilon_geodesic(Interval P, const ChebSeries& f0,
                                            const ChebSeries& f1, double eps, int n_mu = 33,
                                            int n_t = 33, int max_iter = 60) {
  if (!(eps > 0.0)) throw BadParamsError("eps must be positive");
  if (n_mu < 16 || n_t < 16) throw BadParamsError("grid must be at least 16 x 16");
  using namespace epsgeo_detail;

  EpsGeodesicSolution sol;
  sol.eps = eps;
  const size_t nm = static_cast<size_t>(n_mu), nt = static_cast<size_t>(n_t);
  sol.mu.resize(nm);
  sol.t.resize(nt);
  for (size_t j = 0; j < nm; ++j) sol.mu[j] = P.a + P.length() * static_cast<double>(j) / (nm - 1);
  for (size_t i = 0; i < nt; ++i) sol.t[i] = static_cast<double>(i) / (nt - 1);

  Stencil st;
  st.nm = nm;
  st.nt = nt;
  st.dmu = sol.mu[1] - sol.mu[0];
  st.dt = sol.t[1] - sol.t[0];
  const MomentumProfile H0 = guillemin_profile(P);
  st.H0.resize(nm);
  st.dH0.resize(nm);
  for (size_t j = 0; j < nm; ++j) {
    st.H0[j] = H0(sol.mu[j]);
    st.dH0[j] = H0.d1(sol.mu[j]);
  }

  // Dirichlet rows from the endpoint Kahler potentials in the reference chart
  SymplecticPotential u0(P, f0), u1(P, f1);
  u0.require_admissible();
  u1.require_admissible();
  const auto c0 = build_chart(u0, sol.mu);
  const auto c1 = build_chart(u1, sol.mu);
  sol.phi.assign(nt * nm, 0.0);
  for (size_t j = 0; j < nm; ++j) {
    sol.phi[j] = c0[j].phi;
    sol.phi[(nt - 1) * nm + j] = c1[j].phi;
  }
  for (size_t i = 1; i + 1 < nt; ++i)
    for (size_t j = 0; j < nm; ++j)
      sol.phi[i * nm + j] = (1.0 - sol.t[i]) * c0[j].phi + sol.t[i] * c1[j].phi;

  const size_t n_unknown = (nt - 2) * nm;
  auto uindex = [&](size_t i, size_t j) -> long long {
    if (i == 0 || i == nt - 1) return -1;  // Dirichlet
    return static_cast<long long>((i - 1) * nm + j);
  };

  auto residual_vec = [&](const std::vector<double>& p, std::vector<double>& R) {
    R.resize(n_unknown);
    for (size_t i = 1; i + 1 < nt; ++i)
      for (size_t j = 0; j < nm; ++j) R[(i - 1) * nm + j] = st.residual(p, i, j, eps);
  };
  auto max_norm = [](const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  };
  auto min_density = [&](const std::vector<double>& p) {
    double mn = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < nt; ++i)
      for (size_t j = 0; j < nm; ++j) mn = std::min(mn, st.density(p, i, j));
    return mn;
  };

  std::vector<double> R;
  residual_vec(sol.phi, R);
  double rnorm = max_norm(R);
  sol.newton_trace.push_back(rnorm);
  const double tol = 1e-11 * (1.0 + eps);
  const size_t band = nm + 1;

  for (int iter = 0; iter < max_iter && rnorm > tol; ++iter) {
    BandedMatrix J(n_unknown, band, band);
    auto add = [&](long long row, size_t ci, size_t cj, double v) {
      const long long col = uindex(ci, cj);
      if (col >= 0) J.add(static_cast<size_t>(row), static_cast<size_t>(col), v);
    };
    for (size_t i = 1; i + 1 < nt; ++i) {
      for (size_t j = 0; j < nm; ++j) {
        const long long row = uindex(i, j);
        const double D = st.density(sol.phi, i, j);
        const double ptt = st.phi_tt(sol.phi, i, j);
        const double ptm = st.phi_tmu(sol.phi, i, j);
        // D * d(phi_tt)
        add(row, i + 1, j, D / (st.dt * st.dt));
        add(row, i, j, -2.0 * D / (st.dt * st.dt));
        add(row, i - 1, j, D / (st.dt * st.dt));
        // phi_tt * dD
        if (j == 0) {
          add(row, i, 0, ptt * st.dH0[j] * (-3.0) / (2.0 * st.dmu));
          add(row, i, 1, ptt * st.dH0[j] * 4.0 / (2.0 * st.dmu));
          add(row, i, 2, ptt * st.dH0[j] * (-1.0) / (2.0 * st.dmu));
        } else if (j == nm - 1) {
          add(row, i, j, ptt * st.dH0[j] * 3.0 / (2.0 * st.dmu));
          add(row, i, j - 1, ptt * st.dH0[j] * (-4.0) / (2.0 * st.dmu));
          add(row, i, j - 2, ptt * st.dH0[j] * 1.0 / (2.0 * st.dmu));
        } else {
          add(row, i, j + 1, ptt * (st.dH0[j] / (2.0 * st.dmu) + st.H0[j] / (st.dmu * st.dmu)));
          add(row, i, j - 1, ptt * (-st.dH0[j] / (2.0 * st.dmu) + st.H0[j] / (st.dmu * st.dmu)));
          add(row, i, j, ptt * (-2.0 * st.H0[j] / (st.dmu * st.dmu)));
        }
        // -2 H0 phi_tmu * d(phi_tmu)
        if (j > 0 && j + 1 < nm) {
          const double cfac = -2.0 * st.H0[j] * ptm / (4.0 * st.dt * st.dmu);
          add(row, i + 1, j + 1, cfac);
          add(row, i + 1, j - 1, -cfac);
          add(row, i - 1, j + 1, -cfac);
          add(row, i - 1, j - 1, cfac);
        }
      }
    }
    std::vector<double> rhs(n_unknown);
    for (size_t k = 0; k < n_unknown; ++k) rhs[k] = -R[k];
    std::vector<double> delta = J.solve(std::move(rhs));

    double lambda = 1.0;
    bool accepted = false;
    std::vector<double> trial = sol.phi;
    for (int ls = 0; ls < 24; ++ls) {
      for (size_t i = 1; i + 1 < nt; ++i)
        for (size_t j = 0; j < nm; ++j)
          trial[i * nm + j] = sol.phi[i * nm + j] + lambda * delta[(i - 1) * nm + j];
      std::vector<double> Rt;
      residual_vec(trial, Rt);
      const double rt = max_norm(Rt);
      if (rt < (1.0 - 1e-4 * lambda) * rnorm && min_density(trial) > 1e-12) {
        sol.phi = trial;
        R = std::move(Rt);
        rnorm = rt;
        accepted = true;
        break;
      }
      lambda *= 0.5;
    }
    sol.newton_trace.push_back(rnorm);
    if (!accepted)
      throw NewtonDivergedError("eps-geodesic Newton stalled at residual " +
                                std::to_string(rnorm) + " (eps = " + std::to_string(eps) + ")");
  }
  if (rnorm > tol)
    throw NewtonDivergedError("eps-geodesic Newton did not converge: residual " +
                              std::to_string(rnorm));
  sol.converged = true;
  if (min_density(sol.phi) <= 0.0)
    throw InadmissibleFiberError("fiberwise metric density nonpositive at a grid node");
  return sol;
}

/// The linear-in-u geodesic sampled on the same grid (for the eps -> 0
/// consistency checks).
inline std::vector<double> linear_geodesic_grid(Interval P, const ChebSeries& f0,
                                                const ChebSeries& f1,
                                                const std::vector<double>& mu,
                                                const std::vector<double>& ts) {
  std::vector<double> out(ts.size() * mu.size());
  ChebSeries g = f1;
  g -= f0;
  for (size_t i = 0; i < ts.size(); ++i) {
    ChebSeries ft = g;
    ft *= ts[i];
    ft += f0;
    SymplecticPotential u(P, ft);
    const auto chart = build_chart(u, mu);
    for (size_t j = 0; j < mu.size(); ++j) out[i * mu.size() + j] = chart[j].phi;
  }
  return out;
}

}  // namespace wkgeom
