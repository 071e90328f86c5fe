#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <algorithm>
#include <functional>
#include <json.hpp>

#include "wkgeom/config.hpp"
#include "wkgeom/draws.hpp"
#include "wkgeom/epsgeodesic.hpp"
#include "wkgeom/extremal.hpp"
#include "wkgeom/geodesic.hpp"
#include "wkgeom/version.hpp"

namespace wkgeom {

/// Machine-readable result of one CLI run: scalar summary (JSON), tabular
/// rows (CSV with a mandatory header, '.' decimal, no locale) and the
/// verdict list.  Deterministic for a fixed (config, seed) on one platform.
struct RunReport {
  std::string command;
  nlohmann::ordered_json summary;
  std::vector<std::string> csv;  // header first
  std::vector<Verdict> verdicts;

  bool all_pass() const {
    for (const auto& v : verdicts)
      if (!v.pass) return false;
    return true;
  }
};

namespace runner_detail {

inline std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline nlohmann::ordered_json verdicts_json(const std::vector<Verdict>& vs) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& v : vs) {
    nlohmann::ordered_json e;
    e["name"] = v.name;
    e["pass"] = v.pass;
    e["margin"] = v.margin;
    if (!v.detail.empty()) e["detail"] = v.detail;
    arr.push_back(e);
  }
  return arr;
}

inline WeightFunction build_weight(const WeightSpec& spec, const MomentumPolytope& P) {
  return make_weight(spec.family, spec.params, P);
}

inline ChebSeries named_potential(const ExperimentConfig& cfg, const std::string& name,
                                  Interval P) {
  if (name.empty()) return ChebSeries::zero(P);
  const auto it = cfg.potentials.find(name);
  if (it == cfg.potentials.end()) throw ConfigError("unknown potential '" + name + "'");
  return ChebSeries(P, it->second);
}

inline nlohmann::ordered_json ell_json(const AffineFunction& ell, int dim) {
  nlohmann::ordered_json j;
  j["a"] = ell.a;
  if (dim == 1) {
    j["b"] = ell.b[0];
  } else {
    j["b"] = {ell.b[0], ell.b[1]};
  }
  return j;
}

inline ToricOptions options_from(const ExperimentConfig& cfg) {
  ToricOptions opt;
  // CLI runs default to a generous rule: chart integrands on aggressive
  // user data converge geometrically but can need a few hundred nodes for
  // the 1e-8-class verdicts
  opt.quad_order = cfg.quad_order > 0 ? cfg.quad_order : 256;
  return opt;
}

inline MomentumPolytope build_polytope(const ExperimentConfig& cfg) {
  if (cfg.is_interval) return MomentumPolytope::interval(cfg.interval.a, cfg.interval.b);
  return MomentumPolytope::build(2, cfg.facets);
}

// --- command bodies ------------------------------------------------------

inline void run_polytope_info(const ExperimentConfig& cfg, RunReport& rep) {
  const MomentumPolytope P = build_polytope(cfg);
  const QuadratureRule rule =
      cfg.quad_order > 0 ? quadrature(P, cfg.quad_order) : default_quadrature(P);
  const WeightFunction v = build_weight(cfg.v, P);
  const WeightFunction w = build_weight(cfg.w, P);
  rep.summary["dim"] = P.dim();
  rep.summary["volume"] = rule.integrate([](const Point&) { return 1.0; });
  rep.summary["boundary_mass"] = rule.integrate_boundary([](const Point&) { return 1.0; });
  rep.summary["c_vw"] = c_constant(P, v, w, nullptr, cfg.quad_order);
  rep.summary["ell"] = ell_json(extremal_affine(P, v, w, cfg.quad_order), P.dim());
  const MomentData md = affine_moments(P, [&](const Point& p) { return w.value(p); }, rule);
  rep.summary["w_mass"] = md.mass;
  rep.summary["w_gram_min_eigenvalue"] = md.min_eigenvalue;
  rep.summary["w_gram_singular"] = md.singular;
  rep.csv.push_back("vertex_index,x,y");
  for (size_t i = 0; i < P.vertices().size(); ++i)
    rep.csv.push_back(std::to_string(i) + "," + fmt(P.vertices()[i][0]) + "," +
                      fmt(P.vertices()[i][1]));
}

inline void run_extremal(const ExperimentConfig& cfg, RunReport& rep, double tol_scale) {
  if (!cfg.is_interval) throw ConfigError("extremal needs an interval polytope");
  const MomentumPolytope poly = build_polytope(cfg);
  const WeightFunction v = build_weight(cfg.v, poly);
  const WeightFunction w = build_weight(cfg.w, poly);
  ExtremalOptions opt;
  if (cfg.quad_order > 0) opt.quad_order = cfg.quad_order;
  opt.degree = cfg.degree;
  const ExtremalSolution sol = solve_extremal_profile(cfg.interval, v, w, opt);
  const VerifyResult ver = verify_extremal(sol.H, v, w, std::max(opt.quad_order, 64));
  rep.summary["c_vw"] = c_constant(poly, v, w, &sol.H, opt.quad_order);
  rep.summary["ell"] = ell_json(sol.ell, 1);
  rep.summary["residual_sup"] = ver.residual_sup;
  rep.summary["r1"] = sol.r1;
  rep.summary["r2"] = sol.r2;
  rep.summary["min_H"] = sol.min_H;
  rep.verdicts.push_back({"extremal-residual", ver.residual_sup <= 1e-9 * sol.scale * tol_scale,
                          1e-9 * sol.scale * tol_scale - ver.residual_sup, ""});
  rep.verdicts.push_back(
      {"abreu-boundary", sol.H.boundary_residual() <= 1e-10 * tol_scale * sol.scale,
       1e-10 * tol_scale * sol.scale - sol.H.boundary_residual(), ""});
  const UniquenessReport uq = uniqueness_probe(cfg.interval, v, w, {}, 1e-8 * tol_scale,
                                               1e-10 * tol_scale);
  rep.summary["uniqueness_profile_diff"] = uq.max_profile_diff;
  rep.summary["gauge_profile_diff"] = uq.gauge_profile_diff;
  rep.verdicts.push_back({"uniqueness-modulo-gauge", uq.pass,
                          1e-8 * tol_scale - uq.max_profile_diff, ""});
  const MinimizationReport mz = minimization_check(sol, v, w, cfg.draws, cfg.seed);
  rep.summary["M_rel_solution"] = mz.M_rel_solution;
  rep.summary["minimization_margin"] = mz.min_margin;
  rep.verdicts.push_back({"relative-energy-minimal", mz.pass, mz.min_margin, ""});
  rep.csv.push_back("mu,H,Scal_v,ell_w");
  auto scal_v = weighted_scalar_curvature(sol.H, v);
  const int n = cfg.samples;
  for (int i = 0; i < n; ++i) {
    const double x =
        cfg.interval.a + cfg.interval.length() * (i + 0.5) / static_cast<double>(n);
    rep.csv.push_back(fmt(x) + "," + fmt(sol.H(x)) + "," + fmt(scal_v(x)) + "," +
                      fmt(sol.ell(x) * w.value(x)));
  }
}

inline void run_energies(const ExperimentConfig& cfg, RunReport& rep, double tol_scale) {
  if (!cfg.is_interval) throw ConfigError("energies needs an interval polytope");
  const MomentumPolytope poly = build_polytope(cfg);
  const WeightFunction v = build_weight(cfg.v, poly);
  const WeightFunction w = build_weight(cfg.w, poly);
  const ChebSeries f = named_potential(cfg, cfg.f, cfg.interval);
  const ToricOptions opt = options_from(cfg);
  const bool rel = v.positive_on_polytope() && w.positive_on_polytope();
  const EnergyReport er = mabuchi_energy(cfg.interval, f, v, w, rel, opt);
  const double oracle = mabuchi_path_oracle(cfg.interval, f, v, w, 0, opt);
  rep.summary["H_v"] = er.H_v;
  rep.summary["E_vRic"] = er.E_vRic;
  rep.summary["E_w"] = er.E_w;
  rep.summary["c_vw"] = er.c_vw;
  rep.summary["M"] = er.M;
  if (rel) {
    rep.summary["M_rel"] = er.M_rel;
    rep.summary["ell"] = ell_json(er.ell, 1);
  }
  rep.summary["vol"] = er.vol;
  rep.summary["vol_v"] = er.vol_v;
  rep.summary["distance"] = er.distance;
  rep.summary["M_path_oracle"] = oracle;
  const double tol = 1e-7 * (1.0 + std::abs(oracle)) * tol_scale;
  rep.verdicts.push_back(
      {"chen-tian-vs-oracle", std::abs(er.M - oracle) <= tol, tol - std::abs(er.M - oracle), ""});
  const MomentumImageReport mi = momentum_image_check(SymplecticPotential(cfg.interval, f),
                                                      1e-10 * tol_scale);
  rep.summary["momentum_image_deviation"] = mi.max_deviation();
  rep.verdicts.push_back({"momentum-polytope-invariance", mi.pass(1e-10 * tol_scale),
                          1e-10 * tol_scale - mi.max_deviation(), ""});
  rep.csv.push_back("name,value");
  rep.csv.push_back("H_v," + fmt(er.H_v));
  rep.csv.push_back("E_vRic," + fmt(er.E_vRic));
  rep.csv.push_back("E_w," + fmt(er.E_w));
  rep.csv.push_back("c_vw," + fmt(er.c_vw));
  rep.csv.push_back("M," + fmt(er.M));
  if (rel) rep.csv.push_back("M_rel," + fmt(er.M_rel));
  rep.csv.push_back("distance," + fmt(er.distance));
}

inline void append_scan_rows(RunReport& rep, const ScanResult& scan) {
  for (const auto& r : scan.rows)
    rep.csv.push_back(fmt(r.t) + "," + fmt(r.E_w) + "," + fmt(r.E_vRic) + "," + fmt(r.H_v) +
                      "," + fmt(r.M) + "," + fmt(r.M_rel) + "," + fmt(r.d2M));
}

inline void run_geodesic_scan(const ExperimentConfig& cfg, RunReport& rep, double tol_scale) {
  if (!cfg.is_interval) throw ConfigError("geodesic-scan needs an interval polytope");
  const MomentumPolytope poly = build_polytope(cfg);
  const WeightFunction v = build_weight(cfg.v, poly);
  const WeightFunction w = build_weight(cfg.w, poly);
  const ChebSeries f0 = named_potential(cfg, cfg.f0, cfg.interval);
  const ChebSeries f1 = named_potential(cfg, cfg.f1, cfg.interval);
  const GeodesicPath path = make_geodesic(cfg.interval, f0, f1);
  const ScanResult scan = scan_energies(path, cfg.samples, v, w, 1e-6 * tol_scale,
                                        1e-8 * tol_scale, 1e-10 * tol_scale, options_from(cfg));
  rep.summary["distance"] = path.speed();
  rep.summary["min_d2M"] = scan.min_d2M;
  rep.summary["scale"] = scan.scale;
  rep.verdicts = scan.verdicts;
  const double speed2 = path.speed() * path.speed();
  const double res = geodesic_residual(path, 5, 21);
  rep.summary["geodesic_residual"] = res;
  rep.verdicts.push_back({"geodesic-equation", res <= 1e-6 * (1.0 + speed2) * tol_scale,
                          1e-6 * (1.0 + speed2) * tol_scale - res, ""});
  const SecondVariation sv =
      second_variation_check(path, 0.5, v, ThetaForm::Omega, 2e-3, options_from(cfg));
  rep.summary["d2E_v_omega"] = sv.closed_form;
  const bool sv_ok = path.speed() == 0.0 ||
                     (sv.closed_form > 0.0 &&
                      std::abs(sv.finite_difference - sv.closed_form) <=
                          1e-5 * sv.closed_form * tol_scale);
  rep.verdicts.push_back({"Ev-omega-strict-convexity", sv_ok,
                          sv.closed_form > 0.0
                              ? 1e-5 * sv.closed_form * tol_scale -
                                    std::abs(sv.finite_difference - sv.closed_form)
                              : sv.closed_form,
                          ""});
  rep.csv.push_back("t,E_w,E_vRic,H_v,M,M_rel,d2M");
  append_scan_rows(rep, scan);
}

inline void run_convexity(const ExperimentConfig& cfg, RunReport& rep, double tol_scale) {
  if (!cfg.is_interval) throw ConfigError("convexity needs an interval polytope");
  const MomentumPolytope poly = build_polytope(cfg);
  const WeightFunction v = build_weight(cfg.v, poly);
  const WeightFunction w = build_weight(cfg.w, poly);
  CounterRng rng(cfg.seed);
  rep.csv.push_back("draw,distance,scale,min_d2M,Ew_chord_margin,pass");
  double worst = std::numeric_limits<double>::infinity();
  bool all = true;
  for (int k = 0; k < cfg.draws; ++k) {
    const ChebSeries f0 = random_relative_potential(rng, cfg.interval, 8, 0.45, 0.30);
    const ChebSeries f1 = random_relative_potential(rng, cfg.interval, 8, 0.45, 0.30);
    const GeodesicPath path = make_geodesic(cfg.interval, f0, f1);
    const ScanResult scan = scan_energies(path, cfg.samples, v, w, 1e-6 * tol_scale,
                                          1e-8 * tol_scale, 1e-10 * tol_scale, options_from(cfg));
    const bool pass = scan.verdicts[0].pass && scan.verdicts[1].pass && scan.verdicts[2].pass;
    all = all && pass;
    worst = std::min(worst, scan.min_d2M / scan.scale);
    rep.csv.push_back(std::to_string(k) + "," + fmt(path.speed()) + "," + fmt(scan.scale) + "," +
                      fmt(scan.min_d2M) + "," + fmt(scan.verdicts[1].margin) + "," +
                      (pass ? "1" : "0"));
  }
  rep.summary["draws"] = cfg.draws;
  rep.summary["worst_normalized_d2M"] = worst;
  rep.verdicts.push_back({"convexity-batch", all, worst + 1e-6 * tol_scale, ""});
}

inline void run_subslope(const ExperimentConfig& cfg, RunReport& rep, double tol_scale) {
  if (!cfg.is_interval) throw ConfigError("subslope needs an interval polytope");
  const MomentumPolytope poly = build_polytope(cfg);
  const WeightFunction v = build_weight(cfg.v, poly);
  const WeightFunction w = build_weight(cfg.w, poly);
  CounterRng rng(cfg.seed);
  rep.csv.push_back("draw,lhs,rhs,margin,distance,norm");
  double worst = std::numeric_limits<double>::infinity();
  double last_distance = 0.0;
  bool all = true;
  for (int k = 0; k < cfg.draws; ++k) {
    const ChebSeries f0 = random_relative_potential(rng, cfg.interval, 8, 0.45, 0.30);
    const ChebSeries f1 = random_relative_potential(rng, cfg.interval, 8, 0.45, 0.30);
    const SubslopeResult res =
        subslope_check(cfg.interval, f0, f1, v, w, 1e-7 * tol_scale, options_from(cfg));
    all = all && res.pass;
    worst = std::min(worst, res.margin / res.scale);
    last_distance = res.distance;
    rep.csv.push_back(std::to_string(k) + "," + fmt(res.lhs) + "," + fmt(res.rhs) + "," +
                      fmt(res.margin) + "," + fmt(res.distance) + "," + fmt(res.norm));
  }
  rep.summary["draws"] = cfg.draws;
  rep.summary["worst_normalized_margin"] = worst;
  rep.summary["distance"] = last_distance;
  rep.verdicts.push_back({"subslope-batch", all, worst + 1e-7 * tol_scale, ""});
}

inline void run_epsgeo(const ExperimentConfig& cfg, RunReport& rep, double tol_scale) {
  if (!cfg.is_interval) throw ConfigError("epsgeo needs an interval polytope");
  const ChebSeries f0 = named_potential(cfg, cfg.f0, cfg.interval);
  const ChebSeries f1 = named_potential(cfg, cfg.f1, cfg.interval);
  std::vector<double> eps = cfg.eps_list;
  std::sort(eps.begin(), eps.end(), std::greater<double>());
  std::vector<EpsGeodesicSolution> sols;
  for (double e : eps) sols.push_back(epsilon_geodesic(cfg.interval, f0, f1, e, cfg.grid_mu, cfg.grid_t));
  const auto lin = linear_geodesic_grid(cfg.interval, f0, f1, sols[0].mu, sols[0].t);
  double scale = 1.0;
  for (const auto& s : sols) scale = std::max(scale, s.sup_abs());

  rep.csv.push_back("eps,sup_abs,dist_to_linear,newton_iterations");
  std::vector<double> dists;
  for (const auto& s : sols) {
    double d = 0.0;
    for (size_t i = 0; i < s.phi.size(); ++i) d = std::max(d, std::abs(s.phi[i] - lin[i]));
    dists.push_back(d);
    rep.csv.push_back(fmt(s.eps) + "," + fmt(s.sup_abs()) + "," + fmt(d) + "," +
                      std::to_string(s.newton_trace.size() - 1));
  }
  double mono_margin = std::numeric_limits<double>::infinity();
  for (size_t k = 0; k + 1 < sols.size(); ++k) {
    double mn = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < sols[k].phi.size(); ++i)
      mn = std::min(mn, sols[k + 1].phi[i] - sols[k].phi[i]);
    mono_margin = std::min(mono_margin, mn);
  }
  double dist_margin = std::numeric_limits<double>::infinity();
  for (size_t k = 0; k + 1 < dists.size(); ++k)
    dist_margin = std::min(dist_margin, dists[k] - dists[k + 1]);
  rep.summary["eps"] = eps;
  rep.summary["distances_to_linear"] = dists;
  const double tol = 1e-8 * scale * tol_scale;
  rep.verdicts.push_back(
      {"eps-monotone", sols.size() < 2 || mono_margin >= -tol, mono_margin + tol, ""});
  rep.verdicts.push_back({"eps-distance-nonincreasing", dists.size() < 2 || dist_margin >= -tol,
                          dist_margin + tol, ""});
}

}  // namespace runner_detail

/// Executes the configured command.  Deterministic given (config, seed).
inline RunReport run(const ExperimentConfig& cfg) {
  using namespace runner_detail;
  if (cfg.command.empty()) throw ConfigError("no command selected");
  RunReport rep;
  rep.command = cfg.command;
  if (cfg.command == "polytope-info") {
    run_polytope_info(cfg, rep);
  } else if (cfg.command == "extremal") {
    run_extremal(cfg, rep, cfg.tol_scale);
  } else if (cfg.command == "energies") {
    run_energies(cfg, rep, cfg.tol_scale);
  } else if (cfg.command == "geodesic-scan") {
    run_geodesic_scan(cfg, rep, cfg.tol_scale);
  } else if (cfg.command == "convexity") {
    run_convexity(cfg, rep, cfg.tol_scale);
  } else if (cfg.command == "subslope") {
    run_subslope(cfg, rep, cfg.tol_scale);
  } else if (cfg.command == "epsgeo") {
    run_epsgeo(cfg, rep, cfg.tol_scale);
  } else {
    throw ConfigError("unknown command '" + cfg.command + "'");
  }
  rep.summary["verdicts"] = verdicts_json(rep.verdicts);
  nlohmann::ordered_json prov;
  prov["config_digest"] = config_digest(cfg.raw_text);
  prov["library_version"] = WKGEOM_VERSION;
  prov["seed"] = cfg.seed;
  prov["quad_order"] = cfg.quad_order > 0 ? cfg.quad_order : ToricOptions{}.quad_order;
  prov["degree"] = cfg.degree;
  rep.summary["provenance"] = prov;
  return rep;
}

/// Writes <command>.csv and <command>_summary.json under out_dir.
inline void write_outputs(const RunReport& rep, const std::string& out_dir) {
  const std::string base = out_dir.empty() ? std::string(".") : out_dir;
  {
    std::ofstream csv(base + "/" + rep.command + ".csv", std::ios::trunc);
    if (!csv) throw Error("cannot write CSV under " + base);
    for (const auto& line : rep.csv) csv << line << "\n";
  }
  {
    std::ofstream js(base + "/" + rep.command + "_summary.json", std::ios::trunc);
    if (!js) throw Error("cannot write JSON summary under " + base);
    js << rep.summary.dump(2) << "\n";
  }
}

}  // namespace wkgeom
