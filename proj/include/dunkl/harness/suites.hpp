#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "dunkl/envelope.hpp"
#include "dunkl/harness/config.hpp"
#include "dunkl/harness/parallel.hpp"
#include "dunkl/harness/report.hpp"
#include "dunkl/harness/stats.hpp"
#include "dunkl/identities.hpp"
#include "dunkl/kernel_eval.hpp"
#include "dunkl/lambda.hpp"
#include "dunkl/orbit.hpp"
#include "dunkl/pde/heat_solver.hpp"
#include "dunkl/volume.hpp"

namespace dunkl::harness {

namespace detail {

inline void push_vec(std::vector<std::string>& row, const Vec& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) row.push_back(fmt(v[i]));
}

inline void push_names(std::vector<std::string>& cols, const char* base, int dim) {
  for (int i = 0; i < dim; ++i) cols.push_back(std::string(base) + std::to_string(i));
}

inline json quantiles(const std::vector<double>& v) {
  return {{"q05", quantile(v, 0.05)}, {"q50", quantile(v, 0.5)}, {"q95", quantile(v, 0.95)}};
}

inline json trend_json(const TrendResult& r) {
  return {{"pass", r.pass}, {"tail", r.tail}, {"rest", r.rest}, {"tail_rows", r.tail_rows}};
}

inline json system_json(const RootSystem& rs) {
  json roots = json::array();
  for (const Vec& a : rs.roots) roots.push_back(std::vector<double>(a.data(), a.data() + a.size()));
  return {{"family", to_string(rs.family)}, {"dim", rs.dim},          {"m", rs.polygon},
          {"roots", roots},                 {"positive", rs.positive}, {"mult", rs.mult}};
}

struct Triple {
  Vec x, y;
  double t;
};

inline std::vector<Triple> sweep(const SweepConfig& cfg, int dim) {
  std::mt19937_64 rng(cfg.seed);
  const std::vector<Vec> xs = cfg.x.generate(dim, rng);
  const std::vector<Vec> ys = cfg.y.generate(dim, rng);
  const std::vector<double> ts = cfg.t.generate();
  std::vector<Triple> out;
  for (const Vec& x : xs)
    for (const Vec& y : ys)
      for (double t : ts)
        if ((x - y).squaredNorm() / t <= cfg.max_ratio) out.push_back({x, y, t});
  return out;
}

}  // namespace detail

/// Per-point envelope rows plus the empirical sandwich constants.
struct EnvelopeReport : SuiteResult {
  double log_C_u = -std::numeric_limits<double>::infinity();
  double log_C_l = std::numeric_limits<double>::infinity();
};

/**
 * Theorem-level sandwich: log h minus the log envelope at c_l (lower) and
 * c_u (upper). Closed-form backends sweep x, y, t; the PDE backend sweeps
 * x, t and takes y over the resolvable nodes (or the configured y list).
 */
inline EnvelopeReport run_verify_bounds(const SweepConfig& cfg, int jobs = 1) {
  cfg.validate();
  const RootSystem rs = cfg.system.build();
  if (rs.family == Family::dihedral && cfg.backend != Backend::pde_grid)
    throw ConfigError("verify-bounds: dihedral systems need the pde_grid backend");
  const KernelEval K(cfg.backend, rs, cfg.pde);
  const ReflectionGroup& grp = K.group();
  const LambdaMode mode = rs.family == Family::dihedral ? LambdaMode::dihedral : LambdaMode::dp;
  const bool pde = cfg.backend == Backend::pde_grid;

  EnvelopeReport rep;
  rep.suite = "verify_bounds";
  rep.config_echo = echo(cfg);
  rep.config_echo["root_system"] = detail::system_json(rs);

  std::vector<detail::Triple> pts;
  std::vector<double> pde_lh;
  std::mt19937_64 rng(cfg.seed);
  if (!pde) {
    pts = detail::sweep(cfg, rs.dim);
  } else {
    const std::vector<Vec> xs = cfg.x.generate(2, rng);
    const std::vector<Vec> ys = cfg.y.generate(2, rng);
    for (const Vec& xr : xs)
      for (double t : cfg.t.generate()) {
        const pde::KernelEstimate& est = K.pde_estimate(xr, t);
        const pde::PolarGrid& g = K.pde_grid(xr, t);
        const Vec x = g.point(est.x0_node);
        const double umax = *std::max_element(est.state.u.begin(), est.state.u.end());
        if (ys.empty()) {
          for (int n = 0; n < g.size(); ++n)
            if (est.state.u[n] > cfg.pde.approx.bulk_fraction * umax &&
                (x - g.point(n)).squaredNorm() / t <= cfg.max_ratio)
            {
              pts.push_back({x, g.point(n), t});
              pde_lh.push_back(std::log(est.state.u[n]));
            }
        } else {
          for (const Vec& y : ys)
            if ((x - y).squaredNorm() / t <= cfg.max_ratio) {
              pts.push_back({x, y, t});
              pde_lh.push_back(std::log(g.interpolate(est.state.u, y)));
            }
        }
      }
  }

  struct Row {
    double log_h, d, log_lam, log_v, lower, upper;
    int n;
    bool wall;
  };
  std::vector<Row> rows(pts.size());
  parallel_for(pts.size(), pde ? 1 : jobs, [&](std::size_t i) {
    const auto& [x, y, t] = pts[i];
    Row r;
    r.log_h = pde ? pde_lh[i] : K.log_h(x, y, t);
    r.d = orbit_distance(rs, grp, x, y).d;
    r.n = reflection_count(rs, grp, x, y);
    r.log_lam = std::log(mode == LambdaMode::dp ? lambda_dp(rs, grp, x, y, t) : lambda_dihedral(rs, grp, x, y, t));
    r.log_v = log_volume_comparable(rs, x, std::sqrt(t));
    r.lower = r.log_h - log_envelope(rs, grp, x, y, t, cfg.c_l, mode);
    r.upper = r.log_h - log_envelope(rs, grp, x, y, t, cfg.c_u, mode);
    r.wall = wall_adjacent(rs, x) || wall_adjacent(rs, y);
    rows[i] = r;
  });

  auto& cols = rep.table.columns;
  cols = {"backend"};
  detail::push_names(cols, "x", rs.dim);
  detail::push_names(cols, "y", rs.dim);
  for (const char* c : {"t", "h", "log_h", "d", "n", "log_lambda", "log_V", "lower_ratio", "upper_ratio", "wall"})
    cols.push_back(c);

  Extremes lo, up;
  std::vector<double> key, lower, upper;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Row& r = rows[i];
    const auto& p = pts[i];
    std::vector<std::string> row{to_string(cfg.backend)};
    detail::push_vec(row, p.x);
    detail::push_vec(row, p.y);
    for (double v : {p.t, std::exp(r.log_h), r.log_h, r.d}) row.push_back(fmt(v));
    row.push_back(std::to_string(r.n));
    for (double v : {r.log_lam, r.log_v, r.lower, r.upper}) row.push_back(fmt(v));
    row.push_back(r.wall ? "1" : "0");
    rep.table.rows.push_back(std::move(row));
    lo.add(r.lower);
    up.add(r.upper);
    key.push_back((p.x - p.y).squaredNorm() / p.t);
    lower.push_back(r.lower);
    upper.push_back(r.upper);
  }

  rep.check("finite", lo.all_finite && up.all_finite);
  const TrendResult tu = trend_test(key, upper, true), tl = trend_test(key, lower, false);
  rep.check("trend_upper", tu.pass);
  rep.check("trend_lower", tl.pass);
  rep.constants["rows"] = rows.size();
  if (!rows.empty()) {
    rep.log_C_u = up.max;
    rep.log_C_l = lo.min;
    rep.constants["C_u"] = std::exp(up.max);
    rep.constants["C_l"] = std::exp(lo.min);
    rep.constants["log_C_u"] = up.max;
    rep.constants["log_C_l"] = lo.min;
    rep.constants["upper_quantiles"] = detail::quantiles(upper);
    rep.constants["lower_quantiles"] = detail::quantiles(lower);
    rep.constants["trend_upper"] = detail::trend_json(tu);
    rep.constants["trend_lower"] = detail::trend_json(tl);
    if (pde) {
      const double band = std::exp(up.max - lo.min);
      rep.constants["band_C_u_over_C_l"] = band;
      rep.constants["band_label"] = "solver-limited";
      rep.check("solver_limited_band", band <= cfg.pde_run.band_limit);
    }
  }
  return rep;
}

/// Heat-equation, basic-identity, mass, semigroup residuals and the inequality families.
inline SuiteResult run_identity_suite(const SweepConfig& cfg, int jobs = 1) {
  cfg.validate();
  if (cfg.system.family != Family::product_a1 ||
      (cfg.backend != Backend::closed_form_product && cfg.backend != Backend::rosler_rank1))
    throw ConfigError("identities: needs a product_a1 system with a closed-form backend");
  const IdentityOptions& io = cfg.identities;

  std::vector<std::vector<double>> systems;
  if (cfg.system.n == 1 && !io.k_values.empty()) {
    for (double k : io.k_values) systems.push_back({k});
  } else {
    systems.push_back(cfg.system.k);
  }
  const int dim = cfg.system.n;

  SuiteResult rep;
  rep.suite = "identities";
  rep.config_echo = echo(cfg);
  rep.table.columns = {"check", "k"};
  detail::push_names(rep.table.columns, "x", dim);
  detail::push_names(rep.table.columns, "y", dim);
  for (const char* c : {"t", "param", "value"}) rep.table.columns.push_back(c);

  struct Fam {
    Extremes ext;
    std::vector<double> key, val;
  };
  std::map<std::string, Fam> fams;
  auto emit = [&](const std::string& check, const std::string& klab, const Vec& x, const Vec& y, double t,
                  double param, double value, double key) {
    std::vector<std::string> row{check, klab};
    detail::push_vec(row, x);
    detail::push_vec(row, y);
    for (double v : {t, param, value}) row.push_back(fmt(v));
    rep.table.rows.push_back(std::move(row));
    Fam& f = fams[check];
    f.ext.add(value);
    f.key.push_back(key);
    f.val.push_back(value);
  };

  const Vec dir = Vec::Ones(dim) / std::sqrt(static_cast<double>(dim));
  double max_td = 0.0, max_basic = 0.0, max_mass = 0.0, max_semi = 0.0;
  std::size_t sweep_rows = 0;

  for (const auto& ks : systems) {
    const RootSystem rs = build_product_a1(dim, ks);
    const KernelEval K(cfg.backend, rs);
    std::string klab;
    for (std::size_t i = 0; i < ks.size(); ++i) klab += (i ? ";" : "") + fmt(ks[i]);
    const std::vector<detail::Triple> pts = detail::sweep(cfg, dim);
    sweep_rows += pts.size();

    struct Row {
      double td = 0, basic = 0;
      LogRatios gauss, rec;
      double decay = 0;
      std::vector<double> h0, h1, small;
    };
    std::vector<Row> rows(pts.size());
    parallel_for(pts.size(), jobs, [&](std::size_t i) {
      const auto& [x, y, t] = pts[i];
      Row r;
      r.td = check_time_derivative(K, x, y, t).relative();
      if (dim == 1) r.basic = check_basic_identity(ks[0], x[0], y[0], t).relative();
      r.gauss = gaussian_log_ratios(K, x, y, t, cfg.c_l, cfg.c_u);
      r.rec = recursion_log_ratios(K, x, y, t, cfg.c_l, io.c1);
      r.decay = decay_log_ratio(K, x, y, t, cfg.c_u);
      for (double s : io.shifts) {
        const Vec yp = y + s * std::sqrt(t) * dir;
        r.h0.push_back(holder_quotient(K, 0, x, y, yp, t, io.c4));
        r.h1.push_back(holder_quotient(K, 1, x, y, yp, t, io.c4));
        r.small.push_back(small_shift_log_ratio(K, x, y, yp, t, io.c5));
      }
      rows[i] = std::move(r);
    });

    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto& [x, y, t] = pts[i];
      const Row& r = rows[i];
      const double key = (x - y).squaredNorm() / t;
      max_td = std::max(max_td, r.td);
      emit("time_derivative", klab, x, y, t, 0.0, r.td, key);
      if (dim == 1) {
        max_basic = std::max(max_basic, r.basic);
        emit("basic_identity", klab, x, y, t, 0.0, r.basic, key);
      }
      emit("gaussian_lower", klab, x, y, t, cfg.c_l, r.gauss.lower, key);
      emit("gaussian_upper", klab, x, y, t, cfg.c_u, r.gauss.upper, key);
      emit("recursion_lower", klab, x, y, t, cfg.c_l, r.rec.lower, key);
      emit("recursion_upper", klab, x, y, t, io.c1, r.rec.upper, key);
      emit("decay_upper", klab, x, y, t, cfg.c_u, r.decay, key);
      for (std::size_t s = 0; s < io.shifts.size(); ++s) {
        emit("holder_m0", klab, x, y, t, io.shifts[s], std::log(r.h0[s]), key);
        emit("holder_m1", klab, x, y, t, io.shifts[s], std::log(r.h1[s]), key);
        emit("small_shift", klab, x, y, t, io.shifts[s], r.small[s], key);
      }
    }

    if (dim == 1) {
      std::mt19937_64 rng(cfg.seed);
      const std::vector<Vec> xs = cfg.x.generate(1, rng);
      const std::vector<double> ts = cfg.t.generate();
      for (const Vec& x : xs) {
        if (x[0] == 0.0) continue;
        for (double t : ts)
          for (int sigma : {1, -1}) {
            const double v = measure_log_ratio(ks[0], x[0], sigma, t);
            const Vec y = Vec::Constant(1, sigma * x[0]);
            // One family per sigma, keyed on log t so both ends of the range are tested.
            const std::string name = sigma == 1 ? "measure_id" : "measure_minus_id";
            emit(name, klab, x, y, t, sigma, v, std::log(t));
          }
      }
    }

    std::vector<std::vector<double>> mp = io.mass_points, sp = io.semigroup_points;
    if (!pts.empty() && mp.empty()) {
      mp = dim == 1 ? std::vector<std::vector<double>>{{2.0, 0.5}, {-0.7, 1.3}}
                    : std::vector<std::vector<double>>{{0.8, -0.5, 0.6}};
    }
    if (!pts.empty() && sp.empty()) {
      sp = dim == 1 ? std::vector<std::vector<double>>{{0.7, -1.2, 0.25, 0.25}, {1.5, 0.3, 0.1, 0.6}}
                    : std::vector<std::vector<double>>{{0.6, -0.4, -0.5, 0.9, 0.3, 0.4}};
    }
    if (dim <= 2) {
      const std::optional<ProductKernel> PK = dim == 2 ? std::optional<ProductKernel>(ks) : std::nullopt;
      for (const auto& p : mp) {
        if (static_cast<int>(p.size()) != dim + 1) throw ConfigError("mass_points entries need N + 1 values");
        const Vec x = Eigen::Map<const Vec>(p.data(), dim);
        const double m = dim == 1 ? mass_1d(ks[0], x[0], p[dim]) : mass_plane(*PK, x, p[dim]);
        max_mass = std::max(max_mass, std::abs(m - 1.0));
        std::vector<std::string> row{"mass", klab};
        detail::push_vec(row, x);
        detail::push_vec(row, x);
        for (double v : {p[dim], 0.0, m}) row.push_back(fmt(v));
        rep.table.rows.push_back(std::move(row));
      }
      for (const auto& p : sp) {
        if (static_cast<int>(p.size()) != 2 * dim + 2)
          throw ConfigError("semigroup_points entries need 2N + 2 values");
        const Vec x = Eigen::Map<const Vec>(p.data(), dim), y = Eigen::Map<const Vec>(p.data() + dim, dim);
        const double s = p[2 * dim], t = p[2 * dim + 1];
        const double lhs = dim == 1 ? semigroup_1d(ks[0], x[0], y[0], s, t) : semigroup_plane(*PK, x, y, s, t);
        const double rhs = K.h(x, y, s + t);
        const double rel = std::abs(lhs - rhs) / rhs;
        max_semi = std::max(max_semi, rel);
        std::vector<std::string> row{"semigroup", klab};
        detail::push_vec(row, x);
        detail::push_vec(row, y);
        for (double v : {s + t, s, rel}) row.push_back(fmt(v));
        rep.table.rows.push_back(std::move(row));
      }
    }
  }

  rep.residuals = {{"time_derivative", max_td},
                   {"basic_identity", max_basic},
                   {"mass", max_mass},
                   {"semigroup", max_semi}};
  rep.check("time_derivative", max_td < io.residual_tol);
  rep.check("basic_identity", max_basic < io.residual_tol);
  rep.check("mass", max_mass < io.quad_tol);
  rep.check("semigroup", max_semi < io.quad_tol);

  bool finite = true;
  for (auto& [name, f] : fams) {
    finite = finite && f.ext.all_finite;
    if (name == "time_derivative" || name == "basic_identity") continue;
    json c = {{"min", f.ext.count ? f.ext.min : 0.0}, {"max", f.ext.count ? f.ext.max : 0.0},
              {"quantiles", detail::quantiles(f.val)}};
    const bool lower = name.find("lower") != std::string::npos;
    const bool upper = !lower && name.rfind("measure", 0) != 0;
    if (lower) {
      const TrendResult tr = trend_test(f.key, f.val, false);
      c["trend"] = detail::trend_json(tr);
      rep.check("trend_" + name, tr.pass);
    } else if (upper) {
      const TrendResult tr = trend_test(f.key, f.val, true);
      c["trend"] = detail::trend_json(tr);
      rep.check("trend_" + name, tr.pass);
    } else {
      // Band across t: no escape at either end, in either direction.
      std::vector<double> neg(f.key.size());
      std::transform(f.key.begin(), f.key.end(), neg.begin(), [](double v) { return -v; });
      const bool ok = trend_test(f.key, f.val, true).pass && trend_test(f.key, f.val, false).pass &&
                      trend_test(neg, f.val, true).pass && trend_test(neg, f.val, false).pass;
      c["band"] = f.ext.count ? std::exp(std::max(f.ext.max, -f.ext.min)) : 1.0;
      rep.check("band_" + name, ok);
    }
    rep.constants[name] = c;
  }
  rep.check("finite", finite);
  rep.constants["sweep_rows"] = sweep_rows;
  return rep;
}

/// Lambda by DP against brute-force enumeration, the t-scaling sandwich, and Lambda vs Lambda_D.
inline SuiteResult run_lambda_crosscheck(const SweepConfig& cfg, int jobs = 1) {
  cfg.validate();
  const RootSystem rs = cfg.system.build();
  const ReflectionGroup grp = generate_group(rs);
  const LambdaOptions& lo = cfg.lambda;
  const bool dihedral = rs.family == Family::dihedral;
  if (!(lo.scale_c >= 1.0)) throw ConfigError("lambda.scale_c must be >= 1");

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> ux(lo.lo, lo.hi), ut(lo.t_lo_exp, lo.t_hi_exp);
  std::vector<detail::Triple> pts;
  for (int i = 0; i < lo.triples; ++i) {
    Vec x(rs.dim), y(rs.dim);
    for (int d = 0; d < rs.dim; ++d) x[d] = ux(rng);
    for (int d = 0; d < rs.dim; ++d) y[d] = ux(rng);
    pts.push_back({x, y, std::pow(10.0, ut(rng))});
  }

  struct Row {
    double d, dp, brute, rel, full, full_ct, lam_d, lv;
    int n;
    bool scale_ok;
  };
  std::vector<Row> rows(pts.size());
  const double c = lo.scale_c;
  const double low_factor = std::pow(c, -2.0 * grp.order());
  parallel_for(pts.size(), jobs, [&](std::size_t i) {
    const auto& [x, y, t] = pts[i];
    Row r;
    r.d = orbit_distance(rs, grp, x, y).d;
    r.n = reflection_count(rs, grp, x, y);
    r.dp = lambda_dp(rs, grp, x, y, t, lo.max_len);
    r.brute = lambda_bruteforce(rs, grp, x, y, t, lo.max_len);
    r.rel = std::abs(r.dp - r.brute) / std::max(std::abs(r.brute), std::numeric_limits<double>::min());
    r.full = lambda_dp(rs, grp, x, y, t);
    r.full_ct = lambda_dp(rs, grp, x, y, c * t);
    const double slack = 1e-12;
    r.scale_ok = low_factor * r.full_ct <= r.full * (1 + slack) && r.full <= r.full_ct * (1 + slack);
    r.lam_d = dihedral ? lambda_dihedral(rs, grp, x, y, t) : 0.0;
    r.lv = log_volume_comparable(rs, x, std::sqrt(t));
    rows[i] = r;
  });

  SuiteResult rep;
  rep.suite = "lambda_check";
  rep.config_echo = echo(cfg);
  rep.config_echo["root_system"] = detail::system_json(rs);
  auto& cols = rep.table.columns;
  detail::push_names(cols, "x", rs.dim);
  detail::push_names(cols, "y", rs.dim);
  for (const char* s : {"t", "d", "n", "lambda_dp", "lambda_bruteforce", "rel_diff", "lambda_full", "lambda_full_ct"})
    cols.push_back(s);
  if (dihedral) cols.push_back("lambda_dihedral");
  cols.push_back("volume_comparable");
  cols.push_back("wall");

  double max_rel = 0.0;
  std::size_t scale_fail = 0;
  Extremes band;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Row& r = rows[i];
    std::vector<std::string> row;
    detail::push_vec(row, pts[i].x);
    detail::push_vec(row, pts[i].y);
    row.push_back(fmt(pts[i].t));
    row.push_back(fmt(r.d));
    row.push_back(std::to_string(r.n));
    for (double v : {r.dp, r.brute, r.rel, r.full, r.full_ct}) row.push_back(fmt(v));
    if (dihedral) row.push_back(fmt(r.lam_d));
    row.push_back(fmt(std::exp(r.lv)));
    row.push_back(wall_adjacent(rs, pts[i].x) || wall_adjacent(rs, pts[i].y) ? "1" : "0");
    rep.table.rows.push_back(std::move(row));
    max_rel = std::max(max_rel, r.rel);
    if (!r.scale_ok) ++scale_fail;
    if (dihedral) band.add(std::log(r.full / r.lam_d));
  }
  rep.residuals["dp_vs_bruteforce"] = max_rel;
  rep.constants["scale_violations"] = scale_fail;
  rep.constants["group_order"] = grp.order();
  if (dihedral && band.count) {
    rep.constants["log_lambda_over_lambda_dihedral"] = {{"min", band.min}, {"max", band.max}};
    rep.check("lambda_dihedral_finite", band.all_finite);
  }
  rep.check("dp_vs_bruteforce", max_rel <= lo.tol);
  rep.check("scaling", scale_fail == 0);
  return rep;
}

/// Single PDE kernel run with snapshots, diagnostics, and the envelope band on the bulk.
inline SuiteResult run_pde(const SweepConfig& cfg) {
  cfg.validate();
  const RootSystem rs = cfg.system.build();
  if (rs.family != Family::dihedral) throw ConfigError("pde-run: needs a dihedral system (m = 2 gives the product layout)");
  const PdeRunOptions& po = cfg.pde_run;
  if (po.x0.size() != 2) throw ConfigError("pde.x0 must have two coordinates");
  const Vec x0r = Eigen::Map<const Vec>(po.x0.data(), 2);
  const double R = po.r_max > 0.0 ? po.r_max : x0r.norm() + cfg.pde.pad * std::sqrt(po.t);
  const double ko = rs.mult[rs.polygon > 1 ? 1 : 0];
  const pde::HeatSolver solver(pde::build_grid(rs.polygon, cfg.pde.q, cfg.pde.n_r, R, rs.mult[0], ko));
  const pde::PolarGrid& g = solver.grid();
  const int node = g.nearest_node(x0r);
  const Vec x0 = g.point(node);
  const double t_init = std::min(cfg.pde.t_init, 0.5 * po.t);

  SuiteResult rep;
  rep.suite = "pde_run";
  rep.config_echo = echo(cfg);
  rep.config_echo["root_system"] = detail::system_json(rs);
  rep.table.columns = {"t", "r", "theta", "x", "y", "u"};
  auto dump = [&](const pde::HeatState& s) {
    for (int n = 0; n < g.size(); ++n) {
      const Vec p = g.point(n);
      rep.table.rows.push_back({fmt(s.time), fmt(g.r[g.ring(n)]), fmt((g.spoke(n) + 0.5) * g.dtheta), fmt(p[0]),
                                fmt(p[1]), fmt(s.u[n])});
    }
  };

  std::vector<double> snaps;
  for (double s : po.snapshots)
    if (s > 0.5 * t_init && s < po.t) snaps.push_back(s);
  std::sort(snaps.begin(), snaps.end());
  if (!snaps.empty()) {
    pde::HeatState s = solver.make_state(pde::kernel_surrogate(g, node, 0.5 * t_init), 0.5 * t_init);
    for (double ts : snaps) {
      s = solver.evolve(std::move(s), ts);
      dump(s);
    }
  }

  rep.constants["x0_node"] = {x0[0], x0[1]};
  rep.constants["grid"] = {{"q", g.q}, {"n_r", g.n_r}, {"n_theta", g.n_theta}, {"R_max", g.R_max}};
  pde::KernelEstimate est;
  try {
    est = pde::approximate_kernel(solver, node, po.t, t_init, cfg.pde.approx);
  } catch (const ResolutionError& e) {
    rep.check("resolved", false);
    rep.constants["error"] = e.what();
    return rep;
  }
  rep.check("resolved", true);
  dump(est.state);

  const auto& u = est.state.u;
  const double umax = *std::max_element(u.begin(), u.end());
  const double umin = *std::min_element(u.begin(), u.end());
  rep.residuals["time_init_band"] = est.band;
  rep.residuals["mass_drift"] = est.mass_drift;
  rep.constants["min_over_max"] = umin / umax;
  rep.check("positive", umin >= -1e-12 * umax);

  const ReflectionGroup grp = generate_group(rs);
  Extremes lo, up;
  double exact_err = 0.0;
  std::optional<ProductKernel> PK;
  if (rs.polygon == 2) PK.emplace(std::vector<double>{rs.mult[1], rs.mult[0]});
  for (int n = 0; n < g.size(); ++n) {
    if (!(u[n] > cfg.pde.approx.bulk_fraction * umax)) continue;
    const Vec y = g.point(n);
    const double lh = std::log(u[n]);
    lo.add(lh - log_envelope(rs, grp, x0, y, po.t, cfg.c_l, LambdaMode::dihedral));
    up.add(lh - log_envelope(rs, grp, x0, y, po.t, cfg.c_u, LambdaMode::dihedral));
    if (PK) {
      const double ex = PK->h(x0, y, po.t);
      exact_err = std::max(exact_err, std::abs(u[n] - ex) / ex);
    }
  }
  if (lo.count) {
    rep.constants["C_u"] = std::exp(up.max);
    rep.constants["C_l"] = std::exp(lo.min);
    rep.constants["band_C_u_over_C_l"] = std::exp(up.max - lo.min);
    rep.constants["band_label"] = "solver-limited";
  }
  if (PK) rep.residuals["exact_product_rel_err"] = exact_err;
  return rep;
}

/// Exact weighted ball volume against the closed-form comparable, and doubling.
inline SuiteResult run_volume_check(const SweepConfig& cfg, int jobs = 1) {
  cfg.validate();
  const RootSystem rs = cfg.system.build();
  std::mt19937_64 rng(cfg.seed);
  const std::vector<Vec> xs = cfg.x.generate(rs.dim, rng);
  TimeSpec rspec = cfg.volume.r;
  if (rspec.values.empty() && rspec.count == 0) rspec = {{}, -2.0, 1.0, 7};
  const std::vector<double> rads = rspec.generate();

  struct Pt {
    Vec x;
    double r;
  };
  std::vector<Pt> pts;
  for (const Vec& x : xs)
    for (double r : rads) pts.push_back({x, r});
  struct Row {
    double exact, exact2, lc, lc2;
  };
  std::vector<Row> rows(pts.size());
  parallel_for(pts.size(), jobs, [&](std::size_t i) {
    const auto& [x, r] = pts[i];
    rows[i] = {exact_ball_volume(rs, x, r), exact_ball_volume(rs, x, 2 * r), log_volume_comparable(rs, x, r),
               log_volume_comparable(rs, x, 2 * r)};
  });

  SuiteResult rep;
  rep.suite = "volume_check";
  rep.config_echo = echo(cfg);
  auto& cols = rep.table.columns;
  detail::push_names(cols, "x", rs.dim);
  for (const char* c : {"r", "exact", "comparable", "log_ratio", "doubling"}) cols.push_back(c);

  Extremes ratio, dbl;
  std::vector<double> key, val;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Row& r = rows[i];
    const double lr = std::log(r.exact) - r.lc;
    const double ld = std::log(r.exact2 / r.exact);
    std::vector<std::string> row;
    detail::push_vec(row, pts[i].x);
    for (double v : {pts[i].r, r.exact, std::exp(r.lc), lr, std::exp(ld)}) row.push_back(fmt(v));
    rep.table.rows.push_back(std::move(row));
    ratio.add(lr);
    ratio.add(std::log(r.exact2) - r.lc2);
    dbl.add(ld);
    key.push_back(std::log(pts[i].r));
    val.push_back(lr);
  }
  rep.check("finite", ratio.all_finite && dbl.all_finite);
  if (ratio.count) {
    const double lC = std::max(ratio.max, -ratio.min);
    const double N = rs.homogeneous_dimension();
    rep.constants["C_hat"] = std::exp(lC);
    rep.constants["log_ratio"] = {{"min", ratio.min}, {"max", ratio.max}};
    rep.constants["doubling"] = {{"min", std::exp(dbl.min)}, {"max", std::exp(dbl.max)}};
    // Comparable doubling lies in [2^N, 2^N_k]; exact doubling inherits it up to the band.
    rep.check("doubling_upper", dbl.max <= N * std::log(2.0) + (ratio.max - ratio.min) + 1e-9);
    rep.check("doubling_lower", dbl.min >= rs.dim * std::log(2.0) - (ratio.max - ratio.min) - 1e-9);
    std::vector<double> neg(key.size());
    std::transform(key.begin(), key.end(), neg.begin(), [](double v) { return -v; });
    rep.check("band_small_r", trend_test(neg, val, true).pass && trend_test(neg, val, false).pass);
    rep.check("band_large_r", trend_test(key, val, true).pass && trend_test(key, val, false).pass);
  }
  return rep;
}

}  // namespace dunkl::harness
