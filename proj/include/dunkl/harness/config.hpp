#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "dunkl/errors.hpp"
#include "dunkl/kernel_eval.hpp"
#include "dunkl/root_system.hpp"

namespace dunkl::harness {

using nlohmann::json;

struct SystemSpec {
  Family family = Family::product_a1;
  int n = 1;
  int m = 0;
  /// product_a1: one value per coordinate; dihedral: {k} or {k_even, k_odd}.
  std::vector<double> k{1.0};

  RootSystem build() const {
    if (family == Family::product_a1) return build_product_a1(n, k);
    if (k.empty() || k.size() > 2) throw ConfigError("dihedral system needs k as [k] or [k_even, k_odd]");
    const double ke = k[0], ko = k.size() == 2 ? k[1] : k[0];
    return m == 2 ? build_dihedral_layout(2, ke, ko) : build_dihedral(m, ke, ko);
  }
  int dim() const { return family == Family::product_a1 ? n : 2; }
};

/// Points as an explicit list, a per-coordinate grid product, or uniform random draws.
struct PointSpec {
  enum class Kind { list, grid, random } kind = Kind::list;
  std::vector<std::vector<double>> points;
  double lo = -1.0, hi = 1.0;
  int count = 0;

  std::vector<Vec> generate(int dim, std::mt19937_64& rng) const {
    std::vector<Vec> out;
    switch (kind) {
      case Kind::list:
        for (const auto& p : points) {
          if (static_cast<int>(p.size()) != dim) throw ConfigError("point dimension does not match the system");
          out.push_back(Eigen::Map<const Vec>(p.data(), dim));
        }
        break;
      case Kind::grid: {
        if (count < 1) return out;
        std::vector<double> axis(count);
        for (int i = 0; i < count; ++i) axis[i] = count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
        std::vector<int> idx(dim, 0);
        while (true) {
          Vec v(dim);
          for (int d = 0; d < dim; ++d) v[d] = axis[idx[d]];
          out.push_back(v);
          int d = dim - 1;
          while (d >= 0 && ++idx[d] == count) idx[d--] = 0;
          if (d < 0) break;
        }
        break;
      }
      case Kind::random: {
        std::uniform_real_distribution<double> u(lo, hi);
        for (int i = 0; i < count; ++i) {
          Vec v(dim);
          for (int d = 0; d < dim; ++d) v[d] = u(rng);
          out.push_back(v);
        }
        break;
      }
    }
    return out;
  }
};

/// Times as log10-spaced values or an explicit list.
struct TimeSpec {
  std::vector<double> values;
  double lo_exp = 0.0, hi_exp = 0.0;
  int count = 0;

  std::vector<double> generate() const {
    if (!values.empty()) return values;
    std::vector<double> out;
    for (int i = 0; i < count; ++i)
      out.push_back(std::pow(10.0, count == 1 ? lo_exp : lo_exp + (hi_exp - lo_exp) * i / (count - 1)));
    return out;
  }
};

struct IdentityOptions {
  std::vector<double> k_values;
  double residual_tol = 1e-5;
  double quad_tol = 1e-6;
  double c1 = 0.15, c4 = 4.0, c5 = 4.0;
  /// Shifts y' - y as fractions of sqrt(t); each must stay below 1/2.
  std::vector<double> shifts{-0.45, -0.2, 0.1, 0.3, 0.45};
  std::vector<std::vector<double>> mass_points;       // {x..., t}
  std::vector<std::vector<double>> semigroup_points;  // {x..., y..., s, t}
};

struct LambdaOptions {
  int triples = 1000;
  int max_len = 5;
  double tol = 1e-12;
  double scale_c = 2.0;
  double lo = -3.0, hi = 3.0;
  double t_lo_exp = -2.0, t_hi_exp = 2.0;
};

struct PdeRunOptions {
  std::vector<double> x0{1.2, 0.8};
  double t = 0.5;
  double r_max = 0.0;  // 0: |x0| + pad sqrt(t)
  std::vector<double> snapshots;
  /// Verify-bounds only: pass when Ĉ_u / Ĉ_l stays below this factor.
  double band_limit = 10.0;
};

struct VolumeOptions {
  TimeSpec r;  // radii, same log-spacing rules as t
  double tol = 1e-6;
};

struct SweepConfig {
  std::string name;
  SystemSpec system;
  Backend backend = Backend::closed_form_product;
  PointSpec x, y;
  TimeSpec t;
  double c_u = 0.2, c_l = 0.3;
  std::uint64_t seed = 1;
  /// Rows with |x - y|^2 / t above this are dropped from envelope sweeps.
  double max_ratio = 400.0;
  std::string out = "out";
  PdeBackendOptions pde;
  PdeRunOptions pde_run;
  IdentityOptions identities;
  LambdaOptions lambda;
  VolumeOptions volume;
  json raw = json::object();

  void validate() const {
    if (!(c_u > 0.0 && c_u < 0.25)) throw ConfigError("c_u must satisfy 0 < c_u < 1/4");
    if (!(c_l > 0.25)) throw ConfigError("c_l must satisfy c_l > 1/4");
    if (!(max_ratio > 0.0)) throw ConfigError("max_ratio must be > 0");
    if (system.family == Family::dihedral && system.m < 2) throw ConfigError("dihedral system needs m >= 2");
    for (double s : identities.shifts)
      if (!(std::abs(s) < 0.5) || s == 0.0)
        throw ConfigError("identities.shifts must be nonzero and inside (-1/2, 1/2)");
  }
};

namespace detail {

inline PointSpec parse_points(const json& j) {
  PointSpec p;
  if (j.is_array()) {
    p.kind = PointSpec::Kind::list;
    for (const auto& e : j) p.points.push_back(e.is_array() ? e.get<std::vector<double>>() : std::vector<double>{e.get<double>()});
    return p;
  }
  const std::string kind = j.value("kind", "list");
  if (kind == "list") {
    p.kind = PointSpec::Kind::list;
    for (const auto& e : j.at("points"))
      p.points.push_back(e.is_array() ? e.get<std::vector<double>>() : std::vector<double>{e.get<double>()});
  } else if (kind == "grid" || kind == "random") {
    p.kind = kind == "grid" ? PointSpec::Kind::grid : PointSpec::Kind::random;
    p.lo = j.at("lo").get<double>();
    p.hi = j.at("hi").get<double>();
    p.count = j.at("n").get<int>();
    if (p.count < 0 || !(p.hi >= p.lo)) throw ConfigError("point grid needs n >= 0 and hi >= lo");
  } else {
    throw ConfigError("unknown point kind: " + kind);
  }
  return p;
}

inline TimeSpec parse_times(const json& j) {
  TimeSpec t;
  if (j.is_array()) {
    t.values = j.get<std::vector<double>>();
  } else if (j.is_number()) {
    t.values = {j.get<double>()};
  } else if (j.contains("values")) {
    t.values = j.at("values").get<std::vector<double>>();
  } else {
    t.lo_exp = j.at("lo_exp").get<double>();
    t.hi_exp = j.at("hi_exp").get<double>();
    t.count = j.at("n").get<int>();
  }
  for (double v : t.values)
    if (!(v > 0.0)) throw ConfigError("time and radius values must be > 0");
  return t;
}

template <class T>
void maybe(const json& j, const char* key, T& dst) {
  if (j.contains(key)) dst = j.at(key).get<T>();
}

}  // namespace detail

inline SweepConfig parse_config(const json& j) {
  SweepConfig c;
  try {
    c.raw = j;
    detail::maybe(j, "name", c.name);
    if (j.contains("system")) {
      const json& s = j.at("system");
      const std::string fam = s.value("family", "product_a1");
      if (fam == "product_a1") {
        c.system.family = Family::product_a1;
        c.system.n = s.value("N", 1);
      } else if (fam == "dihedral") {
        c.system.family = Family::dihedral;
        c.system.m = s.at("m").get<int>();
      } else {
        throw ConfigError("unknown family: " + fam);
      }
      if (s.contains("k")) {
        c.system.k = s.at("k").is_array() ? s.at("k").get<std::vector<double>>()
                                          : std::vector<double>{s.at("k").get<double>()};
      }
      if (c.system.family == Family::product_a1 && c.system.k.size() == 1 && c.system.n > 1)
        c.system.k.assign(c.system.n, c.system.k[0]);
    }
    c.backend = c.system.family == Family::dihedral ? Backend::pde_grid : Backend::closed_form_product;
    if (j.contains("backend")) c.backend = parse_backend(j.at("backend").get<std::string>());
    if (j.contains("x")) c.x = detail::parse_points(j.at("x"));
    if (j.contains("y")) c.y = detail::parse_points(j.at("y"));
    if (j.contains("t")) c.t = detail::parse_times(j.at("t"));
    detail::maybe(j, "c_u", c.c_u);
    detail::maybe(j, "c_l", c.c_l);
    detail::maybe(j, "seed", c.seed);
    detail::maybe(j, "max_ratio", c.max_ratio);
    detail::maybe(j, "out", c.out);

    if (j.contains("pde")) {
      const json& p = j.at("pde");
      detail::maybe(p, "q", c.pde.q);
      detail::maybe(p, "n_r", c.pde.n_r);
      detail::maybe(p, "t_init", c.pde.t_init);
      detail::maybe(p, "pad", c.pde.pad);
      detail::maybe(p, "bulk_fraction", c.pde.approx.bulk_fraction);
      detail::maybe(p, "max_band", c.pde.approx.max_band);
      detail::maybe(p, "max_mass_drift", c.pde.approx.max_mass_drift);
      detail::maybe(p, "mesh_check", c.pde.approx.mesh_check);
      detail::maybe(p, "x0", c.pde_run.x0);
      detail::maybe(p, "t", c.pde_run.t);
      detail::maybe(p, "r_max", c.pde_run.r_max);
      detail::maybe(p, "snapshots", c.pde_run.snapshots);
      detail::maybe(p, "band_limit", c.pde_run.band_limit);
    }
    if (j.contains("identities")) {
      const json& p = j.at("identities");
      detail::maybe(p, "k_values", c.identities.k_values);
      detail::maybe(p, "residual_tol", c.identities.residual_tol);
      detail::maybe(p, "quad_tol", c.identities.quad_tol);
      detail::maybe(p, "c1", c.identities.c1);
      detail::maybe(p, "c4", c.identities.c4);
      detail::maybe(p, "c5", c.identities.c5);
      detail::maybe(p, "shifts", c.identities.shifts);
      detail::maybe(p, "mass_points", c.identities.mass_points);
      detail::maybe(p, "semigroup_points", c.identities.semigroup_points);
    }
    if (j.contains("lambda")) {
      const json& p = j.at("lambda");
      detail::maybe(p, "triples", c.lambda.triples);
      detail::maybe(p, "max_len", c.lambda.max_len);
      detail::maybe(p, "tol", c.lambda.tol);
      detail::maybe(p, "scale_c", c.lambda.scale_c);
      detail::maybe(p, "lo", c.lambda.lo);
      detail::maybe(p, "hi", c.lambda.hi);
      detail::maybe(p, "t_lo_exp", c.lambda.t_lo_exp);
      detail::maybe(p, "t_hi_exp", c.lambda.t_hi_exp);
    }
    if (j.contains("volume")) {
      const json& p = j.at("volume");
      if (p.contains("r")) c.volume.r = detail::parse_times(p.at("r"));
      detail::maybe(p, "tol", c.volume.tol);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

inline SweepConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  return parse_config(j);
}

/// Config echo with the effective seed recorded.
inline json echo(const SweepConfig& c) {
  json e = c.raw;
  e["seed"] = c.seed;
  e["backend"] = to_string(c.backend);
  e["c_u"] = c.c_u;
  e["c_l"] = c.c_l;
  return e;
}

}  // namespace dunkl::harness
