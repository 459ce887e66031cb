#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <tuple>
#include <string>
#include <utility>

#include "dunkl/pde/heat_solver.hpp"
#include "dunkl/product_kernel.hpp"
#include "dunkl/reflection_group.hpp"

namespace dunkl {

enum class Backend { closed_form_product, rosler_rank1, pde_grid };

inline const char* to_string(Backend b) {
  switch (b) {
    case Backend::closed_form_product: return "closed_form_product";
    case Backend::rosler_rank1: return "rosler_rank1";
    case Backend::pde_grid: return "pde_grid";
  }
  return "?";
}

inline Backend parse_backend(const std::string& s) {
  if (s == "closed_form_product" || s == "closed-form-product") return Backend::closed_form_product;
  if (s == "rosler_rank1" || s == "rosler-rank1") return Backend::rosler_rank1;
  if (s == "pde_grid" || s == "pde-grid") return Backend::pde_grid;
  throw ConfigError("unknown backend: " + s);
}

struct PdeBackendOptions {
  int q = 16;
  int n_r = 128;
  double t_init = 0.04;
  /// R_max = |x| + pad * sqrt(t).
  double pad = 8.0;
  pde::ApproxOptions approx;
};

/**
 * Uniform h(x, y, t) over the available backends. Closed form and Rosler
 * need a Z_2^N system (Rosler: N = 1); the PDE backend needs a planar
 * system, evaluates x at its nearest grid node and interpolates in y.
 */
class KernelEval {
 public:
  KernelEval(Backend b, RootSystem rs, PdeBackendOptions pde_opt = {})
      : backend_(b), rs_(std::move(rs)), grp_(generate_group(rs_)), pde_opt_(pde_opt),
        cache_(std::make_shared<Cache>()) {
    if (b == Backend::pde_grid) {
      if (rs_.family != Family::dihedral) throw ConfigError("pde_grid backend needs a dihedral layout");
      return;
    }
    if (rs_.family != Family::product_a1)
      throw ConfigError(std::string(to_string(b)) + " backend needs a product A1 system");
    if (b == Backend::rosler_rank1 && rs_.dim != 1)
      throw ConfigError("rosler_rank1 backend needs N = 1");
    std::vector<double> ks(rs_.mult.begin(), rs_.mult.begin() + rs_.dim);
    product_.emplace(ks);
  }

  Backend backend() const { return backend_; }
  const RootSystem& root_system() const { return rs_; }
  const ReflectionGroup& group() const { return grp_; }

  double log_h(const Vec& x, const Vec& y, double t) const {
    if (x.size() != rs_.dim || y.size() != rs_.dim) throw InvalidParameter("KernelEval: dimension mismatch");
    switch (backend_) {
      case Backend::closed_form_product: return product_->log_h(x, y, t);
      case Backend::rosler_rank1: return product_->log_h_rosler(x, y, t);
      case Backend::pde_grid: return std::log(pde_value(x, y, t));
    }
    return 0.0;
  }
  double h(const Vec& x, const Vec& y, double t) const { return std::exp(log_h(x, y, t)); }

  /// h(x, sigma_alpha(y), t) for every root, in root order.
  std::vector<double> orbit_values(const Vec& x, const Vec& y, double t) const {
    std::vector<double> v(rs_.size());
    for (int a = 0; a < rs_.size(); ++a) v[a] = h(x, reflect(rs_.roots[a], y), t);
    return v;
  }

  /// PDE estimate for x at its nearest node; cached per (node position, t).
  const pde::KernelEstimate& pde_estimate(const Vec& x, double t) const {
    if (backend_ != Backend::pde_grid) throw InvalidUsage("pde_estimate: backend is not pde_grid");
    if (!(t > 0.0)) throw DomainError("heat kernel: t must be > 0");
    std::lock_guard<std::mutex> lock(cache_->mu);
    const auto key = std::make_tuple(x[0], x[1], t);
    auto it = cache_->runs.find(key);
    if (it != cache_->runs.end()) return *it->second.est;
    const double k_odd = rs_.mult[rs_.polygon > 1 ? 1 : 0];
    auto solver = std::make_shared<pde::HeatSolver>(pde::build_grid(
        rs_.polygon, pde_opt_.q, pde_opt_.n_r, x.norm() + pde_opt_.pad * std::sqrt(t), rs_.mult[0], k_odd));
    const int node = solver->grid().nearest_node(x);
    auto est = std::make_shared<pde::KernelEstimate>(
        pde::approximate_kernel(*solver, node, t, std::min(pde_opt_.t_init, 0.5 * t), pde_opt_.approx));
    Run run{solver, est};
    cache_->runs.emplace(key, run);
    return *est;
  }

  const pde::PolarGrid& pde_grid(const Vec& x, double t) const {
    pde_estimate(x, t);
    std::lock_guard<std::mutex> lock(cache_->mu);
    return cache_->runs.at(std::make_tuple(x[0], x[1], t)).solver->grid();
  }

 private:
  struct Run {
    std::shared_ptr<pde::HeatSolver> solver;
    std::shared_ptr<pde::KernelEstimate> est;
  };
  struct Cache {
    std::mutex mu;
    std::map<std::tuple<double, double, double>, Run> runs;
  };

  double pde_value(const Vec& x, const Vec& y, double t) const {
    const pde::KernelEstimate& est = pde_estimate(x, t);
    return pde_grid(x, t).interpolate(est.state.u, y);
  }

  Backend backend_;
  RootSystem rs_;
  ReflectionGroup grp_;
  PdeBackendOptions pde_opt_;
  std::optional<ProductKernel> product_;
  std::shared_ptr<Cache> cache_;
};

}  // namespace dunkl
