#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/SparseCore>

#include "dunkl/pde/polar_grid.hpp"

namespace dunkl::pde {

enum class Integrator { rk4, rkl2 };

struct HeatState {
  std::vector<double> u;
  double time = 0.0;
  double mass = 0.0;
};

/**
 * Explicit solver (RK4 or RKL2) for du/dt = Delta_k u on a PolarGrid.
 *
 * Conservative finite volumes in dw: radial fluxes r^p u_r, angular fluxes
 * w(e) u_theta / r^2 that vanish on walls, and reflection terms coupled
 * through the exact node map. Dirichlet zero at R_max.
 */
class HeatSolver {
 public:
  using SpMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;

  explicit HeatSolver(PolarGrid grid, double c_cfl = 0.2, double neg_tol = 1e-12)
      : g_(std::move(grid)), c_cfl_(c_cfl), neg_tol_(neg_tol) {
    if (!(c_cfl > 0.0)) throw InvalidParameter("HeatSolver: c_cfl must be > 0");
    build();
  }

  const PolarGrid& grid() const { return g_; }
  const SpMat& matrix() const { return L_; }
  double gershgorin_radius() const { return rho_; }

  /// Largest dt accepted by step().
  double stable_dt() const {
    const double hmin = std::min(g_.dr, g_.r[0] * g_.dtheta);
    return std::min(c_cfl_ * hmin * hmin, 1.39 / rho_);
  }

  std::vector<double> apply(const std::vector<double>& u) const {
    Eigen::Map<const Eigen::VectorXd> v(u.data(), static_cast<Eigen::Index>(u.size()));
    Eigen::VectorXd out = L_ * v;
    return {out.data(), out.data() + out.size()};
  }

  HeatState make_state(std::vector<double> u, double time) const {
    if (static_cast<int>(u.size()) != g_.size())
      throw InvalidParameter("HeatState: field size does not match the grid");
    HeatState s;
    s.mass = discrete_mass(g_, u);
    s.u = std::move(u);
    s.time = time;
    return s;
  }

  HeatState step(const HeatState& s, double dt) const {
    if (!(dt > 0.0)) throw DomainError("step: dt must be > 0");
    const double lim = stable_dt();
    if (dt > lim * (1.0 + 1e-12)) throw CflError("step: dt exceeds the stability bound", lim);
    const Eigen::Index n = g_.size();
    Eigen::Map<const Eigen::VectorXd> u(s.u.data(), n);
    Eigen::VectorXd k1 = L_ * u;
    Eigen::VectorXd k2 = L_ * (u + 0.5 * dt * k1);
    Eigen::VectorXd k3 = L_ * (u + 0.5 * dt * k2);
    Eigen::VectorXd k4 = L_ * (u + dt * k3);
    Eigen::VectorXd v = u + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    return finish(s, v, dt, 0.5 * std::min(dt, lim));
  }

  /// Number of RKL2 stages needed for a stable step of length dt.
  int rkl2_stages(double dt) const {
    const double need = 2.0 * rho_ * dt / kRklSafety;
    const int s = static_cast<int>(std::ceil(0.5 * (-1.0 + std::sqrt(9.0 + 4.0 * need))));
    return std::max(s, 2);
  }

  /// Time step used by evolve() under RKL2; second-order accuracy limited.
  double accuracy_dt() const { return c_cfl_ * g_.dr * g_.dr; }

  /// One second-order Runge-Kutta-Legendre super-step of length dt.
  HeatState step_rkl2(const HeatState& s, double dt) const {
    if (!(dt > 0.0)) throw DomainError("step_rkl2: dt must be > 0");
    const int st = rkl2_stages(dt);
    const Eigen::Index n = g_.size();
    Eigen::Map<const Eigen::VectorXd> y0(s.u.data(), n);
    const Eigen::VectorXd L0 = L_ * y0;
    const double w1 = 4.0 / (st * st + st - 2.0);
    auto b = [](int j) { return j <= 2 ? 1.0 / 3.0 : (j * j + j - 2.0) / (2.0 * j * (j + 1.0)); };
    Eigen::VectorXd ym2 = y0;
    Eigen::VectorXd ym1 = y0 + (b(1) * w1 * dt) * L0;
    Eigen::VectorXd yj(n);
    for (int j = 2; j <= st; ++j) {
      const double mu = (2.0 * j - 1.0) / j * b(j) / b(j - 1);
      const double nu = -(j - 1.0) / j * b(j) / b(j - 2);
      const double mut = mu * w1;
      const double gt = -(1.0 - b(j - 1)) * mut;
      yj = mu * ym1 + nu * ym2 + (1.0 - mu - nu) * y0 + (mut * dt) * (L_ * ym1) + (gt * dt) * L0;
      ym2.swap(ym1);
      ym1.swap(yj);
    }
    return finish(s, ym1, dt, 0.5 * dt);
  }

  /// Steps to t_end. RKL2 starts at the explicit limit and doubles up to accuracy_dt().
  HeatState evolve(HeatState s, double t_end, Integrator integ = Integrator::rkl2) const {
    if (integ == Integrator::rk4) {
      const double dt = stable_dt();
      const long steps = std::max(1L, static_cast<long>(std::ceil((t_end - s.time) / dt - 1e-9)));
      const double h = (t_end - s.time) / steps;
      for (long i = 0; i < steps; ++i) s = step(s, h);
      s.time = t_end;
      return s;
    }
    const double cap = accuracy_dt();
    double h = std::min(cap, 1.0 / rho_);
    while (s.time < t_end * (1.0 - 1e-14)) {
      const double rem = t_end - s.time;
      const double dt = rem < 1.5 * h ? rem : h;
      s = step_rkl2(s, dt);
      h = std::min(cap, 2.0 * h);
    }
    s.time = t_end;
    return s;
  }

 private:
  static constexpr double kRklSafety = 0.8;

  HeatState finish(const HeatState& s, const Eigen::VectorXd& v, double dt, double suggest) const {
    const double vmax = v.cwiseAbs().maxCoeff();
    if (v.minCoeff() < -neg_tol_ * vmax) throw CflError("step: positivity violated", suggest);
    HeatState out;
    out.u.assign(v.data(), v.data() + v.size());
    out.time = s.time + dt;
    out.mass = discrete_mass(g_, out.u);
    return out;
  }

  /**
   * Reflection coefficient scale for the cell o steps from a wall of
   * multiplicity k. Chosen so the scheme annihilates functions odd across the
   * wall to first order; tends to k far from the wall.
   */
  static double wall_factor(double k, double o) {
    const double a = std::pow(o + 1.0, 2.0 * k) - std::pow(o, 2.0 * k);
    const double b = std::pow(o + 1.0, 2.0 * k + 1.0) - std::pow(o, 2.0 * k + 1.0);
    return a * (2.0 * k + 1.0) * (o + 0.5) / (2.0 * b);
  }

  void build() {
    const int N = g_.size();
    const RootSystem& rs = g_.rs;
    const double p = g_.radial_power();
    const double dr = g_.dr, dth = g_.dtheta;
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(N) * (5 + rs.size()));

    for (int n = 0; n < N; ++n) {
      const int i = g_.ring(n), j = g_.spoke(n);
      const double r = g_.r[i];
      const double lo = i * dr, hi = (i + 1) * dr;
      const double vol = (std::pow(hi, p + 1.0) - std::pow(lo, p + 1.0)) / (p + 1.0);
      double diag = 0.0;

      const double cp = std::pow(hi, p) / (dr * vol);
      diag -= cp;
      if (i + 1 < g_.n_r) trip.emplace_back(n, g_.node(i + 1, j), cp);
      if (i > 0) {
        const double cm = std::pow(lo, p) / (dr * vol);
        diag -= cm;
        trip.emplace_back(n, g_.node(i - 1, j), cm);
      }

      // Angular fluxes through faces weighted by w(e); walls carry no flux.
      const int jp = (j + 1) % g_.n_theta, jm = (j - 1 + g_.n_theta) % g_.n_theta;
      const double ca = 1.0 / (r * r * g_.angular_mass[j] * dth);
      const double cpl = ca * g_.face_weight[jp], cmi = ca * g_.face_weight[j];
      trip.emplace_back(n, g_.node(i, jp), cpl);
      trip.emplace_back(n, g_.node(i, jm), cmi);
      diag -= cpl + cmi;

      const Vec x = g_.point(n);
      for (int a : rs.positive) {
        const Vec& al = rs.roots[a];
        const double ax = x.dot(al);
        const double phi = std::asin(std::min(1.0, std::abs(ax) / (r * al.norm())));
        const double o = std::max(0.0, std::round(phi / dth - 0.5));
        const double c = wall_factor(rs.mult[a], o) * al.squaredNorm() / (ax * ax);
        diag -= c;
        trip.emplace_back(n, g_.mirror[a][n], c);
      }
      trip.emplace_back(n, n, diag);
    }
    L_.resize(N, N);
    L_.setFromTriplets(trip.begin(), trip.end());
    L_.makeCompressed();

    rho_ = 0.0;
    for (int n = 0; n < N; ++n) {
      double s = 0.0;
      for (SpMat::InnerIterator it(L_, n); it; ++it) s += std::abs(it.value());
      rho_ = std::max(rho_, s);
    }
  }

  PolarGrid g_;
  double c_cfl_;
  double neg_tol_;
  SpMat L_;
  double rho_ = 0.0;
};

/// One RK4 step; throws CflError on a stability or positivity violation.
inline HeatState step(const HeatSolver& solver, const HeatState& s, double dt) {
  return solver.step(s, dt);
}

struct KernelEstimate {
  HeatState state;
  int x0_node = 0;
  double t_init = 0.0;
  /// Max relative change under halving t_init (and the mesh, if requested) over the bulk.
  double band = 0.0;
  double mass_drift = 0.0;
};

struct ApproxOptions {
  /// Bulk region: nodes with u above this fraction of the maximum.
  double bulk_fraction = 1e-3;
  double max_band = 0.25;
  double max_mass_drift = 1e-3;
  bool mesh_check = false;
};

/**
 * Small-time surrogate for h_tau(x0, .): a Gaussian in |y - x0| scaled by
 * (w(x0) w(y))^{-1/2}, plus reflected mass tau * 2k / <alpha, x0>^2 near each
 * sigma_alpha(x0), spread as the same profile at time tau / 2. Unit discrete
 * dw-mass.
 */
inline std::vector<double> kernel_surrogate(const PolarGrid& g, int x0, double tau) {
  if (!(tau > 0.0)) throw DomainError("kernel_surrogate: t_init must be > 0");
  const RootSystem& rs = g.rs;
  const Vec p0 = g.point(x0);
  const double w0 = weight(rs, p0);
  auto bump = [&](const Vec& c, double s) {
    std::vector<double> b(g.size(), 0.0);
    for (int n = 0; n < g.size(); ++n) {
      const Vec y = g.point(n);
      const double e = (y - c).squaredNorm() / (4.0 * s);
      if (e > 700.0) continue;
      b[n] = std::exp(-e) / std::sqrt(w0 * weight(rs, y));
    }
    const double m = discrete_mass(g, b);
    for (double& v : b) v /= m;
    return b;
  };

  double jumps = 0.0;
  std::vector<double> lam(rs.size(), 0.0);
  for (int a : rs.positive) {
    const double ax = p0.dot(rs.roots[a]);
    lam[a] = tau * 2.0 * rs.mult[a] / (ax * ax);
    jumps += lam[a];
  }
  if (jumps > 0.5)
    throw InvalidParameter("kernel_surrogate: t_init too large for the wall distance of x0");
  std::vector<double> u = bump(p0, tau);
  for (double& v : u) v *= 1.0 - jumps;
  for (int a : rs.positive) {
    const std::vector<double> b = bump(g.point(g.mirror[a][x0]), 0.5 * tau);
    for (int n = 0; n < g.size(); ++n) u[n] += lam[a] * b[n];
  }
  return u;
}

namespace detail {

inline HeatState run_from_surrogate(const HeatSolver& s, int x0, double t_target, double t_init) {
  HeatState st = s.make_state(kernel_surrogate(s.grid(), x0, t_init), t_init);
  return s.evolve(std::move(st), t_target);
}

}  // namespace detail

/**
 * Approximates h_{t_target}(x0, .) on the grid. The returned field is the
 * run started at t_init / 2; band compares it to the run from t_init.
 */
inline KernelEstimate approximate_kernel(const HeatSolver& solver, int x0_node, double t_target,
                                         double t_init, const ApproxOptions& opt = {}) {
  const PolarGrid& g = solver.grid();
  if (x0_node < 0 || x0_node >= g.size()) throw InvalidParameter("approximate_kernel: x0 is not a grid node");
  if (!(t_init > 0.0) || !(t_target > t_init))
    throw DomainError("approximate_kernel: need 0 < t_init < t_target");

  const HeatState coarse = detail::run_from_surrogate(solver, x0_node, t_target, t_init);
  HeatState fine = detail::run_from_surrogate(solver, x0_node, t_target, 0.5 * t_init);

  KernelEstimate est;
  est.x0_node = x0_node;
  est.t_init = 0.5 * t_init;
  const double umax = *std::max_element(fine.u.begin(), fine.u.end());
  const double floor = opt.bulk_fraction * umax;
  for (int n = 0; n < g.size(); ++n)
    if (fine.u[n] > floor)
      est.band = std::max(est.band, std::abs(coarse.u[n] - fine.u[n]) / fine.u[n]);

  if (opt.mesh_check) {
    HeatSolver refined(build_grid(g.m, 2 * g.q, 2 * g.n_r, g.R_max, g.rs.mult[0],
                                  g.rs.mult[g.m > 1 ? 1 : 0]));
    const int x0f = refined.grid().nearest_node(g.point(x0_node));
    const HeatState rf = detail::run_from_surrogate(refined, x0f, t_target, 0.5 * t_init);
    for (int n = 0; n < g.size(); ++n)
      if (fine.u[n] > floor) {
        const double v = refined.grid().interpolate(rf.u, g.point(n));
        est.band = std::max(est.band, std::abs(v - fine.u[n]) / fine.u[n]);
      }
  }
  est.mass_drift = std::abs(fine.mass - 1.0);
  est.state = std::move(fine);
  if (est.band > opt.max_band)
    throw ResolutionError("approximate_kernel: error band exceeds the resolution limit");
  if (est.mass_drift > opt.max_mass_drift)
    throw ResolutionError("approximate_kernel: mass drifted beyond the monitor tolerance");
  return est;
}

}  // namespace dunkl::pde
