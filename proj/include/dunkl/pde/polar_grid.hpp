#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "dunkl/quadrature.hpp"
#include "dunkl/root_system.hpp"

namespace dunkl::pde {

/**
 * Polar grid on the disc of radius R_max closed under a dihedral group.
 *
 * Radii r_i = (i + 1/2) dr with dr = R_max / (n_r + 1/2), so the Dirichlet
 * ring sits exactly at R_max. Angles theta_j = (j + 1/2) dtheta with
 * dtheta = pi / (m q), so no node lies on a wall and every reflection maps
 * nodes to nodes.
 */
struct PolarGrid {
  RootSystem rs;
  int m = 0, q = 0, n_r = 0, n_theta = 0;
  double R_max = 0.0, dr = 0.0, dtheta = 0.0;
  std::vector<double> r, theta;
  /// mirror[a][node] = node index of sigma_a(node).
  std::vector<std::vector<int>> mirror;
  /// w(e) at the angular face theta = j dtheta; zero on walls.
  std::vector<double> face_weight;
  /// Integral of w(e(theta)) over the angular cell of spoke j.
  std::vector<double> angular_mass;
  /// dw-measure of each node's cell.
  std::vector<double> cell_mass;

  int size() const { return n_r * n_theta; }
  int node(int i, int j) const { return i * n_theta + j; }
  int ring(int n) const { return n / n_theta; }
  int spoke(int n) const { return n % n_theta; }
  Vec point(int n) const {
    Vec p(2);
    p << r[ring(n)] * std::cos(theta[spoke(n)]), r[ring(n)] * std::sin(theta[spoke(n)]);
    return p;
  }
  /// Sum of the homogeneous weight exponents, p = 1 + sum_R k.
  double radial_power() const { return 1.0 + rs.multiplicity_sum(); }

  /// Nearest node to a point (Euclidean in the plane).
  int nearest_node(const Vec& x) const {
    const double rr = x.norm();
    int i = static_cast<int>(std::lround(rr / dr - 0.5));
    i = std::clamp(i, 0, n_r - 1);
    double th = std::atan2(x[1], x[0]);
    if (th < 0) th += 2.0 * std::numbers::pi;
    int best = node(i, 0);
    double bd = std::numeric_limits<double>::infinity();
    for (int di = -1; di <= 1; ++di) {
      const int ii = i + di;
      if (ii < 0 || ii >= n_r) continue;
      int j = static_cast<int>(std::lround(th / dtheta - 0.5));
      for (int dj = -1; dj <= 1; ++dj) {
        const int jj = ((j + dj) % n_theta + n_theta) % n_theta;
        const double d = (point(node(ii, jj)) - x).norm();
        if (d < bd) {
          bd = d;
          best = node(ii, jj);
        }
      }
    }
    return best;
  }

  /// Bilinear interpolation in (r, theta); zero beyond R_max, constant below r_0.
  double interpolate(const std::vector<double>& u, const Vec& x) const {
    const double rr = x.norm();
    if (rr >= R_max) return 0.0;
    double th = std::atan2(x[1], x[0]);
    if (th < 0) th += 2.0 * std::numbers::pi;
    const double fj = th / dtheta - 0.5;
    int j0 = static_cast<int>(std::floor(fj));
    const double wj = fj - j0;
    const int ja = ((j0 % n_theta) + n_theta) % n_theta, jb = (ja + 1) % n_theta;
    const double fi = rr / dr - 0.5;
    auto ring_val = [&](int i) {
      if (i >= n_r) return 0.0;
      return (1.0 - wj) * u[node(i, ja)] + wj * u[node(i, jb)];
    };
    if (fi <= 0.0) return ring_val(0);
    const int i0 = static_cast<int>(std::floor(fi));
    const double wi = fi - i0;
    return (1.0 - wi) * ring_val(i0) + wi * ring_val(i0 + 1);
  }
};

/// Builds the grid for I_2(m) with multiplicities (k_even, k_odd); m = 2 gives the A1 x A1 layout.
inline PolarGrid build_grid(int m, int q, int n_r, double R_max, double k_even, double k_odd) {
  if (m < 2) throw InvalidParameter("build_grid: m must be >= 2");
  if (q < 1) throw InvalidParameter("build_grid: q must be >= 1");
  if (n_r < 16) throw InvalidParameter("build_grid: n_r must be >= 16");
  if (!(R_max > 0.0)) throw DomainError("build_grid: R_max must be > 0");

  PolarGrid g;
  g.rs = build_dihedral_layout(m, k_even, k_odd);
  g.m = m;
  g.q = q;
  g.n_r = n_r;
  g.n_theta = 2 * m * q;
  g.R_max = R_max;
  g.dr = R_max / (n_r + 0.5);
  g.dtheta = std::numbers::pi / (m * q);
  for (int i = 0; i < n_r; ++i) g.r.push_back((i + 0.5) * g.dr);
  for (int j = 0; j < g.n_theta; ++j) g.theta.push_back((j + 0.5) * g.dtheta);

  const int N = g.size();
  for (int n = 0; n < N; ++n) {
    const Vec x = g.point(n);
    for (int a = 0; a < g.rs.size(); ++a)
      if (std::abs(x.dot(g.rs.roots[a])) < 1e-12 * (1.0 + x.norm()))
        throw InvalidParameter("build_grid: a node lies on a reflection wall");
  }

  g.mirror.assign(g.rs.size(), std::vector<int>(N));
  for (int a = 0; a < g.rs.size(); ++a) {
    const Vec& al = g.rs.roots[a];
    // Wall angle psi with <(cos psi, sin psi), alpha> = 0, as a multiple of dtheta.
    const double psi = std::atan2(-al[0], al[1]);
    const long lw = std::lround(psi / g.dtheta);
    if (std::abs(psi - lw * g.dtheta) > 1e-9)
      throw InvalidParameter("build_grid: wall angle not on the half grid");
    for (int n = 0; n < N; ++n) {
      const int i = g.ring(n), j = g.spoke(n);
      const long jj = 2 * lw - j - 1;
      const int jm = static_cast<int>(((jj % g.n_theta) + g.n_theta) % g.n_theta);
      const int img = g.node(i, jm);
      if ((g.point(img) - reflect(al, g.point(n))).norm() > 1e-9 * (1.0 + g.r[i]))
        throw InvalidParameter("build_grid: reflection does not map nodes to nodes");
      g.mirror[a][n] = img;
    }
    for (int n = 0; n < N; ++n)
      if (g.mirror[a][g.mirror[a][n]] != n)
        throw InvalidParameter("build_grid: node reflection is not an involution");
  }

  // Cell measure: radial shell of r^p dr times the angular integral of w(e).
  const double p = g.radial_power();
  std::vector<double> shell(n_r);
  for (int i = 0; i < n_r; ++i) {
    const double lo = i * g.dr, hi = (i + 1) * g.dr;
    shell[i] = (std::pow(hi, p + 1.0) - std::pow(lo, p + 1.0)) / (p + 1.0);
  }
  auto w_at = [&](double th) {
    Vec e(2);
    e << std::cos(th), std::sin(th);
    return weight(g.rs, e);
  };
  boost::math::quadrature::tanh_sinh<double> ts;
  g.face_weight.resize(g.n_theta);
  g.angular_mass.resize(g.n_theta);
  for (int j = 0; j < g.n_theta; ++j) {
    g.face_weight[j] = w_at(j * g.dtheta);
    if (j % q == 0) {
      Vec e(2);
      e << std::cos(j * g.dtheta), std::sin(j * g.dtheta);
      for (int a = 0; a < g.rs.size(); ++a)
        if (std::abs(e.dot(g.rs.roots[a])) < 1e-9 && g.rs.mult[a] > 0.0) g.face_weight[j] = 0.0;
    }
    g.angular_mass[j] = tanh_sinh_interval(
        ts, [&](double th, double, double) { return w_at(th); }, j * g.dtheta, (j + 1) * g.dtheta,
        1e-12);
  }
  g.cell_mass.resize(N);
  for (int n = 0; n < N; ++n) g.cell_mass[n] = shell[g.ring(n)] * g.angular_mass[g.spoke(n)];
  return g;
}

/// Discrete dw-integral of a nodal field.
inline double discrete_mass(const PolarGrid& g, const std::vector<double>& u) {
  double s = 0.0;
  for (int n = 0; n < g.size(); ++n) s += g.cell_mass[n] * u[n];
  return s;
}

}  // namespace dunkl::pde
