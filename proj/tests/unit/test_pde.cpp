#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "dunkl/pde/heat_solver.hpp"
#include "dunkl/product_kernel.hpp"

using namespace dunkl;
using namespace dunkl::pde;
using Catch::Approx;

TEST_CASE("grid geometry") {
  const PolarGrid g = build_grid(3, 2, 16, 4.0, 1.0, 1.0);
  CHECK(g.dtheta == Approx(std::numbers::pi / 6));
  CHECK(g.n_theta == 12);
  CHECK(g.size() == 16 * 12);
  for (int a = 0; a < g.rs.size(); ++a) {
    const Vec& al = g.rs.roots[a];
    const double psi = std::atan2(-al[0], al[1]);
    for (int n = 0; n < g.size(); ++n) {
      CHECK(std::abs(g.point(n).dot(al)) > 1e-12);
      CHECK(g.mirror[a][g.mirror[a][n]] == n);
      const int img = g.mirror[a][n];
      CHECK(g.ring(img) == g.ring(n));
      double th = 2 * psi - g.theta[g.spoke(n)];
      th = std::fmod(std::fmod(th, 2 * std::numbers::pi) + 2 * std::numbers::pi, 2 * std::numbers::pi);
      CHECK(std::abs(th - g.theta[g.spoke(img)]) < 1e-9);
    }
  }
  double s = 0;
  for (double v : g.angular_mass) s += v;
  CHECK(g.cell_mass.size() == static_cast<std::size_t>(g.size()));
  CHECK(s > 0);
  CHECK_THROWS_AS(build_grid(1, 2, 16, 4.0, 1.0, 1.0), InvalidParameter);
  CHECK_THROWS_AS(build_grid(3, 0, 16, 4.0, 1.0, 1.0), InvalidParameter);
  CHECK_THROWS_AS(build_grid(3, 2, 8, 4.0, 1.0, 1.0), InvalidParameter);
  CHECK_THROWS_AS(build_grid(3, 2, 16, -1.0, 1.0, 1.0), DomainError);
}

TEST_CASE("operator is conservative and an M-matrix") {
  const HeatSolver S(build_grid(4, 3, 32, 5.0, 1.0, 0.5));
  const auto& L = S.matrix();
  const PolarGrid& g = S.grid();
  std::vector<double> colsum(g.size(), 0.0);
  for (int r = 0; r < L.outerSize(); ++r)
    for (HeatSolver::SpMat::InnerIterator it(L, r); it; ++it) {
      if (it.col() != it.row()) CHECK(it.value() >= 0.0);
      colsum[it.col()] += g.cell_mass[it.row()] * it.value();
    }
  // Mass is lost only through the outer ring.
  for (int n = 0; n < g.size(); ++n)
    if (g.ring(n) < g.n_r - 1) CHECK(std::abs(colsum[n]) < 1e-9 * g.cell_mass[n] * S.gershgorin_radius());
}

TEST_CASE("functions odd across a wall are annihilated in the limit") {
  // y2 is odd across the wall y2 = 0 and even across y1 = 0, so Delta_k y2 = 0.
  // Wall cells are first-order accurate; the residual shrinks under refinement.
  for (double ke : {0.5, 0.7, 2.0}) {
    double prev_wall = 0, prev_bulk = 0;
    for (int q : {8, 16, 32}) {
      const int nr = 8 * q;
      const HeatSolver S(build_grid(2, q, nr, 6.0, ke, 1.3));
      const PolarGrid& g = S.grid();
      std::vector<double> u(g.size());
      for (int n = 0; n < g.size(); ++n) u[n] = g.point(n)[1];
      const auto Lu = S.apply(u);
      double wall = 0, bulk = 0;
      for (int i = nr / 6; i < nr * 2 / 3; ++i) {
        wall = std::max(wall, std::abs(Lu[g.node(i, 0)]) * g.r[i]);
        bulk = std::max(bulk, std::abs(Lu[g.node(i, q / 4)]) * g.r[i]);
      }
      if (q > 8) {
        CHECK(wall < 0.6 * prev_wall);
        CHECK(bulk < 0.8 * prev_bulk);
      }
      prev_wall = wall;
      prev_bulk = bulk;
    }
    CHECK(prev_wall < 0.1);
    CHECK(prev_bulk < 5e-3);
  }
}

TEST_CASE("step guards and mass monitor") {
  const HeatSolver S(build_grid(3, 4, 32, 6.0, 1.0, 1.0));
  const PolarGrid& g = S.grid();
  CHECK_THROWS_AS(S.step(S.make_state(std::vector<double>(g.size(), 0.0), 0), 10 * S.stable_dt()), CflError);
  CHECK_THROWS_AS(S.step(S.make_state(std::vector<double>(g.size(), 0.0), 0), -1.0), DomainError);
  CHECK_THROWS_AS(S.make_state(std::vector<double>(3, 0.0), 0), InvalidParameter);
  const int x0 = g.nearest_node((Vec(2) << 1.0, 0.3).finished());
  HeatState s = S.make_state(kernel_surrogate(g, x0, 0.02), 0.02);
  CHECK(s.mass == Approx(1.0).epsilon(1e-12));
  for (int i = 0; i < 20; ++i) {
    const HeatState n = S.step(s, S.stable_dt());
    CHECK(n.mass <= s.mass + 1e-13);
    CHECK(n.mass >= s.mass - 1e-6);
    s = n;
  }
}

TEST_CASE("product layout matches the exact kernel") {
  const double k_odd = 1.0, k_even = 0.5;
  const HeatSolver S(build_grid(2, 16, 128, 8.0, k_even, k_odd));
  const PolarGrid& g = S.grid();
  Vec x(2);
  x << 1.2, 0.8;
  const int node = g.nearest_node(x);
  const KernelEstimate est = approximate_kernel(S, node, 0.5, 0.04);
  const ProductKernel K({k_odd, k_even});
  const auto& u = est.state.u;
  const double umax = *std::max_element(u.begin(), u.end());
  double err = 0.0;
  for (int n = 0; n < g.size(); ++n)
    if (u[n] > 1e-3 * umax) err = std::max(err, std::abs(u[n] - K.h(g.point(node), g.point(n), 0.5)) / u[n]);
  CHECK(err < 0.05);
  CHECK(est.mass_drift < 1e-3);

  // Equivariance: the run from the mirrored source is the mirrored field.
  const int a = 1;
  const KernelEstimate mir = approximate_kernel(S, g.mirror[a][node], 0.5, 0.04);
  for (int n = 0; n < g.size(); ++n)
    if (u[n] > 1e-3 * umax) CHECK(mir.state.u[g.mirror[a][n]] == Approx(u[n]).epsilon(1e-8));
}

TEST_CASE("dihedral kernel is positive") {
  const HeatSolver S(build_grid(3, 8, 64, 9.0, 1.0, 1.0));
  const PolarGrid& g = S.grid();
  Vec x(2);
  x << std::cos(std::numbers::pi / 6), std::sin(std::numbers::pi / 6);
  const KernelEstimate est = approximate_kernel(S, g.nearest_node(x), 1.0, 0.02);
  const double umax = *std::max_element(est.state.u.begin(), est.state.u.end());
  for (double v : est.state.u) CHECK(v >= -1e-12 * umax);
  CHECK(est.band < 0.25);
  CHECK_THROWS_AS(approximate_kernel(S, -1, 1.0, 0.02), InvalidParameter);
  CHECK_THROWS_AS(approximate_kernel(S, 0, 0.01, 0.02), DomainError);
  CHECK_THROWS_AS(kernel_surrogate(g, g.nearest_node(x), 5.0), InvalidParameter);
}

TEST_CASE("classical limit converges under refinement") {
  Vec x0(2);
  x0 << 1.2, 0.8;
  const double s = 0.5, t = 0.5;
  auto error = [&](int q, int nr) {
    const HeatSolver S(build_grid(2, q, nr, 8.0, 1e-9, 1e-9));
    const PolarGrid& g = S.grid();
    std::vector<double> u(g.size());
    for (int n = 0; n < g.size(); ++n) u[n] = std::exp(-(g.point(n) - x0).squaredNorm() / (4 * s));
    const HeatState e = S.evolve(S.make_state(u, 0.0), t);
    double err = 0, umax = 0;
    for (double v : e.u) umax = std::max(umax, v);
    for (int n = 0; n < g.size(); ++n) {
      const double ex = s / (s + t) * std::exp(-(g.point(n) - x0).squaredNorm() / (4 * (s + t)));
      if (e.u[n] > 1e-3 * umax) err = std::max(err, std::abs(e.u[n] - ex) / ex);
    }
    return err;
  };
  const double coarse = error(8, 64), fine = error(16, 128);
  CHECK(fine < coarse / 2.5);
  CHECK(fine < 0.03);
}
