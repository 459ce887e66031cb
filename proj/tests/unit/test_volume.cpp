#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "dunkl/volume.hpp"

using namespace dunkl;
using Catch::Approx;

namespace {

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

/// Rank one: int_{x-r}^{x+r} 2^k |y|^{2k} dy in closed form.
double ball_rank1(double k, double x, double r) {
  auto F = [k](double y) { return std::copysign(std::pow(std::abs(y), 2 * k + 1), y); };
  return std::pow(2.0, k) * (F(x + r) - F(x - r)) / (2 * k + 1);
}

/// Centred planar ball for a weight homogeneous of degree 2s: radial factor times a composite Simpson angular integral.
template <class W>
double centred_ball(W w, double s, double r) {
  const int n = 24000;
  const double h = 2 * std::numbers::pi / n;
  double acc = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double th = i * h;
    const double f = w(std::cos(th), std::sin(th));
    acc += f * (i == 0 || i == n ? 1 : (i % 2 ? 4 : 2));
  }
  return acc * h / 3 * std::pow(r, 2 + 2 * s) / (2 + 2 * s);
}

}  // namespace

TEST_CASE("comparable volume values") {
  const RootSystem rs = build_product_a1(1, {1.0});
  CHECK(volume_comparable(rs, Vec::Constant(1, 0.0), 1.0) == Approx(1.0));
  const RootSystem d3 = build_dihedral(3, 1.0);
  const Vec x = v2(0.4, 1.1);
  for (double s : {0.1, 2.0, 7.0})
    CHECK(volume_comparable(d3, s * x, s * 0.3) ==
          Approx(std::pow(s, d3.homogeneous_dimension()) * volume_comparable(d3, x, 0.3)).epsilon(1e-12));
  CHECK_THROWS_AS(volume_comparable(rs, Vec::Constant(1, 0.0), 0.0), DomainError);
}

TEST_CASE("exact ball volume in rank one") {
  CHECK(exact_ball_volume(build_product_a1(1, {1.0}), Vec::Constant(1, 0.0), 1.0) == Approx(4.0 / 3.0).epsilon(1e-8));
  for (double k : {0.3, 1.0, 2.5})
    for (double x : {0.0, 0.2, 1.0, 4.0, 9.5})
      for (double r : {0.01, 0.5, 3.0, 10.0})
        CHECK(exact_ball_volume(build_product_a1(1, {k}), Vec::Constant(1, x), r) ==
              Approx(ball_rank1(k, x, r)).epsilon(1e-6));
  CHECK(exact_ball_volume(build_product_a1(1, {1e-12}), Vec::Constant(1, 3.0), 0.7) == Approx(1.4).epsilon(1e-9));
}

TEST_CASE("exact ball volume in the plane") {
  const double k1 = 1.0, k2 = 0.5;
  const double product = centred_ball(
      [&](double c, double s) { return std::pow(2.0, k1 + k2) * std::pow(c * c, k1) * std::pow(s * s, k2); },
      k1 + k2, 1.3);
  CHECK(exact_ball_volume(build_product_a1(2, {k1, k2}), v2(0, 0), 1.3) == Approx(product).epsilon(1e-6));

  const RootSystem d3 = build_dihedral(3, 1.0);
  const double dihedral = centred_ball([&](double c, double s) { return weight(d3, v2(c, s)); }, 3.0, 0.8);
  CHECK(exact_ball_volume(d3, v2(0, 0), 0.8) == Approx(dihedral).epsilon(1e-6));
  CHECK(exact_ball_volume(build_product_a1(2, {1e-12, 1e-12}), v2(0.5, -2.0), 0.9) ==
        Approx(std::numbers::pi * 0.81).epsilon(1e-8));
}

TEST_CASE("comparable and exact volumes stay in one band and double") {
  const RootSystem rs = build_product_a1(1, {1.0});
  double lo = 1e300, hi = 0.0, dbl = 0.0;
  for (double x = 0.0; x <= 10.0; x += 0.5)
    for (double e = -2.0; e <= 1.0; e += 0.25) {
      const double r = std::pow(10.0, e);
      const Vec X = Vec::Constant(1, x);
      const double q = exact_ball_volume(rs, X, r) / volume_comparable(rs, X, r);
      lo = std::min(lo, q);
      hi = std::max(hi, q);
      dbl = std::max(dbl, exact_ball_volume(rs, X, 2 * r) / exact_ball_volume(rs, X, r));
    }
  CHECK(hi / lo < 10.0);
  CHECK(dbl <= 8.0 * hi / lo);
}
