#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "dunkl/envelope.hpp"
#include "dunkl/lambda.hpp"
#include "dunkl/orbit.hpp"

using namespace dunkl;
using Catch::Approx;

namespace {

Vec s1(double a) { return Vec::Constant(1, a); }
Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

/// Independent recursion: sum over all words over R+ up to max_len, tested for admissibility at the end.
double lambda_words(const RootSystem& rs, const ReflectionGroup& grp, const Vec& x, const Vec& y, double t,
                    int max_len) {
  const double d = orbit_distance(rs, grp, x, y).d;
  double total = 0.0;
  auto rec = [&](auto&& self, const Vec& z, double w, int len) -> void {
    if ((x - z).squaredNorm() - d * d <= chamber_tol_sq(x, y)) total += w;
    if (len == max_len) return;
    const double f = std::pow(1.0 + (x - z).norm() / std::sqrt(t), -2.0);
    for (int a : rs.positive) self(self, reflect(rs.roots[a], z), w * f, len + 1);
  };
  rec(rec, y, 1.0, 0);
  return total;
}

}  // namespace

TEST_CASE("rho on hand-computed words") {
  const RootSystem rs = build_product_a1(1, {1.0});
  CHECK(rho(rs, s1(1), s1(1), 1.0, {}) == 1.0);
  CHECK(rho(rs, s1(1), s1(1), 1.0, {0, 0}) == Approx(1.0 / 9.0).epsilon(1e-15));
  CHECK(rho(rs, s1(1), s1(-3), 1e12, {0, 0, 0}) == Approx(1.0).epsilon(1e-4));
  CHECK_THROWS_AS(rho(rs, s1(1), s1(1), 0.0, {0}), DomainError);
}

TEST_CASE("admissible enumeration in rank one") {
  const RootSystem rs = build_product_a1(1, {1.0});
  const ReflectionGroup grp = generate_group(rs);
  const auto w = enumerate_admissible(rs, grp, s1(1), s1(1), 4);
  REQUIRE(w.size() == 3);
  CHECK(w[0].length() == 0);
  CHECK(w[1].length() == 2);
  CHECK(w[2].length() == 4);
  CHECK(enumerate_admissible(rs, grp, s1(1), s1(2), 0).size() == 1);
  const auto f = enumerate_admissible(rs, grp, s1(1), s1(-1), 1);
  REQUIRE(f.size() == 1);
  CHECK(f[0].length() == 1);
  CHECK_THROWS_AS(enumerate_admissible(rs, grp, s1(1), s1(1), -1), InvalidParameter);
  const RootSystem d4 = build_dihedral(4, 1.0);
  CHECK_THROWS_AS(enumerate_admissible(d4, generate_group(d4), v2(1, 0.2), v2(1, 0.3), 12), OracleTooLarge);
}

TEST_CASE("Lambda on the rank-one worked example") {
  const RootSystem rs = build_product_a1(1, {1.0});
  const ReflectionGroup grp = generate_group(rs);
  const double expect = 1.0 + 1.0 / 9.0 + 1.0 / 81.0;
  CHECK(lambda_bruteforce(rs, grp, s1(1), s1(1), 1.0, 4) == Approx(expect).epsilon(1e-14));
  CHECK(lambda_dp(rs, grp, s1(1), s1(1), 1.0) == Approx(expect).epsilon(1e-14));
  CHECK(lambda_bruteforce(rs, grp, s1(1), s1(1), 1e14, 4) == Approx(3.0).epsilon(1e-5));
  CHECK(lambda_dp(rs, grp, s1(5), s1(5.2), 1e-6) == Approx(1.0).epsilon(1e-6));
}

TEST_CASE("DP equals brute force and an independent recursion") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-3, 3), lt(-2, 2);
  const std::vector<RootSystem> systems{build_product_a1(1, {1.0}), build_product_a1(2, {1.0, 0.5}),
                                        build_dihedral(3, 1.0), build_dihedral(4, 1.0, 2.0)};
  for (const RootSystem& rs : systems) {
    const ReflectionGroup grp = generate_group(rs);
    for (int trial = 0; trial < 100; ++trial) {
      Vec x(rs.dim), y(rs.dim);
      for (int i = 0; i < rs.dim; ++i) x[i] = u(rng), y[i] = u(rng);
      const double t = std::pow(10.0, lt(rng));
      const double dp = lambda_dp(rs, grp, x, y, t, 5);
      CHECK(dp == Approx(lambda_bruteforce(rs, grp, x, y, t, 5)).epsilon(1e-12));
      CHECK(dp == Approx(lambda_words(rs, grp, x, y, t, 5)).epsilon(1e-12));
      if (reflection_count(rs, grp, x, y) == 0) CHECK(lambda_dp(rs, grp, x, y, t) >= 1.0 - 1e-15);
    }
  }
}

TEST_CASE("Lambda scaling in t") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(-3, 3), lt(-2, 2);
  for (const RootSystem& rs : {build_product_a1(2, {1.0, 1.0}), build_dihedral(3, 1.0)}) {
    const ReflectionGroup grp = generate_group(rs);
    const double c = 2.0, low = std::pow(c, -2.0 * grp.order());
    for (int trial = 0; trial < 200; ++trial) {
      Vec x(rs.dim), y(rs.dim);
      for (int i = 0; i < rs.dim; ++i) x[i] = u(rng), y[i] = u(rng);
      const double t = std::pow(10.0, lt(rng));
      const double a = lambda_dp(rs, grp, x, y, t), b = lambda_dp(rs, grp, x, y, c * t);
      CHECK(low * b <= a * (1 + 1e-12));
      CHECK(a <= b * (1 + 1e-12));
    }
  }
}

TEST_CASE("three-case dihedral Lambda") {
  const RootSystem rs = build_dihedral(3, 1.0);
  const ReflectionGroup grp = generate_group(rs);
  const Vec x = v2(std::cos(0.5), std::sin(0.5));
  const Vec same = 2.0 * x;
  CHECK(reflection_count(rs, grp, x, same) == 0);
  CHECK(lambda_dihedral(rs, grp, x, same, 0.3) == 1.0);

  const Vec one = reflect(rs.roots[0], v2(1.5 * std::cos(0.3), 1.5 * std::sin(0.3)));
  REQUIRE(reflection_count(rs, grp, x, one) == 1);
  CHECK(lambda_dihedral(rs, grp, x, one, 0.7) ==
        Approx(std::pow(1.0 + (x - one).norm() / std::sqrt(0.7), -2.0)).epsilon(1e-14));

  const double r3 = 2 * std::numbers::pi / 3;
  const Vec two = v2(std::cos(0.5 + r3), std::sin(0.5 + r3));
  REQUIRE(reflection_count(rs, grp, x, two) == 2);
  CHECK(lambda_dihedral(rs, grp, x, two, 1e14) == Approx(3.0).epsilon(1e-5));

  const RootSystem p = build_product_a1(2, {1.0, 1.0});
  CHECK_THROWS_AS(lambda_dihedral(p, generate_group(p), v2(1, 1), v2(1, 1), 1.0), InvalidUsage);
}

TEST_CASE("envelope on the diagonal") {
  const RootSystem rs = build_dihedral(4, 1.0, 0.5);
  const ReflectionGroup grp = generate_group(rs);
  const Vec x = v2(0.9, 0.4);
  for (double t : {0.01, 1.0, 50.0}) {
    const double e = envelope(rs, grp, x, x, t, 0.2);
    CHECK(e == Approx(lambda_dp(rs, grp, x, x, t) / volume_comparable(rs, x, std::sqrt(t))).epsilon(1e-13));
  }
  CHECK_THROWS_AS(envelope(rs, grp, x, x, 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(envelope(rs, grp, x, x, -1.0, 0.2), DomainError);
}
