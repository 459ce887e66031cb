#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/special_functions/bessel.hpp>

#include "dunkl/rank1_kernel.hpp"

using namespace dunkl;
using Catch::Approx;

namespace {

/// E_k(x, y) from modified Bessel functions of orders k -/+ 1/2.
double bessel_E(double k, double z) {
  if (z == 0.0) return 1.0;
  const double a = std::abs(z);
  const double pre = std::tgamma(k + 0.5) * std::pow(a / 2, 0.5 - k);
  const double i1 = boost::math::cyl_bessel_i(k - 0.5, a), i2 = boost::math::cyl_bessel_i(k + 0.5, a);
  return pre * (z > 0 ? i1 + i2 : i1 - i2);
}

template <class F>
double simpson(F f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4 : 2);
  return s * h / 3;
}

}  // namespace

TEST_CASE("Dunkl kernel special values") {
  for (double k : {0.2, 1.0, 3.7}) {
    CHECK(dunkl_kernel_1d(k, 0.0, 2.5) == 1.0);
    CHECK(dunkl_kernel_1d(k, 1.3, 0.0) == 1.0);
  }
  for (double z : {-2.0, -0.5, 0.7, 3.0})
    CHECK(dunkl_kernel_1d(1e-4, z, 1.0) == Approx(std::exp(z)).epsilon(1e-3).margin(1e-3));
}

TEST_CASE("Dunkl kernel against the Bessel representation") {
  for (double k : {0.25, 0.5, 1.0, 1.5, 2.3, 5.0})
    for (double z : {-30.0, -19.0, -5.0, -0.3, 0.01, 1.0, 7.5, 19.9, 20.1, 45.0}) {
      const Rank1Kernel K(k);
      CHECK(K.log_E(z, 1.0) == Approx(std::log(bessel_E(k, z))).epsilon(1e-9).margin(1e-9));
    }
}

TEST_CASE("Dunkl kernel solves the eigen equation") {
  const double k = 1.5, x = 0.7, y = 1.3, h = 1e-4;
  auto f = [&](double s) { return dunkl_kernel_1d(k, s, y); };
  const double Tf = (f(x + h) - f(x - h)) / (2 * h) + k * (f(x) - f(-x)) / x;
  CHECK(std::abs(Tf - y * f(x)) < 1e-6 * std::abs(y * f(x)));
}

TEST_CASE("normalisation constant matches its defining integral") {
  for (double k : {0.3, 1.0, 2.3}) {
    // x = s^2 smooths the |x|^{2k} cusp at the origin
    const double q = 2 * simpson([k](double s) { return std::pow(2.0, k) * std::pow(s, 4 * k + 1) * 2 * std::exp(-std::pow(s, 4) / 2); },
                                 0, 6, 60000);
    CHECK(Rank1Kernel(k).ck() == Approx(q).epsilon(1e-8));
    CHECK(Rank1Kernel(k).ck() == Approx(std::pow(2.0, 2 * k + 0.5) * std::tgamma(k + 0.5)).epsilon(1e-13));
    CHECK(Rank1Kernel(k).homogeneous_dimension() == 1 + 2 * k);
  }
}

TEST_CASE("heat kernel limits, symmetry and mass") {
  for (double t : {0.1, 1.0, 4.0})
    for (double x : {-1.0, 0.3, 2.0})
      for (double y : {-2.0, 0.5, 1.7}) {
        const double g = std::exp(-(x - y) * (x - y) / (4 * t)) / std::sqrt(4 * std::numbers::pi * t);
        CHECK(heat_kernel_1d(1e-6, x, y, t) == Approx(g).epsilon(1e-4).margin(1e-6));
      }

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-5, 5), lt(-2, 2);
  for (int i = 0; i < 200; ++i) {
    const double k = 0.1 + std::abs(u(rng)) / 2, x = u(rng), y = u(rng), t = std::pow(10.0, lt(rng));
    const Rank1Kernel& K = detail::rank1_cached(k);
    CHECK(K.log_h(x, y, t) == Approx(K.log_h(y, x, t)).epsilon(1e-12).margin(1e-12));
  }

  const double mass = simpson([](double y) { return heat_kernel_1d(1.0, 2.0, y, 0.5) * 2 * y * y; }, -12, 14, 26000);
  CHECK(mass == Approx(1.0).epsilon(1e-6));
}

TEST_CASE("Rosler integral agrees with the closed form") {
  CHECK(rosler_eval_1d(1.0, 1.0, 2.0, 0.7) == Approx(heat_kernel_1d(1.0, 1.0, 2.0, 0.7)).epsilon(1e-8));
  CHECK(Rank1Kernel(0.5).mu_total_mass(3.0) == Approx(1.0).epsilon(1e-10));
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-4, 4), lt(-1.5, 1.5);
  for (int i = 0; i < 100; ++i) {
    const double k = 0.2 + std::abs(u(rng)) / 2, x = u(rng), y = u(rng), t = std::pow(10.0, lt(rng));
    const Rank1Kernel& K = detail::rank1_cached(k);
    CHECK(K.log_h_rosler(x, y, t) == Approx(K.log_h(x, y, t)).epsilon(1e-8).margin(1e-8));
    // exp(-A^2/4t) <= exp(-d^2/4t): the integral factor never exceeds one.
    const double d = std::abs(std::abs(x) - std::abs(y));
    const double pre = -K.log_ck() - 0.5 * K.homogeneous_dimension() * std::log(2 * t);
    CHECK(K.log_h(x, y, t) <= pre - d * d / (4 * t) + 1e-10);
  }
}

TEST_CASE("measure of the sublevel set") {
  const double k = 1.5, x = 1.2;
  const Rank1Kernel K(k);
  CHECK(K.mu_U(x, 1, 2 * x * x) == 1.0);
  CHECK(K.mu_U(x, -1, 3 * x * x) == 1.0);
  auto dens = [k](double s) { return std::pow(1 - s, k - 1) * std::pow(1 + s, k); };
  const double total = simpson(dens, -1, 1, 200000);
  for (double t : {0.05, 0.4, 1.5}) {
    const double tau = t / (x * x);
    CHECK(K.mu_U(x, 1, t) == Approx(simpson(dens, 1 - tau, 1, 200000) / total).epsilon(1e-5));
    if (tau < 2) CHECK(K.mu_U(x, -1, t) == Approx(simpson(dens, -1, -1 + tau, 200000) / total).epsilon(1e-5));
  }
  CHECK(K.mu_U(x, 1, 1e-4) < K.mu_U(x, 1, 1e-3));
  CHECK_THROWS_AS(K.mu_U(x, 0, 1.0), InvalidParameter);
}

TEST_CASE("kernel argument checks") {
  CHECK_THROWS_AS(Rank1Kernel(0.0), InvalidParameter);
  CHECK_THROWS_AS(Rank1Kernel(-1.0), InvalidParameter);
  CHECK_THROWS_AS(heat_kernel_1d(1.0, 1.0, 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(heat_kernel_1d(1.0, 1.0, 1.0, -2.0), DomainError);
}
