#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "dunkl/quadrature.hpp"
#include "dunkl/root_system.hpp"

namespace dunkl {

inline double log_volume_comparable(const RootSystem& rs, const Vec& x, double r) {
  if (!(r > 0.0)) throw DomainError("volume_comparable: r must be > 0");
  double lv = rs.dim * std::log(r);
  for (int a = 0; a < rs.size(); ++a)
    lv += rs.mult[a] * std::log(std::abs(x.dot(rs.roots[a])) + r);
  return lv;
}

/// r^N prod_{alpha in R} (|<x, alpha>| + r)^{k(alpha)}.
inline double volume_comparable(const RootSystem& rs, const Vec& x, double r) {
  return std::exp(log_volume_comparable(rs, x, r));
}

namespace detail {

class BallIntegrator {
 public:
  BallIntegrator(const RootSystem& rs, const Vec& x, double r, double tol)
      : rs_(rs), x_(x), tol_(tol), quad_(static_cast<std::size_t>(rs.dim)) {
    (void)r;
  }

  double level(int i, Vec& u, double r2) {
    if (r2 <= 0.0) return 0.0;
    const int n = rs_.dim;
    const double R = std::sqrt(r2);
    const double lo = x_[i] - R, hi = x_[i] + R;
    std::vector<double> cuts{lo, hi};

    for (int a : rs_.positive) {
      const Vec& al = rs_.roots[a];
      double head = 0.0;
      for (int j = 0; j < i; ++j) head += al[j] * u[j];
      const double tail_norm = al.tail(n - i - 1).norm();
      if (tail_norm == 0.0) {
        if (al[i] != 0.0) cuts.push_back(-head / al[i]);
        continue;
      }
      // Tangency of the wall with the remaining sub-ball.
      const double g = head + al[i] * x_[i] + al.tail(n - i - 1).dot(x_.tail(n - i - 1));
      const double A = al[i] * al[i] + tail_norm * tail_norm;
      const double B = 2.0 * g * al[i];
      const double C = g * g - tail_norm * tail_norm * r2;
      const double disc = B * B - 4.0 * A * C;
      if (disc >= 0.0) {
        const double sq = std::sqrt(disc);
        cuts.push_back(x_[i] + (-B - sq) / (2.0 * A));
        cuts.push_back(x_[i] + (-B + sq) / (2.0 * A));
      }
    }
    std::sort(cuts.begin(), cuts.end());

    auto f = [&](double v, double, double) {
      u[i] = v;
      if (i == n - 1) return weight(rs_, u);
      const double dv = v - x_[i];
      Vec uu = u;
      return level(i + 1, uu, r2 - dv * dv);
    };

    double total = 0.0;
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
      const double a = std::max(cuts[c], lo), b = std::min(cuts[c + 1], hi);
      if (!(b > a) || b - a < 1e-15 * (1.0 + std::abs(a))) continue;
      total += tanh_sinh_interval(quad_[i], f, a, b, tol_);
    }
    return total;
  }

 private:
  const RootSystem& rs_;
  const Vec& x_;
  double tol_;
  std::vector<boost::math::quadrature::tanh_sinh<double>> quad_;
};

}  // namespace detail

/// Weighted volume of the Euclidean ball B(x, r) by nested tanh-sinh quadrature; N <= 3.
inline double exact_ball_volume(const RootSystem& rs, const Vec& x, double r) {
  if (!(r > 0.0)) throw DomainError("exact_ball_volume: r must be > 0");
  if (rs.dim > 3) throw UnsupportedDimension("exact_ball_volume: N must be <= 3");
  if (x.size() != rs.dim) throw InvalidParameter("exact_ball_volume: dimension mismatch");
  detail::BallIntegrator bi(rs, x, r, rs.dim == 1 ? 1e-12 : 1e-9);
  Vec u = Vec::Zero(rs.dim);
  return bi.level(0, u, r * r);
}

}  // namespace dunkl
