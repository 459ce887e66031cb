#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "dunkl/envelope.hpp"
#include "dunkl/kernel_eval.hpp"
#include "dunkl/quadrature.hpp"

namespace dunkl {

/// Both sides of an identity scaled by h_t(x, y); residual = |lhs - rhs| in those units.
struct Residual {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  /// Sum of absolute term magnitudes on both sides.
  double scale = 0.0;
  double relative() const { return scale > 0.0 ? residual / scale : residual; }
};

namespace detail {

inline double log_sum_exp(const std::vector<double>& v) {
  double m = -std::numeric_limits<double>::infinity();
  for (double a : v) m = std::max(m, a);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double a : v) s += std::exp(a - m);
  return m + std::log(s);
}

inline double dlog_dt(const KernelEval& K, const Vec& x, const Vec& y, double t) {
  const double tau = 1e-4 * t;
  return (K.log_h(x, y, t + tau) - K.log_h(x, y, t - tau)) / (2.0 * tau);
}

template <class F>
double integrate_pieces(boost::math::quadrature::tanh_sinh<double>& ts, F f, std::vector<double> cuts,
                        double tol) {
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    s += tanh_sinh_interval(ts, [&](double v, double, double) { return f(v); }, cuts[i], cuts[i + 1], tol);
  return s;
}

inline std::vector<double> cuts_for(std::initializer_list<double> centers, double half_width) {
  double far = 0.0;
  for (double c : centers) far = std::max(far, std::abs(c));
  std::vector<double> cuts{-far - half_width, 0.0, far + half_width};
  for (double c : centers) {
    cuts.push_back(c);
    cuts.push_back(-c);
  }
  return cuts;
}

}  // namespace detail

/**
 * d/dt h = (|x-y|^2 / 4t^2 - N / 2t) h - (1 / 2t) sum_R k h(x, sigma y), with
 * d/dt by central differences on log h (step 1e-4 t).
 */
inline Residual check_time_derivative(const KernelEval& K, const Vec& x, const Vec& y, double t) {
  const RootSystem& rs = K.root_system();
  const double lh = K.log_h(x, y, t);
  Residual r;
  r.lhs = detail::dlog_dt(K, x, y, t);
  const double a = (x - y).squaredNorm() / (4.0 * t * t);
  const double b = -rs.dim / (2.0 * t);
  double c = 0.0;
  for (int i = 0; i < rs.size(); ++i)
    c -= rs.mult[i] * std::exp(K.log_h(x, reflect(rs.roots[i], y), t) - lh) / (2.0 * t);
  r.rhs = a + b + c;
  r.residual = std::abs(r.lhs - r.rhs);
  r.scale = std::abs(r.lhs) + std::abs(a) + std::abs(b) + std::abs(c);
  return r;
}

/// (2N_k - 2N + |x-y|^2/t) h = 4t I_2 + 2 sum_R k h(x, sigma y), rank one.
inline Residual check_basic_identity(double k, double x, double y, double t) {
  const Rank1Kernel& K = detail::rank1_cached(k);
  const double lh = K.log_h(x, y, t);
  Residual r;
  r.lhs = 2.0 * K.homogeneous_dimension() - 2.0 + (x - y) * (x - y) / t;
  const double i2 = 4.0 * t * std::exp(K.log_I2(x, y, t) - lh);
  const double refl = 4.0 * k * std::exp(K.log_h(x, -y, t) - lh);
  r.rhs = i2 + refl;
  r.residual = std::abs(r.lhs - r.rhs);
  r.scale = std::abs(r.lhs) + i2 + refl;
  return r;
}

/**
 * Delta_k f(x) by second-order differences with spacing h: the Euclidean
 * Laplacian, directional derivatives along each root, and reflected samples
 * f(sigma_alpha x).
 */
template <class F>
double dunkl_laplacian_apply(const RootSystem& rs, F f, const Vec& x, double h = 1e-3) {
  if (x.size() != rs.dim) throw InvalidParameter("dunkl_laplacian_apply: dimension mismatch");
  if (!(h > 0.0)) throw InvalidParameter("dunkl_laplacian_apply: spacing must be > 0");
  for (int a = 0; a < rs.size(); ++a)
    if (std::abs(x.dot(rs.roots[a])) / rs.roots[a].norm() < 0.5 * h)
      throw WallProximity("dunkl_laplacian_apply: x is within half a grid spacing of a wall");
  const double f0 = f(x);
  double lap = 0.0;
  for (int i = 0; i < rs.dim; ++i) {
    Vec e = Vec::Zero(rs.dim);
    e[i] = h;
    lap += (f(Vec(x + e)) - 2.0 * f0 + f(Vec(x - e))) / (h * h);
  }
  for (int a = 0; a < rs.size(); ++a) {
    const Vec& al = rs.roots[a];
    const double an = al.norm();
    const Vec step = (h / an) * al;
    const double da = an * (f(Vec(x + step)) - f(Vec(x - step))) / (2.0 * h);
    const double ax = x.dot(al);
    lap += rs.mult[a] * (da / ax - 0.5 * al.squaredNorm() * (f0 - f(reflect(al, x))) / (ax * ax));
  }
  return lap;
}

/// int h_t(x, y) dw(y) over R by tanh-sinh, rank one.
inline double mass_1d(double k, double x, double t) {
  const Rank1Kernel& K = detail::rank1_cached(k);
  boost::math::quadrature::tanh_sinh<double> ts;
  auto f = [&](double y) { return y == 0.0 ? 0.0 : std::exp(K.log_h(x, y, t)) * K.weight(y); };
  return detail::integrate_pieces(ts, f, detail::cuts_for({x}, 40.0 * std::sqrt(t)), 1e-12);
}

/// int h_s(x, z) h_t(z, y) dw(z), rank one.
inline double semigroup_1d(double k, double x, double y, double s, double t) {
  const Rank1Kernel& K = detail::rank1_cached(k);
  boost::math::quadrature::tanh_sinh<double> ts;
  auto f = [&](double z) {
    return z == 0.0 ? 0.0 : std::exp(K.log_h(x, z, s) + K.log_h(z, y, t)) * K.weight(z);
  };
  return detail::integrate_pieces(ts, f, detail::cuts_for({x, y}, 40.0 * std::sqrt(std::max(s, t))), 1e-12);
}

namespace detail {

/// Nested tanh-sinh over the plane for the N = 2 product weight.
template <class F>
double integrate_plane(const RootSystem& rs, F f, std::vector<double> cuts0, std::vector<double> cuts1,
                       double tol) {
  if (rs.dim != 2) throw UnsupportedDimension("plane quadrature needs N = 2");
  boost::math::quadrature::tanh_sinh<double> outer, inner;
  auto row = [&](double z0) {
    if (z0 == 0.0) return 0.0;
    auto g = [&](double z1) {
      if (z1 == 0.0) return 0.0;
      Vec z(2);
      z << z0, z1;
      return f(z) * weight(rs, z);
    };
    return integrate_pieces(inner, g, cuts1, 0.1 * tol);
  };
  return integrate_pieces(outer, row, cuts0, tol);
}

}  // namespace detail

/// int h_t(x, y) dw(y) for a planar product kernel.
inline double mass_plane(const ProductKernel& K, const Vec& x, double t) {
  const double w = 12.0 * std::sqrt(t);
  return detail::integrate_plane(
      K.root_system(), [&](const Vec& y) { return std::exp(K.log_h(x, y, t)); },
      detail::cuts_for({x[0]}, w), detail::cuts_for({x[1]}, w), 1e-6);
}

/// int h_s(x, z) h_t(z, y) dw(z) for a planar product kernel.
inline double semigroup_plane(const ProductKernel& K, const Vec& x, const Vec& y, double s, double t) {
  const double w = 12.0 * std::sqrt(std::max(s, t));
  return detail::integrate_plane(
      K.root_system(), [&](const Vec& z) { return std::exp(K.log_h(x, z, s) + K.log_h(z, y, t)); },
      detail::cuts_for({x[0], y[0]}, w), detail::cuts_for({x[1], y[1]}, w), 1e-6);
}

/// Log ratios for the two-sided Gaussian bounds: lower against |x-y|, upper against d.
struct LogRatios {
  double lower = 0.0;
  double upper = 0.0;
};

inline LogRatios gaussian_log_ratios(const KernelEval& K, const Vec& x, const Vec& y, double t, double c_l,
                                     double c_u) {
  const RootSystem& rs = K.root_system();
  const double lh = K.log_h(x, y, t);
  const double lv = log_volume_comparable(rs, x, std::sqrt(t));
  const double d = orbit_distance(rs, K.group(), x, y).d;
  return {lh + lv + c_l * (x - y).squaredNorm() / t, lh + lv + c_u * d * d / t};
}

/**
 * Ratios of h to V^-1 e^{-c |x-y|^2/t} + (1 + |x-y|/sqrt t)^-2 sum_R h(x, sigma y)
 * with c = c_l (lower) and c = c_1 (upper).
 */
inline LogRatios recursion_log_ratios(const KernelEval& K, const Vec& x, const Vec& y, double t, double c_l,
                                      double c1) {
  const RootSystem& rs = K.root_system();
  const double lh = K.log_h(x, y, t);
  const double lv = log_volume_comparable(rs, x, std::sqrt(t));
  const double e2 = (x - y).squaredNorm() / t;
  std::vector<double> terms;
  const double pre = -2.0 * std::log1p(std::sqrt(e2));
  for (int a = 0; a < rs.size(); ++a) terms.push_back(pre + K.log_h(x, reflect(rs.roots[a], y), t));
  const double ls = detail::log_sum_exp(terms);
  return {lh - detail::log_sum_exp({-lv - c_l * e2, ls}), lh - detail::log_sum_exp({-lv - c1 * e2, ls})};
}

/// log of h / (V^-1 (1 + |x-y|/sqrt t)^-2 e^{-c d^2/t}).
inline double decay_log_ratio(const KernelEval& K, const Vec& x, const Vec& y, double t, double c) {
  const RootSystem& rs = K.root_system();
  const double d = orbit_distance(rs, K.group(), x, y).d;
  return K.log_h(x, y, t) + log_volume_comparable(rs, x, std::sqrt(t)) +
         2.0 * std::log1p((x - y).norm() / std::sqrt(t)) + c * d * d / t;
}

/**
 * |d_t^m h_t(x, y) - d_t^m h_t(x, y')| / (t^-m (|y - y'| / sqrt t) h_{c4 t}(x, y)),
 * m in {0, 1}; requires |y - y'| < sqrt(t) / 2.
 */
inline double holder_quotient(const KernelEval& K, int m, const Vec& x, const Vec& y, const Vec& yp, double t,
                              double c4) {
  if (m != 0 && m != 1) throw InvalidParameter("holder_quotient: m must be 0 or 1");
  const double dy = (y - yp).norm();
  if (!(dy < 0.5 * std::sqrt(t))) throw DomainError("holder_quotient: need |y - y'| < sqrt(t)/2");
  if (dy == 0.0) return 0.0;
  const double ref = K.log_h(x, y, c4 * t);
  const double a = std::exp(K.log_h(x, y, t) - ref), b = std::exp(K.log_h(x, yp, t) - ref);
  double num;
  if (m == 0) {
    num = std::abs(a - b);
  } else {
    num = std::abs(a * detail::dlog_dt(K, x, y, t) - b * detail::dlog_dt(K, x, yp, t)) * t;
  }
  return num / (dy / std::sqrt(t));
}

/// log h_t(x, y) - log h_{c5 t}(x, y').
inline double small_shift_log_ratio(const KernelEval& K, const Vec& x, const Vec& y, const Vec& yp, double t,
                                    double c5) {
  if (!((y - yp).norm() < 0.5 * std::sqrt(t))) throw DomainError("small_shift: need |y - y'| < sqrt(t)/2");
  return K.log_h(x, y, t) - K.log_h(x, yp, c5 * t);
}

/// log of mu_x(U(sigma x, t)) / (t^{N_k/2} Lambda(x, sigma x, t) / V(x, sqrt t)), rank one.
inline double measure_log_ratio(double k, double x, int sigma, double t) {
  const Rank1Kernel& K = detail::rank1_cached(k);
  const RootSystem rs = build_product_a1(1, {k});
  const ReflectionGroup grp = generate_group(rs);
  Vec X(1), Y(1);
  X << x;
  Y << sigma * x;
  const double lam = lambda_dp(rs, grp, X, Y, t);
  return std::log(K.mu_U(x, sigma, t)) -
         (0.5 * K.homogeneous_dimension() * std::log(t) + std::log(lam) - log_volume_comparable(rs, X, std::sqrt(t)));
}

}  // namespace dunkl
