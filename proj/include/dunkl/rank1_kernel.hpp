#pragma once

#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>

#include "dunkl/quadrature.hpp"

namespace dunkl {

/**
 * Rank-one Dunkl kernels for multiplicity k on R = {+sqrt2, -sqrt2}.
 *
 * Weight 2^k |x|^{2k}, homogeneous dimension 1 + 2k. E_k(x, y) is the
 * intertwining integral over [-1, 1] against (1 - s)^{k-1} (1 + s)^k,
 * evaluated in log form.
 */
class Rank1Kernel {
 public:
  static constexpr std::array<int, 4> kOrders{64, 128, 256, 512};
  static constexpr double kLaguerreSwitch = 20.0;
  static constexpr double kAgreement = 1e-10;

  explicit Rank1Kernel(double k) : s_(std::make_shared<State>()) {
    if (!(k > 0.0) || !std::isfinite(k)) throw InvalidParameter("Rank1Kernel: k must be > 0");
    s_->k = k;
    s_->log_ck = (2.0 * k + 0.5) * std::log(2.0) + std::lgamma(k + 0.5);
    s_->log_mu_j = 2.0 * k * std::log(2.0) + std::lgamma(k) + std::lgamma(k + 1.0) -
                   std::lgamma(2.0 * k + 1.0);
    check_ck();
  }

  double k() const { return s_->k; }
  double homogeneous_dimension() const { return 1.0 + 2.0 * s_->k; }
  double log_ck() const { return s_->log_ck; }
  double ck() const { return std::exp(s_->log_ck); }
  double weight(double x) const { return std::pow(2.0, s_->k) * std::pow(std::abs(x), 2.0 * s_->k); }

  /// log E_k(x, y).
  double log_E(double x, double y) const {
    const double z = x * y;
    if (z == 0.0) return 0.0;
    double prev = log_E_order(0, z);
    for (std::size_t i = 1; i < kOrders.size(); ++i) {
      const double cur = log_E_order(static_cast<int>(i), z);
      if (std::abs(std::expm1(cur - prev)) <= kAgreement) return cur;
      prev = cur;
    }
    throw PrecisionError("dunkl_kernel_1d: quadrature did not converge by order 512");
  }

  double E(double x, double y) const { return std::exp(log_E(x, y)); }

  /// log h_t(x, y) via the closed form in E.
  double log_h(double x, double y, double t) const {
    require_t(t);
    const double s = std::sqrt(2.0 * t);
    return -s_->log_ck - 0.5 * homogeneous_dimension() * std::log(2.0 * t) + log_E(x / s, y / s) -
           (x * x + y * y) / (4.0 * t);
  }
  double h(double x, double y, double t) const { return std::exp(log_h(x, y, t)); }

  /// log h_t(x, y) by integrating exp(-A^2/4t) against the rank-one measure mu_x.
  double log_h_rosler(double x, double y, double t) const {
    require_t(t);
    const double pre = -s_->log_ck - 0.5 * homogeneous_dimension() * std::log(2.0 * t);
    const double d = std::abs(std::abs(x) - std::abs(y));
    if (x == 0.0) return pre - y * y / (4.0 * t);
    const double J = mu_integral(x, y, t, [](double) { return 1.0; });
    return pre - d * d / (4.0 * t) + std::log(J);
  }
  double h_rosler(double x, double y, double t) const { return std::exp(log_h_rosler(x, y, t)); }

  /// log I_2(t, x, y): the A^2/4t-weighted Rosler integral scaled by c_k^-1 2^{-N/2} t^{-1-N/2}.
  double log_I2(double x, double y, double t) const {
    require_t(t);
    const double pre = -s_->log_ck - 0.5 * homogeneous_dimension() * std::log(2.0 * t) - std::log(t);
    const double d = std::abs(std::abs(x) - std::abs(y));
    const double d2 = d * d / (4.0 * t);
    if (x == 0.0) {
      const double q = y * y / (4.0 * t);
      return pre - q + std::log(q);
    }
    const double J = mu_integral(x, y, t, [d2](double q) { return d2 + q; });
    return pre - d2 + std::log(J);
  }
  double I2(double x, double y, double t) const { return std::exp(log_I2(x, y, t)); }

  /// Total mass of the rank-one mu_x density; one up to quadrature error.
  double mu_total_mass(double x) const {
    if (x == 0.0) return 1.0;
    return mu_integral(x, 0.0, 1.0, [](double) { return 1.0; });
  }

  /// mu_x(U(sigma x, t)) with sigma = +1 (identity) or -1.
  double mu_U(double x, int sigma, double t) const {
    require_t(t);
    if (sigma != 1 && sigma != -1) throw InvalidParameter("mu_measure_U: sigma must be +1 or -1");
    if (x == 0.0) return 1.0;
    const double half_tau = 0.5 * t / (x * x);
    if (half_tau >= 1.0) return 1.0;
    const double k = s_->k;
    return sigma == 1 ? boost::math::ibeta(k, k + 1.0, half_tau)
                      : boost::math::ibeta(k + 1.0, k, half_tau);
  }

 private:
  struct State {
    double k = 0.0;
    double log_ck = 0.0;
    double log_mu_j = 0.0;
    std::array<GaussRule, 4> jacobi;
    std::array<GaussRule, 4> lag_pos;
    std::array<GaussRule, 4> lag_neg;
    std::array<std::once_flag, 4> jacobi_once, lag_pos_once, lag_neg_once;
  };

  static void require_t(double t) {
    if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("heat kernel: t must be > 0");
  }

  void check_ck() const {
    const double k = s_->k;
    boost::math::quadrature::exp_sinh<double> es;
    auto f = [k](double x) { return std::exp(-0.5 * x * x + k * std::log(2.0) + 2.0 * k * std::log(x)); };
    const double q = 2.0 * es.integrate(f, 0.0, std::numeric_limits<double>::infinity(), 1e-13);
    if (std::abs(std::log(q) - s_->log_ck) > 1e-8)
      throw PrecisionError("Rank1Kernel: normalization constant failed its quadrature check");
  }

  const GaussRule& jacobi(int i) const {
    std::call_once(s_->jacobi_once[i],
                   [&] { s_->jacobi[i] = gauss_jacobi(kOrders[i], s_->k - 1.0, s_->k); });
    return s_->jacobi[i];
  }
  const GaussRule& laguerre(int i, bool positive) const {
    if (positive) {
      std::call_once(s_->lag_pos_once[i],
                     [&] { s_->lag_pos[i] = gauss_laguerre(kOrders[i], s_->k - 1.0); });
      return s_->lag_pos[i];
    }
    std::call_once(s_->lag_neg_once[i],
                   [&] { s_->lag_neg[i] = gauss_laguerre(kOrders[i], s_->k); });
    return s_->lag_neg[i];
  }

  double log_E_order(int i, double z) const {
    const double az = std::abs(z);
    if (az <= kLaguerreSwitch) {
      const GaussRule& r = jacobi(i);
      const double sg = z > 0 ? 1.0 : -1.0;
      double s = 0.0;
      for (int j = 0; j < r.order(); ++j) s += r.weights[j] * std::exp(-az * (1.0 - sg * r.nodes[j]));
      return az + std::log(s);
    }
    const bool pos = z > 0;
    const double a = pos ? s_->k - 1.0 : s_->k;
    const double b = pos ? s_->k : s_->k - 1.0;
    const GaussRule& r = laguerre(i, pos);
    double s = 0.0;
    for (int j = 0; j < r.order(); ++j) {
      const double u = r.nodes[j];
      if (u >= 2.0 * az) break;
      s += r.weights[j] * std::pow(2.0 - u / az, b);
    }
    return az - (a + 1.0) * std::log(az) + std::lgamma(a + 1.0) + std::log(s) - s_->log_mu_j;
  }

  /// int g(q) e^{-q} d mu_x with q = (A^2 - d^2) / 4t, by tanh-sinh in v = 1 -/+ s.
  template <class G>
  double mu_integral(double x, double y, double t, G g) const {
    const double k = s_->k;
    const double xy = x * y;
    const double rate = std::abs(xy) / (2.0 * t);
    const double lc = -s_->log_mu_j;
    // v measures distance from the endpoint where the exponential peaks.
    const bool flip = xy < 0.0;
    auto f = [&](double v, double near, double far) {
      const double om = flip ? far : near;
      const double op = flip ? near : far;
      const double q = rate * v;
      return g(q) * std::exp(lc + (k - 1.0) * std::log(om) + k * std::log(op) - q);
    };
    boost::math::quadrature::tanh_sinh<double> ts;
    const double cut = rate > 0.0 ? std::min(2.0, 40.0 / rate) : 2.0;
    auto head = [&](double v, double dv, double db) { return f(v, dv, (2.0 - cut) + db); };
    auto tail = [&](double v, double, double db) { return f(v, v, db); };
    double total = tanh_sinh_interval(ts, head, 0.0, cut, 1e-13);
    if (cut < 2.0) total += tanh_sinh_interval(ts, tail, cut, 2.0, 1e-13);
    return total;
  }

  std::shared_ptr<State> s_;
};

namespace detail {

inline const Rank1Kernel& rank1_cached(double k) {
  static std::mutex mu;
  static std::map<double, Rank1Kernel> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(k);
  if (it == cache.end()) it = cache.emplace(k, Rank1Kernel(k)).first;
  return it->second;
}

}  // namespace detail

inline double dunkl_kernel_1d(double k, double x, double y) {
  return detail::rank1_cached(k).E(x, y);
}

inline double heat_kernel_1d(double k, double x, double y, double t) {
  return detail::rank1_cached(k).h(x, y, t);
}

inline double rosler_eval_1d(double k, double x, double y, double t) {
  return detail::rank1_cached(k).h_rosler(x, y, t);
}

inline double mu_measure_U(double k, double x, int sigma, double t) {
  return detail::rank1_cached(k).mu_U(x, sigma, t);
}

}  // namespace dunkl
