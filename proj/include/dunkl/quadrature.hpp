#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "dunkl/errors.hpp"

namespace dunkl {

/// Gauss rule with weights normalized to sum to one.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  int order() const { return static_cast<int>(nodes.size()); }
};

/// Golub-Welsch from the Jacobi matrix of the monic recurrence.
inline GaussRule golub_welsch(const Eigen::VectorXd& diag, const Eigen::VectorXd& off) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) throw PrecisionError("golub_welsch: eigensolver failed");
  GaussRule r;
  const auto n = diag.size();
  r.nodes.resize(n);
  r.weights.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    r.nodes[i] = es.eigenvalues()[i];
    const double v = es.eigenvectors()(0, i);
    r.weights[i] = v * v;
  }
  return r;
}

/// Weight (1 - t)^a (1 + t)^b on [-1, 1].
inline GaussRule gauss_jacobi(int n, double a, double b) {
  if (n < 1) throw InvalidParameter("gauss_jacobi: order must be >= 1");
  if (!(a > -1.0) || !(b > -1.0)) throw InvalidParameter("gauss_jacobi: exponents must be > -1");
  Eigen::VectorXd diag(n), off(n > 1 ? n - 1 : 0);
  const double s = a + b;
  diag[0] = (b - a) / (s + 2.0);
  for (int i = 1; i < n; ++i) {
    const double m = 2.0 * i + s;
    diag[i] = (b * b - a * a) / (m * (m + 2.0));
  }
  for (int i = 1; i < n; ++i) {
    const double m = 2.0 * i + s;
    const double num = 4.0 * i * (i + a) * (i + b) * (i + s);
    const double den = m * m * (m + 1.0) * (m - 1.0);
    off[i - 1] = std::sqrt(num / den);
  }
  return golub_welsch(diag, off);
}

/// Weight u^a e^{-u} on [0, inf).
inline GaussRule gauss_laguerre(int n, double a) {
  if (n < 1) throw InvalidParameter("gauss_laguerre: order must be >= 1");
  if (!(a > -1.0)) throw InvalidParameter("gauss_laguerre: exponent must be > -1");
  Eigen::VectorXd diag(n), off(n > 1 ? n - 1 : 0);
  for (int i = 0; i < n; ++i) diag[i] = 2.0 * i + a + 1.0;
  for (int i = 1; i < n; ++i) off[i - 1] = std::sqrt(i * (i + a));
  return golub_welsch(diag, off);
}

/// Gauss-Legendre on [lo, hi] with weights summing to hi - lo.
inline GaussRule gauss_legendre(int n, double lo = -1.0, double hi = 1.0) {
  GaussRule r = gauss_jacobi(n, 0.0, 0.0);
  const double h = 0.5 * (hi - lo), c = 0.5 * (hi + lo);
  for (int i = 0; i < n; ++i) {
    r.nodes[i] = c + h * r.nodes[i];
    r.weights[i] *= 2.0 * h;
  }
  return r;
}

/**
 * Tanh-sinh over [a, b] through the reference interval, passing f the exact
 * distance to the nearer endpoint so integrands can stay accurate there.
 * f(pos, dist_to_a, dist_to_b).
 */
template <class F>
double tanh_sinh_interval(boost::math::quadrature::tanh_sinh<double>& ts, F f, double a,
                          double b, double tol) {
  const double h = 0.5 * (b - a);
  auto g = [&](double s, double sc) {
    double da, db;
    if (s < 0) {
      da = -h * sc;
      db = (b - a) - da;
    } else {
      db = h * sc;
      da = (b - a) - db;
    }
    if (da <= 0.0 || db <= 0.0) return 0.0;
    return f(s < 0 ? a + da : b - db, da, db);
  };
  return h * ts.integrate(g, tol);
}

}  // namespace dunkl
