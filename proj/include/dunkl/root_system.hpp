#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dunkl/errors.hpp"

namespace dunkl {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class Family { product_a1, dihedral };

inline const char* to_string(Family f) {
  return f == Family::product_a1 ? "product_a1" : "dihedral";
}

/**
 * Normalized root system with a multiplicity function.
 *
 * Roots are stored with the positive subsystem first: indices [0, p) are R+,
 * and index i + p holds -roots[i]. Every root has Euclidean norm sqrt(2).
 */
struct RootSystem {
  Family family = Family::product_a1;
  int dim = 0;
  /// Polygon order m for the dihedral family, 0 otherwise.
  int polygon = 0;
  std::vector<Vec> roots;
  std::vector<int> positive;
  std::vector<double> mult;

  int size() const { return static_cast<int>(roots.size()); }
  int positive_count() const { return static_cast<int>(positive.size()); }
  int opposite(int i) const {
    const int p = positive_count();
    return i < p ? i + p : i - p;
  }
  /// Homogeneous dimension N + sum_{alpha in R} k(alpha).
  double homogeneous_dimension() const {
    double s = dim;
    for (double k : mult) s += k;
    return s;
  }
  double multiplicity_sum() const { return homogeneous_dimension() - dim; }
};

/// sigma_alpha(x) = x - 2 <x, alpha> / |alpha|^2 alpha.
inline Vec reflect(const Vec& alpha, const Vec& x) {
  return x - (2.0 * x.dot(alpha) / alpha.squaredNorm()) * alpha;
}

inline Vec reflect(const RootSystem& rs, int root_index, const Vec& x) {
  if (root_index < 0 || root_index >= rs.size())
    throw InvalidParameter("reflect: root index out of range");
  if (x.size() != rs.dim) throw InvalidParameter("reflect: dimension mismatch");
  return reflect(rs.roots[root_index], x);
}

inline Mat reflection_matrix(const Vec& alpha) {
  const auto n = alpha.size();
  return Mat::Identity(n, n) - (2.0 / alpha.squaredNorm()) * alpha * alpha.transpose();
}

namespace detail {

inline int find_root(const RootSystem& rs, const Vec& v, double tol) {
  for (int i = 0; i < rs.size(); ++i)
    if ((rs.roots[i] - v).norm() < tol) return i;
  return -1;
}

}  // namespace detail

/// Checks every structural invariant; throws InvalidParameter on the first violation.
inline void validate(const RootSystem& rs) {
  if (rs.dim < 1) throw InvalidParameter("root system: dimension must be >= 1");
  if (rs.roots.empty() || rs.size() % 2 != 0)
    throw InvalidParameter("root system: need a nonempty set of +/- pairs");
  if (static_cast<int>(rs.mult.size()) != rs.size())
    throw InvalidParameter("root system: one multiplicity per root required");
  if (rs.positive_count() * 2 != rs.size())
    throw InvalidParameter("root system: positive subsystem must hold half the roots");
  for (int i = 0; i < rs.positive_count(); ++i)
    if (rs.positive[i] != i) throw InvalidParameter("root system: positive roots must come first");

  for (int i = 0; i < rs.size(); ++i) {
    const Vec& a = rs.roots[i];
    if (a.size() != rs.dim) throw InvalidParameter("root system: root dimension mismatch");
    if (std::abs(a.norm() - std::numbers::sqrt2) > 1e-12)
      throw InvalidParameter("root system: every root must have norm sqrt(2)");
    if (!(rs.mult[i] > 0.0)) throw InvalidParameter("root system: multiplicities must be positive");
    if ((rs.roots[rs.opposite(i)] + a).norm() > 1e-12)
      throw InvalidParameter("root system: roots must come in +/- pairs");
    for (int j = 0; j < rs.size(); ++j) {
      if (j == i || j == rs.opposite(i)) continue;
      const double c = std::abs(a.dot(rs.roots[j])) / 2.0;
      if (std::abs(c - 1.0) < 1e-12)
        throw InvalidParameter("root system: only +/- alpha may lie on the line R alpha");
    }
  }
  // Closure and G-invariance of k: checking generators suffices.
  for (int i = 0; i < rs.positive_count(); ++i) {
    for (int j = 0; j < rs.size(); ++j) {
      const int img = detail::find_root(rs, reflect(rs.roots[i], rs.roots[j]), 1e-9);
      if (img < 0) throw InvalidParameter("root system: not closed under reflections");
      if (std::abs(rs.mult[img] - rs.mult[j]) > 1e-12 * (1.0 + rs.mult[j]))
        throw InvalidParameter("root system: multiplicity is not G-invariant");
    }
  }
}

/// Z_2^N: roots +/- sqrt(2) e_i with multiplicity k_i on both signs.
inline RootSystem build_product_a1(int n, const std::vector<double>& k) {
  if (n < 1) throw InvalidParameter("product_a1: N must be >= 1");
  if (static_cast<int>(k.size()) != n)
    throw InvalidParameter("product_a1: need exactly N multiplicities");
  for (double ki : k)
    if (!(ki > 0.0)) throw InvalidParameter("product_a1: multiplicities must be positive");

  RootSystem rs;
  rs.family = Family::product_a1;
  rs.dim = n;
  for (int sign : {1, -1}) {
    for (int i = 0; i < n; ++i) {
      Vec a = Vec::Zero(n);
      a[i] = sign * std::numbers::sqrt2;
      rs.roots.push_back(a);
      rs.mult.push_back(k[i]);
    }
  }
  for (int i = 0; i < n; ++i) rs.positive.push_back(i);
  validate(rs);
  return rs;
}

/**
 * Roots alpha_j = sqrt(2) (sin(pi j / m), cos(pi j / m)), j = 0..2m-1.
 *
 * R+ is j = 0..m-1 (all strictly on one side of the line through the origin
 * at angle pi/2 - pi/(2m) in the (sin, cos) parametrisation). Even j carry
 * k_even, odd j carry k_odd. Accepts m = 2, which lays out A1 x A1 along the
 * coordinate axes; build_dihedral() is the m >= 3 entry point.
 */
inline RootSystem build_dihedral_layout(int m, double k_even, double k_odd) {
  if (m < 2) throw InvalidParameter("dihedral: m must be >= 2");
  if (!(k_even > 0.0) || !(k_odd > 0.0))
    throw InvalidParameter("dihedral: multiplicities must be positive");
  if (m % 2 == 1 && k_even != k_odd)
    throw InvalidParameter("dihedral: odd m has a single reflection class, k_even must equal k_odd");

  RootSystem rs;
  rs.family = Family::dihedral;
  rs.dim = 2;
  rs.polygon = m;
  for (int j = 0; j < 2 * m; ++j) {
    const double phi = std::numbers::pi * j / m;
    Vec a(2);
    a << std::numbers::sqrt2 * std::sin(phi), std::numbers::sqrt2 * std::cos(phi);
    rs.roots.push_back(a);
    rs.mult.push_back(j % 2 == 0 ? k_even : k_odd);
  }
  // Snap the exact pairs so opposite roots negate bit-for-bit.
  for (int j = 0; j < m; ++j) rs.roots[j + m] = -rs.roots[j];
  for (int j = 0; j < m; ++j) rs.positive.push_back(j);
  validate(rs);
  return rs;
}

inline RootSystem build_dihedral(int m, double k_even, double k_odd) {
  if (m < 3) throw InvalidParameter("dihedral: m must be >= 3");
  return build_dihedral_layout(m, k_even, k_odd);
}

inline RootSystem build_dihedral(int m, double k) { return build_dihedral(m, k, k); }

/// Weight w(x) = prod_{alpha in R} |<x, alpha>|^{k(alpha)}.
inline double weight(const RootSystem& rs, const Vec& x) {
  double lw = 0.0;
  for (int i = 0; i < rs.size(); ++i)
    if (rs.mult[i] != 0.0) lw += rs.mult[i] * std::log(std::abs(x.dot(rs.roots[i])));
  return std::exp(lw);
}

}  // namespace dunkl
