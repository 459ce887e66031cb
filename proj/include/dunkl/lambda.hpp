#pragma once

#include <cmath>
#include <vector>

#include "dunkl/orbit.hpp"

namespace dunkl {

/// A word over R+ that lands y in the closed chamber of x.
struct AdmissibleSeq {
  std::vector<int> roots;
  int element = 0;
  int length() const { return static_cast<int>(roots.size()); }
};

namespace detail {

inline void require_positive_t(double t, const char* who) {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError(std::string(who) + ": t must be > 0");
}

inline double rho_factor(const Vec& x, const Vec& z, double sqrt_t) {
  const double s = 1.0 + (x - z).norm() / sqrt_t;
  return 1.0 / (s * s);
}

}  // namespace detail

/// Product of (1 + |x - z_j| / sqrt t)^-2 over the points before each reflection.
inline double rho(const RootSystem& rs, const Vec& x, const Vec& y, double t,
                  const std::vector<int>& seq) {
  detail::require_positive_t(t, "rho");
  const double st = std::sqrt(t);
  double p = 1.0;
  Vec z = y;
  for (int a : seq) {
    p *= detail::rho_factor(x, z, st);
    z = reflect(rs, a, z);
  }
  return p;
}

/// Cap on the number of words visited by the exhaustive oracle.
inline constexpr double kEnumerationCap = 1e7;

inline double word_count(int alphabet, int max_len) {
  double total = 0.0, pw = 1.0;
  for (int l = 0; l <= max_len; ++l) {
    total += pw;
    pw *= alphabet;
  }
  return total;
}

/// Exhaustive list of admissible words of length <= max_len over R+.
inline std::vector<AdmissibleSeq> enumerate_admissible(const RootSystem& rs,
                                                       const ReflectionGroup& grp, const Vec& x,
                                                       const Vec& y, int max_len,
                                                       double cap = kEnumerationCap) {
  if (max_len < 0) throw InvalidParameter("enumerate_admissible: max_len must be >= 0");
  const int p = rs.positive_count();
  if (word_count(p, max_len) > cap)
    throw OracleTooLarge("enumerate_admissible: word count exceeds the cap");

  const double d = orbit_distance(rs, grp, x, y).d;
  const double tol = chamber_tol_sq(x, y);
  std::vector<AdmissibleSeq> out;
  std::vector<int> word;
  std::vector<Vec> pts{y};
  std::vector<Mat> mats{Mat::Identity(rs.dim, rs.dim)};

  auto visit = [&](auto&& self) -> void {
    const Vec z = pts.back();
    if ((x - z).squaredNorm() - d * d <= tol) {
      AdmissibleSeq s;
      s.roots = word;
      s.element = grp.find(mats.back());
      out.push_back(std::move(s));
    }
    if (static_cast<int>(word.size()) == max_len) return;
    for (int a = 0; a < p; ++a) {
      word.push_back(a);
      pts.push_back(reflect(rs.roots[a], z));
      mats.push_back(reflection_matrix(rs.roots[a]) * mats.back());
      self(self);
      word.pop_back();
      pts.pop_back();
      mats.pop_back();
    }
  };
  visit(visit);
  return out;
}

inline double lambda_bruteforce(const RootSystem& rs, const ReflectionGroup& grp, const Vec& x,
                                const Vec& y, double t, int max_len,
                                double cap = kEnumerationCap) {
  detail::require_positive_t(t, "lambda_bruteforce");
  double sum = 0.0;
  for (const auto& s : enumerate_admissible(rs, grp, x, y, max_len, cap))
    sum += rho(rs, x, y, t, s.roots);
  return sum;
}

/**
 * Lambda(x, y, t) by dynamic programming over (length, group element).
 * max_len < 0 selects the full length 2|G|.
 */
inline double lambda_dp(const RootSystem& rs, const ReflectionGroup& grp, const Vec& x,
                        const Vec& y, double t, int max_len = -1) {
  detail::require_positive_t(t, "lambda_dp");
  const int G = grp.order();
  const int L = max_len < 0 ? 2 * G : max_len;
  const auto goal = detail::goal_elements(rs, grp, x, y);
  const double st = std::sqrt(t);

  std::vector<double> f(G);
  for (int g = 0; g < G; ++g) f[g] = detail::rho_factor(x, grp.apply(g, y), st);

  std::vector<double> cur(G, 0.0), next(G);
  cur[grp.identity_index] = 1.0;
  double lambda = 0.0;
  for (int l = 0;; ++l) {
    for (int g = 0; g < G; ++g)
      if (goal[g]) lambda += cur[g];
    if (l == L) break;
    std::fill(next.begin(), next.end(), 0.0);
    for (int g = 0; g < G; ++g) {
      if (cur[g] == 0.0) continue;
      const double v = cur[g] * f[g];
      for (int a : rs.positive) next[grp.cayley[g][a]] += v;
    }
    cur.swap(next);
  }
  return lambda;
}

/// Three-case Lambda_D for dihedral systems, keyed on n(x, y).
inline double lambda_dihedral(const RootSystem& rs, const ReflectionGroup& grp, const Vec& x,
                              const Vec& y, double t) {
  if (rs.family != Family::dihedral)
    throw InvalidUsage("lambda_dihedral: root system is not dihedral");
  detail::require_positive_t(t, "lambda_dihedral");
  const int n = reflection_count(rs, grp, x, y);
  if (n == 0) return 1.0;
  const double st = std::sqrt(t);
  const double base = detail::rho_factor(x, y, st);
  if (n == 1) return base;
  double s = 0.0;
  for (int a : rs.positive) s += detail::rho_factor(x, reflect(rs.roots[a], y), st);
  return base * s;
}

}  // namespace dunkl
