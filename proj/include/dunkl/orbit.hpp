#pragma once

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>
#include <vector>

#include "dunkl/reflection_group.hpp"

namespace dunkl {

struct OrbitDistance {
  double d = 0.0;
  int argmin = 0;
};

/// d(x, y) = min_g |x - g y|; ties go to the lowest element index.
inline OrbitDistance orbit_distance(const RootSystem& rs, const ReflectionGroup& grp,
                                    const Vec& x, const Vec& y) {
  if (x.size() != rs.dim || y.size() != rs.dim)
    throw InvalidParameter("orbit_distance: dimension mismatch");
  OrbitDistance best{std::numeric_limits<double>::infinity(), 0};
  for (int g = 0; g < grp.order(); ++g) {
    const double dist = (x - grp.apply(g, y)).norm();
    if (dist < best.d) best = {dist, g};
  }
  return best;
}

/// Squared-distance slack used to decide whether an orbit point attains d(x, y).
inline double chamber_tol_sq(const Vec& x, const Vec& y) {
  return 4e-9 * (1.0 + x.norm()) * (1.0 + y.norm());
}

/// Wall test for closed chambers.
inline bool on_wall(const RootSystem& rs, const Vec& x, int root) {
  return std::abs(x.dot(rs.roots[root])) <= 1e-9 * (1.0 + x.norm());
}

inline bool wall_adjacent(const RootSystem& rs, const Vec& x) {
  for (int a : rs.positive)
    if (on_wall(rs, x, a)) return true;
  return false;
}

/// True when no positive root strictly separates x and y.
inline bool same_closed_chamber(const RootSystem& rs, const Vec& x, const Vec& y) {
  for (int a : rs.positive) {
    if (on_wall(rs, x, a) || on_wall(rs, y, a)) continue;
    if ((x.dot(rs.roots[a]) > 0) != (y.dot(rs.roots[a]) > 0)) return false;
  }
  return true;
}

namespace detail {

inline std::vector<char> goal_elements(const RootSystem& rs, const ReflectionGroup& grp,
                                       const Vec& x, const Vec& y) {
  const double d = orbit_distance(rs, grp, x, y).d;
  const double tol = chamber_tol_sq(x, y);
  std::vector<char> goal(grp.order(), 0);
  for (int g = 0; g < grp.order(); ++g)
    goal[g] = (x - grp.apply(g, y)).squaredNorm() - d * d <= tol;
  return goal;
}

}  // namespace detail

/// n(x, y): BFS depth from the identity to the nearest element attaining d(x, y).
inline int reflection_count(const RootSystem& rs, const ReflectionGroup& grp, const Vec& x,
                            const Vec& y) {
  const auto goal = detail::goal_elements(rs, grp, x, y);
  std::vector<int> depth(grp.order(), -1);
  std::deque<int> queue{grp.identity_index};
  depth[grp.identity_index] = 0;
  while (!queue.empty()) {
    const int g = queue.front();
    queue.pop_front();
    if (goal[g]) return depth[g];
    for (int a = 0; a < rs.size(); ++a) {
      const int h = grp.cayley[g][a];
      if (depth[h] < 0) {
        depth[h] = depth[g] + 1;
        queue.push_back(h);
      }
    }
  }
  throw std::logic_error("reflection_count: no element attains the orbit distance");
}

/**
 * Greedy chain of positive roots with strictly decreasing |x - z_j|, ending
 * at a point z with n(x, z) = 0.
 */
inline std::vector<int> shortening_sequence(const RootSystem& rs, const ReflectionGroup& grp,
                                            const Vec& x, const Vec& y) {
  std::vector<int> seq;
  Vec z = y;
  const double d = orbit_distance(rs, grp, x, y).d;
  const double tol = chamber_tol_sq(x, y);
  while ((x - z).squaredNorm() - d * d > tol) {
    if (static_cast<int>(seq.size()) >= grp.order())
      throw std::logic_error("shortening_sequence: exceeded |G| steps");
    const double cur = (x - z).squaredNorm();
    int best = -1;
    double best_val = cur;
    for (int a : rs.positive) {
      const double v = (x - reflect(rs.roots[a], z)).squaredNorm();
      if (v < best_val) {
        best_val = v;
        best = a;
      }
    }
    if (best < 0) throw std::logic_error("shortening_sequence: no decreasing root");
    seq.push_back(best);
    z = reflect(rs.roots[best], z);
  }
  return seq;
}

}  // namespace dunkl
