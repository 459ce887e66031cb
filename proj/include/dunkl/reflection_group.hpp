#pragma once

#include <deque>
#include <vector>

#include "dunkl/root_system.hpp"

namespace dunkl {

/**
 * Finite reflection group generated by the roots of a RootSystem.
 *
 * cayley[g][a] is the index of sigma_a o g.
 */
struct ReflectionGroup {
  std::vector<Mat> elements;
  int identity_index = 0;
  std::vector<std::vector<int>> cayley;

  int order() const { return static_cast<int>(elements.size()); }
  Vec apply(int g, const Vec& y) const { return elements[g] * y; }
  int find(const Mat& m, double tol = 1e-9) const {
    for (int i = 0; i < order(); ++i)
      if ((elements[i] - m).norm() < tol) return i;
    return -1;
  }
};

inline ReflectionGroup generate_group(const RootSystem& rs, int cap = 10000) {
  ReflectionGroup grp;
  const int n = rs.dim;
  std::vector<Mat> gens;
  for (int a = 0; a < rs.size(); ++a) gens.push_back(reflection_matrix(rs.roots[a]));

  grp.elements.push_back(Mat::Identity(n, n));
  grp.identity_index = 0;
  std::deque<int> queue{0};
  while (!queue.empty()) {
    const int g = queue.front();
    queue.pop_front();
    for (const Mat& s : gens) {
      Mat prod = s * grp.elements[g];
      if (grp.find(prod) < 0) {
        if (grp.order() >= cap)
          throw NonFiniteGroup("generate_group: closure exceeded the element cap");
        grp.elements.push_back(std::move(prod));
        queue.push_back(grp.order() - 1);
      }
    }
  }

  grp.cayley.assign(grp.order(), std::vector<int>(rs.size(), -1));
  for (int g = 0; g < grp.order(); ++g)
    for (int a = 0; a < rs.size(); ++a) {
      const int h = grp.find(gens[a] * grp.elements[g]);
      if (h < 0) throw NonFiniteGroup("generate_group: Cayley product left the group");
      grp.cayley[g][a] = h;
    }
  return grp;
}

}  // namespace dunkl
