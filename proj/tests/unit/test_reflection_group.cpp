#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "dunkl/reflection_group.hpp"

using namespace dunkl;

namespace {

void check_group_axioms(const RootSystem& rs, const ReflectionGroup& grp) {
  const int n = rs.dim;
  for (int g = 0; g < grp.order(); ++g) {
    const Mat& M = grp.elements[g];
    CHECK((M * M.transpose() - Mat::Identity(n, n)).norm() < 1e-10);
    CHECK(grp.find(M.transpose()) >= 0);
    for (int h = 0; h < grp.order(); ++h) CHECK(grp.find(M * grp.elements[h]) >= 0);
    for (int a = 0; a < rs.size(); ++a) CHECK(grp.cayley[grp.cayley[g][a]][a] == g);
  }
}

}  // namespace

TEST_CASE("product groups satisfy the group axioms") {
  for (int n = 1; n <= 3; ++n) {
    const RootSystem rs = build_product_a1(n, std::vector<double>(n, 1.0));
    const ReflectionGroup grp = generate_group(rs);
    CHECK(grp.order() == (1 << n));
    check_group_axioms(rs, grp);
  }
}

TEST_CASE("dihedral orders and element types") {
  for (int m : {3, 4, 5, 6, 8}) {
    const RootSystem rs = build_dihedral(m, 1.0);
    const ReflectionGroup grp = generate_group(rs);
    REQUIRE(grp.order() == 2 * m);
    check_group_axioms(rs, grp);
    int rotations = 0, reflections = 0;
    for (const Mat& M : grp.elements) (M.determinant() > 0 ? rotations : reflections)++;
    CHECK(rotations == m);
    CHECK(reflections == m);
    // Rotations are exactly the angles 2 pi j / m.
    for (int j = 0; j < m; ++j) {
      const double a = 2.0 * std::numbers::pi * j / m;
      Mat R(2, 2);
      R << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
      CHECK(grp.find(R) >= 0);
    }
  }
}

TEST_CASE("identity element and Cayley table") {
  const RootSystem rs = build_dihedral(3, 1.0);
  const ReflectionGroup grp = generate_group(rs);
  CHECK((grp.elements[grp.identity_index] - Mat::Identity(2, 2)).norm() == 0.0);
  for (int g = 0; g < grp.order(); ++g)
    for (int a = 0; a < rs.size(); ++a)
      CHECK((grp.elements[grp.cayley[g][a]] - reflection_matrix(rs.roots[a]) * grp.elements[g]).norm() < 1e-12);
}

TEST_CASE("closure cap signals a malformed system") {
  CHECK_THROWS_AS(generate_group(build_dihedral(5, 1.0), 4), NonFiniteGroup);
}
