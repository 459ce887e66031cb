#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "dunkl/reflection_group.hpp"
#include "dunkl/root_system.hpp"

using namespace dunkl;
using Catch::Approx;

namespace {

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

}  // namespace

TEST_CASE("rank one product system") {
  const RootSystem rs = build_product_a1(1, {1.0});
  REQUIRE(rs.size() == 2);
  CHECK(rs.roots[0][0] == Approx(std::numbers::sqrt2));
  CHECK(rs.roots[1][0] == Approx(-std::numbers::sqrt2));
  CHECK(generate_group(rs).order() == 2);
  CHECK(rs.homogeneous_dimension() == Approx(3.0));
}

TEST_CASE("product system with unequal multiplicities") {
  const RootSystem rs = build_product_a1(2, {0.5, 2.0});
  CHECK(rs.size() == 4);
  CHECK(generate_group(rs).order() == 4);
  CHECK(rs.mult[0] == 0.5);
  CHECK(rs.mult[rs.opposite(1)] == 2.0);
}

TEST_CASE("three coordinate sign flips close to eight elements") {
  const RootSystem rs = build_product_a1(3, {1.0, 1.0, 1.0});
  const ReflectionGroup grp = generate_group(rs);
  REQUIRE(grp.order() == 8);
  // Every diagonal sign matrix must be present.
  for (int mask = 0; mask < 8; ++mask) {
    Mat d = Mat::Zero(3, 3);
    for (int i = 0; i < 3; ++i) d(i, i) = (mask >> i) & 1 ? -1.0 : 1.0;
    CHECK(grp.find(d) >= 0);
  }
}

TEST_CASE("dihedral roots follow the angular layout") {
  const RootSystem rs = build_dihedral(3, 1.0);
  CHECK(rs.roots[0][0] == Approx(0.0).margin(1e-15));
  CHECK(rs.roots[0][1] == Approx(std::numbers::sqrt2));
  for (int j = 0; j < rs.size(); ++j) {
    const double phi = std::numbers::pi * j / 3;
    CHECK(rs.roots[j][0] == Approx(std::numbers::sqrt2 * std::sin(phi)).margin(1e-14));
    CHECK(rs.roots[j][1] == Approx(std::numbers::sqrt2 * std::cos(phi)).margin(1e-14));
  }
}

TEST_CASE("dihedral m = 4 with two classes") {
  const RootSystem rs = build_dihedral(4, 1.0, 2.0);
  CHECK(generate_group(rs).order() == 8);
  for (const Vec& a : rs.roots) CHECK(std::abs(a.norm() - std::numbers::sqrt2) < 1e-12);
  for (int j = 0; j < rs.size(); ++j) CHECK(rs.mult[j] == (j % 2 == 0 ? 1.0 : 2.0));
}

TEST_CASE("multiplicity is invariant under the whole group") {
  for (auto rs : {build_dihedral(3, 1.0), build_dihedral(4, 0.5, 1.5), build_dihedral(6, 2.0, 0.3)}) {
    const ReflectionGroup grp = generate_group(rs);
    for (int g = 0; g < grp.order(); ++g)
      for (int a = 0; a < rs.size(); ++a) {
        const Vec img = grp.elements[g] * rs.roots[a];
        int hit = -1;
        for (int b = 0; b < rs.size(); ++b)
          if ((rs.roots[b] - img).norm() < 1e-9) hit = b;
        REQUIRE(hit >= 0);
        CHECK(rs.mult[hit] == rs.mult[a]);
      }
  }
}

TEST_CASE("reflection formula") {
  const RootSystem p2 = build_product_a1(2, {1.0, 1.0});
  const Vec r = reflect(p2, 0, v2(1, 2));
  CHECK(r[0] == Approx(-1.0));
  CHECK(r[1] == Approx(2.0));

  const RootSystem d3 = build_dihedral(3, 1.0);
  for (int a = 0; a < d3.size(); ++a) {
    const Vec perp = v2(-d3.roots[a][1], d3.roots[a][0]);
    CHECK((reflect(d3, a, perp) - perp).norm() < 1e-14);
    CHECK((reflect(d3, a, reflect(d3, a, v2(0.3, -1.7))) - v2(0.3, -1.7)).norm() < 1e-14);
  }
  const Vec m = reflect(d3, 0, v2(1, 1));
  CHECK(m[0] == Approx(1.0));
  CHECK(m[1] == Approx(-1.0));
  CHECK_THROWS_AS(reflect(d3, 12, v2(1, 1)), InvalidParameter);
  CHECK_THROWS_AS(reflect(d3, 0, Vec::Ones(3)), InvalidParameter);
}

TEST_CASE("weight is the product over all roots") {
  const RootSystem rs = build_dihedral(4, 0.5, 1.25);
  const Vec x = v2(0.7, -1.3);
  double w = 1.0;
  for (int a = 0; a < rs.size(); ++a) w *= std::pow(std::abs(x.dot(rs.roots[a])), rs.mult[a]);
  CHECK(weight(rs, x) == Approx(w).epsilon(1e-13));
}

TEST_CASE("malformed systems are rejected") {
  CHECK_THROWS_AS(build_product_a1(2, {1.0}), InvalidParameter);
  CHECK_THROWS_AS(build_product_a1(1, {0.0}), InvalidParameter);
  CHECK_THROWS_AS(build_product_a1(0, {}), InvalidParameter);
  CHECK_THROWS_AS(build_dihedral(3, 1.0, 2.0), InvalidParameter);
  CHECK_THROWS_AS(build_dihedral(2, 1.0), InvalidParameter);
  CHECK_THROWS_AS(build_dihedral(5, -1.0), InvalidParameter);

  RootSystem bad = build_product_a1(1, {1.0});
  bad.roots[0] = Vec::Constant(1, 1.0);
  bad.roots[1] = Vec::Constant(1, -1.0);
  CHECK_THROWS_AS(validate(bad), InvalidParameter);

  RootSystem unpaired = build_product_a1(2, {1.0, 1.0});
  unpaired.roots[3] = -unpaired.roots[0];
  CHECK_THROWS_AS(validate(unpaired), InvalidParameter);

  RootSystem variant = build_dihedral(3, 1.0);
  variant.mult[1] = 2.0;
  variant.mult[4] = 2.0;
  CHECK_THROWS_AS(validate(variant), InvalidParameter);
}
