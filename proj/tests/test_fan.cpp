#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "tropscat/fan.hpp"

using namespace tropscat;

static RatVec rv(std::vector<long> xs) {
  RatVec v;
  for (long x : xs) v.push_back(Rat(x));
  return v;
}
static IntVec iv(std::vector<long> xs) {
  IntVec v;
  for (long x : xs) v.push_back(Int(x));
  return v;
}

TEST_CASE("normal fan of the unit square") {
  Polyhedron p = Polyhedron::from_points({rv({0, 0}), rv({1, 0}), rv({0, 1}), rv({1, 1})});
  Fan f = normal_fan(p);
  CHECK(f.maximal_cones().size() == 4);
  CHECK(f.is_complete());
  // the four quadrants
  CHECK(f.has_cone(Cone::from_rays({iv({1, 0}), iv({0, 1})}, 2)));
  CHECK(f.has_cone(Cone::from_rays({iv({-1, 0}), iv({0, -1})}, 2)));
}

TEST_CASE("normal fan of a segment lives in the dual of its span") {
  Polyhedron p = Polyhedron::from_points({rv({0, 0}), rv({1, 0})});
  Fan f = normal_fan(p);
  CHECK(f.ambient_dim() == 1);
  CHECK(f.maximal_cones().size() == 2);
  CHECK(f.is_complete());
}

TEST_CASE("normal fan of the standard 2-simplex is the plane fan") {
  Polyhedron p = Polyhedron::from_points({rv({0, 0}), rv({1, 0}), rv({0, 1})});
  Fan f = normal_fan(p);
  CHECK(f.maximal_cones().size() == 3);
  CHECK(f.is_complete());
  // rays (-1,-1), (1,0), (0,1): hand computation from the vertex cones
  bool r1 = false, r2 = false, r3 = false;
  for (const Cone& c : f.cones()) {
    if (c.dim() != 1 || !c.lines().empty()) continue;
    if (c.rays()[0] == iv({-1, -1})) r1 = true;
    if (c.rays()[0] == iv({1, 0})) r2 = true;
    if (c.rays()[0] == iv({0, 1})) r3 = true;
  }
  CHECK(r1);
  CHECK(r2);
  CHECK(r3);
}

TEST_CASE("normal fan rejects unbounded input") {
  Polyhedron p = Polyhedron::from_points({rv({0, 0})}, {iv({1, 0})});
  CHECK_THROWS_WITH_AS(normal_fan(p), doctest::Contains("not a polytope"), Error);
}

TEST_CASE("normal fan is complete for full-dimensional random polytopes") {
  // a few deterministic small cases
  std::vector<std::vector<RatVec>> cases = {
      {rv({0, 0}), rv({2, 0}), rv({0, 3}), rv({-1, -1})},
      {rv({0, 0}), rv({1, 0}), rv({1, 1}), rv({0, 2}), rv({-1, 1})},
  };
  for (auto& pts : cases) {
    Fan f = normal_fan(Polyhedron::from_points(pts));
    CHECK(f.is_complete());
  }
}

TEST_CASE("projective plane fan localized at a ray") {
  Cone c0 = Cone::from_rays({iv({-1, -1}), iv({1, 0})}, 2);
  Cone c1 = Cone::from_rays({iv({1, 0}), iv({0, 1})}, 2);
  Cone c2 = Cone::from_rays({iv({0, 1}), iv({-1, -1})}, 2);
  Fan p2 = Fan::from_cones({c0, c1, c2}, 2);
  CHECK(p2.is_complete());
  Cone tau = Cone::from_rays({iv({-1, -1})}, 2);
  Fan loc = localize_fan(p2, tau);
  // two half-planes {y >= x} and {y <= x}
  Cone upper = Cone::from_facets({iv({1, -1})}, 2);
  Cone lower = Cone::from_facets({iv({-1, 1})}, 2);
  CHECK(loc.has_cone(upper));
  CHECK(loc.has_cone(lower));
  auto max = loc.maximal_cones();
  CHECK(max.size() == 2);
  CHECK(loc.is_complete());
}

TEST_CASE("localizing at the zero cone and at a maximal cone") {
  Cone c0 = Cone::from_rays({iv({-1, -1}), iv({1, 0})}, 2);
  Cone c1 = Cone::from_rays({iv({1, 0}), iv({0, 1})}, 2);
  Cone c2 = Cone::from_rays({iv({0, 1}), iv({-1, -1})}, 2);
  Fan p2 = Fan::from_cones({c0, c1, c2}, 2);
  Fan same = localize_fan(p2, Cone::zero(2));
  CHECK(same.equals(p2));
  Fan whole = localize_fan(p2, c1);
  auto max = whole.maximal_cones();
  REQUIRE(max.size() == 1);
  CHECK(max[0].dim() == 2);
  CHECK(max[0].lines().size() == 2);  // the whole space
  // localizing twice at nested cones equals localizing once at the larger
  // (the inner cone becomes tau + span(omega) after the first localization)
  Cone ray = Cone::from_rays({iv({1, 0})}, 2);
  Fan via = localize_fan(localize_fan(p2, ray), c1.add_lineality(ray.rays()));
  Fan direct = localize_fan(p2, c1);
  CHECK(via.equals(direct));
}

TEST_CASE("standard and elementary simplex predicates") {
  Polyhedron std2 = Polyhedron::from_points({rv({0, 0}), rv({1, 0}), rv({0, 1})});
  CHECK(is_standard_simplex(std2));
  CHECK(is_elementary(std2));

  Polyhedron seg2 = Polyhedron::from_points({rv({0, 0}), rv({2, 0})});
  CHECK(!is_standard_simplex(seg2));
  CHECK(!is_elementary(seg2));  // midpoint is a lattice point

  Polyhedron square = Polyhedron::from_points({rv({0, 0}), rv({1, 0}), rv({0, 1}), rv({1, 1})});
  CHECK(!is_standard_simplex(square));
  CHECK(is_elementary(square));

  // skew unimodular simplex is still standard
  Polyhedron skew = Polyhedron::from_points({rv({1, 1}), rv({2, 1}), rv({1, 2})});
  CHECK(is_standard_simplex(skew));

  // non-integral input errors
  Polyhedron half = Polyhedron::from_points({RatVec{Rat(1, 2), Rat(0)}, rv({1, 1}), rv({0, 1})});
  CHECK_THROWS_AS(is_standard_simplex(half), Error);
}

TEST_CASE("lower dimensional standard simplex inside a bigger chart") {
  Polyhedron tri3 = Polyhedron::from_points({rv({0, 0, 0}), rv({1, 0, 0}), rv({0, 1, 0})});
  CHECK(is_standard_simplex(tri3));
  Polyhedron seg3 = Polyhedron::from_points({rv({0, 0, 0}), rv({1, 1, 0})});
  CHECK(is_standard_simplex(seg3));
  Polyhedron fat = Polyhedron::from_points({rv({0, 0, 0}), rv({1, 1, 0}), rv({1, -1, 0})});
  CHECK(!is_standard_simplex(fat));  // index 2 in its saturated tangent lattice
}

TEST_CASE("pullback fan through a projection") {
  // fan of P^1 in R pulled back to R^2 via projection to first coordinate
  Cone plus = Cone::from_rays({iv({1})}, 1);
  Cone minus = Cone::from_rays({iv({-1})}, 1);
  Fan p1 = Fan::from_cones({plus, minus}, 1);
  RatMat proj(1, 2);
  proj.at(0, 0) = 1;
  Fan pulled = pullback_fan(p1, proj, 2);
  CHECK(pulled.is_complete());
  auto max = pulled.maximal_cones();
  CHECK(max.size() == 2);
  for (const Cone& c : max) CHECK(c.lines().size() == 1);
}
