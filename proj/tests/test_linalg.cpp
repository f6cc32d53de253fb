#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "tropscat/linalg.hpp"

using namespace tropscat;

TEST_CASE("primitive vectors") {
  CHECK(primitive(IntVec{Int(2), Int(4), Int(-6)}) == IntVec{Int(1), Int(2), Int(-3)});
  CHECK(primitive(RatVec{Rat(1, 2), Rat(1, 3)}) == IntVec{Int(3), Int(2)});
  CHECK(primitive(IntVec{Int(0), Int(0)}) == IntVec{Int(0), Int(0)});
}

TEST_CASE("rational solve and inverse") {
  RatMat a = RatMat::from_int({{Int(1), Int(2)}, {Int(3), Int(5)}}, 2);
  auto x = a.solve({Rat(1), Rat(2)});
  REQUIRE(x.has_value());
  CHECK(dot(a.row(0), *x) == Rat(1));
  CHECK(dot(a.row(1), *x) == Rat(2));
  auto inv = a.inverse();
  REQUIRE(inv.has_value());
  CHECK(a.multiply(*inv) == RatMat::identity(2));
  CHECK(a.determinant() == Rat(-1));
}

TEST_CASE("inconsistent system") {
  RatMat a = RatMat::from_int({{Int(1), Int(1)}, {Int(2), Int(2)}}, 2);
  CHECK(!a.solve({Rat(0), Rat(1)}).has_value());
  CHECK(a.rank() == 1);
  CHECK(a.nullspace().size() == 1);
}

TEST_CASE("hermite normal form") {
  IntMat a = IntMat::from_rows({{Int(2), Int(4)}, {Int(1), Int(3)}}, 2);
  IntMat u;
  IntMat h = hermite_normal_form(a, &u);
  CHECK(u.multiply(a) == h);
  CHECK(abs(u.determinant()) == 1);
  // HNF of a full-rank 2x2 with det 2
  CHECK(h.at(0, 0) * h.at(1, 1) == 2);
  CHECK(h.at(1, 0) == 0);
}

TEST_CASE("smith diagonal") {
  IntMat a = IntMat::from_rows({{Int(2), Int(0)}, {Int(0), Int(3)}}, 2);
  auto d = smith_diagonal(a);
  REQUIRE(d.size() == 2);
  CHECK(d[0] == 1);
  CHECK(d[1] == 6);
}

TEST_CASE("lattice span basis saturates") {
  // (1,1),(1,-1) generate an index-2 sublattice; the saturation is Z^2
  auto b = lattice_span_basis({{Int(1), Int(1)}, {Int(1), Int(-1)}}, 2);
  CHECK(b.size() == 2);
  CHECK(generates_saturated_lattice(b, 2));
  CHECK(!generates_saturated_lattice({{Int(1), Int(1)}, {Int(1), Int(-1)}}, 2));

  auto s = lattice_span_basis({{Int(2), Int(4), Int(0)}}, 3);
  REQUIRE(s.size() == 1);
  CHECK(s[0] == IntVec{Int(1), Int(2), Int(0)});
}

TEST_CASE("unimodular inverse") {
  IntMat m = IntMat::from_rows({{Int(1), Int(1)}, {Int(0), Int(1)}}, 2);
  IntMat inv = m.unimodular_inverse();
  CHECK(m.multiply(inv) == IntMat::identity(2));
}
