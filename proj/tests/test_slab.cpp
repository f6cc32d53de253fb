#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "tropscat/algebra.hpp"

using namespace tropscat;

static IntVec iv(std::vector<long> xs) {
  IntVec v;
  for (long x : xs) v.push_back(Int(x));
  return v;
}

// FF-style slab ring: rank 1 lattice, kink 1, f = 1 + z
static RingPtr ff_ring(int order, bool trivial_f = false) {
  Poly f = Poly::one(1);
  if (!trivial_f) f = f + Poly::monomial(1, Coeff(1), iv({1}));
  return Ring::slab_uv(1, 1, f, order);
}

static Element U(const RingPtr& r, int q = 0, long w = 1) {
  return Element::term(r, Coeff(1), q, iv({0}), w);
}
static Element Z(const RingPtr& r, long e, int q = 0) {
  return Element::term(r, Coeff(1), q, iv({e}));
}

TEST_CASE("uv reduces to q^l f") {
  auto r = ff_ring(4);
  Element u = U(r), v = U(r, 0, -1);
  Element uv = u * v;
  Element expect = Z(r, 0, 1) + Z(r, 1, 1);  // q (1 + z)
  CHECK(uv == expect);
  CHECK(uv == v * u);
  // u^2 v = q f u
  Element uuv = u * u * v;
  Element expect2 = U(r, 1, 1) + U(r, 1, 1) * Z(r, 1);
  CHECK(uuv == expect2);
}

TEST_CASE("normal form confluence on random monomials") {
  auto r = ff_ring(5);
  std::mt19937 rng(2024);
  for (int t = 0; t < 60; ++t) {
    auto rnd = [&]() {
      long w = (long)(rng() % 5) - 2;
      long m = (long)(rng() % 5) - 2;
      int q = rng() % 2;
      return Element::term(r, Coeff(Rat((long)(rng() % 5) + 1)), q, iv({m}), w);
    };
    Element a = rnd(), b = rnd(), c = rnd();
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * b == b * a);
  }
}

TEST_CASE("unit of the slab ring") {
  auto r = ff_ring(3);
  Element one = Z(r, 0);
  Element u = U(r);
  CHECK(one * u == u);
  CHECK(u * one == u);
}

TEST_CASE("bv delta on slab generators") {
  auto r = ff_ring(4);
  // directions are (n_rho, n_u); the primitive normal d_rho pairs +1 with u
  Element u_dd = Element::term(r, Coeff(1), 0, iv({0}), 1, {1});   // u d_{(0,1)}
  Element v_dd = Element::term(r, Coeff(1), 0, iv({0}), -1, {1});  // v d_{(0,1)}
  CHECK(bv_delta(u_dd) == U(r));
  CHECK(bv_delta(v_dd) == -U(r, 0, -1));
  // Delta(v d_n) with n = (1,0): the twist contributes z/(1+z) v exactly
  Element v_dn = Element::term(r, Coeff(1), 0, iv({0}), -1, {0});
  Element expect = Element::term(r, Coeff(1), 0, iv({1}), -1).with_denominator(1);
  CHECK(bv_delta(v_dn) == expect);
  // cross-check through multiplication by f: Delta(v d_n) * f == z v
  Element f = Z(r, 0) + Z(r, 1);
  CHECK(bv_delta(v_dn) * f == Element::term(r, Coeff(1), 0, iv({1}), -1));
  // z^m coordinates are untouched by the twist
  Element z_dn = Element::term(r, Coeff(1), 0, iv({1}), 0, {0});
  CHECK(bv_delta(z_dn) == Z(r, 1));
}

TEST_CASE("series expansion oracle for the twist") {
  // expanded geometric series of z/(1+z) against the exact fraction, order 4:
  // truncate the z-adic expansion at z^5 and compare after clearing f
  auto r = ff_ring(4);
  Element v_dn = Element::term(r, Coeff(1), 0, iv({0}), -1, {0});
  Element delta = bv_delta(v_dn);
  // oracle: (z - z^2 + z^3 - z^4 + z^5) v agrees with delta * f up to z^5 v
  Element f = Z(r, 0) + Z(r, 1);
  Element lhs = delta * f;  // = z v exactly
  CHECK(lhs == Element::term(r, Coeff(1), 0, iv({1}), -1));
}

TEST_CASE("bv identity with the slab twist") {
  auto r = ff_ring(3);
  std::mt19937 rng(11);
  for (int t = 0; t < 40; ++t) {
    auto rnd_vf = [&]() {
      Element e = Element::zero(r);
      long w = (long)(rng() % 3) - 1;
      long m = (long)(rng() % 3) - 1;
      int q = rng() % 2;
      for (int i = 0; i < 2; ++i)
        if (rng() % 2) e = e + Element::term(r, Coeff(Rat((long)(rng() % 3) + 1)), q, iv({m}), w, {i});
      return e;
    };
    Element v = rnd_vf(), w = rnd_vf();
    if (v.is_zero() || w.is_zero()) continue;
    CHECK(check_bv_identity(v, w));
  }
}

TEST_CASE("delta squared vanishes in the slab ring") {
  auto r = ff_ring(3);
  std::mt19937 rng(13);
  for (int t = 0; t < 30; ++t) {
    Element e = Element::zero(r);
    for (int j = 0; j < 2; ++j) {
      std::vector<int> wedge = (rng() % 2) ? std::vector<int>{0, 1} : std::vector<int>{(int)(rng() % 2)};
      e = e + Element::term(r, Coeff(Rat((long)(rng() % 5) - 2)), rng() % 2,
                            iv({(long)(rng() % 3) - 1}), (long)(rng() % 3) - 1, wedge);
    }
    CHECK(bv_delta(bv_delta(e)).is_zero());
  }
}

TEST_CASE("slab chart hop and its inverse") {
  auto rf = ff_ring(4);
  auto r1 = ff_ring(4, true);  // semi-flat chart
  // forward: u -> u, v -> f v
  Element v = U(rf, 0, -1);
  Element fv = slab_to_semiflat(v, r1);
  Element expect = U(r1, 0, -1) + U(r1, 0, -1) * Z(r1, 1);
  CHECK(fv == expect);
  CHECK(slab_to_semiflat(U(rf), r1) == U(r1));
  CHECK(slab_to_semiflat(Z(rf, 1), r1) == Z(r1, 1));
  // round trip on generators is the identity
  for (const Element& g : ring_generators(rf)) {
    Element there = slab_to_semiflat(g, r1);
    Element back = semiflat_to_slab(there, rf);
    CHECK(back == g);
  }
  // round trip respects the relation: image of uv is q f
  Element uv = U(rf) * U(rf, 0, -1);
  Element image = slab_to_semiflat(U(rf), r1) * slab_to_semiflat(U(rf, 0, -1), r1);
  CHECK(image == slab_to_semiflat(uv, r1));
}

TEST_CASE("group letters act in the slab ring") {
  auto r = ff_ring(4);
  // a correction factor exp([q z u-free letter, .]) acts as a ring map
  Element letter = Element::term(r, Coeff(1), 1, iv({1}), 0, {1});
  GroupElement g = GroupElement::exponential(letter);
  Element u = U(r), v = U(r, 0, -1);
  CHECK(g.act(u * v) == g.act(u) * g.act(v));
  CHECK(g.compose(g.inverse()).same_action(GroupElement::identity(r)));
}

TEST_CASE("non-unit slab function is rejected") {
  Poly f = Poly::monomial(1, Coeff(1), iv({1}));  // f = z, no constant term
  CHECK_THROWS_WITH_AS(Ring::slab_uv(1, 1, f, 3), doctest::Contains("non-unit"), Error);
}
