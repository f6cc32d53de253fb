#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "tropscat/fixtures.hpp"
#include "tropscat/singular.hpp"

using namespace tropscat;

TEST_CASE("plane fixture has an empty singular locus") {
  TropicalManifold m = plane_fixture();
  OpenGluingData s;
  MonodromyCertificate mono = certify_monodromy(m);
  CHECK(singular_locus(m, s, mono).empty());
}

TEST_CASE("focus-focus singular locus has one essential point stratum") {
  TropicalManifold m = ff_fixture(1);
  OpenGluingData s;
  MonodromyCertificate mono = certify_monodromy(m);
  std::vector<SingularStratum> strata = singular_locus(m, s, mono);
  // one point stratum per edge (7 edges), exactly one essential
  CHECK(strata.size() == 7);
  int essential = 0;
  for (const SingularStratum& st : strata) {
    CHECK(st.cone.dim() == 0);
    if (st.essential) {
      ++essential;
      CHECK(st.tau == "rho");
    }
  }
  CHECK(essential == 1);
}

TEST_CASE("bad gluing data is rejected by singular_locus") {
  TropicalManifold m = ff_fixture(1);
  MonodromyCertificate mono = certify_monodromy(m);
  OpenGluingData bad;
  PMMap pm;
  pm.carrier = "rho";
  pm.exps["g"]["U0"] = {Rat(0), Rat(1)};
  pm.exps["g"]["L0"] = {Rat(0), Rat(1)};
  bad.set("v0", "rho", pm);  // breaks the chain v0 < rho < U0
  CHECK_THROWS_AS(singular_locus(m, bad, mono), Error);
}

// independent oracle: the trace of the stratum attached to the face F of tau
// meets int(omega) exactly when F = omega... wait: when F is a face of omega;
// the trace is then the inner normal cone N(F, omega) computed directly from
// the omega polytope.
static std::optional<Polyhedron> oracle_trace(const TropicalManifold& m, const std::string& tau,
                                              const Polyhedron& face_of_tau, const RatVec& c_tau,
                                              const std::string& omega) {
  if (!m.complex.has_arrow(omega, tau)) return std::nullopt;
  const Arrow& a = m.complex.arrow(omega, tau);
  Polyhedron omega_in_tau = a.image(m.complex.cell(omega));
  // F must be a face of omega (as subsets of tau's chart)
  bool f_inside = true;
  for (const RatVec& v : face_of_tau.points())
    if (!omega_in_tau.contains(v)) f_inside = false;
  for (const IntVec& r : face_of_tau.recession_rays())
    if (!omega_in_tau.recession_cone().contains(r)) f_inside = false;
  if (!f_inside) return std::nullopt;
  // express F in the omega chart and take its inner normal cone there
  const Polyhedron& op = m.complex.cell(omega);
  RatMat am(a.map.rows(), a.map.cols());
  for (size_t i = 0; i < a.map.rows(); ++i)
    for (size_t j = 0; j < a.map.cols(); ++j) am.at(i, j) = Rat(a.map.at(i, j));
  std::vector<RatVec> fpts;
  for (const RatVec& v : face_of_tau.points()) {
    RatVec rhs(v.size());
    for (size_t i = 0; i < v.size(); ++i) rhs[i] = v[i] - Rat(a.shift[i]);
    auto x = am.solve(rhs);
    if (!x) return std::nullopt;
    fpts.push_back(*x);
  }
  Polyhedron f_in_omega = Polyhedron::from_points(fpts);
  RatVec f0 = f_in_omega.relative_interior_point();
  std::vector<IntVec> normals;
  for (const RatVec& q : op.points()) {
    RatVec diff = sub(f0, q);
    if (!is_zero(diff)) normals.push_back(primitive(diff));
  }
  for (const IntVec& r : op.recession_rays()) normals.push_back(negate(r));
  Cone nf = Cone::from_facets(normals, op.ambient_dim());
  if (nf.dim() >= op.dim()) return std::nullopt;  // not a stratum cone
  IntMat at = a.map.transpose();
  RatVec shift = at.to_rat().apply(c_tau);
  return Polyhedron::from_points({shift}, nf.rays(), nf.lines());
}

TEST_CASE("stratification closure on the 3-torus prism fixture") {
  TropicalManifold m = t3_fixture();
  OpenGluingData s;
  MonodromyCertificate mono = certify_monodromy(m);
  std::vector<SingularStratum> strata = singular_locus(m, s, mono);
  CHECK(!strata.empty());
  // a triangle cell contributes its origin and three rays
  std::string tri;
  for (const std::string& c : m.complex.cells_of_dim(2))
    if (m.complex.cell(c).vertices().size() == 3) {
      tri = c;
      break;
    }
  REQUIRE(!tri.empty());
  int tri_strata = 0;
  for (const SingularStratum& st : strata)
    if (st.tau == tri) ++tri_strata;
  CHECK(tri_strata == 4);

  // closure property with exact polyhedral comparison against computed strata
  // and against the independent face-matching oracle
  auto strata_of = [&](const std::string& tau) {
    std::vector<SingularStratum> out;
    for (const SingularStratum& st : strata)
      if (st.tau == tau) out.push_back(st);
    return out;
  };
  int nonempty_traces = 0;
  for (const SingularStratum& st : strata) {
    for (const std::string& omega : m.complex.faces_of(st.tau)) {
      if (m.complex.cell_dim(omega) == 0) {
        // vertices carry no strata; the closure must avoid their interiors
        CHECK(!stratum_closure_trace(m, st, omega).has_value());
        continue;
      }
      auto trace = stratum_closure_trace(m, st, omega);
      // compare against the union of computed strata of omega
      std::vector<SingularStratum> target = strata_of(omega);
      if (!trace) {
        // no stratum of omega may coincide with a nonempty trace: nothing to
        // verify beyond the oracle below
      } else {
        ++nonempty_traces;
        // the trace must be exactly a union of closures of strata of omega;
        // for cones of a fan this reduces to: some stratum closure equals the
        // trace, and all strata inside the trace are its faces
        bool matched = false;
        for (const SingularStratum& cand : target) {
          Polyhedron cl = Polyhedron::from_points({cand.translation.empty()
                                                       ? RatVec(cand.cone.ambient_dim(), Rat(0))
                                                       : cand.translation},
                                                  cand.cone.rays(), cand.cone.lines());
          if (cl.equals(*trace)) matched = true;
        }
        CHECK(matched);
      }
    }
  }
  CHECK(nonempty_traces > 0);

  // oracle comparison: enumerate faces of each carrier and match
  for (const auto& [tau, poly] : m.complex.cells()) {
    size_t d = poly.dim();
    if (d == 0 || d >= 3) continue;
    for (const auto& [face, cone] : inner_normal_cones(poly)) {
      if (cone.dim() >= d) continue;
      SingularStratum st;
      st.tau = tau;
      st.cone = cone;
      st.translation = RatVec(d, Rat(0));
      for (const std::string& omega : m.complex.faces_of(tau)) {
        if (m.complex.cell_dim(omega) == 0) continue;
        auto trace = stratum_closure_trace(m, st, omega);
        auto oracle = oracle_trace(m, tau, face, st.translation, omega);
        CHECK(trace.has_value() == oracle.has_value());
        if (trace && oracle) CHECK(trace->equals(*oracle));
      }
    }
  }
}

TEST_CASE("essential closure property holds on the focus-focus fixture") {
  TropicalManifold m = ff_fixture(1);
  OpenGluingData s;
  MonodromyCertificate mono = certify_monodromy(m);
  std::vector<SingularStratum> strata = singular_locus(m, s, mono);
  for (const SingularStratum& st : strata) {
    if (!st.essential) continue;
    // point strata are closed; their closures meet no other cell interiors
    for (const std::string& omega : m.complex.faces_of(st.tau))
      CHECK(!stratum_closure_trace(m, st, omega).has_value());
  }
}
