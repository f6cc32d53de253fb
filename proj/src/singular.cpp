#include "tropscat/singular.hpp"

#include <algorithm>

namespace tropscat {

std::vector<std::pair<Polyhedron, Cone>> inner_normal_cones(const Polyhedron& p) {
  std::vector<Polyhedron> faces = p.proper_faces();
  faces.push_back(p);
  std::vector<std::pair<Polyhedron, Cone>> out;
  size_t d = p.ambient_dim();
  for (const Polyhedron& f : faces) {
    RatVec f0 = f.relative_interior_point();
    std::vector<IntVec> normals;
    for (const RatVec& q : p.points()) {
      RatVec diff = sub(f0, q);  // <u, f0> <= <u, q>
      if (!is_zero(diff)) normals.push_back(primitive(diff));
    }
    for (const IntVec& r : p.recession_rays()) normals.push_back(negate(r));  // <u, r> >= 0
    for (const IntVec& l : p.lines()) {
      normals.push_back(l);
      normals.push_back(negate(l));
    }
    out.push_back({f, Cone::from_facets(normals, d)});
  }
  return out;
}

std::vector<SingularStratum> singular_locus(const TropicalManifold& m, const OpenGluingData& s,
                                            const MonodromyCertificate& mono) {
  Report gl = check_gluing(m, s);
  if (!gl.ok()) fail("gluing", "gluing data fails the cocycle check: " + gl.str());
  std::vector<SingularStratum> out;
  size_t n = m.dim();
  for (const auto& [tau, poly] : m.complex.cells()) {
    size_t d = poly.dim();
    if (d == 0 || d >= n) continue;
    RatVec c(d, Rat(0));
    auto it = m.c_tau.find(tau);
    if (it != m.c_tau.end()) c = it->second;
    // the pulled-back product fan of the monodromy polytopes decides
    // essentialness; p = 0 gives the full-space fan
    Fan pullback = Fan::from_cones({Cone::full_space(d)}, d);
    auto jt = mono.per_tau.find(tau);
    if (jt != mono.per_tau.end()) {
      for (const Polyhedron& delta : jt->second.delta) {
        std::vector<IntVec> dirs;
        const std::vector<RatVec>& vs = delta.vertices();
        for (size_t i = 1; i < vs.size(); ++i) dirs.push_back(primitive(sub(vs[i], vs[0])));
        std::vector<IntVec> basis = lattice_span_basis(dirs, d);
        if (basis.empty()) continue;
        Fan nf = normal_fan_in_basis(delta, basis);
        RatMat proj = RatMat::from_int(basis, d);
        pullback = intersect_fans(pullback, pullback_fan(nf, proj, d));
      }
    }
    for (const auto& [face, cone] : inner_normal_cones(poly)) {
      if (cone.dim() >= d) continue;
      SingularStratum st;
      st.tau = tau;
      st.cone = cone;
      st.translation = c;
      // essential iff the smallest pullback cone containing it drops dimension
      RatVec probe = cone.interior_point();
      auto host = pullback.cone_containing(probe);
      st.essential = host && host->contains_cone(cone) && host->dim() < d;
      out.push_back(st);
    }
  }
  // deterministic order
  std::sort(out.begin(), out.end(), [](const SingularStratum& a, const SingularStratum& b) {
    if (a.tau != b.tau) return a.tau < b.tau;
    return a.cone < b.cone;
  });
  return out;
}

std::optional<Polyhedron> stratum_closure_trace(const TropicalManifold& m,
                                                const SingularStratum& stratum,
                                                const std::string& omega) {
  if (!m.complex.has_arrow(omega, stratum.tau)) return std::nullopt;
  const Arrow& a = m.complex.arrow(omega, stratum.tau);
  const Polyhedron& tp = m.complex.cell(stratum.tau);
  // approach cone of the omega face inside Lambda*_tau (inner normal cone)
  Polyhedron face = a.image(m.complex.cell(omega));
  RatVec f0 = face.relative_interior_point();
  std::vector<IntVec> normals;
  for (const RatVec& q : tp.points()) {
    RatVec diff = sub(f0, q);
    if (!is_zero(diff)) normals.push_back(primitive(diff));
  }
  for (const IntVec& r : tp.recession_rays()) normals.push_back(negate(r));
  for (const IntVec& l : tp.lines()) {
    normals.push_back(l);
    normals.push_back(negate(l));
  }
  Cone approach = Cone::from_facets(normals, tp.ambient_dim());
  // the closure meets int(omega) exactly when the stratum extends deep in
  // every approach direction
  if (!stratum.cone.contains_cone(approach)) return std::nullopt;
  // restriction of covectors along the face embedding: u |-> A^T u
  IntMat at = a.map.transpose();
  std::vector<IntVec> rays, lines;
  for (const IntVec& r : stratum.cone.rays()) {
    IntVec v = at.apply(r);
    if (!is_zero(v)) rays.push_back(primitive(v));
  }
  for (const IntVec& l : stratum.cone.lines()) {
    IntVec v = at.apply(l);
    if (!is_zero(v)) lines.push_back(primitive(v));
  }
  Cone image = Cone::from_rays(rays, at.rows(), lines);
  // translate by the restricted c_tau (the compatible part of c_omega)
  RatVec shift = at.to_rat().apply(stratum.translation);
  std::vector<RatVec> pts{shift};
  std::vector<RatVec> gen_pts;
  for (const RatVec& p : pts) gen_pts.push_back(p);
  return Polyhedron::from_points(gen_pts, image.rays(), image.lines());
}

}  // namespace tropscat
