#include "tropscat/fan.hpp"

#include <algorithm>
#include <set>

namespace tropscat {

Fan Fan::from_cones(const std::vector<Cone>& cones, size_t dim) {
  Fan f(dim);
  std::vector<Cone> all;
  for (const Cone& c : cones) {
    if (c.ambient_dim() != dim) fail("fan", "cone ambient dimension mismatch");
    for (const Cone& face : c.faces()) {
      bool seen = false;
      for (const Cone& g : all)
        if (g.equals(face)) {
          seen = true;
          break;
        }
      if (!seen) all.push_back(face);
    }
  }
  std::sort(all.begin(), all.end());
  // fan axioms: pairwise intersections are common faces
  for (size_t i = 0; i < all.size(); ++i)
    for (size_t j = i + 1; j < all.size(); ++j) {
      Cone inter = all[i].intersect(all[j]);
      bool face_i = false, face_j = false;
      for (const Cone& fc : all[i].faces())
        if (fc.equals(inter)) face_i = true;
      for (const Cone& fc : all[j].faces())
        if (fc.equals(inter)) face_j = true;
      if (!face_i || !face_j) fail("fan", "cones do not intersect in common faces");
    }
  f.cones_ = all;
  return f;
}

std::vector<Cone> Fan::maximal_cones() const {
  std::vector<Cone> out;
  for (const Cone& c : cones_) {
    bool maximal = true;
    for (const Cone& d : cones_) {
      if (d.equals(c)) continue;
      if (d.contains_cone(c)) {
        maximal = false;
        break;
      }
    }
    if (maximal) out.push_back(c);
  }
  return out;
}

bool Fan::is_complete() const {
  if (cones_.empty()) return false;
  if (dim_ == 0) return true;  // the zero fan fills R^0
  std::vector<Cone> max = maximal_cones();
  for (const Cone& c : max)
    if (c.dim() != dim_) return false;
  // every facet of a maximal cone must be shared by exactly two maximal cones
  for (const Cone& c : max) {
    for (const Cone& f : c.facets()) {
      int count = 0;
      for (const Cone& d : max)
        if (d.contains_cone(f)) ++count;
      if (count != 2) return false;
    }
  }
  return true;
}

bool Fan::contains_point(const RatVec& x) const {
  for (const Cone& c : cones_)
    if (c.contains(x)) return true;
  return false;
}

std::optional<Cone> Fan::cone_containing(const RatVec& x) const {
  std::optional<Cone> best;
  for (const Cone& c : cones_) {
    if (!c.contains(x)) continue;
    if (!best || best->contains_cone(c)) best = c;
  }
  return best;
}

bool Fan::has_cone(const Cone& c) const {
  for (const Cone& d : cones_)
    if (d.equals(c)) return true;
  return false;
}

bool Fan::refines(const Fan& coarser) const {
  for (const Cone& c : cones_) {
    RatVec x = c.interior_point();
    auto host = coarser.cone_containing(x);
    if (!host) return false;
    if (!host->contains_cone(c)) return false;
  }
  return true;
}

bool Fan::equals(const Fan& o) const {
  if (dim_ != o.dim_ || cones_.size() != o.cones_.size()) return false;
  for (size_t i = 0; i < cones_.size(); ++i)
    if (!cones_[i].equals(o.cones_[i])) return false;
  return true;
}

Fan normal_fan_in_basis(const Polyhedron& p, const std::vector<IntVec>& basis) {
  if (!p.is_bounded()) fail("not a polytope", "normal fan requires a bounded polyhedron");
  if (p.empty()) fail("not a polytope", "normal fan of the empty set");
  size_t r = basis.size();
  // vertex coordinates in the tangent basis
  const std::vector<RatVec>& verts = p.vertices();
  RatMat bt = RatMat::from_int(basis, p.ambient_dim()).transpose();
  std::vector<RatVec> coords;
  for (const RatVec& v : verts) {
    auto c = bt.solve(sub(v, verts[0]));
    if (!c) fail("fan", "vertex outside tangent basis span");
    coords.push_back(*c);
  }
  if (r == 0) {
    // a point: its normal fan is the zero fan in R^0
    return Fan::from_cones({Cone::zero(0)}, 0);
  }
  std::vector<Cone> max_cones;
  for (size_t i = 0; i < coords.size(); ++i) {
    // inner normal cone N(v_i) = {u : <u, v_i> <= <u, v_j> for all j}
    std::vector<IntVec> normals;
    for (size_t j = 0; j < coords.size(); ++j) {
      if (j == i) continue;
      RatVec d = sub(coords[i], coords[j]);
      if (!is_zero(d)) normals.push_back(primitive(d));
    }
    max_cones.push_back(Cone::from_facets(normals, r));
  }
  return Fan::from_cones(max_cones, r);
}

Fan normal_fan(const Polyhedron& p) {
  if (!p.is_bounded()) fail("not a polytope", "normal fan requires a bounded polyhedron");
  std::vector<IntVec> dirs;
  const std::vector<RatVec>& verts = p.vertices();
  for (size_t i = 1; i < verts.size(); ++i) dirs.push_back(primitive(sub(verts[i], verts[0])));
  std::vector<IntVec> basis = lattice_span_basis(dirs, p.ambient_dim());
  return normal_fan_in_basis(p, basis);
}

Fan localize_fan(const Fan& fan, const Cone& tau) {
  if (!fan.has_cone(tau)) fail("fan", "tau is not a cone of the fan");
  std::vector<IntVec> span = tau.rays();
  span.insert(span.end(), tau.lines().begin(), tau.lines().end());
  std::vector<Cone> out;
  for (const Cone& c : fan.cones()) {
    if (!c.contains_cone(tau)) continue;
    Cone loc = c.add_lineality(span);
    bool seen = false;
    for (const Cone& d : out)
      if (d.equals(loc)) seen = true;
    if (!seen) out.push_back(loc);
  }
  Fan f(fan.ambient_dim());
  // localized cones have common lineality; face closure within from_cones
  return Fan::from_cones(out, fan.ambient_dim());
}

bool is_standard_simplex(const Polyhedron& p) {
  if (!p.is_bounded() || p.empty()) fail("not a polytope", "simplex test requires a polytope");
  if (!p.is_integral()) fail("fan", "simplex test requires an integral polytope");
  size_t r = p.dim();
  const std::vector<RatVec>& verts = p.vertices();
  if (verts.size() != r + 1) return false;
  std::vector<IntVec> edges;
  for (size_t i = 1; i < verts.size(); ++i) {
    RatVec d = sub(verts[i], verts[0]);
    IntVec e(d.size());
    for (size_t j = 0; j < d.size(); ++j) e[j] = rat_num(d[j]);
    edges.push_back(e);
  }
  // lattice-affine iso with Conv{0, e_1..e_r}: the edge vectors from one
  // vertex must form a basis of the saturated tangent lattice
  return generates_saturated_lattice(edges, p.ambient_dim());
}

bool is_elementary(const Polyhedron& p) {
  if (!p.is_bounded() || p.empty()) fail("not a polytope", "elementary test requires a polytope");
  if (!p.is_integral()) fail("fan", "elementary test requires an integral polytope");
  std::vector<IntVec> pts = p.lattice_points();
  std::set<RatVec> vset;
  for (const RatVec& v : p.vertices()) vset.insert(v);
  for (const IntVec& z : pts)
    if (!vset.count(to_rat(z))) return false;
  return true;
}

Fan pullback_fan(const Fan& factor_fan, const RatMat& proj, size_t ambient_dim) {
  std::vector<Cone> cones;
  for (const Cone& c : factor_fan.cones()) {
    // preimage {x : proj x in c}: facet normals pull back along proj^T
    std::vector<IntVec> normals;
    for (const IntVec& a : c.facet_normals()) {
      RatVec pulled(ambient_dim, Rat(0));
      for (size_t j = 0; j < ambient_dim; ++j) {
        Rat s(0);
        for (size_t i = 0; i < proj.rows(); ++i) s += Rat(a[i]) * proj.at(i, j);
        pulled[j] = s;
      }
      if (!is_zero(pulled)) normals.push_back(primitive(pulled));
    }
    cones.push_back(Cone::from_facets(normals, ambient_dim));
  }
  return Fan::from_cones(cones, ambient_dim);
}

Fan intersect_fans(const Fan& a, const Fan& b) {
  if (a.ambient_dim() != b.ambient_dim()) fail("fan", "ambient dimension mismatch");
  std::vector<Cone> cones;
  for (const Cone& ca : a.cones())
    for (const Cone& cb : b.cones()) {
      Cone c = ca.intersect(cb);
      bool seen = false;
      for (const Cone& d : cones)
        if (d.equals(c)) seen = true;
      if (!seen) cones.push_back(c);
    }
  return Fan::from_cones(cones, a.ambient_dim());
}

}  // namespace tropscat
