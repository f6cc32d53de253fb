#include "tropscat/complex.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace tropscat {

std::string Report::str() const {
  std::ostringstream os;
  if (ok())
    os << "valid";
  else
    for (const Issue& i : issues) os << "[" << i.check << "] " << i.where << ": " << i.detail << "\n";
  for (const std::string& n : notes) os << "\nnote: " << n;
  return os.str();
}

RatVec Arrow::apply(const RatVec& x) const {
  RatVec y = map.to_rat().apply(x);
  for (size_t i = 0; i < y.size(); ++i) y[i] += Rat(shift[i]);
  return y;
}

Polyhedron Arrow::image(const Polyhedron& src_poly) const {
  std::vector<RatVec> pts;
  for (const RatVec& p : src_poly.points()) pts.push_back(apply(p));
  std::vector<IntVec> rays, lines;
  for (const IntVec& r : src_poly.recession_rays()) rays.push_back(primitive(map.apply(r)));
  for (const IntVec& l : src_poly.lines()) lines.push_back(primitive(map.apply(l)));
  return Polyhedron::from_points(pts, rays, lines);
}

void PolyhedralComplex::add_cell(const std::string& id, const Polyhedron& p) {
  if (cells_.count(id)) fail("complex", "duplicate cell id " + id);
  if (p.empty()) fail("complex", "empty cell " + id);
  if (p.dim() != p.ambient_dim()) fail("complex", "cell " + id + " is not full-dimensional in its chart");
  cells_.emplace(id, p);
}

void PolyhedralComplex::add_arrow(const std::string& src, const std::string& dst, const IntMat& map,
                                  const IntVec& shift) {
  if (!cells_.count(src) || !cells_.count(dst)) fail("complex", "arrow references unknown cell");
  if (arrows_.count({src, dst})) fail("complex", "duplicate arrow " + src + " -> " + dst);
  Arrow a{src, dst, map, shift};
  if (map.rows() != cells_.at(dst).ambient_dim() || map.cols() != cells_.at(src).ambient_dim())
    fail("complex", "arrow matrix shape mismatch " + src + " -> " + dst);
  arrows_.emplace(std::make_pair(src, dst), a);
}

const Polyhedron& PolyhedralComplex::cell(const std::string& id) const {
  auto it = cells_.find(id);
  if (it == cells_.end()) fail("complex", "unknown cell " + id);
  return it->second;
}

bool PolyhedralComplex::has_arrow(const std::string& src, const std::string& dst) const {
  return arrows_.count({src, dst}) > 0;
}

const Arrow& PolyhedralComplex::arrow(const std::string& src, const std::string& dst) const {
  auto it = arrows_.find({src, dst});
  if (it == arrows_.end()) fail("complex", "no arrow " + src + " -> " + dst);
  return it->second;
}

size_t PolyhedralComplex::dim() const {
  size_t d = 0;
  for (const auto& [id, p] : cells_) d = std::max(d, p.dim());
  return d;
}

std::vector<std::string> PolyhedralComplex::cells_of_dim(size_t d) const {
  std::vector<std::string> out;
  for (const auto& [id, p] : cells_)
    if (p.dim() == d) out.push_back(id);
  return out;
}

std::vector<std::string> PolyhedralComplex::faces_of(const std::string& id) const {
  std::vector<std::string> out;
  for (const auto& [key, a] : arrows_)
    if (key.second == id) out.push_back(key.first);
  return out;
}

std::vector<std::string> PolyhedralComplex::cofaces_of(const std::string& id) const {
  std::vector<std::string> out;
  for (const auto& [key, a] : arrows_)
    if (key.first == id) out.push_back(key.second);
  return out;
}

std::vector<std::string> PolyhedralComplex::maximal_cofaces(const std::string& id) const {
  size_t n = dim();
  std::vector<std::string> out;
  if (cell_dim(id) == n) return {id};
  for (const std::string& c : cofaces_of(id))
    if (cell_dim(c) == n) out.push_back(c);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> PolyhedralComplex::vertices_of(const std::string& id) const {
  if (cell_dim(id) == 0) return {id};
  std::vector<std::string> out;
  for (const std::string& f : faces_of(id))
    if (cell_dim(f) == 0) out.push_back(f);
  std::sort(out.begin(), out.end());
  return out;
}

Report PolyhedralComplex::validate() const {
  Report rep;
  size_t n = dim();
  // purity of maximal cells is assumed downstream; flag mixed tops
  for (const auto& [id, p] : cells_) {
    bool is_max = true;
    for (const auto& [key, a] : arrows_)
      if (key.first == id) is_max = false;
    if (is_max && p.dim() != n)
      rep.add("purity", id, "maximal cell of dimension " + std::to_string(p.dim()) +
                                " in a complex of dimension " + std::to_string(n));
  }
  // cached proper faces and arrow images
  std::map<std::string, std::vector<Polyhedron>> faces_cache;
  for (const auto& [id, p] : cells_) faces_cache[id] = p.proper_faces();
  std::map<std::string, std::vector<std::pair<std::string, Polyhedron>>> images;
  for (const auto& [key, a] : arrows_)
    images[key.second].push_back({key.first, a.image(cells_.at(key.first))});
  // arrows embed source cells onto faces; injectivity of the chart maps
  for (const auto& [key, a] : arrows_) {
    const Polyhedron& src = cells_.at(key.first);
    size_t rk = a.map.to_rat().rank();
    if (rk != src.ambient_dim()) {
      rep.add("injectivity", key.first + "->" + key.second, "arrow linear part is not injective");
      continue;
    }
    Polyhedron img = a.image(src);
    bool is_face = false;
    for (const Polyhedron& f : faces_cache[key.second])
      if (f.equals(img)) is_face = true;
    if (!is_face) rep.add("face-embedding", key.first + "->" + key.second, "arrow image is not a face");
  }
  // composition closure, grouped through the middle cell
  std::map<std::string, std::vector<const Arrow*>> in_arrows, out_arrows;
  for (const auto& [key, a] : arrows_) {
    in_arrows[key.second].push_back(&a);
    out_arrows[key.first].push_back(&a);
  }
  for (const auto& [mid, ins] : in_arrows) {
    auto jt = out_arrows.find(mid);
    if (jt == out_arrows.end()) continue;
    for (const Arrow* a1 : ins)
      for (const Arrow* a2 : jt->second) {
        if (!has_arrow(a1->src, a2->dst)) {
          rep.add("composition", a1->src + "->" + a2->dst, "missing composite arrow");
          continue;
        }
        const Arrow& c = arrow(a1->src, a2->dst);
        IntMat m = a2->map.multiply(a1->map);
        IntVec s = add(a2->map.apply(a1->shift), a2->shift);
        if (!(m == c.map) || s != c.shift)
          rep.add("composition", a1->src + "->" + a2->dst, "composite arrow disagrees");
      }
  }
  for (const auto& [id, p] : cells_) {
    for (const Polyhedron& f : faces_cache[id]) {
      int count = 0;
      auto it = images.find(id);
      if (it != images.end())
        for (const auto& [src, img] : it->second)
          if (img.equals(f)) ++count;
      if (count != 1)
        rep.add("face-coverage", id,
                "face covered by " + std::to_string(count) + " arrows (expected 1)");
    }
  }
  // pairwise intersections: the set of common faces needs a unique top
  std::map<std::string, std::set<std::string>> faces_incl_self;
  for (const auto& [id, p] : cells_) faces_incl_self[id].insert(id);
  for (const auto& [key, a] : arrows_) faces_incl_self[key.second].insert(key.first);
  std::vector<std::string> ids;
  for (const auto& [id, p] : cells_) ids.push_back(id);
  for (size_t i = 0; i < ids.size(); ++i)
    for (size_t j = i + 1; j < ids.size(); ++j) {
      const auto& fa = faces_incl_self[ids[i]];
      const auto& fb = faces_incl_self[ids[j]];
      std::vector<std::string> common;
      for (const std::string& c : fa)
        if (fb.count(c)) common.push_back(c);
      if (common.empty()) continue;
      // unique maximal element containing all others as faces
      std::string top;
      for (const std::string& c : common) {
        bool contains_all = true;
        for (const std::string& d : common)
          if (d != c && !faces_incl_self[c].count(d)) contains_all = false;
        if (contains_all) top = c;
      }
      if (top.empty())
        rep.add("intersection", ids[i] + " & " + ids[j], "common faces have no unique top cell");
    }
  // connectivity through shared faces
  if (!cells_.empty()) {
    std::set<std::string> seen;
    std::vector<std::string> stack{cells_.begin()->first};
    while (!stack.empty()) {
      std::string c = stack.back();
      stack.pop_back();
      if (!seen.insert(c).second) continue;
      for (const auto& [key, a] : arrows_) {
        if (key.first == c) stack.push_back(key.second);
        if (key.second == c) stack.push_back(key.first);
      }
    }
    if (seen.size() != cells_.size()) rep.add("connectivity", "-", "complex is not connected");
  }
  return rep;
}

}  // namespace tropscat
