#include "tropscat/polyhedron.hpp"

#include <algorithm>
#include <set>

namespace tropscat {

namespace {

struct DDRay {
  IntVec v;
  std::set<size_t> active;  // indices of processed constraints with <a,v> = 0
};

size_t rank_of(const std::vector<IntVec>& rows, size_t dim) {
  if (rows.empty()) return 0;
  return RatMat::from_int(rows, dim).rank();
}

}  // namespace

ConeRep dd_rays(const std::vector<IntVec>& normals, size_t dim) {
  std::vector<IntVec> lines;
  for (size_t i = 0; i < dim; ++i) {
    IntVec e(dim, Int(0));
    e[i] = 1;
    lines.push_back(e);
  }
  std::vector<DDRay> rays;
  std::vector<IntVec> processed;

  for (const IntVec& a : normals) {
    if (is_zero(a)) {
      processed.push_back(a);
      continue;
    }
    size_t idx = processed.size();
    // does the lineality space meet the constraint?
    size_t wi = lines.size();
    for (size_t i = 0; i < lines.size(); ++i)
      if (dot(a, lines[i]) != 0) {
        wi = i;
        break;
      }
    if (wi != lines.size()) {
      IntVec w = lines[wi];
      if (dot(a, w) < 0) w = negate(w);
      Int aw = dot(a, w);
      std::vector<IntVec> new_lines;
      for (size_t i = 0; i < lines.size(); ++i) {
        if (i == wi) continue;
        Int av = dot(a, lines[i]);
        IntVec v2(dim);
        for (size_t j = 0; j < dim; ++j) v2[j] = aw * lines[i][j] - av * w[j];
        new_lines.push_back(primitive(v2));
      }
      lines = new_lines;
      for (DDRay& r : rays) {
        Int ar = dot(a, r.v);
        if (ar != 0) {
          IntVec v2(dim);
          for (size_t j = 0; j < dim; ++j) v2[j] = aw * r.v[j] - ar * w[j];
          r.v = primitive(v2);
        }
        r.active.insert(idx);  // all rays now lie in {a = 0}
      }
      DDRay nr;
      nr.v = negate(w);
      for (size_t i = 0; i < idx; ++i) nr.active.insert(i);  // w was lineality throughout
      rays.push_back(nr);
      processed.push_back(a);
      continue;
    }
    // lineality is inside {a = 0}; split the ray list
    std::vector<DDRay> pos, zero, neg;
    for (DDRay& r : rays) {
      Int ar = dot(a, r.v);
      if (ar > 0)
        pos.push_back(r);
      else if (ar < 0)
        neg.push_back(r);
      else {
        r.active.insert(idx);
        zero.push_back(r);
      }
    }
    std::vector<DDRay> next = zero;
    for (DDRay& r : neg) next.push_back(r);
    size_t lin_dim = lines.size();
    for (const DDRay& p : pos)
      for (const DDRay& m : neg) {
        std::set<size_t> common;
        std::set_intersection(p.active.begin(), p.active.end(), m.active.begin(), m.active.end(),
                              std::inserter(common, common.begin()));
        // algebraic adjacency: common active constraints cut out a
        // (lin_dim+2)-dimensional subspace
        std::vector<IntVec> sub;
        for (size_t i : common) sub.push_back(processed[i]);
        if (rank_of(sub, dim) + lin_dim + 2 != dim) continue;
        Int ap = dot(a, p.v), am = dot(a, m.v);
        IntVec v2(dim);
        for (size_t j = 0; j < dim; ++j) v2[j] = ap * m.v[j] - am * p.v[j];
        DDRay nr;
        nr.v = primitive(v2);
        nr.active = common;
        nr.active.insert(idx);
        next.push_back(nr);
      }
    rays = next;
    processed.push_back(a);
  }

  ConeRep rep;
  rep.lines = lines;
  std::set<IntVec> seen;
  for (const DDRay& r : rays) {
    if (is_zero(r.v)) continue;
    // discard rays that fell into the lineality space
    if (!lines.empty()) {
      RatMat lm = RatMat::from_int(lines, dim).transpose();
      if (lm.solve(to_rat(r.v)).has_value()) continue;
    }
    IntVec p = primitive(r.v);
    if (seen.insert(p).second) rep.rays.push_back(p);
  }
  std::sort(rep.rays.begin(), rep.rays.end(), [](const IntVec& x, const IntVec& y) { return lex_cmp(x, y) < 0; });
  std::sort(rep.lines.begin(), rep.lines.end(), [](const IntVec& x, const IntVec& y) { return lex_cmp(x, y) < 0; });
  return rep;
}

std::vector<IntVec> dd_facets(const std::vector<IntVec>& generators,
                              const std::vector<IntVec>& lines, size_t dim) {
  std::vector<IntVec> normals = generators;
  for (const IntVec& l : lines) {
    normals.push_back(l);
    normals.push_back(negate(l));
  }
  ConeRep polar = dd_rays(normals, dim);
  std::vector<IntVec> out = polar.rays;
  for (const IntVec& l : polar.lines) {
    out.push_back(l);
    out.push_back(negate(l));
  }
  return out;
}

Cone Cone::from_rays(const std::vector<IntVec>& rays, size_t dim, const std::vector<IntVec>& lines) {
  Cone c;
  c.dim_ = dim;
  c.facets_ = dd_facets(rays, lines, dim);
  ConeRep rep = dd_rays(c.facets_, dim);
  c.rays_ = rep.rays;
  c.lines_ = rep.lines;
  c.canonicalize();
  return c;
}

Cone Cone::from_facets(const std::vector<IntVec>& normals, size_t dim) {
  Cone c;
  c.dim_ = dim;
  ConeRep rep = dd_rays(normals, dim);
  c.rays_ = rep.rays;
  c.lines_ = rep.lines;
  c.facets_ = dd_facets(c.rays_, c.lines_, dim);
  c.canonicalize();
  return c;
}

Cone Cone::full_space(size_t dim) {
  std::vector<IntVec> lines;
  for (size_t i = 0; i < dim; ++i) {
    IntVec e(dim, Int(0));
    e[i] = 1;
    lines.push_back(e);
  }
  return from_rays({}, dim, lines);
}

Cone Cone::zero(size_t dim) { return from_rays({}, dim); }

void Cone::canonicalize() {
  auto less = [](const IntVec& x, const IntVec& y) { return lex_cmp(x, y) < 0; };
  std::sort(rays_.begin(), rays_.end(), less);
  std::sort(lines_.begin(), lines_.end(), less);
  std::sort(facets_.begin(), facets_.end(), less);
  facets_.erase(std::unique(facets_.begin(), facets_.end()), facets_.end());
}

size_t Cone::dim() const {
  std::vector<IntVec> all = rays_;
  all.insert(all.end(), lines_.begin(), lines_.end());
  return rank_of(all, dim_);
}

bool Cone::contains(const RatVec& x) const {
  for (const IntVec& a : facets_)
    if (dot(a, x) > 0) return false;
  return true;
}
bool Cone::contains(const IntVec& x) const { return contains(to_rat(x)); }

bool Cone::contains_in_interior(const RatVec& x) const {
  if (!contains(x)) return false;
  std::set<IntVec> fset(facets_.begin(), facets_.end());
  for (const IntVec& a : facets_) {
    bool equality = fset.count(negate(a)) > 0;
    Rat v = dot(a, x);
    if (equality) {
      if (v != 0) return false;
    } else if (v == 0) {
      return false;
    }
  }
  return true;
}

bool Cone::contains_cone(const Cone& other) const {
  for (const IntVec& r : other.rays_)
    if (!contains(r)) return false;
  for (const IntVec& l : other.lines_)
    if (!contains(l) || !contains(negate(l))) return false;
  return true;
}

Cone Cone::intersect(const Cone& other) const {
  if (dim_ != other.dim_) fail("cone", "ambient dimension mismatch");
  std::vector<IntVec> normals = facets_;
  normals.insert(normals.end(), other.facets_.begin(), other.facets_.end());
  return from_facets(normals, dim_);
}

Cone Cone::add_lineality(const std::vector<IntVec>& dirs) const {
  std::vector<IntVec> lines = lines_;
  lines.insert(lines.end(), dirs.begin(), dirs.end());
  return from_rays(rays_, dim_, lines);
}

bool Cone::equals(const Cone& other) const {
  return dim_ == other.dim_ && rays_ == other.rays_ && lines_ == other.lines_;
}

bool Cone::operator<(const Cone& o) const {
  if (rays_.size() != o.rays_.size()) return rays_.size() < o.rays_.size();
  if (lines_.size() != o.lines_.size()) return lines_.size() < o.lines_.size();
  for (size_t i = 0; i < rays_.size(); ++i) {
    int c = lex_cmp(rays_[i], o.rays_[i]);
    if (c) return c < 0;
  }
  for (size_t i = 0; i < lines_.size(); ++i) {
    int c = lex_cmp(lines_[i], o.lines_[i]);
    if (c) return c < 0;
  }
  return false;
}

std::vector<Cone> Cone::facets() const {
  std::vector<Cone> out;
  std::set<IntVec> fset(facets_.begin(), facets_.end());
  size_t d = dim();
  for (const IntVec& a : facets_) {
    if (fset.count(negate(a))) continue;  // affine-hull equality, not a proper facet
    std::vector<IntVec> normals = facets_;
    normals.push_back(negate(a));
    Cone f = from_facets(normals, dim_);
    if (f.dim() + 1 == d) out.push_back(f);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(), [](const Cone& x, const Cone& y) { return x.equals(y); }),
            out.end());
  return out;
}

std::vector<Cone> Cone::faces() const {
  std::vector<Cone> all{*this};
  size_t head = 0;
  while (head < all.size()) {
    Cone c = all[head++];
    for (const Cone& f : c.facets()) {
      bool seen = false;
      for (const Cone& g : all)
        if (g.equals(f)) {
          seen = true;
          break;
        }
      if (!seen) all.push_back(f);
    }
  }
  std::sort(all.begin(), all.end());
  return all;
}

RatVec Cone::interior_point() const {
  RatVec p(dim_, Rat(0));
  for (const IntVec& r : rays_)
    for (size_t j = 0; j < dim_; ++j) p[j] += Rat(r[j]);
  return p;
}

Polyhedron Polyhedron::from_points(const std::vector<RatVec>& points, const std::vector<IntVec>& rays,
                                   const std::vector<IntVec>& lines) {
  Polyhedron p;
  if (points.empty()) {
    p.empty_ = true;
    p.dim_ = 0;
    return p;
  }
  p.dim_ = points[0].size();
  p.empty_ = false;
  p.points_ = points;
  p.rays_ = rays;
  p.lines_ = lines;
  p.rebuild_from_v();
  // round-trip to make the V-representation minimal and canonical
  std::vector<Halfspace> hs = p.hs_;
  p.rebuild_from_h(hs);
  return p;
}

Polyhedron Polyhedron::from_halfspaces(const std::vector<Halfspace>& hs, size_t dim) {
  Polyhedron p;
  p.dim_ = dim;
  p.rebuild_from_h(hs);
  if (!p.empty_) p.rebuild_from_v();
  return p;
}

void Polyhedron::rebuild_from_h(const std::vector<Halfspace>& hs) {
  size_t d = dim_;
  std::vector<IntVec> normals;
  for (const Halfspace& h : hs) {
    if (h.normal.size() != d) fail("polyhedron", "halfspace dimension mismatch");
    RatVec hom(d + 1);
    for (size_t j = 0; j < d; ++j) hom[j] = h.normal[j];
    hom[d] = -h.offset;
    normals.push_back(primitive(hom));
  }
  {
    IntVec t(d + 1, Int(0));
    t[d] = -1;  // t >= 0
    normals.push_back(t);
  }
  ConeRep rep = dd_rays(normals, d + 1);
  points_.clear();
  rays_.clear();
  lines_.clear();
  for (const IntVec& l : rep.lines) {
    if (l[d] != 0) fail("polyhedron", "internal: lineality with nonzero homogenizer");
    lines_.push_back(primitive(IntVec(l.begin(), l.end() - 1)));
  }
  for (const IntVec& r : rep.rays) {
    if (r[d] > 0) {
      RatVec x(d);
      for (size_t j = 0; j < d; ++j) x[j] = Rat(r[j]) / Rat(r[d]);
      points_.push_back(x);
    } else if (r[d] == 0) {
      rays_.push_back(primitive(IntVec(r.begin(), r.end() - 1)));
    }
  }
  empty_ = points_.empty();
  if (empty_) {
    rays_.clear();
    lines_.clear();
    hs_.clear();
    return;
  }
  std::sort(points_.begin(), points_.end(), [](const RatVec& a, const RatVec& b) { return lex_cmp(a, b) < 0; });
  rebuild_from_v();
}

void Polyhedron::rebuild_from_v() {
  size_t d = dim_;
  std::vector<IntVec> gens;
  for (const RatVec& p : points_) {
    RatVec hom(d + 1);
    for (size_t j = 0; j < d; ++j) hom[j] = p[j];
    hom[d] = 1;
    gens.push_back(primitive(hom));
  }
  for (const IntVec& r : rays_) {
    IntVec hom(r.begin(), r.end());
    hom.push_back(0);
    gens.push_back(primitive(hom));
  }
  std::vector<IntVec> lin;
  for (const IntVec& l : lines_) {
    IntVec hom(l.begin(), l.end());
    hom.push_back(0);
    lin.push_back(hom);
  }
  hs_.clear();
  for (const IntVec& f : dd_facets(gens, lin, d + 1)) {
    IntVec a(f.begin(), f.end() - 1);
    if (is_zero(a)) continue;  // homogenization facet
    Halfspace h;
    h.normal = to_rat(a);
    h.offset = Rat(-f[d]);
    hs_.push_back(h);
  }
  std::sort(hs_.begin(), hs_.end(), [](const Halfspace& x, const Halfspace& y) {
    int c = lex_cmp(x.normal, y.normal);
    if (c) return c < 0;
    return x.offset < y.offset;
  });
}

size_t Polyhedron::dim() const {
  if (empty_) return 0;
  std::vector<IntVec> dirs = rays_;
  dirs.insert(dirs.end(), lines_.begin(), lines_.end());
  for (size_t i = 1; i < points_.size(); ++i) dirs.push_back(primitive(sub(points_[i], points_[0])));
  return rank_of(dirs, dim_);
}

bool Polyhedron::is_integral() const {
  for (const RatVec& p : points_)
    for (const Rat& c : p)
      if (!is_integer(c)) return false;
  return true;
}

const std::vector<RatVec>& Polyhedron::vertices() const {
  if (!lines_.empty()) fail("polyhedron", "vertices of a non-pointed polyhedron");
  return points_;
}

bool Polyhedron::contains(const RatVec& x) const {
  if (empty_) return false;
  for (const Halfspace& h : hs_)
    if (dot(h.normal, x) > h.offset) return false;
  return true;
}

bool Polyhedron::contains_in_relative_interior(const RatVec& x) const {
  if (!contains(x)) return false;
  // strict on proper facets, equality constraints must stay equalities
  for (const Halfspace& h : hs_) {
    bool has_opposite = false;
    for (const Halfspace& g : hs_)
      if (is_zero(add(g.normal, h.normal)) && g.offset == -h.offset) {
        has_opposite = true;
        break;
      }
    Rat v = dot(h.normal, x);
    if (has_opposite) {
      if (v != h.offset) return false;
    } else if (v == h.offset) {
      return false;
    }
  }
  return true;
}

Polyhedron Polyhedron::intersect(const Polyhedron& other) const {
  if (dim_ != other.dim_) fail("polyhedron", "ambient dimension mismatch");
  std::vector<Halfspace> hs = hs_;
  hs.insert(hs.end(), other.hs_.begin(), other.hs_.end());
  return from_halfspaces(hs, dim_);
}

bool Polyhedron::equals(const Polyhedron& other) const {
  if (empty_ || other.empty_) return empty_ == other.empty_;
  if (dim_ != other.dim_) return false;
  // canonical V-data comparison when both are pointed
  if (lines_.empty() && other.lines_.empty())
    return points_ == other.points_ && rays_ == other.rays_;
  auto inside = [](const Polyhedron& p, const Polyhedron& q) {
    for (const RatVec& x : p.points_)
      if (!q.contains(x)) return false;
    for (const IntVec& r : p.rays_)
      for (const Halfspace& h : q.hs_)
        if (dot(h.normal, r) > 0) return false;
    for (const IntVec& l : p.lines_)
      for (const Halfspace& h : q.hs_)
        if (dot(h.normal, l) != 0) return false;
    return true;
  };
  return inside(*this, other) && inside(other, *this);
}

RatVec Polyhedron::relative_interior_point() const {
  if (empty_) fail("polyhedron", "interior point of empty polyhedron");
  RatVec p(dim_, Rat(0));
  for (const RatVec& v : points_) p = add(p, v);
  p = scale(Rat(1, (long)points_.size()), p);
  for (const IntVec& r : rays_) p = add(p, to_rat(r));
  return p;
}

std::vector<Polyhedron> Polyhedron::facets() const {
  std::vector<Polyhedron> out;
  size_t d = dim();
  for (const Halfspace& h : hs_) {
    bool has_opposite = false;
    for (const Halfspace& g : hs_)
      if (is_zero(add(g.normal, h.normal)) && g.offset == -h.offset) {
        has_opposite = true;
        break;
      }
    if (has_opposite) continue;
    std::vector<Halfspace> hs = hs_;
    hs.push_back(Halfspace{scale(Rat(-1), h.normal), -h.offset});
    Polyhedron f = from_halfspaces(hs, dim_);
    if (!f.empty() && f.dim() + 1 == d) {
      bool seen = false;
      for (const Polyhedron& g : out)
        if (g.equals(f)) {
          seen = true;
          break;
        }
      if (!seen) out.push_back(f);
    }
  }
  return out;
}

std::vector<Polyhedron> Polyhedron::proper_faces() const {
  std::vector<Polyhedron> all;
  std::vector<Polyhedron> frontier = facets();
  while (!frontier.empty()) {
    std::vector<Polyhedron> next;
    for (const Polyhedron& f : frontier) {
      bool seen = false;
      for (const Polyhedron& g : all)
        if (g.equals(f)) {
          seen = true;
          break;
        }
      if (seen) continue;
      all.push_back(f);
      for (const Polyhedron& ff : f.facets()) next.push_back(ff);
    }
    frontier = next;
  }
  return all;
}

Cone Polyhedron::tangent_cone_at(const Polyhedron& face) const {
  RatVec q0 = face.relative_interior_point();
  std::vector<IntVec> gens;
  for (const RatVec& p : points_) {
    RatVec d = sub(p, q0);
    if (!is_zero(d)) gens.push_back(primitive(d));
  }
  gens.insert(gens.end(), rays_.begin(), rays_.end());
  return Cone::from_rays(gens, dim_, lines_);
}

Cone Polyhedron::recession_cone() const { return Cone::from_rays(rays_, dim_, lines_); }

std::vector<IntVec> Polyhedron::lattice_points() const {
  if (!is_bounded()) fail("polyhedron", "lattice points of unbounded polyhedron");
  if (empty_) return {};
  std::vector<Int> lo(dim_), hi(dim_);
  for (size_t j = 0; j < dim_; ++j) {
    Rat mn = points_[0][j], mx = points_[0][j];
    for (const RatVec& p : points_) {
      mn = std::min(mn, p[j]);
      mx = std::max(mx, p[j]);
    }
    mpz_fdiv_q(lo[j].get_mpz_t(), rat_num(mn).get_mpz_t(), rat_den(mn).get_mpz_t());
    mpz_cdiv_q(hi[j].get_mpz_t(), rat_num(mx).get_mpz_t(), rat_den(mx).get_mpz_t());
  }
  std::vector<IntVec> out;
  IntVec cur = lo;
  while (true) {
    if (contains(to_rat(cur))) out.push_back(cur);
    size_t j = 0;
    while (j < dim_) {
      cur[j] += 1;
      if (cur[j] <= hi[j]) break;
      cur[j] = lo[j];
      ++j;
    }
    if (j == dim_) break;
  }
  std::sort(out.begin(), out.end(), [](const IntVec& a, const IntVec& b) { return lex_cmp(a, b) < 0; });
  return out;
}

}  // namespace tropscat
