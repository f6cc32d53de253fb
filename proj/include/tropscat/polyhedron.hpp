#pragma once

#include <map>
#include <optional>

#include "tropscat/linalg.hpp"

namespace tropscat {

// Double description core.  A homogeneous cone is exchanged between the two
// representations
//   H: {x : <a_i, x> <= 0}          (rows a_i)
//   V: cone(rays) + span(lines)
// dd_rays computes V from H; by polarity the same routine computes H from V.
struct ConeRep {
  std::vector<IntVec> rays;   // primitive, deduplicated
  std::vector<IntVec> lines;  // lattice basis of the lineality space
};

ConeRep dd_rays(const std::vector<IntVec>& normals, size_t dim);

// Facet normals a (meaning <a,x> <= 0) of cone(generators)+span(lines).
std::vector<IntVec> dd_facets(const std::vector<IntVec>& generators,
                              const std::vector<IntVec>& lines, size_t dim);

// Rational polyhedral cone with both representations.
class Cone {
 public:
  Cone() : dim_(0) {}
  static Cone from_rays(const std::vector<IntVec>& rays, size_t dim,
                        const std::vector<IntVec>& lines = {});
  static Cone from_facets(const std::vector<IntVec>& normals, size_t dim);
  static Cone full_space(size_t dim);
  static Cone zero(size_t dim);

  size_t ambient_dim() const { return dim_; }
  size_t dim() const;  // dimension of the cone
  const std::vector<IntVec>& rays() const { return rays_; }
  const std::vector<IntVec>& lines() const { return lines_; }
  const std::vector<IntVec>& facet_normals() const { return facets_; }

  bool contains(const RatVec& x) const;
  bool contains(const IntVec& x) const;
  bool contains_in_interior(const RatVec& x) const;  // relative interior
  bool contains_cone(const Cone& other) const;
  bool is_strictly_convex() const { return lines_.empty(); }
  Cone intersect(const Cone& other) const;
  // Minkowski sum with the span of the given vectors.
  Cone add_lineality(const std::vector<IntVec>& dirs) const;
  bool equals(const Cone& other) const;
  // All faces (including the cone itself and its lineality-minimal face).
  std::vector<Cone> faces() const;
  std::vector<Cone> facets() const;
  RatVec interior_point() const;
  bool operator<(const Cone& o) const;  // canonical order for dedup/sorting

 private:
  size_t dim_;
  std::vector<IntVec> rays_, lines_, facets_;
  void canonicalize();
};

// <normal, x> <= offset
struct Halfspace {
  RatVec normal;
  Rat offset;
};

// Convex rational polyhedron with cross-validated H- and V-representations.
class Polyhedron {
 public:
  Polyhedron() : dim_(0) {}
  static Polyhedron from_points(const std::vector<RatVec>& points,
                                const std::vector<IntVec>& rays = {},
                                const std::vector<IntVec>& lines = {});
  static Polyhedron from_halfspaces(const std::vector<Halfspace>& hs, size_t dim);

  size_t ambient_dim() const { return dim_; }
  size_t dim() const;
  bool empty() const { return empty_; }
  bool is_bounded() const { return rays_.empty() && lines_.empty(); }
  bool is_pointed() const { return lines_.empty(); }
  // all vertices in Z^d (requires pointed; a non-pointed polyhedron has none)
  bool is_integral() const;

  const std::vector<RatVec>& vertices() const;  // error if not pointed
  const std::vector<RatVec>& points() const { return points_; }
  const std::vector<IntVec>& recession_rays() const { return rays_; }
  const std::vector<IntVec>& lines() const { return lines_; }
  const std::vector<Halfspace>& halfspaces() const { return hs_; }

  bool contains(const RatVec& x) const;
  bool contains_in_relative_interior(const RatVec& x) const;
  Polyhedron intersect(const Polyhedron& other) const;
  bool equals(const Polyhedron& other) const;
  RatVec relative_interior_point() const;

  // Proper nonempty faces; each as a polyhedron.
  std::vector<Polyhedron> facets() const;
  std::vector<Polyhedron> proper_faces() const;  // all dims < dim()
  // Tangent cone at a face: cone{p - q : p in P, q in relint(F)}.
  Cone tangent_cone_at(const Polyhedron& face) const;
  // Recession cone.
  Cone recession_cone() const;
  // All lattice points (requires bounded).
  std::vector<IntVec> lattice_points() const;

  bool operator==(const Polyhedron& o) const { return equals(o); }

 private:
  size_t dim_ = 0;
  bool empty_ = true;
  std::vector<RatVec> points_;  // vertices when pointed
  std::vector<IntVec> rays_, lines_;
  std::vector<Halfspace> hs_;
  void rebuild_from_h(const std::vector<Halfspace>& hs);
  void rebuild_from_v();
};

}  // namespace tropscat
