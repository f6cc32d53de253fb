#pragma once

#include "tropscat/polyhedron.hpp"

namespace tropscat {

// Finite fan of rational polyhedral cones.  Cones may carry lineality
// (localized fans are fans of convex, not strictly convex, cones).
class Fan {
 public:
  Fan() : dim_(0) {}
  explicit Fan(size_t dim) : dim_(dim) {}
  // Builds the fan generated by the given cones: all faces are added and
  // the fan axioms are verified.
  static Fan from_cones(const std::vector<Cone>& cones, size_t dim);

  size_t ambient_dim() const { return dim_; }
  const std::vector<Cone>& cones() const { return cones_; }
  std::vector<Cone> maximal_cones() const;
  bool is_complete() const;
  bool contains_point(const RatVec& x) const;
  // the smallest cone containing x, if any
  std::optional<Cone> cone_containing(const RatVec& x) const;
  bool has_cone(const Cone& c) const;
  // every cone of this fan is a union-refinement of a cone of the other
  bool refines(const Fan& coarser) const;
  bool equals(const Fan& o) const;

 private:
  size_t dim_;
  std::vector<Cone> cones_;
};

// Normal fan of a polytope, living in the dual of its tangent space.
// One maximal cone per vertex.  Errors on unbounded input.
Fan normal_fan(const Polyhedron& p);

// Same, but described in given tangent-lattice coordinates: basis rows span
// the tangent lattice of p inside its ambient chart.
Fan normal_fan_in_basis(const Polyhedron& p, const std::vector<IntVec>& basis);

// Localization {K + span(tau)} over all cones K of the fan containing tau.
Fan localize_fan(const Fan& fan, const Cone& tau);

// Lattice-affinely isomorphic to Conv{0, e_1, ..., e_r}.
bool is_standard_simplex(const Polyhedron& p);
// The only lattice points of p are its vertices.
bool is_elementary(const Polyhedron& p);

// Product fan pulled back along a linear projection (rows of proj map the
// ambient space onto the factor space); cones are preimages.
Fan pullback_fan(const Fan& factor_fan, const RatMat& proj, size_t ambient_dim);
// Common refinement-free product of fans living in complementary factors is
// not needed; products are assembled via pullbacks and intersections.
Fan intersect_fans(const Fan& a, const Fan& b);

}  // namespace tropscat
