#pragma once

#include "tropscat/gluing.hpp"

namespace tropscat {

// One stratum of the tropical singular locus: the translated open cone
// (relint(cone) + translation) in the dual chart of int(tau).
struct SingularStratum {
  std::string tau;
  Cone cone;          // in Lambda*_tau, dim < dim tau
  RatVec translation; // c_tau
  bool essential = false;
};

// All strata over cells with 0 < dim tau < n.  The gluing data must pass the
// cocycle check; monodromy polytopes drive the essential flags.
std::vector<SingularStratum> singular_locus(const TropicalManifold& m, const OpenGluingData& s,
                                            const MonodromyCertificate& mono);

// Intersection of the closure of the stratum with int(omega), expressed in
// the Lambda*_omega chart of the face cell omega; nullopt when empty.
std::optional<Polyhedron> stratum_closure_trace(const TropicalManifold& m,
                                                const SingularStratum& stratum,
                                                const std::string& omega);

// Inner normal cones of all faces of a (possibly unbounded) polyhedron,
// paired with the faces themselves.
std::vector<std::pair<Polyhedron, Cone>> inner_normal_cones(const Polyhedron& p);

}  // namespace tropscat
