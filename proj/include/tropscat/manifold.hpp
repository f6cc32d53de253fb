#pragma once

#include "tropscat/complex.hpp"
#include "tropscat/fan.hpp"

namespace tropscat {

// Multi-valued piecewise affine data: for each vertex v and each maximal cell
// sigma containing it, the slope covector of the local representative
// phi_v on K_v(sigma), written in the T_v chart.
struct MPAFunction {
  std::map<std::string, std::map<std::string, RatVec>> slopes;
  bool empty() const { return slopes.empty(); }
};

// Integral tropical manifold: complex + fan structure matrices.  The fan
// structure along tau is recorded as one integral matrix per maximal cell
// sigma containing tau (the linear part of S_tau on Lambda_sigma).
class TropicalManifold {
 public:
  PolyhedralComplex complex;
  // fan_structures[tau][sigma_max] : (n - dim tau) x n integral matrix
  std::map<std::string, std::map<std::string, IntMat>> fan_structures;
  MPAFunction phi;
  // formal translations c_tau of the singular strata (rational covectors in
  // the Upsilon_tau chart); default 0
  std::map<std::string, RatVec> c_tau;

  size_t dim() const { return complex.dim(); }

  const IntMat& chart_map(const std::string& tau, const std::string& sigma_max) const;
  // K_{tau} sigma' computed through a containing maximal cell; consistency
  // across choices is a validation item.
  Cone k_cone(const std::string& tau, const std::string& sigma_mid) const;
  // the complete fan Sigma_tau
  Fan fan_at(const std::string& tau) const;
  // image of Lambda_tau inside the chart of a containing maximal cell
  std::vector<IntVec> tangent_lattice_in(const std::string& tau, const std::string& sigma_max) const;

  // aggregated axiom checker (validate_manifold)
  Report validate() const;

  // kink of phi across a codimension-1 cell rho, computed at a vertex of rho;
  // well-definedness across vertices is part of check_strict_convexity.
  Rat kink(const std::string& rho) const;
  // strict convexity of the representative at each vertex
  std::map<std::string, bool> check_strict_convexity(Report* rep = nullptr) const;

  // the two maximal cells adjacent to a codimension-1 cell
  std::pair<std::string, std::string> adjacent_maximal(const std::string& rho) const;
  // primitive normal of rho in T_v, positive on the sigma_plus side
  IntVec check_d_rho(const std::string& rho, const std::string& v,
                     const std::string& sigma_plus) const;
  // primitive tangent direction of edge omega at vertex v pointing away from v
  IntVec edge_direction(const std::string& omega, const std::string& v,
                        const std::string& sigma_max) const;
};

}  // namespace tropscat
