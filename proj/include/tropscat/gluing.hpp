#pragma once

#include "tropscat/algebra.hpp"
#include "tropscat/monodromy.hpp"

namespace tropscat {

// Piecewise multiplicative map on tau: for each maximal cell sigma
// containing tau, a formal character Lambda_sigma -> (symbol group), stored
// as one rational exponent covector per symbol in the sigma chart.
struct PMMap {
  std::string carrier;
  std::map<std::string, std::map<std::string, RatVec>> exps;  // symbol -> sigma -> covector

  bool trivial() const { return exps.empty(); }
  // formal value on a lattice vector in the sigma chart
  SymMono value(const std::string& sigma, const RatVec& m_sigma) const;
  PMMap times(const PMMap& o) const;
  PMMap inverse() const;
  // restriction PM(tau) -> PM(tau') for tau inside tau': keep the charts of
  // maximal cells containing tau'
  PMMap restrict_to(const std::string& finer_carrier, const std::vector<std::string>& kept_sigmas) const;
};

// s_{omega tau} for arrows omega -> tau; missing entries mean 1.
struct OpenGluingData {
  std::map<std::pair<std::string, std::string>, PMMap> s;
  PMMap get(const std::string& omega, const std::string& tau) const;
  void set(const std::string& omega, const std::string& tau, PMMap pm);
};

// multiplicative compatibility of the covectors across shared faces
Report check_pm_compatibility(const TropicalManifold& m, const PMMap& pm);
// cocycle axioms (identity on diagonal is implicit; chains checked)
Report check_gluing(const TropicalManifold& m, const OpenGluingData& s);

struct CohomologyWitness {
  bool cohomologous = false;
  std::map<std::string, PMMap> t;  // per cell
};
// solve s_{omega tau} = t_tau (t_omega|_tau)^{-1} s'_{omega tau}
CohomologyWitness are_cohomologous(const TropicalManifold& m, const OpenGluingData& s,
                                   const OpenGluingData& s_prime);
// coboundary data from a family {t_tau}
OpenGluingData coboundary(const TropicalManifold& m, const std::map<std::string, PMMap>& t);

// D(mu, rho, v): change of mu across rho through the vertex v
SymMono d_invariant(const TropicalManifold& m, const PMMap& mu, const std::string& rho,
                    const std::string& v);

Report check_lifting_condition(const TropicalManifold& m, const OpenGluingData& s);

// Monoid ring of a fan: z^p z^q = z^{p+q} when p, q share a cone, else 0.
class FanRing {
 public:
  explicit FanRing(Fan fan) : fan_(std::move(fan)) {}
  const Fan& fan() const { return fan_; }
  Poly multiply(const Poly& a, const Poly& b) const;
  Poly element(const Coeff& c, const IntVec& m) const;  // validates support

 private:
  Fan fan_;
};

// f_{v rho} as Laurent data in the rho chart; missing entries mean 1.
struct SlabFunctions {
  std::map<std::pair<std::string, std::string>, Poly> f;
  Poly get(const std::string& v, const std::string& rho, size_t rank) const;
  void set(const std::string& v, const std::string& rho, Poly p);
};

// normalization, the cross-vertex change of chart, and the codimension-2
// multiplicative condition
Report check_slab_functions(const TropicalManifold& m, const SlabFunctions& f,
                            const OpenGluingData& s);

// s^{-1}_{v rho}(f): rescale each monomial by the inverse formal value
Poly twist_by_gluing_inverse(const TropicalManifold& m, const PMMap& s_vrho,
                             const std::string& rho, const Poly& f);

}  // namespace tropscat
