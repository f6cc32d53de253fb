#pragma once

#include "tropscat/manifold.hpp"

namespace tropscat {

// Loop from v_plus through sigma_plus to v_minus and back through
// sigma_minus; the transform acts on T_{v_plus}.
struct LoopSpec {
  std::string v_plus, sigma_plus, v_minus, sigma_minus;
};

IntMat monodromy_matrix(const TropicalManifold& m, const LoopSpec& loop);

// T(x) = x + <x, n> d_omega  (edge fixed)
struct EdgeLoopData {
  IntMat matrix;
  IntVec d_omega;   // primitive edge direction in T_{v_plus}
  RatVec n_covector;
};
// T(x) = x + <x, check_d> m_vec  (codimension-1 cell fixed)
struct Codim1LoopData {
  IntMat matrix;
  IntVec check_d;  // primitive normal of rho, positive on sigma_plus
  RatVec m_vec;
};
// T(x) = x + kappa <x, check_d> d_omega  (both fixed)
struct BothLoopData {
  IntMat matrix;
  Int kappa;
  IntVec d_omega;
  IntVec check_d;
};

EdgeLoopData monodromy_via_edge(const TropicalManifold& m, const std::string& omega,
                                const LoopSpec& loop);
Codim1LoopData monodromy_via_rho(const TropicalManifold& m, const std::string& rho,
                                 const LoopSpec& loop);
BothLoopData monodromy_via_both(const TropicalManifold& m, const std::string& omega,
                                const std::string& rho, const LoopSpec& loop);

// kappa_{omega rho}; zero when omega has fewer than two vertices (no loop).
Int kappa_of(const TropicalManifold& m, const std::string& omega, const std::string& rho);

// kappa table over all omega in P^[1], rho in P^[n-1] with omega inside rho
struct MonodromyTable {
  std::map<std::pair<std::string, std::string>, Int> kappa;
  bool positive() const;
};
MonodromyTable monodromy_table(const TropicalManifold& m);

// the simplicity data per cell
struct TauMonodromyData {
  std::vector<std::vector<std::string>> omega_classes;  // Omega_1..Omega_p
  std::vector<std::vector<std::string>> rho_classes;    // R_1..R_p
  std::vector<Polyhedron> delta;          // Delta_i(tau), normalized, in Lambda_tau coords
  std::vector<Polyhedron> delta_check;    // dual polytopes in Q*_tau coords
  std::optional<Polyhedron> delta_graded;        // Delta(tau) in (Lambda_tau + Z^p)
  std::optional<Polyhedron> delta_check_graded;  // dual graded polytope
  bool simple = true;
  bool strongly_simple = true;
  std::string violation;
};

struct MonodromyCertificate {
  MonodromyTable table;
  std::map<std::string, TauMonodromyData> per_tau;
  bool positive = true;
  bool simple = true;
  bool strongly_simple = true;
  std::vector<std::string> violations;
};

MonodromyCertificate certify_monodromy(const TropicalManifold& m);

// displacement m^rho_{v0 v} in Lambda_tau coordinates (used by gluing and
// the dual polytopes); zero vector for v = v0
RatVec monodromy_displacement(const TropicalManifold& m, const std::string& rho,
                              const std::string& tau, const std::string& v0, const std::string& v);

// translation-normalization: shift the lex-min vertex to the origin
Polyhedron normalize_translation(const Polyhedron& p);

}  // namespace tropscat
