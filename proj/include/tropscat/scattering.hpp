#pragma once

#include "tropscat/singular.hpp"

namespace tropscat {

// Wall in the chart of a maximal cell: 1-dimensional polyhedral support
// (segment, ray or full line), a primitive normal, and the crossing factor.
struct Wall {
  std::string carrier;
  Polyhedron support;  // 1-dimensional in the carrier chart
  IntVec normal;       // primitive check_d_w
  GroupElement factor;
};

// Slab on a codimension-1 cell meeting the essential singular locus; the
// support is one component of int(rho) minus the singular points, carried in
// the rho chart.  The initial factor is determined by kink and slab function;
// the stored group element is the order-q correction.
struct Slab {
  std::string rho;
  std::string vertex;
  Polyhedron support;      // inside the rho chart
  int kink = 1;
  Poly function;           // s^{-1}_{v rho}(f_{v rho}) in the rho chart
  GroupElement correction; // letters in the slab ring, divisible by q
};

struct ScatteringDiagram {
  int order = 2;
  std::vector<Wall> walls;
  std::vector<Slab> slabs;
};

struct Germ {
  int wall;      // index into walls
  IntVec dir;    // outgoing direction at the joint, primitive
  int sign;      // +1 if the anticlockwise loop crosses along +check_d
};

struct Joint {
  enum class Kind { Interior, Singular };
  Kind kind = Kind::Interior;
  std::string carrier;          // maximal cell (interior) or rho (singular)
  RatVec point;                 // chart coordinates
  std::vector<Germ> germs;      // anticlockwise, interior joints
  std::vector<int> slabs;       // incident slab indices, singular joints
};

struct Chamber {
  std::string id;
  std::string carrier;
  RatVec sample;
};

struct Crossing {
  std::string from, to;
  int wall = -1;  // index into walls, or
  int slab = -1;  // index into slabs
  int sign = 0;   // +1: crossing along +check_d (applies the factor)
};

struct Decomposition {
  std::vector<Joint> joints;
  std::vector<Chamber> chambers;
  std::vector<Crossing> crossings;
};

// Joints and (single-chart) chambers of the diagram.  Wall supports must be
// one-dimensional; carriers must be two-dimensional charts.
Decomposition decompose(const TropicalManifold& m, const ScatteringDiagram& d);

struct ConsistencyFailure {
  std::string where;     // joint description
  std::string defect;    // leading defect in text form (interior joints)
  int leading_order = 0;
};

struct ConsistencyReport {
  std::vector<ConsistencyFailure> failures;
  bool ok() const { return failures.empty(); }
};

// Path-ordered products around interior joints mod q^{order+1};
// singular joints delegate to the gluing-module slab checks.
ConsistencyReport check_consistency(const TropicalManifold& m, const ScatteringDiagram& d,
                                    int order, const OpenGluingData& s = {});

// Order-by-order insertion of walls canceling joint defects.
ScatteringDiagram complete(const TropicalManifold& m, const ScatteringDiagram& d, int order,
                           const OpenGluingData& s = {});

// One slab per (v, rho)-component of int(rho) minus the essential singular
// locus, with the initial factor data; no walls.
ScatteringDiagram initial_diagram(const TropicalManifold& m, const SlabFunctions& f,
                                  const OpenGluingData& s, int order, bool checked = true);

// One step of a path: target chamber plus an optional explicit crossing
// (required when several walls separate the same chambers).
struct PathStep {
  std::string chamber;
  int via_wall = -1;
  int via_slab = -1;
};

// Apply the crossing factors along a chamber path to x.  Interior crossings
// act on Laurent elements of the carrier chart; slab crossings act on slab
// ring elements and hop between the twisted and semi-flat charts.
Element apply_path(const TropicalManifold& m, const ScatteringDiagram& d, const Decomposition& dec,
                   const std::string& start, const std::vector<PathStep>& path, Element x);

// ring contexts
RingPtr carrier_ring(const TropicalManifold& m, const std::string& sigma, int order);
RingPtr slab_ring_of(const Slab& b, int order);

// extensional equality of diagrams (same supports, same factor actions)
bool diagrams_equal(const TropicalManifold& m, const ScatteringDiagram& a,
                    const ScatteringDiagram& b);
// truncate all factors and the order
ScatteringDiagram truncate_diagram(const ScatteringDiagram& d, int order);

}  // namespace tropscat
