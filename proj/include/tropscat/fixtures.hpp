#pragma once

#include "tropscat/manifold.hpp"

namespace tropscat {

// R^2 as a single maximal cell; no singularities.  Carrier for plane
// scattering diagrams.
TropicalManifold plane_fixture();

// Focus-focus model: the plane split into upper/lower half-planes along the
// x-axis, which is subdivided by two vertices bounding the central segment
// "rho".  The transition between the two halves is sheared by kappa at the
// second vertex, so the loop around the interior of rho has monodromy
// [[1,kappa],[0,1]].
TropicalManifold ff_fixture(long kappa = 1);

// 3x3 grid of unit squares on the torus R^2 / 3Z^3 (flat, no monodromy).
TropicalManifold torus2_fixture();

// 3-torus R^3 / 3Z^3 cut into 54 triangular prisms (each unit cube split
// along a vertical diagonal plane); flat structure, triangle 2-cells.
TropicalManifold t3_fixture();

// Periodic complex builder used by the torus fixtures: maximal cells are
// lattice polytopes in global coordinates, identified modulo period * Z^n.
TropicalManifold periodic_complex(const std::vector<Polyhedron>& maximal, long period);

}  // namespace tropscat
