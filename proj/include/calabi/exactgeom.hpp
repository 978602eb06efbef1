#pragma once

#include <vector>

#include "calabi/numeric.hpp"

namespace calabi {

/// Convex lattice polygon, vertices counterclockwise and in strictly convex
/// position. Construct via make_polygon / polygon_from_points.
struct LatticePolygon {
  std::vector<LatVec> verts;
};

struct PickCounts {
  Int doubled_area;  // twice the Euclidean area, always integral
  Int boundary;      // lattice points on the boundary
  Int interior;      // lattice points strictly inside
};

/// Halfspace {y : <normal, y> >= offset} with primitive integral normal.
struct Halfspace {
  LatVec normal;
  Rat offset;
};

/// Validates an explicitly ordered vertex list (counterclockwise, strictly
/// convex); DegeneratePolygon otherwise.
LatticePolygon make_polygon(std::vector<LatVec> verts);

/// Convex hull of an arbitrary 2d point set, collinear points dropped,
/// counterclockwise from the lexicographically smallest vertex.
LatticePolygon polygon_from_points(const std::vector<LatVec>& pts);

/// Index of the span of the generators inside the saturated sublattice they
/// rationally span: gcd of all maximal minors. DependentGenerators when the
/// generators are linearly dependent.
Int lattice_index(const std::vector<LatVec>& gens);

/// Doubled area by the shoelace formula, boundary count by edge gcds,
/// interior count by Pick's identity.
PickCounts pick_counts(const LatticePolygon& p);

/// strict=true tests the open interior, strict=false the closed polygon.
bool polygon_contains(const LatticePolygon& p, const LatVec& q, bool strict);

/// Lattice points strictly inside, sorted lexicographically.
std::vector<LatVec> interior_lattice_points(const LatticePolygon& p);

/// Non-vertex lattice points on the boundary, sorted lexicographically.
std::vector<LatVec> boundary_nonvertex_lattice_points(const LatticePolygon& p);

/// Whether an integral affine unimodular map carries a onto b.
bool polygon_unimodular_equiv(const LatticePolygon& a, const LatticePolygon& b);

/// All vertices of {y : <normals[j], y> >= offsets[j]}, deduplicated and
/// sorted lexicographically. Dimension is normals[0].size() (at most 4).
/// UnboundedRegion when a recession direction exists, EmptyRegion when the
/// bounded region is infeasible.
std::vector<RatVec> halfspace_vertices(const std::vector<RatVec>& normals,
                                       const RatVec& offsets);

/// Exact volume of the convex hull of the given points, which must affinely
/// span the ambient dimension (DegenerateHull otherwise). Fan triangulation
/// over recursively triangulated facets.
Rat polytope_volume(const std::vector<RatVec>& vertices);

/// Irredundant facet halfspaces of a full-dimensional polytope given by its
/// vertices, oriented so the polytope satisfies <normal, y> >= offset,
/// sorted deterministically.
std::vector<Halfspace> supporting_halfspaces(const std::vector<RatVec>& vertices);

} // namespace calabi
