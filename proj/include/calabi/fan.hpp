#pragma once

#include <optional>
#include <string>
#include <vector>

#include "calabi/exactgeom.hpp"
#include "calabi/numeric.hpp"

namespace calabi {

/// Strongly convex rational polyhedral cone with a minimal list of primitive
/// generators. Construct via make_cone.
struct Cone {
  size_t dim = 0;  // ambient lattice rank
  std::vector<LatVec> gens;
};

/// Fan given by its maximal cones over a shared primitive ray list.
/// boundary_rays marks the rays on the boundary of the support (for a fan
/// refining a single cone: its generators plus any ray later inserted on a
/// proper face); an empty mark means the fan does not carry that information.
struct Fan {
  size_t dim = 0;
  std::vector<LatVec> rays;
  std::vector<std::vector<int>> cones;  // sorted ray-index lists
  std::vector<int> boundary_rays;       // sorted, possibly empty
};

struct GorensteinCertificate {
  RatVec gamma;  // integral iff holds
  bool holds = false;
};

/// Affine unimodular chart of the lattice hyperplane <gamma, x> = -1:
/// (s, t) maps to origin + s*basis[0] + t*basis[1].
struct HyperplaneChart {
  LatVec origin;
  std::vector<LatVec> basis;
  IntMat inverse_rows;  // rows of the inverse of [basis | origin]

  LatVec to_ambient(const LatVec& coords) const;
  LatVec to_chart(const LatVec& ambient) const;  // drops the final coordinate
};

struct SectionPolytope {
  HyperplaneChart chart;
  LatticePolygon polygon;             // chart images, counterclockwise
  std::vector<LatVec> ambient_verts;  // polygon vertices back in the lattice
};

/// One linear functional per maximal cone.
struct SupportFunction {
  std::vector<RatVec> functionals;
};

struct SupportProperties {
  bool convex = false;
  bool strictly_convex = false;
  bool compact = false;
};

// cone algebra ---------------------------------------------------------------

/// Primitivizes, deduplicates and minimalizes the generators; rejects cones
/// containing a line (NotStronglyConvex).
Cone make_cone(std::vector<LatVec> gens, size_t dim);

/// Whether cone(gens) contains no line.
bool is_pointed(const std::vector<LatVec>& gens, size_t dim);

/// Inward facet normals of a full-dimensional pointed cone: exactly the
/// minimal generators of the dual cone, lexicographically sorted.
std::vector<LatVec> cone_facet_normals(const std::vector<LatVec>& gens, size_t dim);

/// Polar dual {x : <x, u> >= 0 for all generators u}. NotFullDimensional when
/// the generators do not span.
Cone dual_cone(const Cone& c);

/// Generator indices spanning the smallest face of the cone containing x, or
/// nullopt when x lies outside. Requires a full-dimensional cone.
std::optional<std::vector<int>> cone_face_of(const std::vector<LatVec>& gens,
                                             const std::vector<LatVec>& facet_normals,
                                             const LatVec& x);

// fans -----------------------------------------------------------------------

/// Fan with the single maximal cone on the given generators; every ray is
/// marked as boundary.
Fan fan_from_cone(const Cone& c);

/// Structural validation: primitive distinct rays, strongly convex
/// full-dimensional maximal cones, pairwise index intersections are faces of
/// both cones. Throws on violation.
void fan_validate(const Fan& f);

std::vector<LatVec> cone_gens(const Fan& f, size_t cone_index);

/// Solves <gamma, u> = -1 over the rays. holds is false when the system is
/// inconsistent or the solution is not integral.
GorensteinCertificate gorenstein_gamma(const Fan& f);

HyperplaneChart hyperplane_chart(const LatVec& gamma);

/// Height-one cross-section of a 3d Gorenstein cone fan in a unimodular
/// chart of the hyperplane <gamma, x> = -1.
SectionPolytope section_polytope(const Fan& f, const GorensteinCertificate& cert);

/// The section polytope carries no lattice points besides its vertices, so
/// every height-one point is already a generator and no crepant divisor
/// exists. Up to unimodular equivalence that leaves the unit triangle and
/// the unit square.
bool is_terminal(const Fan& f);

/// Convexity / strict convexity / compact support, all checked exactly on
/// rays. InconsistentSupportFunction when functionals disagree on shared
/// rays; UnmarkedBoundaryRays when the compact check has no marked boundary.
SupportProperties sf_properties(const Fan& f, const SupportFunction& h);

/// Value of the support function on a ray (consistency assumed).
Rat support_value(const Fan& f, const SupportFunction& h, int ray_index);

// interchange ----------------------------------------------------------------

std::string fan_to_json(const Fan& f);
Fan fan_from_json(const std::string& text);

} // namespace calabi
