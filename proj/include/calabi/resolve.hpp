#pragma once

#include <optional>
#include <string>
#include <vector>

#include "calabi/fan.hpp"

namespace calabi {

struct StarSubdivision {
  Fan fan;
  SupportFunction support;
};

/// Star subdivision at a primitive ray u interior to a maximal cone or to a
/// codimension-one face, with the support function extended by a functional
/// vanishing on the untouched face and taking eps at u. When crepancy_gamma
/// is given, u must satisfy <gamma, u> = -1 (CrepancyViolation otherwise).
StarSubdivision star_subdivide(const Fan& f, const SupportFunction& h, const LatVec& u,
                               const Rat& eps, const RatVec* crepancy_gamma = nullptr);

struct ResolveOptions {
  bool allow_small = false;     // permit the non-projective fallback on terminal input
  bool reverse_order = false;   // reverse the deterministic insertion order (testing)
};

struct ResolutionResult {
  Fan fan;                       // original rays first, inserted rays after
  SupportFunction support;
  GorensteinCertificate cert;
  std::vector<LatVec> inserted;  // in insertion order
  std::vector<Rat> epsilons;     // one per insertion
  Int c_x = 0;                   // interior lattice points of the section
  Int euler = 0;                 // number of maximal cones
  bool smooth = false;
  bool strictly_convex = false;
  bool compact = false;
  bool compact_class_exists = false;
  bool used_small_fallback = false;
};

/// Crepant resolution of a Gorenstein cone fan (dimension 3, or 2 for
/// quotient surfaces) by iterated star subdivision of all section lattice
/// points, interior points first. Terminal non-smooth input raises
/// TerminalSingularity unless allow_small is set, in which case the section
/// is triangulated from its vertices alone and the result carries
/// compact_class_exists = false.
ResolutionResult crepant_resolve(const Fan& f, const ResolveOptions& opts = {});

struct ResolutionInvariants {
  Int b2;       // rank H^2 of the resolution
  Int b4;       // rank H^4 of the resolution
  Int b2_link;  // rank H^2 of the link
  Int euler;
  Int c_x;
};

/// Betti data of a 3d resolution from the boundary ray count d and c_x:
/// b2 = (d-3) + c_x, b4 = c_x, b2_link = d-3.
ResolutionInvariants resolution_invariants(const ResolutionResult& r);

/// Finite abelian quotient data for C^n / G, G generated by the given
/// rational weight vectors modulo Z^n.
struct QuotientSpec {
  size_t n = 3;
  Int order = 1;
  std::vector<RatVec> weights;
  bool isolated = true;  // expect an isolated singularity
};

/// Fan of the quotient in the refined lattice written in a Hermite basis:
/// generators are the standard basis vectors re-expressed (and primitivized).
/// NotGorensteinGroup when a weight sum is not integral, NonIsolated when the
/// isolated flag is set but some group element fixes a coordinate subspace.
Fan quotient_fan(const QuotientSpec& q);

/// Group elements of Z_T / Z^n as canonical representatives in [0,1)^n.
std::vector<RatVec> quotient_group_elements(const QuotientSpec& q);

/// Cone over the quadrilateral (0,0), (1,0), (p,p), (p-q-1, p-q) at height
/// one. BadParameters unless p > q >= 1 and gcd(p, q) = 1.
Fan spq_fan(long long p, long long q);

/// 4p^2 - 3q^2 is a perfect square, the quasi-regularity criterion of the
/// S^{p,q} family.
bool spq_quasi_regular(long long p, long long q);

} // namespace calabi
