#pragma once

#include <optional>
#include <string>
#include <vector>

#include "calabi/numeric.hpp"

namespace calabi {

/// Quasi-homogeneous hypersurface singularity data. For a Brieskorn-Pham
/// form sum x_i^{a_i} the exponents are given and a_i * w_i = d is enforced;
/// otherwise only (weights, degree) matter.
struct WeightedHypersurface {
  std::vector<long long> weights;
  long long degree = 0;
  std::vector<long long> exponents;  // empty for the general product form
};

/// |w| > d: the singularity is canonical (the link is positive).
bool hypersurface_fano(const WeightedHypersurface& h);

struct PoincareSeries {
  std::vector<long long> coeff;  // coeff[j] = dim of the Milnor algebra in degree j

  long long at(long long degree) const {
    return (degree >= 0 && size_t(degree) < coeff.size()) ? coeff[size_t(degree)] : 0;
  }
  long long total() const;
};

/// Poincare series of the Milnor algebra: the tensor form
/// prod_i (1 + t^{w_i} + ... + t^{w_i (a_i - 2)}) for Brieskorn-Pham data,
/// the quotient prod (t^{d - w_i} - 1) / (t^{w_i} - 1) in general
/// (NotQuasiHomogeneous when the division leaves a remainder or the
/// exponents are inconsistent).
PoincareSeries milnor_poincare(const WeightedHypersurface& h);

struct HodgeNumbers {
  std::vector<long long> h;  // h[i] = h_0^{i, n-i}
  long long s = 0;           // rank of H^2, only meaningful for n = 2
};

/// Primitive Hodge numbers of the degree-d hypersurface in weighted
/// projective space: h_0^{i, n-i} = dim M(f)_{(i+1) d - |w|}.
HodgeNumbers steenbrink_hodge(const WeightedHypersurface& hs, int n);

struct TorsionPart {
  long long modulus = 0;       // >= 2
  long long multiplicity = 0;  // >= 1

  bool operator==(const TorsionPart&) const = default;
};

struct AbelianGroup {
  long long rank = 0;
  std::vector<TorsionPart> torsion;  // merged, sorted by modulus

  bool operator==(const AbelianGroup&) const = default;
};

std::string group_string(const AbelianGroup& g);

/// Seifert link of a quasi-regular canonical singularity: s = rank H^2 of
/// the base orbifold surface, d the divisibility invariant, branches the
/// non-well-formed divisors as (multiplicity, genus) pairs.
struct SeifertData {
  long long s = 1;
  long long d = 1;
  std::vector<std::pair<long long, long long>> branches;
};

struct SeifertCohomology {
  AbelianGroup h[6];   // H^0 .. H^5 of the 5-dimensional link
  AbelianGroup h2_lower;  // H_2 = H^3 by Poincare duality
};

SeifertCohomology seifert_cohomology(const SeifertData& sd);

/// Discrepancy |w| - w(f) - 1 of the weighted blow-up with weight w of a
/// hypersurface with weighted multiplicity w(f); zero means crepant.
long long blowup_discrepancy(const std::vector<long long>& w, long long f_weight);

struct BlowupStep {
  std::vector<long long> weights;
  long long f_weight = 0;
  long long discrepancy = 0;
  long long residual_exponent = 0;  // exponent of the last variable afterwards
};

struct FamilyReport {
  std::string family;
  long long k = 0;
  long long n = 3;
  long long c_x = 0;
  std::optional<long long> b3;       // third Betti number of the resolution (n = 3)
  std::optional<AbelianGroup> h2;    // H_2 of the link (n = 3)
  std::vector<BlowupStep> steps;
  bool smooth = false;
  std::optional<Int> euler;          // Euler characteristic of the resolution
  std::optional<Int> link_betti;     // Milnor-Orlik Betti number of the link
  std::optional<Int> torsion_order;  // |H_{n-1}| when the residue is one
};

/// Crepant terminalization of the hypersurface families
/// x0^3+x1^3+x2^3+x3^k ("cubic"), x0^2+x1^4+x2^4+x3^k ("quartic"),
/// x0^2+x1^3+x2^6+x3^k ("sextic"), x0^3+x1^4+x2^4+x3^4 ("quartic-cubic"),
/// and x0^n+...+x_{n-1}^n+x_n^k ("general"). UnresolvedResidual for residues
/// outside {0, 1} modulo the family step.
FamilyReport terminalize_family(const std::string& name, long long k, long long n = 3);

struct MilnorOrlikBetti {
  Int betti = 0;                     // b_{n-1} (residue 0) or b_{n-2} (residue 1)
  std::optional<Int> torsion_order;  // |H_{n-1}| = k^{b_{n-2}} when residue 1
};

/// Closed-form link Betti data of x0^n+...+x_{n-1}^n+x_n^k for k = 0 or 1
/// modulo n. BadResidue otherwise or when k does not match the residue.
MilnorOrlikBetti milnor_orlik_betti(long long n, int residue,
                                    std::optional<long long> k = std::nullopt);

/// Tabulated rationally-trivial-link rows (weights, degree, c_x, link type)
/// shipped as regression fixtures.
struct B3ZeroRow {
  std::vector<long long> weights;
  long long degree = 0;
  long long c_x = 0;
  std::string link;
};

const std::vector<B3ZeroRow>& b3zero_fixtures();

} // namespace calabi
