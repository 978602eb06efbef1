#pragma once

#include <array>
#include <optional>
#include <vector>

#include "calabi/fan.hpp"

namespace calabi {

struct HessianResult {
  RatMat hessian;       // symmetric n x n
  RatVec l_values;      // <u_k, y> per ray
  Rat l_xi;             // <xi, y>
  Rat l_inf;            // sum of l_values
  bool positive_definite = false;
};

/// Hessian of the canonical symplectic potential of the cone fan at an
/// interior point y of the moment cone, for Reeb vector xi:
///   G_ij = 1/2 sum_k u_k^i u_k^j / l_k + 1/2 xi^i xi^j / l_xi
///        - 1/2 (sum_k u_k^i)(sum_k u_k^j) / l_inf.
/// BoundaryPoint when any l vanishes or goes negative.
HessianResult canonical_hessian(const Fan& f, const RatVec& xi, const RatVec& y);

/// Residual 2 G y - xi of the moment-coordinate Reeb identity; identically
/// zero in exact arithmetic.
RatVec reeb_identity_residual(const Fan& f, const RatVec& xi, const RatVec& y);

/// Exact Euclidean volume of {y in C(mu) : <xi, y> <= 1/2}, the dual cone of
/// the fan cone truncated by the Reeb covector. UnboundedRegion when xi is
/// not strictly inside the cone spanned by the rays.
Rat char_volume(const Fan& f, const RatVec& xi);

/// Double-precision evaluation cross-checked against the exact kernel on the
/// exactly converted input; InternalError if the two disagree.
double char_volume_checked(const Fan& f, const std::array<double, 3>& xi);

struct MinimizeResult {
  std::array<double, 3> xi{};
  double volume = 0;
  double grad_norm = 0;
  int iterations = 0;
  bool converged = false;
};

/// Reeb vector minimizing the characteristic-polytope volume over
/// {<gamma, xi> = -3, xi interior}: the normalization constraint is
/// eliminated through a unimodular chart, then coordinate descent with
/// golden-section line searches is polished by Newton steps on the closed-form
/// derivatives of the dual-ray volume formula until the reduced gradient norm
/// drops below tol.
MinimizeResult minimize_volume(const Fan& f, double tol = 1e-10, int threads = 1);

/// Simultaneous rational approximation with a common denominator <= max_den
/// reproducing xi within tol; nullopt means irregular at this search depth.
std::optional<RatVec> quasi_regularity(const std::array<double, 3>& xi,
                                       long long max_den = 10000, double tol = 1e-9);

} // namespace calabi
