#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <array>
#include <string>
#include <utility>
#include <vector>

#include "calabi/errors.hpp"

namespace calabi {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

using LatVec = std::vector<Int>;  // lattice vector, exact
using RatVec = std::vector<Rat>;  // rational vector, exact

using IntMat = std::vector<LatVec>;  // row-major
using RatMat = std::vector<RatVec>;

inline Rat to_rat(const Int& v) { return Rat(v); }

inline RatVec to_rat(const LatVec& v) {
  RatVec r(v.size());
  for (size_t i = 0; i < v.size(); ++i) r[i] = Rat(v[i]);
  return r;
}

inline double to_double(const Rat& r) { return r.convert_to<double>(); }

/// Exact rational equal to the IEEE value; every finite double is rational.
inline Rat rat_of_double(double x) { return Rat(x); }

template <class T>
T dot(const std::vector<T>& a, const std::vector<T>& b) {
  T s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline Rat dot(const RatVec& a, const LatVec& b) {
  Rat s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * Rat(b[i]);
  return s;
}

inline Rat dot(const LatVec& a, const RatVec& b) { return dot(b, a); }

template <class T>
std::vector<T> vec_sub(const std::vector<T>& a, const std::vector<T>& b) {
  std::vector<T> r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

template <class T>
std::vector<T> vec_add(const std::vector<T>& a, const std::vector<T>& b) {
  std::vector<T> r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

template <class T, class S>
std::vector<T> vec_scale(const S& c, const std::vector<T>& a) {
  std::vector<T> r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = T(c) * a[i];
  return r;
}

inline bool is_zero(const LatVec& v) {
  return std::all_of(v.begin(), v.end(), [](const Int& x) { return x == 0; });
}

inline Int igcd(Int a, Int b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    Int t = a % b;
    a = b;
    b = t;
  }
  return a;
}

/// g = gcd(a,b) >= 0 with g = s*a + t*b.
inline void ext_gcd(const Int& a, const Int& b, Int& g, Int& s, Int& t) {
  Int r0 = a, r1 = b, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
  while (r1 != 0) {
    Int q = r0 / r1;
    Int r2 = r0 - q * r1;
    r0 = r1; r1 = r2;
    Int s2 = s0 - q * s1;
    s0 = s1; s1 = s2;
    Int t2 = t0 - q * t1;
    t0 = t1; t1 = t2;
  }
  if (r0 < 0) { r0 = -r0; s0 = -s0; t0 = -t0; }
  g = r0; s = s0; t = t0;
}

/// Exact determinant, Gaussian elimination over the rationals.
inline Rat det_rat(RatMat m) {
  const size_t n = m.size();
  Rat d = 1;
  for (size_t c = 0; c < n; ++c) {
    size_t p = c;
    while (p < n && m[p][c] == 0) ++p;
    if (p == n) return 0;
    if (p != c) { std::swap(m[p], m[c]); d = -d; }
    d *= m[c][c];
    for (size_t r = c + 1; r < n; ++r) {
      if (m[r][c] == 0) continue;
      Rat f = m[r][c] / m[c][c];
      for (size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
    }
  }
  return d;
}

inline Int det_int(const IntMat& m) {
  RatMat r(m.size());
  for (size_t i = 0; i < m.size(); ++i) r[i] = to_rat(m[i]);
  Rat d = det_rat(r);
  return numerator(d) / denominator(d);
}

inline size_t rank_rat(RatMat m) {
  if (m.empty()) return 0;
  const size_t rows = m.size(), cols = m[0].size();
  size_t rank = 0;
  for (size_t c = 0; c < cols && rank < rows; ++c) {
    size_t p = rank;
    while (p < rows && m[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[rank]);
    for (size_t r = rank + 1; r < rows; ++r) {
      if (m[r][c] == 0) continue;
      Rat f = m[r][c] / m[rank][c];
      for (size_t k = c; k < cols; ++k) m[r][k] -= f * m[rank][k];
    }
    ++rank;
  }
  return rank;
}

inline size_t rank_int(const std::vector<LatVec>& rows) {
  RatMat m(rows.size());
  for (size_t i = 0; i < rows.size(); ++i) m[i] = to_rat(rows[i]);
  return rank_rat(m);
}

/// Solves m * x = rhs for square nonsingular m; throws on singular input.
inline RatVec solve_square(RatMat m, RatVec rhs) {
  const size_t n = m.size();
  for (size_t c = 0; c < n; ++c) {
    size_t p = c;
    while (p < n && m[p][c] == 0) ++p;
    if (p == n) fail("SingularSystem", "matrix is singular");
    if (p != c) { std::swap(m[p], m[c]); std::swap(rhs[p], rhs[c]); }
    for (size_t r = 0; r < n; ++r) {
      if (r == c || m[r][c] == 0) continue;
      Rat f = m[r][c] / m[c][c];
      for (size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
      rhs[r] -= f * rhs[c];
    }
  }
  RatVec x(n);
  for (size_t i = 0; i < n; ++i) x[i] = rhs[i] / m[i][i];
  return x;
}

/// Inverse of a square rational matrix.
inline RatMat inverse(const RatMat& m) {
  const size_t n = m.size();
  RatMat a = m, inv(n, RatVec(n, 0));
  for (size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (size_t c = 0; c < n; ++c) {
    size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) fail("SingularSystem", "matrix is singular");
    if (p != c) { std::swap(a[p], a[c]); std::swap(inv[p], inv[c]); }
    Rat piv = a[c][c];
    for (size_t k = 0; k < n; ++k) { a[c][k] /= piv; inv[c][k] /= piv; }
    for (size_t r = 0; r < n; ++r) {
      if (r == c || a[r][c] == 0) continue;
      Rat f = a[r][c];
      for (size_t k = 0; k < n; ++k) { a[r][k] -= f * a[c][k]; inv[r][k] -= f * inv[c][k]; }
    }
  }
  return inv;
}

/// Divides out the content; returns the primitive vector and the content.
/// The zero vector has no primitive representative.
inline std::pair<LatVec, Int> primitive_of(const LatVec& v) {
  Int g = 0;
  for (const Int& x : v) g = igcd(g, x);
  if (g == 0) fail("ZeroVector", "zero vector has no primitive representative");
  LatVec p(v.size());
  for (size_t i = 0; i < v.size(); ++i) p[i] = v[i] / g;
  return {p, g};
}

/// Clears denominators of a rational vector to the primitive integer vector
/// on the same ray through the origin.
inline LatVec primitive_of_ray(const RatVec& v) {
  Int lcm = 1;
  for (const Rat& x : v) {
    Int d = denominator(x);
    lcm = lcm / igcd(lcm, d) * d;
  }
  LatVec w(v.size());
  for (size_t i = 0; i < v.size(); ++i) {
    Rat s = v[i] * Rat(lcm);
    w[i] = numerator(s);
  }
  return primitive_of(w).first;
}

/// Primitive integer spanning vector of the 1-dimensional null space of the
/// given rows (rank must be dim-1); empty result when the rank is lower.
inline LatVec null_direction(const std::vector<LatVec>& rows, size_t dim) {
  RatMat m(rows.size());
  for (size_t i = 0; i < rows.size(); ++i) m[i] = to_rat(rows[i]);
  // reduced row echelon
  size_t rank = 0;
  std::vector<size_t> pivot_col;
  for (size_t c = 0; c < dim && rank < m.size(); ++c) {
    size_t p = rank;
    while (p < m.size() && m[p][c] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[rank]);
    Rat piv = m[rank][c];
    for (size_t k = 0; k < dim; ++k) m[rank][k] /= piv;
    for (size_t r = 0; r < m.size(); ++r) {
      if (r == rank || m[r][c] == 0) continue;
      Rat f = m[r][c];
      for (size_t k = 0; k < dim; ++k) m[r][k] -= f * m[rank][k];
    }
    pivot_col.push_back(c);
    ++rank;
  }
  if (rank + 1 != dim) return {};
  std::vector<bool> is_pivot(dim, false);
  for (size_t c : pivot_col) is_pivot[c] = true;
  size_t free_col = 0;
  while (is_pivot[free_col]) ++free_col;
  RatVec x(dim, 0);
  x[free_col] = 1;
  for (size_t r = 0; r < rank; ++r) x[pivot_col[r]] = -m[r][free_col];
  return primitive_of_ray(x);
}

/// Unimodular column basis adapted to a primitive integral functional gamma:
/// columns b_0..b_{n-2} span ker(gamma) in the lattice and <gamma, w> = -1
/// for the final column w. Deterministic.
struct AdaptedBasis {
  std::vector<LatVec> kernel;  // n-1 lattice vectors
  LatVec point;                // w with <gamma, w> = -1
  IntMat inverse_rows;         // rows of U^{-1}, for coordinate extraction
};

inline AdaptedBasis gamma_adapted_basis(const LatVec& gamma) {
  const size_t n = gamma.size();
  // columns of U, acted on so that gamma * U = (0,...,0,-1)
  std::vector<LatVec> col(n, LatVec(n, 0));
  for (size_t i = 0; i < n; ++i) col[i][i] = 1;
  LatVec a = gamma;
  for (size_t i = 1; i < n; ++i) {
    Int g, s, t;
    ext_gcd(a[i - 1], a[i], g, s, t);
    if (g == 0) continue;
    LatVec ci = col[i - 1], cj = col[i];
    Int u = a[i - 1] / g, v = a[i] / g;
    for (size_t r = 0; r < n; ++r) {
      Int nj = s * ci[r] + t * cj[r];
      Int ni = v * ci[r] - u * cj[r];
      col[i - 1][r] = ni;
      col[i][r] = nj;
    }
    a[i - 1] = 0;
    a[i] = g;
  }
  if (a[n - 1] != 1 && a[n - 1] != -1)
    fail("NotPrimitive", "functional is not primitive");
  if (a[n - 1] == 1)
    for (size_t r = 0; r < n; ++r) col[n - 1][r] = -col[n - 1][r];
  AdaptedBasis b;
  for (size_t i = 0; i + 1 < n; ++i) b.kernel.push_back(col[i]);
  b.point = col[n - 1];
  RatMat u(n, RatVec(n));
  for (size_t r = 0; r < n; ++r)
    for (size_t c = 0; c < n; ++c) u[r][c] = Rat(col[c][r]);
  RatMat inv = inverse(u);
  b.inverse_rows.assign(n, LatVec(n));
  for (size_t r = 0; r < n; ++r)
    for (size_t c = 0; c < n; ++c) {
      if (denominator(inv[r][c]) != 1)
        fail("InternalError", "adapted basis inverse not integral");
      b.inverse_rows[r][c] = numerator(inv[r][c]);
    }
  return b;
}

inline std::string rat_string(const Rat& r) {
  std::string s = numerator(r).str();
  if (denominator(r) != 1) s += "/" + denominator(r).str();
  return s;
}

inline Rat rat_parse(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) return Rat(Int(s));
  return Rat(Int(s.substr(0, slash)), Int(s.substr(slash + 1)));
}

} // namespace calabi
