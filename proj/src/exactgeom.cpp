#include "calabi/exactgeom.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace calabi {

namespace {

Int cross(const LatVec& o, const LatVec& a, const LatVec& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

Int shoelace2(const std::vector<LatVec>& v) {
  Int s = 0;
  for (size_t i = 0; i < v.size(); ++i) {
    const LatVec& p = v[i];
    const LatVec& q = v[(i + 1) % v.size()];
    s += p[0] * q[1] - q[0] * p[1];
  }
  return s;
}

// Local coordinates of a point set inside its affine hull. dim is the affine
// dimension; local points live in R^dim with pts[0] at the origin.
struct AffineLocal {
  size_t dim = 0;
  std::vector<RatVec> local;
};

AffineLocal affine_local(const std::vector<RatVec>& pts) {
  const size_t m = pts[0].size();
  std::vector<RatVec> edges;
  for (size_t i = 1; i < pts.size(); ++i) edges.push_back(vec_sub(pts[i], pts[0]));

  // Greedy maximal independent edge subset.
  std::vector<RatVec> basis;
  RatMat elim;
  for (const RatVec& e : edges) {
    RatMat trial = elim;
    trial.push_back(e);
    if (rank_rat(trial) > elim.size()) {
      elim = std::move(trial);
      basis.push_back(e);
    }
  }
  const size_t k = basis.size();
  AffineLocal out;
  out.dim = k;
  if (k == 0) {
    out.local.assign(pts.size(), RatVec{});
    return out;
  }
  // Pivot coordinates making the k x k system square.
  RatMat bt(k, RatVec(m));
  for (size_t i = 0; i < k; ++i) bt[i] = basis[i];
  std::vector<size_t> cols;
  {
    RatMat red = bt;
    size_t r = 0;
    for (size_t c = 0; c < m && r < k; ++c) {
      size_t p = r;
      while (p < k && red[p][c] == 0) ++p;
      if (p == k) continue;
      std::swap(red[p], red[r]);
      for (size_t rr = r + 1; rr < k; ++rr) {
        if (red[rr][c] == 0) continue;
        Rat f = red[rr][c] / red[r][c];
        for (size_t cc = c; cc < m; ++cc) red[rr][cc] -= f * red[r][cc];
      }
      cols.push_back(c);
      ++r;
    }
  }
  RatMat sq(k, RatVec(k));
  for (size_t i = 0; i < k; ++i)
    for (size_t j = 0; j < k; ++j) sq[i][j] = basis[j][cols[i]];
  RatMat sq_inv = inverse(sq);
  out.local.reserve(pts.size());
  for (const RatVec& p : pts) {
    RatVec d = vec_sub(p, pts[0]);
    RatVec rhs(k);
    for (size_t i = 0; i < k; ++i) rhs[i] = d[cols[i]];
    RatVec c(k, 0);
    for (size_t i = 0; i < k; ++i)
      for (size_t j = 0; j < k; ++j) c[i] += sq_inv[i][j] * rhs[j];
    // consistency over all ambient coordinates
    for (size_t a = 0; a < m; ++a) {
      Rat acc = 0;
      for (size_t j = 0; j < k; ++j) acc += c[j] * basis[j][a];
      if (acc != d[a]) fail("InternalError", "point off the affine hull");
    }
    out.local.push_back(std::move(c));
  }
  return out;
}

struct FacetData {
  LatVec normal;  // primitive, oriented with the polytope on the >= side
  Rat offset;
  std::vector<int> tight;
};

std::string facet_key(const LatVec& n, const Rat& off) {
  std::ostringstream os;
  for (const Int& x : n) os << x << ",";
  os << "|" << rat_string(off);
  return os.str();
}

// Facets of the convex hull of full-dimensional pts in R^dim, dim >= 1.
std::vector<FacetData> hull_facets(const std::vector<RatVec>& pts, size_t dim) {
  const size_t m = pts.size();
  std::vector<FacetData> facets;
  if (dim == 1) {
    size_t lo = 0, hi = 0;
    for (size_t i = 1; i < m; ++i) {
      if (pts[i][0] < pts[lo][0]) lo = i;
      if (pts[i][0] > pts[hi][0]) hi = i;
    }
    FacetData fl{{Int(1)}, pts[lo][0], {}};
    FacetData fh{{Int(-1)}, -pts[hi][0], {}};
    for (size_t i = 0; i < m; ++i) {
      if (pts[i][0] == pts[lo][0]) fl.tight.push_back(int(i));
      if (pts[i][0] == pts[hi][0]) fh.tight.push_back(int(i));
    }
    facets.push_back(fl);
    facets.push_back(fh);
    return facets;
  }
  std::map<std::string, FacetData> seen;
  std::vector<size_t> idx(dim);
  std::vector<bool> sel(m, false);
  std::fill(sel.begin(), sel.begin() + dim, true);
  // iterate over all dim-subsets via std::prev_permutation on the mask
  do {
    size_t t = 0;
    for (size_t i = 0; i < m; ++i)
      if (sel[i]) idx[t++] = i;
    std::vector<LatVec> edge_rows;
    bool bad = false;
    for (size_t i = 1; i < dim; ++i) {
      RatVec e = vec_sub(pts[idx[i]], pts[idx[0]]);
      bool zero = std::all_of(e.begin(), e.end(), [](const Rat& x) { return x == 0; });
      if (zero) { bad = true; break; }
      edge_rows.push_back(primitive_of_ray(e));
    }
    if (bad) continue;
    LatVec n = null_direction(edge_rows, dim);
    if (n.empty()) continue;  // subset not of affine rank dim-1
    Rat off = dot(to_rat(n), pts[idx[0]]);
    bool pos = false, neg = false;
    for (size_t i = 0; i < m; ++i) {
      Rat v = dot(to_rat(n), pts[i]) - off;
      if (v > 0) pos = true;
      if (v < 0) neg = true;
      if (pos && neg) break;
    }
    if (pos && neg) continue;
    if (pos) {
      // polytope already on the >= side
    } else {
      for (Int& x : n) x = -x;
      off = -off;
    }
    std::string key = facet_key(n, off);
    if (seen.count(key)) continue;
    FacetData f{n, off, {}};
    for (size_t i = 0; i < m; ++i)
      if (dot(to_rat(n), pts[i]) == off) f.tight.push_back(int(i));
    seen.emplace(std::move(key), std::move(f));
  } while (std::prev_permutation(sel.begin(), sel.end()));
  facets.reserve(seen.size());
  for (auto& [k, f] : seen) facets.push_back(std::move(f));
  return facets;
}

// Triangulation of the convex hull of pts (affine dimension dim, full rank in
// the caller's chart): list of (dim+1)-index simplices into pts.
std::vector<std::vector<int>> triangulate_hull(const std::vector<RatVec>& pts, size_t dim) {
  const size_t m = pts.size();
  std::vector<std::vector<int>> out;
  if (m == dim + 1) {
    std::vector<int> all(m);
    std::iota(all.begin(), all.end(), 0);
    out.push_back(all);
    return out;
  }
  if (dim == 1) {
    size_t lo = 0, hi = 0;
    for (size_t i = 1; i < m; ++i) {
      if (pts[i][0] < pts[lo][0]) lo = i;
      if (pts[i][0] > pts[hi][0]) hi = i;
    }
    out.push_back({int(lo), int(hi)});
    return out;
  }
  const int apex = 0;
  for (const FacetData& f : hull_facets(pts, dim)) {
    if (dot(to_rat(f.normal), pts[apex]) == f.offset) continue;  // apex on facet
    std::vector<RatVec> sub;
    sub.reserve(f.tight.size());
    for (int i : f.tight) sub.push_back(pts[i]);
    AffineLocal loc = affine_local(sub);
    if (loc.dim != dim - 1) fail("InternalError", "facet of unexpected dimension");
    for (const std::vector<int>& s : triangulate_hull(loc.local, dim - 1)) {
      std::vector<int> simplex;
      simplex.push_back(apex);
      for (int li : s) simplex.push_back(f.tight[size_t(li)]);
      out.push_back(std::move(simplex));
    }
  }
  return out;
}

} // namespace

LatticePolygon make_polygon(std::vector<LatVec> verts) {
  if (verts.size() < 3) fail("DegeneratePolygon", "fewer than three vertices");
  for (const LatVec& v : verts)
    if (v.size() != 2) fail("DegeneratePolygon", "vertices must be 2d");
  const size_t m = verts.size();
  for (size_t i = 0; i < m; ++i) {
    const LatVec& prev = verts[(i + m - 1) % m];
    const LatVec& cur = verts[i];
    const LatVec& next = verts[(i + 1) % m];
    if (cross(prev, cur, next) <= 0)
      fail("DegeneratePolygon", "vertices not in strictly convex counterclockwise position");
  }
  return LatticePolygon{std::move(verts)};
}

LatticePolygon polygon_from_points(const std::vector<LatVec>& pts) {
  std::vector<LatVec> p = pts;
  std::sort(p.begin(), p.end());
  p.erase(std::unique(p.begin(), p.end()), p.end());
  if (p.size() < 3) fail("DegeneratePolygon", "fewer than three distinct points");
  auto build = [&](bool lower) {
    std::vector<LatVec> h;
    for (const LatVec& q : (lower ? p : std::vector<LatVec>(p.rbegin(), p.rend()))) {
      while (h.size() >= 2 && cross(h[h.size() - 2], h[h.size() - 1], q) <= 0) h.pop_back();
      h.push_back(q);
    }
    return h;
  };
  std::vector<LatVec> lower = build(true), upper = build(false);
  lower.pop_back();
  upper.pop_back();
  lower.insert(lower.end(), upper.begin(), upper.end());
  if (lower.size() < 3) fail("DegeneratePolygon", "points are collinear");
  return make_polygon(std::move(lower));
}

Int lattice_index(const std::vector<LatVec>& gens) {
  if (gens.empty()) fail("DependentGenerators", "no generators");
  const size_t k = gens.size(), n = gens[0].size();
  if (k > n || rank_int(gens) < k)
    fail("DependentGenerators", "generators are linearly dependent");
  std::vector<bool> sel(n, false);
  std::fill(sel.begin(), sel.begin() + k, true);
  Int g = 0;
  do {
    std::vector<size_t> cols;
    for (size_t i = 0; i < n; ++i)
      if (sel[i]) cols.push_back(i);
    IntMat minor(k, LatVec(k));
    for (size_t r = 0; r < k; ++r)
      for (size_t c = 0; c < k; ++c) minor[r][c] = gens[r][cols[c]];
    g = igcd(g, det_int(minor));
  } while (std::prev_permutation(sel.begin(), sel.end()));
  return g;
}

PickCounts pick_counts(const LatticePolygon& p) {
  PickCounts out;
  out.doubled_area = shoelace2(p.verts);
  out.boundary = 0;
  const size_t m = p.verts.size();
  for (size_t i = 0; i < m; ++i) {
    const LatVec& a = p.verts[i];
    const LatVec& b = p.verts[(i + 1) % m];
    out.boundary += igcd(b[0] - a[0], b[1] - a[1]);
  }
  out.interior = (out.doubled_area - out.boundary) / 2 + 1;
  return out;
}

bool polygon_contains(const LatticePolygon& p, const LatVec& q, bool strict) {
  const size_t m = p.verts.size();
  for (size_t i = 0; i < m; ++i) {
    Int c = cross(p.verts[i], p.verts[(i + 1) % m], q);
    if (strict ? c <= 0 : c < 0) return false;
  }
  return true;
}

std::vector<LatVec> interior_lattice_points(const LatticePolygon& p) {
  Int xlo = p.verts[0][0], xhi = xlo, ylo = p.verts[0][1], yhi = ylo;
  for (const LatVec& v : p.verts) {
    xlo = std::min(xlo, v[0]);
    xhi = std::max(xhi, v[0]);
    ylo = std::min(ylo, v[1]);
    yhi = std::max(yhi, v[1]);
  }
  std::vector<LatVec> out;
  for (Int x = xlo; x <= xhi; ++x)
    for (Int y = ylo; y <= yhi; ++y) {
      LatVec q{x, y};
      if (polygon_contains(p, q, true)) out.push_back(q);
    }
  return out;  // lexicographic by construction
}

std::vector<LatVec> boundary_nonvertex_lattice_points(const LatticePolygon& p) {
  std::vector<LatVec> out;
  const size_t m = p.verts.size();
  for (size_t i = 0; i < m; ++i) {
    const LatVec& a = p.verts[i];
    const LatVec& b = p.verts[(i + 1) % m];
    Int g = igcd(b[0] - a[0], b[1] - a[1]);
    Int sx = (b[0] - a[0]) / g, sy = (b[1] - a[1]) / g;
    for (Int t = 1; t < g; ++t) out.push_back({a[0] + t * sx, a[1] + t * sy});
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool polygon_unimodular_equiv(const LatticePolygon& a, const LatticePolygon& b) {
  const size_t m = a.verts.size();
  if (b.verts.size() != m) return false;
  std::set<LatVec> bset(b.verts.begin(), b.verts.end());
  RatVec e1 = to_rat(vec_sub(a.verts[1], a.verts[0]));
  RatVec e2 = to_rat(vec_sub(a.verts[m - 1], a.verts[0]));
  for (size_t j = 0; j < m; ++j) {
    for (int refl = 0; refl < 2; ++refl) {
      const LatVec& q0 = b.verts[j];
      LatVec f1v = vec_sub(b.verts[(j + (refl ? m - 1 : 1)) % m], q0);
      LatVec f2v = vec_sub(b.verts[(j + (refl ? 1 : m - 1)) % m], q0);
      // M * e1 = f1, M * e2 = f2
      RatMat sys{{e1[0], e1[1]}, {e2[0], e2[1]}};
      Rat d = det_rat(sys);
      if (d == 0) continue;
      RatMat mt(2, RatVec(2));  // rows of M
      for (int r = 0; r < 2; ++r) {
        RatVec rhs{Rat(f1v[r]), Rat(f2v[r])};
        RatVec sol = solve_square(sys, rhs);
        mt[r] = sol;
      }
      bool integral = true;
      for (int r = 0; r < 2 && integral; ++r)
        for (int c = 0; c < 2 && integral; ++c)
          if (denominator(mt[r][c]) != 1) integral = false;
      if (!integral) continue;
      Rat md = mt[0][0] * mt[1][1] - mt[0][1] * mt[1][0];
      if (md != 1 && md != -1) continue;
      bool ok = true;
      for (size_t i = 0; i < m && ok; ++i) {
        RatVec d2 = to_rat(vec_sub(a.verts[i], a.verts[0]));
        Rat ix = mt[0][0] * d2[0] + mt[0][1] * d2[1];
        Rat iy = mt[1][0] * d2[0] + mt[1][1] * d2[1];
        LatVec img{q0[0] + numerator(ix), q0[1] + numerator(iy)};
        if (!bset.count(img)) ok = false;
      }
      if (ok) return true;
    }
  }
  return false;
}

std::vector<RatVec> halfspace_vertices(const std::vector<RatVec>& normals,
                                       const RatVec& offsets) {
  if (normals.empty()) fail("UnboundedRegion", "no constraints");
  const size_t n = normals[0].size();
  if (n > 4) fail("DimensionTooLarge", "vertex enumeration supports dimension <= 4");
  const size_t m = normals.size();
  if (offsets.size() != m) fail("InternalError", "constraint count mismatch");

  // primitive integral scaling of every constraint
  std::vector<LatVec> nrm(m);
  RatVec off(m);
  for (size_t i = 0; i < m; ++i) {
    bool zero = std::all_of(normals[i].begin(), normals[i].end(),
                            [](const Rat& x) { return x == 0; });
    if (zero) fail("ZeroVector", "zero constraint normal");
    Int lcm = 1;
    for (const Rat& x : normals[i]) {
      Int d = denominator(x);
      lcm = lcm / igcd(lcm, d) * d;
    }
    LatVec w(n);
    for (size_t c = 0; c < n; ++c) w[c] = numerator(normals[i][c] * Rat(lcm));
    auto [p, g] = primitive_of(w);
    nrm[i] = p;
    off[i] = offsets[i] * Rat(lcm) / Rat(g);
  }

  if (rank_int(nrm) < n)
    fail("UnboundedRegion", "constraint normals do not span the ambient space");

  // recession directions: null lines of (n-1)-subsets of normals
  if (n >= 2) {
    std::vector<bool> sel(m, false);
    std::fill(sel.begin(), sel.begin() + (n - 1), true);
    do {
      std::vector<LatVec> rows;
      for (size_t i = 0; i < m; ++i)
        if (sel[i]) rows.push_back(nrm[i]);
      LatVec r = null_direction(rows, n);
      if (r.empty()) continue;
      for (int sign = 0; sign < 2; ++sign) {
        bool ok = true;
        for (size_t i = 0; i < m && ok; ++i)
          if (dot(to_rat(nrm[i]), to_rat(r)) < 0) ok = false;
        if (ok) fail("UnboundedRegion", "region has a recession direction");
        for (Int& x : r) x = -x;
      }
    } while (std::prev_permutation(sel.begin(), sel.end()));
  }

  std::set<RatVec> verts;
  std::vector<bool> sel(m, false);
  std::fill(sel.begin(), sel.begin() + n, true);
  do {
    std::vector<size_t> idx;
    for (size_t i = 0; i < m; ++i)
      if (sel[i]) idx.push_back(i);
    RatMat a(n, RatVec(n));
    RatVec rhs(n);
    for (size_t r = 0; r < n; ++r) {
      a[r] = to_rat(nrm[idx[r]]);
      rhs[r] = off[idx[r]];
    }
    if (det_rat(a) == 0) continue;
    RatVec y = solve_square(a, rhs);
    bool feasible = true;
    for (size_t i = 0; i < m && feasible; ++i)
      if (dot(to_rat(nrm[i]), y) < off[i]) feasible = false;
    if (feasible) verts.insert(std::move(y));
  } while (std::prev_permutation(sel.begin(), sel.end()));

  if (verts.empty()) fail("EmptyRegion", "constraints are infeasible");
  return {verts.begin(), verts.end()};
}

Rat polytope_volume(const std::vector<RatVec>& vertices) {
  if (vertices.empty()) fail("DegenerateHull", "no vertices");
  const size_t n = vertices[0].size();
  std::vector<RatVec> pts = vertices;
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  AffineLocal loc = affine_local(pts);
  if (loc.dim != n) fail("DegenerateHull", "vertices do not affinely span the ambient space");
  Rat vol = 0;
  for (const std::vector<int>& s : triangulate_hull(pts, n)) {
    RatMat mtx(n, RatVec(n));
    for (size_t r = 0; r < n; ++r) mtx[r] = vec_sub(pts[size_t(s[r + 1])], pts[size_t(s[0])]);
    Rat d = det_rat(mtx);
    if (d < 0) d = -d;
    vol += d;
  }
  Int fact = 1;
  for (size_t i = 2; i <= n; ++i) fact *= Int(i);
  return vol / Rat(fact);
}

std::vector<Halfspace> supporting_halfspaces(const std::vector<RatVec>& vertices) {
  if (vertices.empty()) fail("DegenerateHull", "no vertices");
  const size_t n = vertices[0].size();
  std::vector<RatVec> pts = vertices;
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  AffineLocal loc = affine_local(pts);
  if (loc.dim != n) fail("DegenerateHull", "vertices do not affinely span the ambient space");
  std::vector<Halfspace> out;
  for (const FacetData& f : hull_facets(pts, n)) out.push_back({f.normal, f.offset});
  std::sort(out.begin(), out.end(), [](const Halfspace& a, const Halfspace& b) {
    if (a.normal != b.normal) return a.normal < b.normal;
    return a.offset < b.offset;
  });
  return out;
}

} // namespace calabi
