#include "calabi/resolve.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace calabi {

namespace {

Int cone_det3(const std::vector<LatVec>& gens) {
  IntMat m(3, LatVec(3));
  for (size_t r = 0; r < 3; ++r)
    for (size_t c = 0; c < 3; ++c) m[r][c] = gens[r][c];
  return det_int(m);
}

bool fan_is_smooth(const Fan& f) {
  for (size_t c = 0; c < f.cones.size(); ++c) {
    if (f.cones[c].size() != f.dim) return false;
    std::vector<LatVec> gens = cone_gens(f, c);
    IntMat m(f.dim, LatVec(f.dim));
    for (size_t r = 0; r < f.dim; ++r) m[r] = gens[r];
    Int d = det_int(m);
    if (d != 1 && d != -1) return false;
  }
  return true;
}

// Upper-triangular integer basis of the row lattice; rows must span R^n.
IntMat row_lattice_basis(IntMat m, size_t n) {
  size_t row = 0;
  for (size_t c = 0; c < n; ++c) {
    for (size_t r = row + 1; r < m.size(); ++r) {
      while (m[r][c] != 0) {
        if (m[row][c] == 0) {
          std::swap(m[row], m[r]);
          continue;
        }
        Int q = m[r][c] / m[row][c];
        for (size_t k = 0; k < n; ++k) m[r][k] -= q * m[row][k];
        if (m[r][c] != 0) std::swap(m[row], m[r]);
      }
    }
    if (row >= m.size() || m[row][c] == 0)
      fail("InternalError", "weight lattice is not full rank");
    if (m[row][c] < 0)
      for (size_t k = 0; k < n; ++k) m[row][k] = -m[row][k];
    ++row;
  }
  m.resize(n);
  return m;
}

RatVec mod_one(const RatVec& v) {
  RatVec r(v.size());
  for (size_t i = 0; i < v.size(); ++i) {
    Int num = numerator(v[i]), den = denominator(v[i]);
    Int m = num % den;
    if (m < 0) m += den;
    r[i] = Rat(m, den);
  }
  return r;
}

}  // namespace

StarSubdivision star_subdivide(const Fan& f, const SupportFunction& h, const LatVec& u,
                               const Rat& eps, const RatVec* crepancy_gamma) {
  const size_t n = f.dim;
  if (u.size() != n) fail("BadParameters", "subdivision point dimension mismatch");
  if (is_zero(u)) fail("ZeroVector", "cannot subdivide at the origin");
  if (primitive_of(u).first != u) fail("NotPrimitive", "subdivision point must be primitive");
  if (eps <= 0) fail("BadParameters", "subdivision weight must be positive");
  if (h.functionals.size() != f.cones.size())
    fail("InconsistentSupportFunction", "one functional per maximal cone required");
  if (crepancy_gamma && dot(*crepancy_gamma, u) != Rat(-1))
    fail("CrepancyViolation", "subdivision point is off the height-one hyperplane");
  for (const LatVec& r : f.rays)
    if (r == u) fail("RayExists", "subdivision point is already a ray");

  struct Incident {
    size_t cone;
    std::vector<LatVec> gens;
    std::vector<LatVec> normals;
    size_t face_size;
  };
  std::vector<Incident> incident;
  for (size_t c = 0; c < f.cones.size(); ++c) {
    std::vector<LatVec> gens = cone_gens(f, c);
    std::vector<LatVec> normals = cone_facet_normals(gens, n);
    auto face = cone_face_of(gens, normals, u);
    if (!face) continue;
    incident.push_back({c, std::move(gens), std::move(normals), face->size()});
  }
  if (incident.empty()) fail("OutsideFan", "subdivision point is outside the support");

  StarSubdivision out;
  out.fan.dim = n;
  out.fan.rays = f.rays;
  out.fan.rays.push_back(u);
  const int ui = int(f.rays.size());
  out.fan.boundary_rays = f.boundary_rays;
  // a point on a facet with a single incident maximal cone sits on the
  // boundary of the support
  if (incident.size() == 1 && incident[0].face_size < f.cones[incident[0].cone].size())
    out.fan.boundary_rays.push_back(ui);

  std::set<size_t> touched;
  for (const Incident& inc : incident) touched.insert(inc.cone);
  for (size_t c = 0; c < f.cones.size(); ++c) {
    if (touched.count(c)) continue;
    out.fan.cones.push_back(f.cones[c]);
    out.support.functionals.push_back(h.functionals[c]);
  }
  for (const Incident& inc : incident) {
    const std::vector<int>& idx = f.cones[inc.cone];
    const RatVec& l = h.functionals[inc.cone];
    for (const LatVec& nrm : inc.normals) {
      Int pu = dot(nrm, u);
      if (pu == 0) continue;  // facet contains u
      std::vector<int> cone_idx{ui};
      for (size_t g = 0; g < idx.size(); ++g)
        if (dot(nrm, inc.gens[g]) == 0) cone_idx.push_back(idx[g]);
      std::sort(cone_idx.begin(), cone_idx.end());
      RatVec func(n);
      Rat scale = eps / Rat(pu);
      for (size_t i = 0; i < n; ++i) func[i] = l[i] + scale * Rat(nrm[i]);
      out.fan.cones.push_back(std::move(cone_idx));
      out.support.functionals.push_back(std::move(func));
    }
  }
  return out;
}

ResolutionResult crepant_resolve(const Fan& f, const ResolveOptions& opts) {
  fan_validate(f);
  if (f.boundary_rays.empty())
    fail("UnmarkedBoundaryRays", "resolution needs the boundary rays marked");
  GorensteinCertificate cert = gorenstein_gamma(f);
  if (!cert.holds) fail("NotGorenstein", "no integral height functional");
  if (f.dim != 2 && f.dim != 3)
    fail("BadParameters", "resolution supports dimensions 2 and 3");

  ResolutionResult res;
  res.cert = cert;

  std::vector<LatVec> queue;
  Int section_a2 = 0;
  if (f.dim == 3) {
    SectionPolytope sp = section_polytope(f, cert);
    section_a2 = pick_counts(sp.polygon).doubled_area;
    auto ip = interior_lattice_points(sp.polygon);
    auto bp = boundary_nonvertex_lattice_points(sp.polygon);
    res.c_x = Int(ip.size());
    auto enqueue = [&](const LatVec& p) {
      LatVec a = sp.chart.to_ambient(p);
      // skip points a partially subdivided input already uses
      if (std::find(f.rays.begin(), f.rays.end(), a) == f.rays.end()) queue.push_back(a);
    };
    for (const LatVec& p : ip) enqueue(p);
    for (const LatVec& p : bp) enqueue(p);
  } else {
    LatVec gamma(2);
    for (size_t i = 0; i < 2; ++i) gamma[i] = numerator(cert.gamma[i]);
    HyperplaneChart ch = hyperplane_chart(gamma);
    Int lo = 0, hi = 0;
    bool first = true;
    std::set<Int> present;
    for (const LatVec& r : f.rays) {
      Int t = ch.to_chart(r)[0];
      present.insert(t);
      if (first) { lo = hi = t; first = false; }
      lo = std::min(lo, t);
      hi = std::max(hi, t);
    }
    section_a2 = hi - lo;
    for (Int t = lo + 1; t < hi; ++t)
      if (!present.count(t)) queue.push_back(ch.to_ambient({t}));
    res.c_x = Int(queue.size());
  }
  if (opts.reverse_order) std::reverse(queue.begin(), queue.end());

  Fan cur = f;
  SupportFunction h;
  h.functionals.assign(f.cones.size(), RatVec(f.dim, 0));

  if (queue.empty() && !fan_is_smooth(cur)) {
    if (!opts.allow_small) fail("TerminalSingularity", "no crepant subdivision point exists");
    // vertex-only triangulation of each non-simplex cone; no new rays
    res.used_small_fallback = true;
    SectionPolytope sp = section_polytope(cur, cert);
    Fan tri;
    tri.dim = cur.dim;
    tri.rays = cur.rays;
    tri.boundary_rays = cur.boundary_rays;
    std::map<LatVec, int> ray_at;
    for (size_t i = 0; i < cur.rays.size(); ++i) ray_at[sp.chart.to_chart(cur.rays[i])] = int(i);
    for (size_t c = 0; c < cur.cones.size(); ++c) {
      if (cur.cones[c].size() == 3) {
        tri.cones.push_back(cur.cones[c]);
        continue;
      }
      std::vector<LatVec> images;
      for (int i : cur.cones[c]) images.push_back(sp.chart.to_chart(cur.rays[size_t(i)]));
      LatticePolygon cell = polygon_from_points(images);
      for (size_t k = 1; k + 1 < cell.verts.size(); ++k) {
        std::vector<int> t{ray_at.at(cell.verts[0]), ray_at.at(cell.verts[k]),
                          ray_at.at(cell.verts[k + 1])};
        std::sort(t.begin(), t.end());
        tri.cones.push_back(t);
      }
    }
    cur = tri;
    h.functionals.assign(cur.cones.size(), RatVec(cur.dim, 0));
  }

  for (const LatVec& u : queue) {
    Rat eps = 1;
    bool placed = false;
    for (int attempt = 0; attempt < 64 && !placed; ++attempt) {
      StarSubdivision trial = star_subdivide(cur, h, u, eps, &cert.gamma);
      SupportProperties p = sf_properties(trial.fan, trial.support);
      if (p.convex && p.strictly_convex) {
        cur = std::move(trial.fan);
        h = std::move(trial.support);
        res.inserted.push_back(u);
        res.epsilons.push_back(eps);
        placed = true;
      } else {
        eps /= 2;
      }
    }
    if (!placed) fail("InternalError", "no convexifying weight found for subdivision point");
  }

  res.smooth = fan_is_smooth(cur);
  bool simplicial = true;
  for (const auto& c : cur.cones)
    if (c.size() != cur.dim) simplicial = false;
  if (!queue.empty() && !res.smooth)
    fail("InternalError", "full subdivision left a singular cone");
  if (simplicial) {
    // star subdivisions preserve total volume
    Int total = 0;
    for (size_t c = 0; c < cur.cones.size(); ++c) {
      std::vector<LatVec> gens = cone_gens(cur, c);
      Int d = cur.dim == 3 ? cone_det3(gens)
                           : gens[0][0] * gens[1][1] - gens[0][1] * gens[1][0];
      total += d < 0 ? -d : d;
    }
    if (total != section_a2) fail("InternalError", "subdivision does not conserve volume");
  }
  for (int b : f.boundary_rays)
    if (support_value(cur, h, b) != 0)
      fail("InternalError", "support function moved on the original boundary");

  res.fan = cur;
  res.support = h;
  res.euler = Int(cur.cones.size());
  SupportProperties props = sf_properties(cur, h);
  res.strictly_convex = props.strictly_convex;
  res.compact = props.compact;
  res.compact_class_exists = props.strictly_convex && props.compact;
  return res;
}

ResolutionInvariants resolution_invariants(const ResolutionResult& r) {
  if (r.fan.dim != 3) fail("BadParameters", "invariants are defined for 3d resolutions");
  ResolutionInvariants inv;
  Int d = Int(r.fan.boundary_rays.size());
  inv.c_x = r.c_x;
  inv.euler = r.euler;
  inv.b2 = d - 3 + r.c_x;
  inv.b4 = r.c_x;
  inv.b2_link = d - 3;
  return inv;
}

std::vector<RatVec> quotient_group_elements(const QuotientSpec& q) {
  const size_t n = q.n;
  for (const RatVec& w : q.weights)
    if (w.size() != n) fail("BadParameters", "weight dimension mismatch");
  std::set<RatVec> elems;
  elems.insert(RatVec(n, 0));
  std::vector<RatVec> work(elems.begin(), elems.end());
  while (!work.empty()) {
    RatVec e = work.back();
    work.pop_back();
    for (const RatVec& w : q.weights) {
      RatVec s = mod_one(vec_add(e, w));
      if (elems.insert(s).second) work.push_back(s);
    }
    if (Int(elems.size()) > q.order)
      fail("BadParameters", "group is larger than the declared order");
  }
  if (Int(elems.size()) != q.order)
    fail("BadParameters", "group is smaller than the declared order");
  return {elems.begin(), elems.end()};
}

Fan quotient_fan(const QuotientSpec& q) {
  const size_t n = q.n;
  if (n < 2 || n > 4) fail("BadParameters", "quotient dimension out of range");
  if (q.order < 1) fail("BadParameters", "group order must be positive");
  std::vector<RatVec> elems = quotient_group_elements(q);

  for (const RatVec& e : elems) {
    Rat sum = 0;
    for (const Rat& x : e) sum += x;
    if (denominator(sum) != 1)
      fail("NotGorensteinGroup", "group element with non-integral weight sum");
  }
  if (q.isolated) {
    for (const RatVec& e : elems) {
      bool trivial = std::all_of(e.begin(), e.end(), [](const Rat& x) { return x == 0; });
      if (trivial) continue;
      for (const Rat& x : e)
        if (x == 0) fail("NonIsolated", "group element fixes a coordinate hyperplane");
    }
  }

  // refined lattice L = Z^n + sum Z w_i, scaled by the common denominator
  Int d = 1;
  for (const RatVec& w : q.weights)
    for (const Rat& x : w) {
      Int den = denominator(x);
      d = d / igcd(d, den) * den;
    }
  IntMat rows;
  for (size_t i = 0; i < n; ++i) {
    LatVec r(n, 0);
    r[i] = d;
    rows.push_back(r);
  }
  for (const RatVec& w : q.weights) {
    LatVec r(n);
    for (size_t i = 0; i < n; ++i) {
      Rat s = w[i] * Rat(d);
      r[i] = numerator(s);
    }
    rows.push_back(r);
  }
  IntMat basis = row_lattice_basis(rows, n);
  Int det = 1;
  for (size_t i = 0; i < n; ++i) det *= basis[i][i];
  Int dn = 1;
  for (size_t i = 0; i < n; ++i) dn *= d;
  if (dn % det != 0 || dn / det != q.order)
    fail("InternalError", "lattice index disagrees with the group order");

  // standard basis vectors of the scaled ambient in the refined basis
  RatMat bt(n, RatVec(n));
  for (size_t r = 0; r < n; ++r)
    for (size_t c = 0; c < n; ++c) bt[r][c] = Rat(basis[c][r]);
  Fan f;
  f.dim = n;
  for (size_t k = 0; k < n; ++k) {
    RatVec rhs(n, 0);
    rhs[k] = d;
    RatVec x = solve_square(bt, rhs);
    for (const Rat& xi : x)
      if (denominator(xi) != 1) fail("InternalError", "ambient vector not in the refined lattice");
    LatVec v(n);
    for (size_t i = 0; i < n; ++i) v[i] = numerator(x[i]);
    f.rays.push_back(primitive_of(v).first);
  }
  std::vector<int> all(n);
  for (size_t i = 0; i < n; ++i) all[i] = int(i);
  f.cones.push_back(all);
  f.boundary_rays = all;
  fan_validate(f);
  return f;
}

Fan spq_fan(long long p, long long q) {
  if (q < 1 || p <= q) fail("BadParameters", "family requires p > q >= 1");
  if (igcd(Int(p), Int(q)) != 1) fail("BadParameters", "family requires coprime p, q");
  Cone c = make_cone({{Int(0), Int(0), Int(1)},
                      {Int(1), Int(0), Int(1)},
                      {Int(p), Int(p), Int(1)},
                      {Int(p - q - 1), Int(p - q), Int(1)}},
                     3);
  if (c.gens.size() != 4) fail("InternalError", "degenerate member of the family");
  return fan_from_cone(c);
}

bool spq_quasi_regular(long long p, long long q) {
  if (q < 1 || p <= q) fail("BadParameters", "family requires p > q >= 1");
  if (igcd(Int(p), Int(q)) != 1) fail("BadParameters", "family requires coprime p, q");
  Int v = 4 * Int(p) * Int(p) - 3 * Int(q) * Int(q);
  Int s = boost::multiprecision::sqrt(v);
  return s * s == v;
}

} // namespace calabi
