#include "calabi/fan.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>

#include <json.hpp>

namespace calabi {

namespace {

// Local coordinates of the generators inside their rational span, scaled to
// primitive integer vectors. Identity when the span is full.
std::vector<LatVec> span_coordinates(const std::vector<LatVec>& gens, size_t& k_out) {
  const size_t n = gens[0].size();
  std::vector<LatVec> basis;
  RatMat elim;
  for (const LatVec& g : gens) {
    RatMat trial = elim;
    trial.push_back(to_rat(g));
    if (rank_rat(trial) > elim.size()) {
      elim = std::move(trial);
      basis.push_back(g);
    }
  }
  const size_t k = basis.size();
  k_out = k;
  if (k == n) return gens;
  // pivot columns of the basis matrix
  std::vector<size_t> cols;
  {
    RatMat red(k, RatVec(n));
    for (size_t i = 0; i < k; ++i) red[i] = to_rat(basis[i]);
    size_t r = 0;
    for (size_t c = 0; c < n && r < k; ++c) {
      size_t p = r;
      while (p < k && red[p][c] == 0) ++p;
      if (p == k) continue;
      std::swap(red[p], red[r]);
      for (size_t rr = r + 1; rr < k; ++rr) {
        if (red[rr][c] == 0) continue;
        Rat f = red[rr][c] / red[r][c];
        for (size_t cc = c; cc < n; ++cc) red[rr][cc] -= f * red[r][cc];
      }
      cols.push_back(c);
      ++r;
    }
  }
  RatMat sq(k, RatVec(k));
  for (size_t i = 0; i < k; ++i)
    for (size_t j = 0; j < k; ++j) sq[i][j] = Rat(basis[j][cols[i]]);
  RatMat sq_inv = inverse(sq);
  std::vector<LatVec> local;
  local.reserve(gens.size());
  for (const LatVec& g : gens) {
    RatVec rhs(k);
    for (size_t i = 0; i < k; ++i) rhs[i] = Rat(g[cols[i]]);
    RatVec c(k, 0);
    for (size_t i = 0; i < k; ++i)
      for (size_t j = 0; j < k; ++j) c[i] += sq_inv[i][j] * rhs[j];
    local.push_back(primitive_of_ray(c));
  }
  return local;
}

// Facet normal candidates of a full-dimensional cone in R^k: directions
// vanishing on some rank-(k-1) generator subset and nonnegative on all
// generators.
std::vector<LatVec> facet_normals_full(const std::vector<LatVec>& gens, size_t k) {
  std::set<LatVec> out;
  const size_t m = gens.size();
  if (k == 1) {
    // cone(g) = {x >= 0} or {x <= 0} in R^1
    LatVec n{gens[0][0] > 0 ? Int(1) : Int(-1)};
    bool ok = true;
    for (const LatVec& g : gens)
      if (n[0] * g[0] < 0) ok = false;
    if (ok) out.insert(n);
    return {out.begin(), out.end()};
  }
  if (m < k - 1) return {};
  std::vector<bool> sel(m, false);
  std::fill(sel.begin(), sel.begin() + (k - 1), true);
  do {
    std::vector<LatVec> rows;
    for (size_t i = 0; i < m; ++i)
      if (sel[i]) rows.push_back(gens[i]);
    LatVec r = null_direction(rows, k);
    if (r.empty()) continue;
    for (int sign = 0; sign < 2; ++sign) {
      bool nonneg = true;
      for (const LatVec& g : gens)
        if (dot(r, g) < 0) { nonneg = false; break; }
      if (nonneg) out.insert(r);
      for (Int& x : r) x = -x;
    }
  } while (std::prev_permutation(sel.begin(), sel.end()));
  return {out.begin(), out.end()};
}

// Membership of x in cone(gens) for a pointed cone of any dimension.
bool cone_contains_vec(const std::vector<LatVec>& gens, const LatVec& x) {
  if (is_zero(x)) return true;
  if (gens.empty()) return false;
  std::vector<LatVec> all = gens;
  all.push_back(x);
  if (rank_int(all) != rank_int(gens)) return false;
  size_t k = 0;
  std::vector<LatVec> local = span_coordinates(all, k);
  std::vector<LatVec> gl(local.begin(), local.end() - 1);
  for (const LatVec& n : facet_normals_full(gl, k))
    if (dot(n, local.back()) < 0) return false;
  return true;
}

} // namespace

bool is_pointed(const std::vector<LatVec>& gens, size_t dim) {
  (void)dim;
  if (gens.empty()) return true;
  std::vector<LatVec> prim;
  for (const LatVec& g : gens) {
    if (is_zero(g)) fail("ZeroVector", "zero generator");
    prim.push_back(primitive_of(g).first);
  }
  size_t k = 0;
  std::vector<LatVec> local = span_coordinates(prim, k);
  if (k == 0) return true;
  if (k == 1) {
    for (size_t i = 1; i < local.size(); ++i)
      if (local[i] != local[0]) return false;
    return true;
  }
  std::vector<LatVec> normals = facet_normals_full(local, k);
  if (normals.empty()) return false;
  LatVec x(k, 0);
  for (const LatVec& r : normals) x = vec_add(x, r);
  for (const LatVec& g : local)
    if (dot(x, g) <= 0) return false;
  return true;
}

Cone make_cone(std::vector<LatVec> gens, size_t dim) {
  if (gens.empty()) fail("NotStronglyConvex", "cone needs at least one generator");
  for (const LatVec& g : gens)
    if (g.size() != dim) fail("InternalError", "generator dimension mismatch");
  std::vector<LatVec> prim;
  for (const LatVec& g : gens) {
    if (is_zero(g)) fail("ZeroVector", "zero generator");
    LatVec p = primitive_of(g).first;
    if (std::find(prim.begin(), prim.end(), p) == prim.end()) prim.push_back(p);
  }
  if (!is_pointed(prim, dim)) fail("NotStronglyConvex", "cone contains a line");
  // drop non-extreme generators
  size_t k = 0;
  std::vector<LatVec> local = span_coordinates(prim, k);
  std::vector<LatVec> minimal;
  if (k == 1) {
    minimal.push_back(prim[0]);
  } else {
    std::vector<LatVec> normals = facet_normals_full(local, k);
    for (size_t i = 0; i < prim.size(); ++i) {
      std::vector<LatVec> tight;
      for (const LatVec& r : normals)
        if (dot(r, local[i]) == 0) tight.push_back(r);
      if (!tight.empty() && rank_int(tight) == k - 1) minimal.push_back(prim[i]);
    }
    if (minimal.empty()) fail("InternalError", "minimalization lost all generators");
  }
  return Cone{dim, std::move(minimal)};
}

std::vector<LatVec> cone_facet_normals(const std::vector<LatVec>& gens, size_t dim) {
  if (rank_int(gens) != dim)
    fail("NotFullDimensional", "cone does not span the ambient space");
  return facet_normals_full(gens, dim);
}

Cone dual_cone(const Cone& c) {
  if (!is_pointed(c.gens, c.dim)) fail("NotStronglyConvex", "dual requires a strongly convex cone");
  return Cone{c.dim, cone_facet_normals(c.gens, c.dim)};
}

std::optional<std::vector<int>> cone_face_of(const std::vector<LatVec>& gens,
                                             const std::vector<LatVec>& facet_normals,
                                             const LatVec& x) {
  std::vector<const LatVec*> tight;
  for (const LatVec& r : facet_normals) {
    Int v = dot(r, x);
    if (v < 0) return std::nullopt;
    if (v == 0) tight.push_back(&r);
  }
  std::vector<int> face;
  for (size_t i = 0; i < gens.size(); ++i) {
    bool on_all = true;
    for (const LatVec* r : tight)
      if (dot(*r, gens[i]) != 0) { on_all = false; break; }
    if (on_all) face.push_back(int(i));
  }
  return face;
}

Fan fan_from_cone(const Cone& c) {
  Fan f;
  f.dim = c.dim;
  f.rays = c.gens;
  std::vector<int> all(c.gens.size());
  for (size_t i = 0; i < all.size(); ++i) all[i] = int(i);
  f.cones.push_back(all);
  f.boundary_rays = all;
  return f;
}

std::vector<LatVec> cone_gens(const Fan& f, size_t cone_index) {
  std::vector<LatVec> g;
  for (int i : f.cones[cone_index]) g.push_back(f.rays[size_t(i)]);
  return g;
}

void fan_validate(const Fan& f) {
  if (f.dim < 2 || f.dim > 4) fail("BadParameters", "fan dimension out of range");
  std::set<LatVec> seen;
  for (const LatVec& r : f.rays) {
    if (r.size() != f.dim) fail("BadParameters", "ray dimension mismatch");
    if (is_zero(r)) fail("ZeroVector", "zero ray");
    if (primitive_of(r).first != r) fail("BadParameters", "ray not primitive");
    if (!seen.insert(r).second) fail("BadParameters", "duplicate ray");
  }
  if (f.cones.empty()) fail("BadParameters", "fan has no maximal cones");
  for (const std::vector<int>& c : f.cones) {
    if (c.size() < f.dim) fail("BadParameters", "maximal cone with too few rays");
    if (!std::is_sorted(c.begin(), c.end()) ||
        std::adjacent_find(c.begin(), c.end()) != c.end())
      fail("BadParameters", "cone index list not sorted unique");
    for (int i : c)
      if (i < 0 || size_t(i) >= f.rays.size()) fail("BadParameters", "ray index out of range");
    std::vector<LatVec> gens;
    for (int i : c) gens.push_back(f.rays[size_t(i)]);
    if (rank_int(gens) != f.dim) fail("NotFullDimensional", "maximal cone not full-dimensional");
    if (make_cone(gens, f.dim).gens.size() != gens.size())
      fail("BadParameters", "maximal cone lists a non-extreme ray");
  }
  for (int b : f.boundary_rays)
    if (b < 0 || size_t(b) >= f.rays.size()) fail("BadParameters", "boundary ray index out of range");

  std::vector<std::vector<LatVec>> gens_of(f.cones.size()), normals_of(f.cones.size());
  for (size_t c = 0; c < f.cones.size(); ++c) {
    gens_of[c] = cone_gens(f, c);
    normals_of[c] = cone_facet_normals(gens_of[c], f.dim);
  }
  // The shared rays must span a face of the cone: the sum of the facet
  // normals vanishing on them is a certificate functional.
  auto spans_face = [&](size_t c, const std::vector<int>& shared) {
    LatVec phi(f.dim, 0);
    for (const LatVec& r : normals_of[c]) {
      bool vanishes = true;
      for (int s : shared) {
        if (dot(r, f.rays[size_t(s)]) != 0) { vanishes = false; break; }
      }
      if (vanishes) phi = vec_add(phi, r);
    }
    for (int i : f.cones[c]) {
      Int v = dot(phi, f.rays[size_t(i)]);
      bool in_shared = std::binary_search(shared.begin(), shared.end(), i);
      if (in_shared && v != 0) return false;
      if (!in_shared && v <= 0) return false;
    }
    return true;
  };
  for (size_t a = 0; a < f.cones.size(); ++a)
    for (size_t b = a + 1; b < f.cones.size(); ++b) {
      if (f.cones[a] == f.cones[b]) fail("NotAFan", "duplicate maximal cone");
      std::vector<int> shared;
      std::set_intersection(f.cones[a].begin(), f.cones[a].end(),
                            f.cones[b].begin(), f.cones[b].end(),
                            std::back_inserter(shared));
      if (!spans_face(a, shared) || !spans_face(b, shared))
        fail("NotAFan", "cone intersection is not a shared face");
      // Every extreme direction of the geometric intersection must lie in
      // the shared face; candidates are null directions of (dim-1)-subsets
      // of the combined facet normals.
      std::vector<LatVec> shared_gens;
      for (int s : shared) shared_gens.push_back(f.rays[size_t(s)]);
      std::set<LatVec> combined(normals_of[a].begin(), normals_of[a].end());
      combined.insert(normals_of[b].begin(), normals_of[b].end());
      std::vector<LatVec> nset(combined.begin(), combined.end());
      std::vector<bool> sel(nset.size(), false);
      std::fill(sel.begin(), sel.begin() + (f.dim - 1), true);
      do {
        std::vector<LatVec> rows;
        for (size_t i = 0; i < nset.size(); ++i)
          if (sel[i]) rows.push_back(nset[i]);
        LatVec r = null_direction(rows, f.dim);
        if (r.empty()) continue;
        for (int sign = 0; sign < 2; ++sign) {
          bool feasible = true;
          for (const LatVec& n : nset)
            if (dot(n, r) < 0) { feasible = false; break; }
          if (feasible && !cone_contains_vec(shared_gens, r))
            fail("NotAFan", "cones overlap beyond their shared face");
          for (Int& x : r) x = -x;
        }
      } while (std::prev_permutation(sel.begin(), sel.end()));
    }
}

GorensteinCertificate gorenstein_gamma(const Fan& f) {
  // n independent rays give a square system; the rest verify it.
  const size_t n = f.dim;
  std::vector<LatVec> basis;
  RatMat elim;
  for (const LatVec& r : f.rays) {
    if (basis.size() == n) break;
    RatMat trial = elim;
    trial.push_back(to_rat(r));
    if (rank_rat(trial) > elim.size()) {
      elim = std::move(trial);
      basis.push_back(r);
    }
  }
  if (basis.size() < n) fail("NotFullDimensional", "rays do not span the ambient space");
  RatMat m(n, RatVec(n));
  for (size_t i = 0; i < n; ++i) m[i] = to_rat(basis[i]);
  RatVec rhs(n, Rat(-1));
  RatVec gamma = solve_square(m, rhs);
  bool holds = true;
  for (const LatVec& r : f.rays)
    if (dot(gamma, r) != Rat(-1)) { holds = false; break; }
  if (holds)
    for (const Rat& g : gamma)
      if (denominator(g) != 1) { holds = false; break; }
  return GorensteinCertificate{gamma, holds};
}

LatVec HyperplaneChart::to_ambient(const LatVec& coords) const {
  LatVec x = origin;
  for (size_t i = 0; i < basis.size(); ++i)
    for (size_t r = 0; r < x.size(); ++r) x[r] += coords[i] * basis[i][r];
  return x;
}

LatVec HyperplaneChart::to_chart(const LatVec& ambient) const {
  const size_t n = ambient.size();
  LatVec c(n);
  for (size_t r = 0; r < n; ++r) c[r] = dot(inverse_rows[r], ambient);
  if (c[n - 1] != 1) fail("InternalError", "point not on the height-one hyperplane");
  c.pop_back();
  return c;
}

HyperplaneChart hyperplane_chart(const LatVec& gamma) {
  AdaptedBasis b = gamma_adapted_basis(gamma);
  HyperplaneChart ch;
  ch.origin = b.point;
  ch.basis = b.kernel;
  ch.inverse_rows = b.inverse_rows;
  return ch;
}

SectionPolytope section_polytope(const Fan& f, const GorensteinCertificate& cert) {
  if (!cert.holds) fail("NotGorenstein", "no integral Gorenstein functional");
  if (f.dim != 3) fail("BadParameters", "section polytope requires a 3d fan");
  LatVec gamma(f.dim);
  for (size_t i = 0; i < f.dim; ++i) gamma[i] = numerator(cert.gamma[i]);
  SectionPolytope sp;
  sp.chart = hyperplane_chart(gamma);
  std::vector<LatVec> images;
  for (const LatVec& r : f.rays) {
    if (dot(cert.gamma, r) != Rat(-1))
      fail("NotGorenstein", "ray off the height-one hyperplane");
    images.push_back(sp.chart.to_chart(r));
  }
  sp.polygon = polygon_from_points(images);
  for (const LatVec& v : sp.polygon.verts) sp.ambient_verts.push_back(sp.chart.to_ambient(v));
  return sp;
}

bool is_terminal(const Fan& f) {
  GorensteinCertificate cert = gorenstein_gamma(f);
  SectionPolytope sp = section_polytope(f, cert);
  PickCounts pc = pick_counts(sp.polygon);
  return pc.interior == 0 && pc.boundary == Int(sp.polygon.verts.size());
}

Rat support_value(const Fan& f, const SupportFunction& h, int ray_index) {
  for (size_t c = 0; c < f.cones.size(); ++c)
    if (std::binary_search(f.cones[c].begin(), f.cones[c].end(), ray_index))
      return dot(h.functionals[c], f.rays[size_t(ray_index)]);
  fail("InconsistentSupportFunction", "ray not covered by any maximal cone");
}

SupportProperties sf_properties(const Fan& f, const SupportFunction& h) {
  if (h.functionals.size() != f.cones.size())
    fail("InconsistentSupportFunction", "one functional per maximal cone required");
  for (const RatVec& l : h.functionals)
    if (l.size() != f.dim)
      fail("InconsistentSupportFunction", "functional dimension mismatch");
  std::vector<Rat> ray_value(f.rays.size());
  std::vector<bool> covered(f.rays.size(), false);
  for (size_t c = 0; c < f.cones.size(); ++c)
    for (int i : f.cones[c]) {
      Rat v = dot(h.functionals[c], f.rays[size_t(i)]);
      if (!covered[size_t(i)]) {
        covered[size_t(i)] = true;
        ray_value[size_t(i)] = v;
      } else if (ray_value[size_t(i)] != v) {
        fail("InconsistentSupportFunction", "functionals disagree on a shared ray");
      }
    }
  for (bool c : covered)
    if (!c) fail("InconsistentSupportFunction", "ray not covered by any maximal cone");

  SupportProperties p;
  p.convex = true;
  p.strictly_convex = true;
  for (size_t c = 0; c < f.cones.size(); ++c)
    for (size_t i = 0; i < f.rays.size(); ++i) {
      Rat v = dot(h.functionals[c], f.rays[i]);
      bool inside = std::binary_search(f.cones[c].begin(), f.cones[c].end(), int(i));
      if (inside) continue;
      if (v < ray_value[i]) { p.convex = false; p.strictly_convex = false; }
      else if (v == ray_value[i]) p.strictly_convex = false;
    }
  if (!p.convex) p.strictly_convex = false;
  if (f.boundary_rays.empty())
    fail("UnmarkedBoundaryRays", "compactness needs marked boundary rays");
  p.compact = true;
  for (int b : f.boundary_rays)
    if (ray_value[size_t(b)] != 0) { p.compact = false; break; }
  return p;
}

std::string fan_to_json(const Fan& f) {
  nlohmann::json j;
  j["dim"] = f.dim;
  auto vec_to_json = [](const LatVec& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const Int& x : v) {
      if (x > Int(std::numeric_limits<long long>::max()) ||
          x < Int(std::numeric_limits<long long>::min()))
        fail("InternalError", "ray coordinate exceeds the interchange range");
      a.push_back(x.convert_to<long long>());
    }
    return a;
  };
  j["rays"] = nlohmann::json::array();
  for (const LatVec& r : f.rays) j["rays"].push_back(vec_to_json(r));
  j["cones"] = f.cones;
  j["boundary_rays"] = f.boundary_rays;
  return j.dump(2);
}

Fan fan_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  Fan f;
  f.dim = j.at("dim").get<size_t>();
  for (const auto& r : j.at("rays")) {
    LatVec v;
    for (const auto& x : r) v.push_back(Int(x.get<long long>()));
    f.rays.push_back(v);
  }
  for (const auto& c : j.at("cones")) {
    std::vector<int> cone = c.get<std::vector<int>>();
    std::sort(cone.begin(), cone.end());
    f.cones.push_back(cone);
  }
  if (j.contains("boundary_rays")) {
    f.boundary_rays = j["boundary_rays"].get<std::vector<int>>();
    std::sort(f.boundary_rays.begin(), f.boundary_rays.end());
  }
  fan_validate(f);
  return f;
}

} // namespace calabi
