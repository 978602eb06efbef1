#include "calabi/reeb.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <thread>

#include "calabi/errors.hpp"
#include "calabi/exactgeom.hpp"

namespace calabi {

namespace {

constexpr double kInfeasible = 1e300;

// Extreme rays of the moment cone in cyclic order, with the fan-triangulation
// determinants precomputed. The characteristic polytope is the cone over the
// cut polygon whose vertex along w_i is w_i / (2 <xi, w_i>), so
//   vol(xi) = (1/48) sum_i |det(w_0, w_i, w_{i+1})| / (d_0 d_i d_{i+1}),
// a closed form suitable for tight optimizer loops.
struct MomentConeData {
  std::vector<std::array<double, 3>> w;
  std::vector<double> tri;

  double volume(const std::array<double, 3>& xi) const {
    const size_t m = w.size();
    std::vector<double> d(m);
    for (size_t i = 0; i < m; ++i) {
      d[i] = xi[0] * w[i][0] + xi[1] * w[i][1] + xi[2] * w[i][2];
      if (d[i] <= 0) return kInfeasible;
    }
    double s = 0;
    for (size_t i = 1; i + 1 < m; ++i) s += tri[i - 1] / (d[0] * d[i] * d[i + 1]);
    return s / 48.0;
  }

  // closed-form first and second derivatives of the same rational function
  bool volume_derivs(const std::array<double, 3>& xi, std::array<double, 3>& grad,
                     double hess[3][3]) const {
    const size_t m = w.size();
    std::vector<double> d(m);
    for (size_t i = 0; i < m; ++i) {
      d[i] = xi[0] * w[i][0] + xi[1] * w[i][1] + xi[2] * w[i][2];
      if (d[i] <= 0) return false;
    }
    grad = {0, 0, 0};
    for (size_t a = 0; a < 3; ++a)
      for (size_t b = 0; b < 3; ++b) hess[a][b] = 0;
    for (size_t i = 1; i + 1 < m; ++i) {
      const size_t vs[3] = {0, i, i + 1};
      double t = tri[i - 1] / (d[0] * d[i] * d[i + 1]);
      double s1[3] = {0, 0, 0};
      double s2[3][3] = {};
      for (size_t v : vs)
        for (size_t a = 0; a < 3; ++a) {
          s1[a] += w[v][a] / d[v];
          for (size_t b = 0; b < 3; ++b) s2[a][b] += w[v][a] * w[v][b] / (d[v] * d[v]);
        }
      for (size_t a = 0; a < 3; ++a) {
        grad[a] -= t * s1[a];
        for (size_t b = 0; b < 3; ++b) hess[a][b] += t * (s1[a] * s1[b] + s2[a][b]);
      }
    }
    for (size_t a = 0; a < 3; ++a) {
      grad[a] /= 48.0;
      for (size_t b = 0; b < 3; ++b) hess[a][b] /= 48.0;
    }
    return true;
  }
};

MomentConeData moment_cone_data(const Fan& f) {
  Cone dual = dual_cone(make_cone(f.rays, 3));
  const std::vector<LatVec>& gens = dual.gens;
  const size_t m = gens.size();
  if (m < 3) fail("InternalError", "moment cone is not full-dimensional");

  // facets of the moment cone pair up cyclically adjacent extreme rays
  std::vector<std::vector<int>> adj(m);
  for (const LatVec& nrm : cone_facet_normals(gens, 3)) {
    std::vector<int> on;
    for (size_t i = 0; i < m; ++i)
      if (dot(nrm, gens[i]) == 0) on.push_back(int(i));
    if (on.size() != 2) fail("InternalError", "moment cone facet is not an edge");
    adj[on[0]].push_back(on[1]);
    adj[on[1]].push_back(on[0]);
  }
  std::vector<int> order{0};
  int prev = -1, cur = 0;
  while (order.size() < m) {
    if (adj[cur].size() != 2) fail("InternalError", "moment cone edge graph is not a cycle");
    int nxt = adj[cur][0] == prev ? adj[cur][1] : adj[cur][0];
    order.push_back(nxt);
    prev = cur;
    cur = nxt;
  }

  MomentConeData data;
  data.w.reserve(m);
  for (int idx : order) {
    const LatVec& g = gens[idx];
    data.w.push_back({to_double(Rat(g[0])), to_double(Rat(g[1])), to_double(Rat(g[2]))});
  }
  for (size_t i = 1; i + 1 < m; ++i) {
    IntMat t{gens[order[0]], gens[order[i]], gens[order[i + 1]]};
    Int d = det_int(t);
    if (d < 0) d = -d;
    data.tri.push_back(to_double(Rat(d)));
  }
  return data;
}

struct RunOutcome {
  double a = 0, b = 0;
  double value = kInfeasible;
  double grad_norm = kInfeasible;
  int iterations = 0;
  bool converged = false;
};

double golden_section(const std::function<double(double)>& g, double lo, double hi) {
  const double r = 0.6180339887498949;
  double x1 = hi - r * (hi - lo), x2 = lo + r * (hi - lo);
  double f1 = g(x1), f2 = g(x2);
  for (int it = 0; it < 90; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - r * (hi - lo);
      f1 = g(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + r * (hi - lo);
      f2 = g(x2);
    }
  }
  return (lo + hi) / 2;
}

double line_minimum(const std::function<double(double)>& g, double x0) {
  double h = 0.5;
  double f0 = g(x0), fl = g(x0 - h), fr = g(x0 + h);
  if (f0 <= fl && f0 <= fr) return golden_section(g, x0 - h, x0 + h);
  double dir = fr < fl ? 1.0 : -1.0;
  double xp = x0, xc = x0 + dir * h;
  double fp = f0, fc = std::min(fl, fr);
  for (int it = 0; it < 70; ++it) {
    h *= 2;
    double xn = xc + dir * h, fn = g(xn);
    if (fn >= fc) return golden_section(g, std::min(xp, xn), std::max(xp, xn));
    xp = xc;
    fp = fc;
    xc = xn;
    fc = fn;
  }
  (void)fp;
  return xc;
}

// normalization-constrained objective in the two free chart coordinates
struct ReducedObjective {
  const MomentConeData& cone;
  const std::array<std::array<double, 3>, 3>& chart;  // k0, k1, point rows

  std::array<double, 3> embed(double a, double b) const {
    std::array<double, 3> xi{};
    for (size_t i = 0; i < 3; ++i) xi[i] = a * chart[0][i] + b * chart[1][i] + 3 * chart[2][i];
    return xi;
  }
  double value(double a, double b) const { return cone.volume(embed(a, b)); }
  bool derivs(double a, double b, double g[2], double h[3]) const {
    std::array<double, 3> grad{};
    double hess[3][3];
    if (!cone.volume_derivs(embed(a, b), grad, hess)) return false;
    for (size_t c = 0; c < 2; ++c) {
      g[c] = 0;
      for (size_t i = 0; i < 3; ++i) g[c] += grad[i] * chart[c][i];
    }
    double hk[2][3] = {};
    for (size_t c = 0; c < 2; ++c)
      for (size_t i = 0; i < 3; ++i)
        for (size_t j = 0; j < 3; ++j) hk[c][i] += hess[i][j] * chart[c][j];
    h[0] = h[1] = h[2] = 0;
    for (size_t i = 0; i < 3; ++i) {
      h[0] += chart[0][i] * hk[0][i];
      h[1] += chart[0][i] * hk[1][i];
      h[2] += chart[1][i] * hk[1][i];
    }
    return true;
  }
};

RunOutcome minimize_from(const ReducedObjective& obj, double a, double b, double tol) {
  RunOutcome out;
  double cur = obj.value(a, b);
  if (cur >= kInfeasible) return out;

  for (int sweep = 0; sweep < 40; ++sweep) {
    double before = cur;
    a = line_minimum([&](double x) { return obj.value(x, b); }, a);
    b = line_minimum([&](double y) { return obj.value(a, y); }, b);
    cur = obj.value(a, b);
    ++out.iterations;
    if (before - cur < 1e-13 * std::max(1.0, std::fabs(before))) break;
  }

  double g[2], h[3];
  for (int it = 0; it < 80; ++it) {
    ++out.iterations;
    if (!obj.derivs(a, b, g, h)) break;
    out.grad_norm = std::hypot(g[0], g[1]);
    if (out.grad_norm < tol) {
      out.converged = true;
      break;
    }
    double det = h[0] * h[2] - h[1] * h[1];
    double sa, sb;
    if (det > 0 && h[0] > 0) {
      sa = -(h[2] * g[0] - h[1] * g[1]) / det;
      sb = -(h[0] * g[1] - h[1] * g[0]) / det;
    } else {
      double scale = std::max(1.0, out.grad_norm);
      sa = -g[0] / scale;
      sb = -g[1] / scale;
    }
    double step = 1.0;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      double trial = obj.value(a + step * sa, b + step * sb);
      if (trial <= cur) {
        a += step * sa;
        b += step * sb;
        accepted = trial < cur;
        cur = trial;
        break;
      }
      step /= 2;
    }
    if (!accepted && std::hypot(sa, sb) * step < 1e-15) break;
  }

  out.a = a;
  out.b = b;
  out.value = cur;
  if (obj.derivs(a, b, g, h)) {
    out.grad_norm = std::hypot(g[0], g[1]);
    if (out.grad_norm < tol) out.converged = true;
  }
  return out;
}

}  // namespace

HessianResult canonical_hessian(const Fan& f, const RatVec& xi, const RatVec& y) {
  const size_t n = f.dim;
  if (n == 0 || f.rays.empty()) fail("BadParameters", "fan has no rays");
  if (xi.size() != n || y.size() != n) fail("BadParameters", "dimension mismatch");

  HessianResult res;
  res.l_values.reserve(f.rays.size());
  for (const LatVec& u : f.rays) {
    Rat l = dot(u, y);
    if (l <= 0) fail("BoundaryPoint", "point is not interior to the moment cone");
    res.l_values.push_back(l);
  }
  res.l_xi = dot(xi, y);
  if (res.l_xi <= 0) fail("BoundaryPoint", "Reeb covector is nonpositive at the point");
  res.l_inf = 0;
  for (const Rat& l : res.l_values) res.l_inf += l;

  LatVec usum(n, 0);
  for (const LatVec& u : f.rays)
    for (size_t i = 0; i < n; ++i) usum[i] += u[i];

  res.hessian.assign(n, RatVec(n, Rat(0)));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i; j < n; ++j) {
      Rat g = 0;
      for (size_t k = 0; k < f.rays.size(); ++k) {
        Int p = f.rays[k][i] * f.rays[k][j];
        g += Rat(p) / res.l_values[k];
      }
      Rat q = xi[i] * xi[j];
      g += q / res.l_xi;
      Int s = usum[i] * usum[j];
      g -= Rat(s) / res.l_inf;
      g /= 2;
      res.hessian[i][j] = g;
      res.hessian[j][i] = g;
    }

  res.positive_definite = true;
  for (size_t m = 1; m <= n; ++m) {
    RatMat sub(m, RatVec(m));
    for (size_t i = 0; i < m; ++i)
      for (size_t j = 0; j < m; ++j) sub[i][j] = res.hessian[i][j];
    if (det_rat(sub) <= 0) {
      res.positive_definite = false;
      break;
    }
  }
  return res;
}

RatVec reeb_identity_residual(const Fan& f, const RatVec& xi, const RatVec& y) {
  HessianResult h = canonical_hessian(f, xi, y);
  const size_t n = f.dim;
  RatVec r(n, Rat(0));
  for (size_t i = 0; i < n; ++i) {
    Rat acc = 0;
    for (size_t j = 0; j < n; ++j) acc += h.hessian[i][j] * y[j];
    r[i] = 2 * acc - xi[i];
  }
  return r;
}

Rat char_volume(const Fan& f, const RatVec& xi) {
  if (f.dim != 3 || xi.size() != 3) fail("BadParameters", "characteristic volume needs dimension 3");
  if (f.rays.empty()) fail("BadParameters", "fan has no rays");
  std::vector<RatVec> normals;
  RatVec offsets;
  for (const LatVec& u : f.rays) {
    normals.push_back({Rat(u[0]), Rat(u[1]), Rat(u[2])});
    offsets.push_back(0);
  }
  normals.push_back({-xi[0], -xi[1], -xi[2]});
  offsets.push_back(Rat(-1, 2));
  return polytope_volume(halfspace_vertices(normals, offsets));
}

double char_volume_checked(const Fan& f, const std::array<double, 3>& xi) {
  RatVec exact_xi{rat_of_double(xi[0]), rat_of_double(xi[1]), rat_of_double(xi[2])};
  Rat exact = char_volume(f, exact_xi);
  double fast = moment_cone_data(f).volume(xi);
  double ref = to_double(exact);
  if (std::fabs(fast - ref) > 1e-9 * std::max(1.0, std::fabs(ref)))
    fail("InternalError", "characteristic volume evaluations disagree");
  return fast;
}

MinimizeResult minimize_volume(const Fan& f, double tol, int threads) {
  if (f.dim != 3) fail("BadParameters", "volume minimization needs dimension 3");
  if (!(tol > 0)) fail("BadParameters", "tolerance must be positive");
  if (threads < 1) fail("BadParameters", "thread count must be positive");
  auto cert = gorenstein_gamma(f);
  if (!cert.holds) fail("NotGorenstein", "rays admit no integral Gorenstein functional");

  LatVec gamma(3);
  for (size_t i = 0; i < 3; ++i) gamma[i] = numerator(cert.gamma[i]);
  AdaptedBasis basis = gamma_adapted_basis(gamma);
  MomentConeData cone = moment_cone_data(f);

  // xi(a, b) = a k0 + b k1 + 3 w keeps <gamma, xi> = -3 for all (a, b)
  std::array<std::array<double, 3>, 3> chart{};
  for (size_t i = 0; i < 3; ++i) {
    chart[0][i] = to_double(Rat(basis.kernel[0][i]));
    chart[1][i] = to_double(Rat(basis.kernel[1][i]));
    chart[2][i] = to_double(Rat(basis.point[i]));
  }
  ReducedObjective objective{cone, chart};

  std::array<double, 3> start{};
  for (const LatVec& u : f.rays)
    for (size_t i = 0; i < 3; ++i) start[i] += to_double(Rat(u[i]));
  for (size_t i = 0; i < 3; ++i) start[i] *= 3.0 / double(f.rays.size());
  double a0 = 0, b0 = 0;
  for (size_t i = 0; i < 3; ++i) {
    a0 += to_double(Rat(basis.inverse_rows[0][i])) * start[i];
    b0 += to_double(Rat(basis.inverse_rows[1][i])) * start[i];
  }

  std::vector<RunOutcome> runs(static_cast<size_t>(threads));
  auto work = [&](int s) {
    double a = a0, b = b0;
    if (s > 0) {
      double phase = 2 * 3.14159265358979323846 * double(s) / double(threads);
      a += 0.35 * std::cos(phase + 0.7);
      b += 0.35 * std::sin(phase + 0.7);
    }
    runs[size_t(s)] = minimize_from(objective, a, b, tol);
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int s = 0; s < threads; ++s) pool.emplace_back(work, s);
    for (auto& t : pool) t.join();
  }

  const RunOutcome* best = &runs[0];
  for (const RunOutcome& r : runs)
    if (r.value < best->value) best = &r;
  if (best->value >= kInfeasible)
    fail("InternalError", "no feasible Reeb vector found");

  MinimizeResult res;
  res.xi = objective.embed(best->a, best->b);
  res.volume = char_volume_checked(f, res.xi);
  res.grad_norm = best->grad_norm;
  res.iterations = best->iterations;
  res.converged = best->converged;
  return res;
}

std::optional<RatVec> quasi_regularity(const std::array<double, 3>& xi, long long max_den,
                                       double tol) {
  if (max_den < 1) fail("BadParameters", "denominator bound must be positive");
  if (!(tol > 0)) fail("BadParameters", "tolerance must be positive");
  for (long long q = 1; q <= max_den; ++q) {
    RatVec out(3);
    bool ok = true;
    for (size_t i = 0; i < 3; ++i) {
      double scaled = xi[i] * double(q);
      if (std::fabs(scaled) > 9e15) {
        ok = false;
        break;
      }
      long long p = llround(scaled);
      if (std::fabs(xi[i] - double(p) / double(q)) > tol) {
        ok = false;
        break;
      }
      out[i] = Rat(Int(p), Int(q));
    }
    if (ok) return out;
  }
  return std::nullopt;
}

}  // namespace calabi
