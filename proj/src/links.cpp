#include "calabi/links.hpp"

#include <algorithm>
#include <numeric>

#include "calabi/errors.hpp"

namespace calabi {

namespace {

using Poly = std::vector<long long>;

Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly out(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

// exact division by t^w - 1
Poly poly_div_cyclotomic(Poly num, long long w) {
  if (num.empty()) return {};
  if (num.size() <= size_t(w)) fail("NotQuasiHomogeneous", "weights do not divide the series");
  Poly q(num.size() - size_t(w), 0);
  for (size_t i = num.size(); i-- > size_t(w);) {
    long long c = num[i];
    q[i - size_t(w)] = c;
    num[i] = 0;
    num[i - size_t(w)] += c;
  }
  for (size_t i = 0; i < size_t(w); ++i)
    if (num[i] != 0) fail("NotQuasiHomogeneous", "weights do not divide the series");
  return q;
}

void trim(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

void validate_hypersurface(const WeightedHypersurface& h) {
  if (h.weights.empty()) fail("BadParameters", "empty weight vector");
  for (long long w : h.weights)
    if (w < 1) fail("BadParameters", "weights must be positive");
  if (h.degree < 1) fail("BadParameters", "degree must be positive");
}

AbelianGroup make_group(long long rank, std::vector<TorsionPart> parts) {
  AbelianGroup g;
  g.rank = rank;
  std::sort(parts.begin(), parts.end(),
            [](const TorsionPart& a, const TorsionPart& b) { return a.modulus < b.modulus; });
  for (const TorsionPart& p : parts) {
    if (p.modulus < 2 || p.multiplicity < 1) continue;
    if (!g.torsion.empty() && g.torsion.back().modulus == p.modulus)
      g.torsion.back().multiplicity += p.multiplicity;
    else
      g.torsion.push_back(p);
  }
  return g;
}

struct FamilySpec {
  long long step = 0;
  std::vector<long long> blowup;
  std::vector<long long> base_exps;
};

FamilySpec family_spec(const std::string& name, long long n) {
  if (name == "cubic") return {3, {1, 1, 1, 1}, {3, 3, 3}};
  if (name == "quartic") return {4, {2, 1, 1, 1}, {2, 4, 4}};
  if (name == "sextic") return {6, {3, 2, 1, 1}, {2, 3, 6}};
  if (name == "general") {
    FamilySpec s;
    s.step = n;
    s.blowup.assign(size_t(n) + 1, 1);
    s.base_exps.assign(size_t(n), n);
    return s;
  }
  fail("BadParameters", "unknown family '" + name + "'");
}

Int family_euler(long long n, long long c, long long residue) {
  Int pw = 1;
  for (long long i = 0; i < n; ++i) pw *= Int(1 - n);
  Int q = (pw - 1) / Int(n);  // (1-n)^n = 1 mod n
  Int chi = Int(c) * q + Int(c) * Int(n) + 1;
  if (residue == 0) chi -= pw;
  return chi;
}

}  // namespace

bool hypersurface_fano(const WeightedHypersurface& h) {
  validate_hypersurface(h);
  long long total = std::accumulate(h.weights.begin(), h.weights.end(), 0LL);
  return total > h.degree;
}

long long PoincareSeries::total() const {
  return std::accumulate(coeff.begin(), coeff.end(), 0LL);
}

PoincareSeries milnor_poincare(const WeightedHypersurface& h) {
  validate_hypersurface(h);
  PoincareSeries out;
  if (!h.exponents.empty()) {
    if (h.exponents.size() != h.weights.size())
      fail("BadParameters", "exponent and weight vectors differ in length");
    Poly p{1};
    for (size_t i = 0; i < h.exponents.size(); ++i) {
      long long a = h.exponents[i], w = h.weights[i];
      if (a < 1) fail("BadParameters", "exponents must be positive");
      if (a * w != h.degree) fail("NotQuasiHomogeneous", "exponent times weight misses the degree");
      Poly factor(a >= 2 ? size_t(w * (a - 2)) + 1 : 0, 0);
      for (long long j = 0; j <= a - 2; ++j) factor[size_t(j * w)] = 1;
      p = poly_mul(p, factor);
    }
    trim(p);
    out.coeff = std::move(p);
    return out;
  }

  Poly num{1};
  bool zero = false;
  for (long long w : h.weights) {
    if (w > h.degree) fail("NotQuasiHomogeneous", "weight exceeds the degree");
    if (w == h.degree) zero = true;
  }
  if (zero) return out;  // a linear direction kills the algebra
  for (long long w : h.weights) {
    Poly factor(size_t(h.degree - w) + 1, 0);
    factor[0] = -1;
    factor[size_t(h.degree - w)] = 1;
    num = poly_mul(num, factor);
  }
  for (long long w : h.weights) num = poly_div_cyclotomic(std::move(num), w);
  trim(num);
  out.coeff = std::move(num);
  return out;
}

HodgeNumbers steenbrink_hodge(const WeightedHypersurface& hs, int n) {
  if (n < 1) fail("BadParameters", "hypersurface dimension must be positive");
  if (hs.weights.size() != size_t(n) + 2)
    fail("BadParameters", "a dimension-n hypersurface takes n + 2 weights");
  PoincareSeries p = milnor_poincare(hs);
  long long total = std::accumulate(hs.weights.begin(), hs.weights.end(), 0LL);
  HodgeNumbers out;
  for (int i = 0; i <= n; ++i) out.h.push_back(p.at((i + 1) * hs.degree - total));
  if (n == 2) out.s = out.h[1] + 1;
  return out;
}

std::string group_string(const AbelianGroup& g) {
  std::string s;
  auto append = [&s](const std::string& part) {
    if (!s.empty()) s += " + ";
    s += part;
  };
  if (g.rank == 1) append("Z");
  if (g.rank > 1) append("Z^" + std::to_string(g.rank));
  for (const TorsionPart& t : g.torsion) {
    std::string part = "Z_" + std::to_string(t.modulus);
    if (t.multiplicity > 1) part += "^" + std::to_string(t.multiplicity);
    append(part);
  }
  return s.empty() ? "0" : s;
}

SeifertCohomology seifert_cohomology(const SeifertData& sd) {
  if (sd.s < 1) fail("BadParameters", "orbifold rank must be at least one");
  if (sd.d < 1) fail("BadParameters", "divisibility must be positive");
  std::vector<TorsionPart> branch_torsion;
  for (const auto& [m, g] : sd.branches) {
    if (m < 1 || g < 0) fail("BadParameters", "invalid branch divisor");
    branch_torsion.push_back({m, 2 * g});
  }
  SeifertCohomology out;
  out.h[0] = make_group(1, {});
  out.h[1] = make_group(0, {});
  out.h[2] = make_group(sd.s - 1, {{sd.d, 1}});
  out.h[3] = make_group(sd.s - 1, branch_torsion);
  out.h[4] = make_group(0, {{sd.d, 1}});
  out.h[5] = make_group(1, {});
  out.h2_lower = out.h[3];
  return out;
}

long long blowup_discrepancy(const std::vector<long long>& w, long long f_weight) {
  if (w.empty()) fail("BadParameters", "empty blow-up weight");
  for (long long c : w)
    if (c < 1) fail("BadParameters", "blow-up weights must be positive");
  if (f_weight < 1) fail("BadParameters", "weighted multiplicity must be positive");
  return std::accumulate(w.begin(), w.end(), 0LL) - f_weight - 1;
}

FamilyReport terminalize_family(const std::string& name, long long k, long long n) {
  if (k < 1) fail("BadParameters", "exponent must be positive");
  if (name == "general") {
    if (n < 2) fail("BadParameters", "ambient dimension must be at least two");
  } else if (n != 3) {
    fail("BadParameters", "family '" + name + "' is three-dimensional");
  }

  FamilyReport rep;
  rep.family = name;
  rep.k = k;
  rep.n = n;

  if (name == "quartic-cubic") {
    if (k != 4) fail("BadParameters", "the quartic-cubic example has degree four");
    rep.c_x = 3;
    rep.b3 = 12;
    rep.smooth = true;
    rep.steps.push_back({{1, 1, 1, 1}, 3, blowup_discrepancy({1, 1, 1, 1}, 3), 0});
    WeightedHypersurface hs{{4, 3, 3, 3}, 12, {3, 4, 4, 4}};
    SeifertData sd{steenbrink_hodge(hs, 2).s, 1, {{3, 3}}};
    rep.h2 = seifert_cohomology(sd).h2_lower;
    return rep;
  }

  FamilySpec spec = family_spec(name, n);
  long long residue = k % spec.step;
  if (residue > 1) {
    bool terminal = residue == spec.step - 1 && (name != "general" || n == 3);
    fail("UnresolvedResidual",
         terminal ? "the terminalization ends in a terminal singularity with no crepant resolution"
                  : "no crepant resolution is known for this residue");
  }

  long long c = k / spec.step;
  rep.c_x = c;
  rep.smooth = true;
  for (long long j = 0; j < c; ++j) {
    long long current = k - j * spec.step;
    rep.steps.push_back({spec.blowup, spec.step, blowup_discrepancy(spec.blowup, spec.step),
                         current - spec.step});
  }

  if (n == 3) {
    rep.b3 = residue == 0 ? 2 * (c - 1) : 2 * c;
    if (c == 0) rep.b3 = 0;
    std::vector<long long> exps = spec.base_exps;
    exps.push_back(k);
    long long d = 1;
    for (long long a : exps) d = std::lcm(d, a);
    WeightedHypersurface hs;
    hs.degree = d;
    hs.exponents = exps;
    for (long long a : exps) hs.weights.push_back(d / a);
    SeifertData sd;
    sd.s = steenbrink_hodge(hs, 2).s;
    long long m = residue == 0 ? k / spec.step : k;
    if (m >= 2) sd.branches.push_back({m, 1});
    rep.h2 = seifert_cohomology(sd).h2_lower;
  }

  if (name == "general" || name == "cubic") {
    rep.euler = family_euler(spec.step, c, residue);
    MilnorOrlikBetti mo = milnor_orlik_betti(spec.step, int(residue), k);
    rep.link_betti = mo.betti;
    rep.torsion_order = mo.torsion_order;
  }
  return rep;
}

MilnorOrlikBetti milnor_orlik_betti(long long n, int residue, std::optional<long long> k) {
  if (n < 2) fail("BadParameters", "ambient dimension must be at least two");
  if (residue != 0 && residue != 1) fail("BadResidue", "only residues zero and one have closed forms");
  if (k && (*k < 1 || *k % n != residue)) fail("BadResidue", "exponent does not match the residue");

  auto alternating = [&](long long e) {
    Int pw = 1;
    for (long long i = 0; i < e; ++i) pw *= Int(1 - n);
    Int val = 1 + (pw - 1) / Int(n);
    return e % 2 == 0 ? val : -val;  // (-1)^e (1 + ((1-n)^e - 1)/n)
  };

  MilnorOrlikBetti out;
  if (residue == 0) {
    out.betti = alternating(n + 1);
    return out;
  }
  out.betti = alternating(n);
  if (k) {
    Int order = 1;
    for (Int i = 0; i < out.betti; ++i) order *= Int(*k);
    out.torsion_order = order;
  }
  return out;
}

const std::vector<B3ZeroRow>& b3zero_fixtures() {
  static const std::vector<B3ZeroRow> rows = {
      // the (2, 2k+1, 2k+1, 4k+1) series at k = 1, 2, 3
      {{2, 3, 3, 5}, 12, 7, "#7(S2xS3)"},
      {{2, 5, 5, 9}, 20, 13, "#7(S2xS3)"},
      {{2, 7, 7, 13}, 28, 19, "#7(S2xS3)"},
      {{1, 2, 3, 5}, 10, 2, "#8(S2xS3)"},
      {{1, 3, 5, 7}, 15, 4, "#8(S2xS3)"},
      {{1, 3, 5, 8}, 16, 4, "#9(S2xS3)"},
      {{2, 3, 5, 9}, 18, 3, "#6(S2xS3)"},
      {{3, 3, 5, 5}, 15, 12, "#4(S2xS3)"},
      {{3, 5, 7, 11}, 25, 10, "#4(S2xS3)"},
      {{3, 5, 7, 14}, 28, 10, "#5(S2xS3)"},
      {{3, 5, 11, 18}, 36, 10, "#5(S2xS3)"},
      {{5, 14, 17, 21}, 56, 24, "#3(S2xS3)"},
      {{5, 19, 27, 31}, 81, 27, "#2(S2xS3)"},
      {{5, 19, 27, 50}, 100, 25, "#3(S2xS3)"},
      {{7, 11, 27, 37}, 81, 27, "#2(S2xS3)"},
      {{7, 11, 27, 44}, 88, 27, "#3(S2xS3)"},
      {{9, 15, 17, 20}, 60, 14, "#2(S2xS3)"},
      {{9, 15, 23, 23}, 69, 46, "#4(S2xS3)"},
      {{11, 29, 39, 49}, 127, 44, "#2(S2xS3)"},
      {{11, 49, 69, 128}, 256, 64, "S2xS3"},
      {{13, 23, 35, 57}, 127, 63, "#2(S2xS3)"},
      {{13, 35, 81, 128}, 256, 64, "S2xS3"},
  };
  return rows;
}

}  // namespace calabi
