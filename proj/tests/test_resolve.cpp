#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>

#include "calabi/errors.hpp"
#include "calabi/resolve.hpp"

using namespace calabi;

namespace {

LatVec v3(long long x, long long y, long long z) { return {Int(x), Int(y), Int(z)}; }

Fan pentagon_fan() {
  return fan_from_cone(make_cone(
      {v3(0, 0, 1), v3(0, 1, 1), v3(1, 2, 1), v3(2, 1, 1), v3(1, 0, 1)}, 3));
}

Fan quadric_fan() {
  return fan_from_cone(make_cone({v3(0, 0, 1), v3(1, 0, 1), v3(1, 1, 1), v3(0, 1, 1)}, 3));
}

Int det3(const std::vector<LatVec>& g) {
  IntMat m(3, LatVec(3));
  for (size_t r = 0; r < 3; ++r) m[r] = g[r];
  return det_int(m);
}

// the resolution theorems, re-checked from the outside
void check_resolution(const Fan& input, const ResolutionResult& r) {
  fan_validate(r.fan);
  auto cert = gorenstein_gamma(input);
  auto sp = section_polytope(input, cert);
  auto pc = pick_counts(sp.polygon);

  CHECK(r.c_x == pc.interior);
  CHECK(r.euler == pc.doubled_area);
  CHECK(Int(r.fan.cones.size()) == pc.doubled_area);

  Int total = 0;
  for (size_t c = 0; c < r.fan.cones.size(); ++c) {
    auto gens = cone_gens(r.fan, c);
    REQUIRE(gens.size() == 3);
    Int d = det3(gens);
    CHECK((d == 1 || d == -1));
    total += d < 0 ? -d : d;
  }
  CHECK(total == pc.doubled_area);

  for (const LatVec& ray : r.fan.rays) CHECK(dot(cert.gamma, ray) == Rat(-1));
  for (int b : input.boundary_rays) CHECK(support_value(r.fan, r.support, b) == 0);
  for (size_t i = input.rays.size(); i < r.fan.rays.size(); ++i)
    CHECK(support_value(r.fan, r.support, int(i)) > 0);
}

}  // namespace

TEST_CASE("star subdivision at an interior point") {
  Fan f = pentagon_fan();
  SupportFunction h{{RatVec{0, 0, 0}}};
  auto s = star_subdivide(f, h, v3(1, 1, 1), 1);
  CHECK(s.fan.cones.size() == 5);
  CHECK(s.fan.rays.size() == 6);
  CHECK(s.fan.boundary_rays == f.boundary_rays);  // interior point is not boundary
  fan_validate(s.fan);
  auto p = sf_properties(s.fan, s.support);
  CHECK(p.convex);
  CHECK(p.strictly_convex);
  CHECK(p.compact);  // the new ray is interior, the boundary values stay zero
  CHECK(support_value(s.fan, s.support, 5) == 1);
  for (int b = 0; b < 5; ++b) CHECK(support_value(s.fan, s.support, b) == 0);
}

TEST_CASE("star subdivision on a wall") {
  Fan f = pentagon_fan();
  SupportFunction h{{RatVec{0, 0, 0}}};
  auto s = star_subdivide(f, h, v3(1, 1, 1), 1);
  // (1,1,2) spans the wall between two of the new cones
  auto t = star_subdivide(s.fan, s.support, v3(1, 1, 2), Rat(1, 4));
  CHECK(t.fan.cones.size() == 7);
  fan_validate(t.fan);
  auto p = sf_properties(t.fan, t.support);
  CHECK(p.convex);
  CHECK(p.strictly_convex);
  // a wall point does not touch the boundary of the support
  CHECK(t.fan.boundary_rays == f.boundary_rays);
}

TEST_CASE("star subdivision on a boundary facet") {
  Fan f = fan_from_cone(make_cone({v3(0, 0, 1), v3(2, 0, 1), v3(0, 1, 1)}, 3));
  SupportFunction h{{RatVec{0, 0, 0}}};
  auto s = star_subdivide(f, h, v3(1, 0, 1), 1);
  CHECK(s.fan.cones.size() == 2);
  fan_validate(s.fan);
  CHECK(s.fan.boundary_rays == std::vector<int>{0, 1, 2, 3});
  auto p = sf_properties(s.fan, s.support);
  CHECK(p.convex);
  CHECK(p.strictly_convex);
  CHECK(!p.compact);
}

TEST_CASE("star subdivision input guards") {
  Fan f = pentagon_fan();
  SupportFunction h{{RatVec{0, 0, 0}}};
  RatVec gamma{0, 0, -1};
  CHECK_THROWS_AS(star_subdivide(f, h, v3(1, 1, 2), 1, &gamma), DomainError);
  CHECK_THROWS_AS(star_subdivide(f, h, v3(2, 2, 2), 1), DomainError);
  CHECK_THROWS_AS(star_subdivide(f, h, v3(0, 0, 0), 1), DomainError);
  CHECK_THROWS_AS(star_subdivide(f, h, v3(-1, -1, -1), 1), DomainError);
  CHECK_THROWS_AS(star_subdivide(f, h, v3(0, 1, 1), 1), DomainError);
  CHECK_THROWS_AS(star_subdivide(f, h, v3(1, 1, 1), 0), DomainError);
  CHECK(dot(gamma, v3(1, 1, 1)) == Rat(-1));
  CHECK(star_subdivide(f, h, v3(1, 1, 1), 1, &gamma).fan.rays.size() == 6);
}

TEST_CASE("resolution of the pentagon cone") {
  Fan f = pentagon_fan();
  auto r = crepant_resolve(f);
  check_resolution(f, r);
  CHECK(r.c_x == 1);
  CHECK(r.euler == 5);
  CHECK(r.inserted == std::vector<LatVec>{v3(1, 1, 1)});
  CHECK(r.epsilons == std::vector<Rat>{1});
  CHECK(r.smooth);
  CHECK(r.strictly_convex);
  CHECK(r.compact);
  CHECK(r.compact_class_exists);
  CHECK(!r.used_small_fallback);

  auto inv = resolution_invariants(r);
  CHECK(inv.b2 == 3);
  CHECK(inv.b4 == 1);
  CHECK(inv.b2_link == 2);
  CHECK(inv.euler == 5);
}

TEST_CASE("resolution of a family member") {
  Fan f = spq_fan(5, 3);
  auto r = crepant_resolve(f);
  check_resolution(f, r);
  CHECK(r.c_x == 4);
  CHECK(r.euler == 10);
  CHECK(r.inserted.size() == 4);
  CHECK(r.smooth);
  CHECK(r.compact_class_exists);
  auto inv = resolution_invariants(r);
  CHECK(inv.b2 == 4 + 1);
  CHECK(inv.b4 == 4);
  CHECK(inv.b2_link == 1);
}

TEST_CASE("resolutions are deterministic and order-independent in their invariants") {
  Fan f = spq_fan(5, 3);
  auto a = crepant_resolve(f);
  auto b = crepant_resolve(f);
  CHECK(a.fan.rays == b.fan.rays);
  CHECK(a.fan.cones == b.fan.cones);
  CHECK(a.epsilons == b.epsilons);

  ResolveOptions rev;
  rev.reverse_order = true;
  auto c = crepant_resolve(f, rev);
  check_resolution(f, c);
  CHECK(c.euler == a.euler);
  CHECK(c.c_x == a.c_x);
  CHECK(c.smooth == a.smooth);
  CHECK(c.compact_class_exists == a.compact_class_exists);
  std::multiset<LatVec> ra(a.inserted.begin(), a.inserted.end());
  std::multiset<LatVec> rc(c.inserted.begin(), c.inserted.end());
  CHECK(ra == rc);
}

TEST_CASE("terminal non-smooth cones refuse to resolve") {
  Fan f = quadric_fan();
  CHECK_THROWS_AS(crepant_resolve(f), DomainError);
  try {
    crepant_resolve(f);
  } catch (const DomainError& e) {
    CHECK(e.name() == std::string("TerminalSingularity"));
  }

  ResolveOptions opts;
  opts.allow_small = true;
  auto r = crepant_resolve(f, opts);
  CHECK(r.used_small_fallback);
  CHECK(r.euler == 2);
  CHECK(r.c_x == 0);
  CHECK(r.smooth);  // both halves are unimodular
  CHECK(!r.strictly_convex);
  CHECK(!r.compact_class_exists);
  fan_validate(r.fan);
  auto inv = resolution_invariants(r);
  CHECK(inv.b2 == 1);
  CHECK(inv.b4 == 0);
  CHECK(inv.b2_link == 1);
}

TEST_CASE("smooth input passes through") {
  Fan f = fan_from_cone(make_cone({v3(0, 0, 1), v3(1, 0, 1), v3(0, 1, 1)}, 3));
  auto r = crepant_resolve(f);
  CHECK(r.euler == 1);
  CHECK(r.c_x == 0);
  CHECK(r.smooth);
  CHECK(r.inserted.empty());
  CHECK(!r.used_small_fallback);
}

TEST_CASE("non-isolated input inserts boundary rays") {
  Fan f = fan_from_cone(make_cone({v3(0, 0, 1), v3(2, 0, 1), v3(0, 1, 1)}, 3));
  auto r = crepant_resolve(f);
  check_resolution(f, r);
  CHECK(r.c_x == 0);
  CHECK(r.euler == 2);
  CHECK(r.smooth);
  CHECK(r.inserted == std::vector<LatVec>{v3(1, 0, 1)});
  CHECK(r.fan.boundary_rays.size() == 4);
  CHECK(r.strictly_convex);
  CHECK(!r.compact);  // the support function cannot vanish on the new boundary ray
  CHECK(!r.compact_class_exists);
  auto inv = resolution_invariants(r);
  CHECK(inv.b2 == 1);
  CHECK(inv.b4 == 0);
}

TEST_CASE("two-dimensional resolutions") {
  Fan f;
  f.dim = 2;
  f.rays = {{Int(1), Int(0)}, {Int(1), Int(4)}};
  f.cones = {{0, 1}};
  f.boundary_rays = {0, 1};
  auto r = crepant_resolve(f);
  fan_validate(r.fan);
  CHECK(r.euler == 4);
  CHECK(r.c_x == 3);
  CHECK(r.smooth);
  CHECK(r.inserted.size() == 3);
  for (const LatVec& u : r.inserted) CHECK(u[0] == 1);

  Fan frac;
  frac.dim = 2;
  frac.rays = {{Int(1), Int(2)}, {Int(3), Int(2)}};
  frac.cones = {{0, 1}};
  frac.boundary_rays = {0, 1};
  CHECK_THROWS_AS(crepant_resolve(frac), DomainError);
}

TEST_CASE("quotient group element enumeration") {
  QuotientSpec q;
  q.n = 3;
  q.order = 3;
  q.weights = {{Rat(1, 3), Rat(1, 3), Rat(1, 3)}};
  auto e = quotient_group_elements(q);
  REQUIRE(e.size() == 3);
  CHECK(e[0] == RatVec{0, 0, 0});
  CHECK(e[1] == RatVec{Rat(1, 3), Rat(1, 3), Rat(1, 3)});
  CHECK(e[2] == RatVec{Rat(2, 3), Rat(2, 3), Rat(2, 3)});

  QuotientSpec wrong = q;
  wrong.order = 4;
  CHECK_THROWS_AS(quotient_group_elements(wrong), DomainError);

  QuotientSpec trivial;
  trivial.order = 1;
  CHECK(quotient_group_elements(trivial).size() == 1);
}

TEST_CASE("quotient fans and their resolutions") {
  QuotientSpec z3;
  z3.n = 3;
  z3.order = 3;
  z3.weights = {{Rat(1, 3), Rat(1, 3), Rat(1, 3)}};
  Fan f3 = quotient_fan(z3);
  auto cert = gorenstein_gamma(f3);
  CHECK(cert.holds);
  auto r3 = crepant_resolve(f3);
  check_resolution(f3, r3);
  CHECK(r3.euler == 3);
  CHECK(r3.c_x == 1);
  auto inv3 = resolution_invariants(r3);
  CHECK(inv3.b2 == 1);
  CHECK(inv3.b4 == 1);

  QuotientSpec z5;
  z5.n = 3;
  z5.order = 5;
  z5.weights = {{Rat(1, 5), Rat(2, 5), Rat(2, 5)}};
  Fan f5 = quotient_fan(z5);
  CHECK(gorenstein_gamma(f5).holds);
  auto r5 = crepant_resolve(f5);
  check_resolution(f5, r5);
  CHECK(r5.euler == 5);
  CHECK(r5.c_x == 2);  // (order - 1) / 2 for an isolated abelian point
  auto inv5 = resolution_invariants(r5);
  CHECK(inv5.b2 == 2);
  CHECK(inv5.b4 == 2);

  QuotientSpec trivial;
  trivial.order = 1;
  Fan f1 = quotient_fan(trivial);
  CHECK(crepant_resolve(f1).euler == 1);
}

TEST_CASE("quotient spec rejections") {
  QuotientSpec notsl;
  notsl.n = 3;
  notsl.order = 5;
  notsl.weights = {{Rat(1, 5), Rat(1, 5), Rat(2, 5)}};
  CHECK_THROWS_AS(quotient_fan(notsl), DomainError);
  try {
    quotient_fan(notsl);
  } catch (const DomainError& e) {
    CHECK(e.name() == std::string("NotGorensteinGroup"));
  }

  QuotientSpec fixed;
  fixed.n = 3;
  fixed.order = 5;
  fixed.weights = {{Rat(1, 5), Rat(4, 5), Rat(0, 1)}};
  CHECK_THROWS_AS(quotient_fan(fixed), DomainError);
  try {
    quotient_fan(fixed);
  } catch (const DomainError& e) {
    CHECK(e.name() == std::string("NonIsolated"));
  }
  fixed.isolated = false;
  Fan nf = quotient_fan(fixed);
  auto r = crepant_resolve(nf);
  check_resolution(nf, r);
  CHECK(r.euler == 5);
  CHECK(!r.compact_class_exists);  // boundary exceptional rays
}

TEST_CASE("quadrilateral family fans") {
  Fan f = spq_fan(5, 3);
  CHECK(f.rays == std::vector<LatVec>{v3(0, 0, 1), v3(1, 0, 1), v3(5, 5, 1), v3(1, 2, 1)});
  fan_validate(f);
  CHECK(gorenstein_gamma(f).holds);

  CHECK(spq_fan(2, 1).rays.size() == 4);
  CHECK_THROWS_AS(spq_fan(3, 3), DomainError);
  CHECK_THROWS_AS(spq_fan(4, 2), DomainError);
  CHECK_THROWS_AS(spq_fan(1, 2), DomainError);

  CHECK(spq_quasi_regular(7, 3));
  CHECK(spq_quasi_regular(13, 7));
  CHECK(!spq_quasi_regular(2, 1));
  CHECK(!spq_quasi_regular(5, 3));
}
