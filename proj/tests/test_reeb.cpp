#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cmath>
#include <random>

#include "calabi/errors.hpp"
#include "calabi/reeb.hpp"
#include "calabi/resolve.hpp"

using namespace calabi;

namespace {

LatVec v3(long long x, long long y, long long z) { return {Int(x), Int(y), Int(z)}; }

Fan c3_fan() { return fan_from_cone(make_cone({v3(1, 0, 0), v3(0, 1, 0), v3(0, 0, 1)}, 3)); }

Fan pentagon_fan() {
  return fan_from_cone(make_cone(
      {v3(0, 0, 1), v3(0, 1, 1), v3(1, 2, 1), v3(2, 1, 1), v3(1, 0, 1)}, 3));
}

Fan quadric_fan() {
  return fan_from_cone(make_cone({v3(0, 0, 1), v3(1, 0, 1), v3(1, 1, 1), v3(0, 1, 1)}, 3));
}

// boundary-free symplectic potential whose second derivatives the hessian
// routine claims to produce
double potential(const Fan& f, const std::array<double, 3>& xi, const std::array<double, 3>& y) {
  auto ldot = [&](const LatVec& u) {
    return to_double(Rat(u[0])) * y[0] + to_double(Rat(u[1])) * y[1] + to_double(Rat(u[2])) * y[2];
  };
  double acc = 0, linf = 0;
  for (const LatVec& u : f.rays) {
    double l = ldot(u);
    acc += l * std::log(l);
    linf += l;
  }
  double lxi = xi[0] * y[0] + xi[1] * y[1] + xi[2] * y[2];
  return (acc + lxi * std::log(lxi) - linf * std::log(linf)) / 2;
}

double central_second(const Fan& f, const std::array<double, 3>& xi,
                      const std::array<double, 3>& y, size_t i, size_t j, double h) {
  if (i == j) {
    auto p = y, m = y;
    p[i] += h;
    m[i] -= h;
    return (potential(f, xi, p) - 2 * potential(f, xi, y) + potential(f, xi, m)) / (h * h);
  }
  auto pp = y, pm = y, mp = y, mm = y;
  pp[i] += h;
  pp[j] += h;
  pm[i] += h;
  pm[j] -= h;
  mp[i] -= h;
  mp[j] += h;
  mm[i] -= h;
  mm[j] -= h;
  return (potential(f, xi, pp) - potential(f, xi, pm) - potential(f, xi, mp) +
          potential(f, xi, mm)) /
         (4 * h * h);
}

double fd_hessian_entry(const Fan& f, const std::array<double, 3>& xi,
                        const std::array<double, 3>& y, size_t i, size_t j) {
  // Richardson-extrapolated central differences
  const double h = 2e-4;
  return (4 * central_second(f, xi, y, i, j, h / 2) - central_second(f, xi, y, i, j, h)) / 3;
}

void check_hessian_against_fd(const Fan& f, const RatVec& xi, const RatVec& y) {
  std::array<double, 3> xd{to_double(xi[0]), to_double(xi[1]), to_double(xi[2])};
  std::array<double, 3> yd{to_double(y[0]), to_double(y[1]), to_double(y[2])};
  auto h = canonical_hessian(f, xi, y);
  for (size_t i = 0; i < 3; ++i)
    for (size_t j = 0; j < 3; ++j)
      CHECK(std::fabs(to_double(h.hessian[i][j]) - fd_hessian_entry(f, xd, yd, i, j)) < 1e-6);
}

double mc_char_volume(const Fan& f, const std::array<double, 3>& xi, unsigned seed) {
  // bounding box from the exact vertices, padded; sampling is independent of
  // the volume computation under test
  RatVec exact_xi{rat_of_double(xi[0]), rat_of_double(xi[1]), rat_of_double(xi[2])};
  std::vector<RatVec> normals;
  RatVec offsets;
  for (const LatVec& u : f.rays) {
    normals.push_back({Rat(u[0]), Rat(u[1]), Rat(u[2])});
    offsets.push_back(0);
  }
  normals.push_back({-exact_xi[0], -exact_xi[1], -exact_xi[2]});
  offsets.push_back(Rat(-1, 2));
  auto verts = halfspace_vertices(normals, offsets);
  double lo = 0, hi = 0;
  for (const RatVec& v : verts)
    for (const Rat& c : v) {
      lo = std::min(lo, to_double(c));
      hi = std::max(hi, to_double(c));
    }
  lo -= 0.25;
  hi += 0.25;

  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> pick(lo, hi);
  const int samples = 400000;
  int inside = 0;
  for (int s = 0; s < samples; ++s) {
    std::array<double, 3> y{pick(rng), pick(rng), pick(rng)};
    bool ok = xi[0] * y[0] + xi[1] * y[1] + xi[2] * y[2] <= 0.5;
    for (size_t k = 0; ok && k < f.rays.size(); ++k) {
      double l = 0;
      for (size_t i = 0; i < 3; ++i) l += to_double(Rat(f.rays[k][i])) * y[i];
      ok = l >= 0;
    }
    if (ok) ++inside;
  }
  double box = (hi - lo) * (hi - lo) * (hi - lo);
  return box * double(inside) / double(samples);
}

RatVec interior_point(const Fan& f, std::mt19937& rng) {
  Cone dual = dual_cone(make_cone(f.rays, 3));
  std::uniform_int_distribution<int> num(1, 7), den(1, 5);
  RatVec y(3, Rat(0));
  for (const LatVec& w : dual.gens) {
    Rat c(num(rng), den(rng));
    for (size_t i = 0; i < 3; ++i) y[i] += c * Rat(w[i]);
  }
  // scale so the total ray pairing equals the ray count, which keeps the
  // finite-difference comparison well conditioned
  Rat linf = 0;
  for (const LatVec& u : f.rays) linf += dot(u, y);
  for (Rat& c : y) c *= Rat(Int(f.rays.size())) / linf;
  return y;
}

}  // namespace

TEST_CASE("canonical hessian matches finite differences of the potential") {
  check_hessian_against_fd(c3_fan(), {Rat(1), Rat(1), Rat(1)}, {Rat(1, 6), Rat(1, 6), Rat(1, 6)});
  check_hessian_against_fd(c3_fan(), {Rat(1), Rat(1), Rat(1)}, {Rat(1, 2), Rat(1, 4), Rat(1, 4)});
  std::mt19937 rng(71);
  for (Fan f : {pentagon_fan(), quadric_fan(), spq_fan(5, 3)}) {
    for (int t = 0; t < 4; ++t) {
      RatVec y = interior_point(f, rng);
      RatVec xi{Rat(2), Rat(2), Rat(3)};
      check_hessian_against_fd(f, xi, y);
    }
  }
}

TEST_CASE("canonical hessian closed forms on the octant") {
  Fan f = c3_fan();
  RatVec xi{Rat(1), Rat(1), Rat(1)};
  auto h = canonical_hessian(f, xi, {Rat(1, 6), Rat(1, 6), Rat(1, 6)});
  for (size_t i = 0; i < 3; ++i)
    for (size_t j = 0; j < 3; ++j) CHECK(h.hessian[i][j] == (i == j ? Rat(3) : Rat(0)));
  CHECK(h.positive_definite);
  CHECK(h.l_xi == Rat(1, 2));
  CHECK(h.l_inf == Rat(1, 2));

  auto h2 = canonical_hessian(f, xi, {Rat(1, 2), Rat(1, 4), Rat(1, 4)});
  CHECK(h2.hessian[0][0] == Rat(1));
  CHECK(h2.hessian[1][1] == Rat(2));
  CHECK(h2.hessian[2][2] == Rat(2));
  CHECK(h2.hessian[0][1] == Rat(0));

  CHECK_THROWS_AS(canonical_hessian(f, xi, {Rat(0), Rat(1), Rat(1)}), DomainError);
}

TEST_CASE("moment-coordinate identity vanishes exactly") {
  std::mt19937 rng(72);
  for (Fan f : {c3_fan(), pentagon_fan(), quadric_fan(), spq_fan(7, 4)}) {
    for (int t = 0; t < 8; ++t) {
      RatVec y = interior_point(f, rng);
      std::uniform_int_distribution<int> num(1, 9);
      RatVec xi{Rat(num(rng), 2), Rat(num(rng), 3), Rat(num(rng))};
      RatVec r = reeb_identity_residual(f, xi, y);
      CHECK(r == RatVec{Rat(0), Rat(0), Rat(0)});
    }
  }
}

TEST_CASE("hessian determinant scales with homogeneity degree -3") {
  Fan f = pentagon_fan();
  RatVec xi{Rat(5, 2), Rat(5, 2), Rat(3)};
  RatVec y{Rat(2), Rat(3), Rat(7)};
  RatVec y2{Rat(4), Rat(6), Rat(14)};
  Rat d1 = det_rat(canonical_hessian(f, xi, y).hessian);
  Rat d2 = det_rat(canonical_hessian(f, xi, y2).hessian);
  CHECK(d2 * 8 == d1);
}

TEST_CASE("characteristic volume closed forms and scaling") {
  Fan f = c3_fan();
  CHECK(char_volume(f, {Rat(1), Rat(1), Rat(1)}) == Rat(1, 48));
  CHECK(char_volume(f, {Rat(2), Rat(2), Rat(2)}) == Rat(1, 384));
  CHECK(char_volume(f, {Rat(1), Rat(2), Rat(3)}) == Rat(1, 288));
  CHECK_THROWS_AS(char_volume(f, {Rat(0), Rat(1), Rat(1)}), DomainError);
}

TEST_CASE("characteristic volume agrees with sampling") {
  CHECK(std::fabs(to_double(char_volume(c3_fan(), {Rat(1), Rat(1), Rat(1)})) -
                  mc_char_volume(c3_fan(), {1, 1, 1}, 73)) < 0.012);
  CHECK(std::fabs(to_double(char_volume(pentagon_fan(), {Rat(5, 2), Rat(5, 2), Rat(3)})) -
                  mc_char_volume(pentagon_fan(), {2.5, 2.5, 3}, 74)) < 0.012);
  CHECK(std::fabs(to_double(char_volume(quadric_fan(), {Rat(3, 2), Rat(3, 2), Rat(3)})) -
                  mc_char_volume(quadric_fan(), {1.5, 1.5, 3}, 75)) < 0.012);
}

TEST_CASE("checked evaluation agrees with the exact kernel") {
  for (Fan f : {c3_fan(), pentagon_fan(), quadric_fan(), spq_fan(5, 3), spq_fan(7, 3)}) {
    for (double t : {2.2, 2.5, 2.8}) {
      std::array<double, 3> xi{t, t + 0.125, 3};
      RatVec exact_xi{rat_of_double(xi[0]), rat_of_double(xi[1]), rat_of_double(xi[2])};
      double checkedv = char_volume_checked(f, xi);
      CHECK(std::fabs(checkedv - to_double(char_volume(f, exact_xi))) < 1e-12);
    }
  }
}

TEST_CASE("volume minimization on the octant") {
  auto r = minimize_volume(c3_fan());
  CHECK(r.converged);
  CHECK(std::fabs(r.xi[0] - 1) < 1e-6);
  CHECK(std::fabs(r.xi[1] - 1) < 1e-6);
  CHECK(std::fabs(r.xi[2] - 1) < 1e-6);
  CHECK(std::fabs(r.volume - 1.0 / 48.0) < 1e-12);
}

TEST_CASE("volume minimization on the two-points cone") {
  Fan f = pentagon_fan();

  // independent scan along the symmetric slice before trusting the optimizer
  double best_t = 0, best_v = 1e300;
  for (int k = 2200; k <= 3100; ++k) {
    double t = double(k) / 1000.0;
    double v = char_volume_checked(f, {t, t, 3});
    if (v < best_v) {
      best_v = v;
      best_t = t;
    }
  }
  const double closed = 9.0 / 16.0 * (-1.0 + std::sqrt(33.0));
  CHECK(std::fabs(best_t - closed) < 2e-3);

  auto r = minimize_volume(f);
  CHECK(r.converged);
  CHECK(std::fabs(r.xi[0] - closed) < 1e-6);
  CHECK(std::fabs(r.xi[1] - closed) < 1e-6);
  CHECK(std::fabs(r.xi[2] - 3) < 1e-12);
  CHECK(r.volume <= best_v);
  CHECK(r.volume < char_volume_checked(f, {closed + 0.01, closed - 0.01, 3}));
  CHECK(!quasi_regularity(r.xi).has_value());
}

TEST_CASE("volume minimization on the quadric cone") {
  auto r = minimize_volume(quadric_fan());
  CHECK(r.converged);
  CHECK(std::fabs(r.xi[0] - 1.5) < 1e-7);
  CHECK(std::fabs(r.xi[1] - 1.5) < 1e-7);
  CHECK(std::fabs(r.xi[2] - 3) < 1e-12);
  auto q = quasi_regularity(r.xi, 100, 1e-8);
  REQUIRE(q.has_value());
  CHECK(*q == RatVec{Rat(3, 2), Rat(3, 2), Rat(3)});
}

TEST_CASE("multistart in threads agrees with the single run") {
  Fan f = pentagon_fan();
  auto one = minimize_volume(f, 1e-10, 1);
  auto four = minimize_volume(f, 1e-10, 4);
  CHECK(std::fabs(one.xi[0] - four.xi[0]) < 1e-8);
  CHECK(std::fabs(one.xi[1] - four.xi[1]) < 1e-8);
  CHECK(std::fabs(one.volume - four.volume) < 1e-12);
}

TEST_CASE("quasi-regularity detection on a square-discriminant cone") {
  CHECK(spq_quasi_regular(7, 3));
  auto r = minimize_volume(spq_fan(7, 3));
  CHECK(r.converged);
  auto q = quasi_regularity(r.xi, 10000, 1e-8);
  CHECK(q.has_value());

  CHECK(!spq_quasi_regular(5, 3));
}

TEST_CASE("quasi-regularity approximation basics") {
  auto q = quasi_regularity({0.5, 0.25, 3.0}, 10, 1e-12);
  REQUIRE(q.has_value());
  CHECK(*q == RatVec{Rat(1, 2), Rat(1, 4), Rat(3)});
  CHECK(!quasi_regularity({std::sqrt(2.0), 1.0, 1.0}, 10000, 1e-9).has_value());
  CHECK_THROWS_AS(quasi_regularity({1, 1, 1}, 0, 1e-9), DomainError);
}
