#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "orbitlab/algebra/errors.hpp"
#include "orbitlab/degrees/degrees.hpp"
#include "orbitlab/maps/monomial_map.hpp"
#include "orbitlab/orbits/orbits.hpp"

using namespace orbitlab;
using namespace orbitlab::orbits;
using algebra::parse_poly;
using algebra::Rational;
using maps::make_map;

namespace {

const RationalMapPn& cremona() {
  static const RationalMapPn s = make_map({"x1*x2", "x0*x2", "x0*x1"});
  return s;
}

const RationalMapPn& square_map() {
  static const RationalMapPn s = make_map({"x0^2", "x1^2"});
  return s;
}

OrbitRecord drop_front(OrbitRecord rec, std::size_t k) {
  rec.heights.erase(rec.heights.begin(), rec.heights.begin() + static_cast<long>(k));
  rec.points.erase(rec.points.begin(), rec.points.begin() + static_cast<long>(k));
  return rec;
}

// Rank mod a prime of the degree-d evaluation matrix, built here from scratch.
std::size_t oracle_rank(const std::vector<ProjPointQ>& pts, unsigned d, unsigned long p) {
  const std::size_t nv = pts.front().coords().size();
  std::vector<std::vector<unsigned>> mons;
  std::vector<unsigned> e(nv, 0);
  auto gen = [&](auto&& self, std::size_t i, unsigned left) -> void {
    if (i + 1 == nv) {
      e[i] = left;
      mons.push_back(e);
      return;
    }
    for (unsigned k = 0; k <= left; ++k) {
      e[i] = k;
      self(self, i + 1, left - k);
    }
  };
  gen(gen, 0, d);
  mpz_class mod = p;
  std::vector<std::vector<mpz_class>> m;
  for (const auto& pt : pts) {
    std::vector<mpz_class> row;
    for (const auto& mon : mons) {
      mpz_class v = 1;
      for (std::size_t k = 0; k < nv; ++k) {
        mpz_class r;
        mpz_powm_ui(r.get_mpz_t(), pt.coords()[k].get_mpz_t(), mon[k], mod.get_mpz_t());
        v = (v * r) % mod;
      }
      row.push_back(v);
    }
    m.push_back(row);
  }
  return oracle::rank_mod(m, p);
}

IntMatrix random_gl3(std::mt19937_64& rng) {
  for (;;) {
    auto m = oracle::random_matrix(rng, 3, -2, 2);
    mpz_class d = oracle::cofactor_det(m);
    if (d == 1 || d == -1) return IntMatrix::from_rows(m);
  }
}

}  // namespace

TEST_CASE("iterate_orbit statuses") {
  OrbitRecord r = iterate_orbit(cremona(), ProjPointQ{1, 2, 3}, 10);
  CHECK(r.status == OrbitStatus::periodic);
  CHECK(r.period == 2);
  CHECK(r.preperiod == 0);
  REQUIRE(r.points.size() == 2);
  CHECK(r.points[1] == ProjPointQ{6, 3, 2});
  CHECK(r.status_text() == "periodic(2,0)");

  OrbitRecord ind = iterate_orbit(cremona(), ProjPointQ{1, 0, 0}, 10);
  CHECK(ind.status == OrbitStatus::indeterminate);
  CHECK(ind.indeterminate_at == 0);

  OrbitRecord p = iterate_orbit(square_map(), ProjPointQ{2, 1}, 10);
  CHECK(p.status == OrbitStatus::complete);
  CHECK(p.points.size() == 11);

  OrbitRecord t = iterate_orbit(square_map(), ProjPointQ{3, 2}, 40, 1000);
  CHECK(t.status == OrbitStatus::truncated);

  OrbitRecord pre = iterate_orbit(square_map(), ProjPointQ{-1, 1}, 10);
  CHECK(pre.status == OrbitStatus::periodic);
  CHECK(pre.preperiod == 1);
  CHECK(pre.period == 1);
}

TEST_CASE("property: morphisms never hit indeterminacy") {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<long> c(-20, 20);
  auto f = make_map({"x0^3", "x1^3", "x2^3"});
  for (int k = 0; k < 50; ++k) {
    std::vector<algebra::Integer> v{c(rng), c(rng), c(rng) + 41};
    OrbitRecord r = iterate_orbit(f, ProjPointQ(v), 6);
    CHECK(r.status != OrbitStatus::indeterminate);
    CHECK(r.status != OrbitStatus::truncated);
  }
}

TEST_CASE("torus fast path") {
  OrbitRecord r = iterate_torus_orbit({{2, 1}, {1, 1}}, {Rational(2), Rational(3)}, 200);
  CHECK(r.status == OrbitStatus::complete);
  CHECK(r.heights.size() == 201);
  CHECK(r.points_elided);
  OrbitRecord fixed = iterate_torus_orbit({{2, 1}, {1, 1}}, {Rational(1), Rational(1)}, 50);
  CHECK(fixed.status == OrbitStatus::periodic);
  CHECK(fixed.period == 1);
  OrbitRecord perm = iterate_torus_orbit({{0, 1}, {1, 0}}, {Rational(2), Rational(-3, 5)}, 50);
  CHECK(perm.status == OrbitStatus::periodic);
  CHECK(perm.period == 2);
}

TEST_CASE("alpha estimates") {
  OrbitRecord p = iterate_orbit(square_map(), ProjPointQ{2, 1}, 20);
  AlphaEstimate a = alpha_estimate(p);
  CHECK(std::fabs(a.slope - 2.0) < 1e-6);
  CHECK(a.cesaro > 1.0);
  CHECK(a.cesaro <= 2.0);
  CHECK(a.window_end == 20);
  CHECK(a.window_begin == 14);

  OrbitRecord per = iterate_orbit(cremona(), ProjPointQ{1, 2, 3}, 10);
  AlphaEstimate one = alpha_estimate(per);
  CHECK(one.slope == 1.0);
  CHECK(one.cesaro == 1.0);

  OrbitRecord perron = iterate_torus_orbit({{2, 1}, {1, 1}}, {Rational(2), Rational(3)}, 200);
  double lam = degrees::monomial_dyndeg({{2, 1}, {1, 1}}, 1, 1e-9).estimate;
  CHECK(std::fabs(alpha_estimate(perron).slope - lam) < 1e-3);

  OrbitRecord shortrec = iterate_orbit(square_map(), ProjPointQ{2, 1}, 4);
  CHECK_THROWS_AS(alpha_estimate(shortrec), std::invalid_argument);
}

TEST_CASE("property: alpha tail and shift invariance on power maps") {
  for (long d : {2L, 3L}) {
    auto f = make_map({"x0^" + std::to_string(d), "x1^" + std::to_string(d)});
    for (long s : {2L, 3L, 5L}) {
      const std::size_t horizon = d == 2 ? 15 : 10;
      OrbitRecord rec = iterate_orbit(f, ProjPointQ{s, 1}, horizon);
      REQUIRE(rec.status == OrbitStatus::complete);
      double base = alpha_estimate(rec).slope;
      for (std::size_t k = 1; k <= horizon / 3; ++k) CHECK(std::fabs(alpha_estimate(drop_front(rec, k)).slope - base) < 1e-6);
      OrbitRecord shifted = iterate_orbit(f, rec.points[1], horizon - 1);
      CHECK(std::fabs(alpha_estimate(shifted).slope - base) < 1e-6);
    }
  }
}

TEST_CASE("alpha bound checks") {
  OrbitRecord p = iterate_orbit(square_map(), ProjPointQ{2, 1}, 20);
  CHECK(check_alpha_bound(p, 2.0, 1e-6).pass);
  CHECK_FALSE(check_alpha_bound(p, 1.5, 0.05).pass);
  CHECK_FALSE(check_alpha_bound(p, 1.5, 0.05).detail.empty());
  OrbitRecord per = iterate_orbit(cremona(), ProjPointQ{1, 2, 3}, 10);
  CHECK(check_alpha_bound(per, 1.0, 0.0).pass);
}

TEST_CASE("property: alpha bound on random GL3 torus orbits") {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<long> num(1, 9);
  for (int k = 0; k < 20; ++k) {
    IntMatrix a = random_gl3(rng);
    double upper = degrees::monomial_dyndeg(a, 1, 1e-9).upper;
    OrbitRecord rec = iterate_torus_orbit(a, {Rational(num(rng) + 1), Rational(-num(rng), 7), Rational(3, 1 + num(rng))}, 100);
    CHECK_MESSAGE(check_alpha_bound(rec, upper, 0.05).pass, a.to_string());
  }
}

TEST_CASE("return sets") {
  OrbitRecord p = iterate_orbit(square_map(), ProjPointQ{2, 1}, 10);
  ReturnSetReport empty = return_set(p, parse_poly("x0 - x1", 2));
  CHECK(empty.hits.empty());
  CHECK(empty.consistent);

  // sigma swaps [1:2:3] and [6:3:2]; only the first lies on 2x0 = x1
  OrbitRecord per = iterate_orbit(cremona(), ProjPointQ{1, 2, 3}, 20);
  ReturnSetReport even = return_set(per, parse_poly("2*x0 - x1", 3));
  REQUIRE(even.progressions.size() == 1);
  CHECK(even.progressions[0].start == 0);
  CHECK(even.progressions[0].step == 2);
  CHECK(even.progressions[0].count == 11);
  CHECK(even.finite.empty());
  CHECK(even.consistent);

  // preperiodic: [-1:1] -> [1:1] fixed; w = x0 + x1 hits only n = 0
  OrbitRecord pre = iterate_orbit(square_map(), ProjPointQ{-1, 1}, 12);
  ReturnSetReport once = return_set(pre, parse_poly("x0 + x1", 2));
  CHECK(once.hits == std::vector<std::size_t>{0});
  CHECK(once.finite == std::vector<std::size_t>{0});
  CHECK(once.progressions.empty());

  ReturnSetReport all = return_set(pre, parse_poly("x0 - x1", 2));
  REQUIRE(all.progressions.size() == 1);
  CHECK(all.progressions[0].start == 1);
  CHECK(all.progressions[0].step == 1);

  CHECK_THROWS_AS(return_set(per, parse_poly("0", 3)), std::invalid_argument);
  CHECK_THROWS_AS(return_set(per, parse_poly("x0 + 1", 3)), std::invalid_argument);
  OrbitRecord fast = iterate_torus_orbit({{2, 1}, {1, 1}}, {Rational(2), Rational(3)}, 10);
  CHECK_THROWS_AS(return_set(fast, parse_poly("x0", 3)), Unsupported);
}

TEST_CASE("interpolation examples") {
  std::vector<ProjPointQ> line;
  for (long k = 1; k <= 10; ++k) line.push_back(ProjPointQ{k, k, k * k + 1});
  InterpolationReport r = orbit_zariski_test(line, 1);
  CHECK(r.kernel_dim >= 1);
  CHECK(r.certified);

  InterpolationReport single = orbit_zariski_test({ProjPointQ{1, 2, 3}}, 1);
  CHECK(single.kernel_dim == 2);
  CHECK(single.underdetermined);

  std::vector<ProjPointQ> pts;
  std::vector<std::size_t> dims;
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<long> c(-30, 30);
  for (int k = 0; k < 15; ++k) {
    pts.push_back(ProjPointQ{c(rng), c(rng), 31 + c(rng)});
    dims.push_back(orbit_zariski_test(pts, 2).kernel_dim);
  }
  for (std::size_t k = 1; k < dims.size(); ++k) CHECK(dims[k] <= dims[k - 1]);
  CHECK(dims.back() == 0);
}

TEST_CASE("interpolation over a dense monomial orbit") {
  // plastic-number companion: birational, lambda_3 = 1 < lambda_1
  IntMatrix a{{0, 0, 1}, {1, 0, 1}, {0, 1, 0}};
  REQUIRE(degrees::zdo_criterion(a, 1e-9).verdict == degrees::ZdoVerdict::satisfied);
  OrbitRecord rec = iterate_orbit(maps::monomial_to_rational(a), ProjPointQ{2, 3, 5, 1}, 39);
  REQUIRE(rec.points.size() == 40);
  ZariskiScan scan = zariski_scan(rec.points, 3);
  CHECK(scan.no_obstruction);
  for (const auto& rep : scan.reports) CHECK(rep.kernel_dim == 0);
  // independent: rank mod a different prime is already full
  CHECK(oracle_rank(rec.points, 3, 1000000007UL) == 20);
}

TEST_CASE("recursive gap tracker") {
  OrbitRecord p = iterate_orbit(square_map(), ProjPointQ{2, 1}, 12);
  GapReport g = recursive_gap_tracker(p, 1.0, 1, 1.9);
  REQUIRE(g.first_positive.has_value());
  CHECK(*g.first_positive == 0);
  for (double r : g.ratios) CHECK(r == doctest::Approx(2.0));
  CHECK(g.fraction_at_least_beta == 1.0);

  OrbitRecord per = iterate_orbit(cremona(), ProjPointQ{1, 2, 3}, 12);
  CHECK(recursive_gap_tracker(per, 1.0, 1, 1.0).degenerate());
  CHECK(recursive_gap_tracker(per, 2.0, 1, 1.0).degenerate());
  OrbitRecord fix = iterate_orbit(cremona(), ProjPointQ{1, 1, 1}, 12);
  CHECK(recursive_gap_tracker(fix, 1.0, 1, 1.0).degenerate());

  OrbitRecord perron = iterate_torus_orbit({{2, 1}, {1, 1}}, {Rational(2), Rational(3)}, 60);
  double lam = (3 + std::sqrt(5.0)) / 2;
  GapReport pg = recursive_gap_tracker(perron, 1.0 / lam, 1, 2.5);
  REQUIRE(pg.first_positive.has_value());
  REQUIRE(pg.ratios.size() > 10);
  for (std::size_t k = pg.ratios.size() * 2 / 3; k < pg.ratios.size(); ++k)
    CHECK(std::fabs(pg.ratios[k] - lam) / lam < 0.05);

  CHECK_THROWS_AS(recursive_gap_tracker(p, 1.0, 5, 1.0), std::invalid_argument);
}

TEST_CASE("high alpha search") {
  SearchReport pw = high_alpha_search(square_map(), 10, 9, 20, 0.05, 2.0, 1);
  CHECK(pw.hits() >= 1);
  SearchReport s = high_alpha_search(cremona(), 20, 9, 20, 0.05, 1.0, 2);
  CHECK(s.hits() >= 1);
  for (const auto& e : s.ranked) CHECK(e.alpha.slope == 1.0);
  SearchReport t = high_alpha_search_torus({{2, 1}, {1, 1}}, 100, 9, 100, 0.05,
                                           degrees::monomial_dyndeg({{2, 1}, {1, 1}}, 1, 1e-9).upper, 3);
  CHECK(t.hits() >= 1);
  REQUIRE_FALSE(t.ranked.empty());
  CHECK(t.ranked.front().alpha.slope <= 2.618034 * 1.001);
  CHECK_THROWS_AS(rank_seeds({}, 1.0, 0.0), std::invalid_argument);
}
