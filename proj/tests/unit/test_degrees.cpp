#include <chrono>
#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "orbitlab/degrees/degrees.hpp"
#include "orbitlab/maps/monomial_map.hpp"

using namespace orbitlab;
using namespace orbitlab::degrees;
using maps::make_map;
using maps::monomial_to_rational;

namespace {

const double kGolden = (1.0 + std::sqrt(5.0)) / 2.0;

std::pair<double, double> root_of(const std::vector<long>& coeffs, long lo, long hi) {
  return oracle::bisect_root(coeffs, lo, hi, 1e-12);
}

IntMatrix random_nonsingular(std::mt19937_64& rng, std::size_t n, long lo, long hi) {
  for (;;) {
    IntMatrix m = IntMatrix::from_rows(oracle::random_matrix(rng, n, lo, hi));
    if (m.determinant() != 0) return m;
  }
}

}  // namespace

TEST_CASE("degree sequences") {
  auto cremona = make_map({"x1*x2", "x0*x2", "x0*x1"});
  DegreeSequence s = degree_sequence(cremona, 10);
  REQUIRE(s.degs.size() == 11);
  for (std::size_t n = 0; n <= 10; ++n) CHECK(s.degs[n] == (n % 2 == 0 ? 1 : 2));
  CHECK_FALSE(s.truncated);

  DegreeSequence p = degree_sequence(make_map({"x0^2", "x1^2"}), 8);
  for (std::size_t n = 0; n <= 8; ++n) CHECK(p.degs[n] == (1L << n));

  CHECK_THROWS_AS(degree_sequence(cremona, 0), std::invalid_argument);
}

TEST_CASE("term cap truncates with a prefix") {
  auto f = make_map({"x0^2 + x1*x2 + x2^2", "x1^2 - x0*x2", "x2^2 + x0*x1"});
  DegreeSequence s = degree_sequence(f, 12, 500);
  CHECK(s.truncated);
  REQUIRE(s.degs.size() >= 2);
  for (std::size_t n = 0; n < s.degs.size(); ++n) CHECK(s.degs[n] == (1L << n));
}

TEST_CASE("homogenised Perron map tracks lambda_1") {
  DegreeSequence s = degree_sequence(monomial_to_rational({{2, 1}, {1, 1}}), 12);
  REQUIRE(s.degs.size() == 13);
  CHECK_FALSE(submultiplicativity_violation(s).has_value());
  auto [lo, hi] = root_of({1, -3, 1}, 2, 3);
  double d12 = std::pow(static_cast<double>(s.degs[12]), 1.0 / 12.0);
  CHECK(std::abs(d12 - 0.5 * (lo + hi)) / (0.5 * (lo + hi)) < 0.05);
  DynDegReport r = lambda1_estimate(s);
  CHECK(r.upper >= lo);
}

TEST_CASE("lambda1_estimate examples") {
  DegreeSequence power{{1, 3, 9, 27, 81, 243}, false};
  DynDegReport r = lambda1_estimate(power);
  CHECK(r.upper == doctest::Approx(3.0));
  CHECK(r.estimate == doctest::Approx(3.0));

  DegreeSequence alt{{1, 2, 1, 2, 1, 2, 1, 2, 1}, false};
  r = lambda1_estimate(alt);
  CHECK(r.upper == doctest::Approx(1.0));
  CHECK(r.estimate == doctest::Approx(1.0));

  DegreeSequence fib = degree_sequence(monomial_to_rational({{1, 1}, {1, 0}}), 15);
  r = lambda1_estimate(fib);
  CHECK(std::abs(r.estimate - kGolden) < 1e-2);
  CHECK(r.upper >= kGolden);
  CHECK_THROWS_AS(lambda1_estimate(DegreeSequence{{1, 2}, false}), std::invalid_argument);
}

TEST_CASE("monomial dynamical degrees") {
  IntMatrix a{{2, 1}, {1, 1}};
  DynDegReport l0 = monomial_dyndeg(a, 0, 1e-9);
  CHECK(l0.lower == 1.0);
  CHECK(l0.upper == 1.0);
  CHECK(l0.exact);
  auto [lo, hi] = root_of({1, -3, 1}, 2, 3);
  DynDegReport l1 = monomial_dyndeg(a, 1, 1e-9);
  CHECK(l1.lower <= hi);
  CHECK(l1.upper >= lo);
  CHECK(l1.upper - l1.lower <= 1e-9);
  DynDegReport l2 = monomial_dyndeg(a, 2, 1e-9);
  CHECK(l2.exact);
  CHECK(l2.lower == 1.0);

  IntMatrix c{{1, 1, 0}, {0, 1, 1}, {1, 0, 1}};
  CHECK(monomial_dyndeg(c, 3, 1e-9).lower == 2.0);
  CHECK(monomial_dyndeg(c, 3, 1e-9).exact);
  CHECK_THROWS_AS(monomial_dyndeg(c, 4, 1e-9), std::out_of_range);
  CHECK_THROWS_AS(monomial_dyndeg(IntMatrix{{1, 2}, {2, 4}}, 1, 1e-9), std::invalid_argument);
}

TEST_CASE("degree laws on diagonal matrices") {
  DegreeLawReport r = verify_degree_laws({{3, 0}, {0, 2}}, 3, 1e-9);
  CHECK(r.ok());
  REQUIRE(r.lambdas.size() == 3);
  CHECK(r.lambdas[1].lower <= 3.0);
  CHECK(r.lambdas[1].upper >= 3.0);
  CHECK(r.lambdas[2].lower == 6.0);
  CHECK_THROWS_AS(verify_degree_laws({{3, 0}, {0, 2}}, 1, 1e-9), std::invalid_argument);
}

TEST_CASE("property: degree laws on random 4x4 matrices") {
  std::mt19937_64 rng(2024);
  for (int k = 0; k < 25; ++k) {
    IntMatrix a = random_nonsingular(rng, 4, -2, 2);
    DegreeLawReport r = verify_degree_laws(a, 3, 1e-9);
    CHECK_MESSAGE(r.ok(), a.to_string());
    CHECK(r.lambdas[0].lower == 1.0);
    CHECK(r.lambdas[4].lower == mpz_class(abs(a.determinant())).get_d());
  }
}

TEST_CASE("property: sequence upper bound never undercuts exact lambda_1") {
  std::mt19937_64 rng(99);
  for (int k = 0; k < 8; ++k) {
    IntMatrix a = random_nonsingular(rng, 2, -2, 2);
    DegreeSequence s = degree_sequence(monomial_to_rational(a), 8);
    CHECK_FALSE(submultiplicativity_violation(s).has_value());
    DynDegReport seq = lambda1_estimate(s);
    DynDegReport exact = monomial_dyndeg(a, 1, 1e-9);
    CHECK_MESSAGE(seq.upper >= exact.lower * (1 - 1e-12), a.to_string());
  }
}

TEST_CASE("zdo criterion") {
  ZdoReport fib = zdo_criterion({{1, 1}, {1, 0}}, 1e-9);
  CHECK(fib.birational);
  CHECK(fib.verdict == ZdoVerdict::satisfied);
  CHECK(fib.monomial_invariant_free());
  CHECK_FALSE(fib.lambda3.has_value());

  ZdoReport block = zdo_criterion({{1, 1, 0}, {1, 0, 0}, {0, 0, 1}}, 1e-9);
  CHECK_FALSE(block.monomial_invariant_free());
  REQUIRE(block.lambda3.has_value());
  CHECK(block.lambda3->upper == 1.0);
  CHECK(block.lambda1->lower > 1.6);
  CHECK(block.verdict == ZdoVerdict::satisfied);

  for (const IntMatrix& p : {IntMatrix{{0, 1}, {1, 0}}, IntMatrix{{0, 1, 0}, {0, 0, 1}, {1, 0, 0}},
                             IntMatrix{{0, 0, 0, 1}, {1, 0, 0, 0}, {0, 0, 1, 0}, {0, 1, 0, 0}}, IntMatrix{{1}}}) {
    CHECK_MESSAGE(zdo_criterion(p, 1e-9).verdict == ZdoVerdict::fails, p.to_string());
  }
  CHECK(zdo_criterion({{2, 0}, {0, 2}}, 1e-9).verdict == ZdoVerdict::not_applicable);
  CHECK(to_string(ZdoVerdict::satisfied) == "criterion-satisfied");
}
