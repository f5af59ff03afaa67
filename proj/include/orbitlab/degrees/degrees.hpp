#ifndef ORBITLAB_DEGREES_DEGREES_HPP
#define ORBITLAB_DEGREES_DEGREES_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "orbitlab/algebra/int_matrix.hpp"
#include "orbitlab/algebra/spectral.hpp"
#include "orbitlab/maps/rational_map.hpp"

namespace orbitlab::degrees {

using algebra::IntMatrix;
using algebra::SpectralInterval;
using maps::RationalMapPn;

inline constexpr std::size_t kDefaultTermCap = 200000;

// kDefaultTermCap unless ORBITLAB_TERM_CAP holds a positive integer.
std::size_t term_cap_from_env();

struct DegreeSequence {
  std::vector<long> degs;  // degs[0] = 1
  // Set when the iterate outgrew the term cap (or 32-bit exponents); degs
  // is the computed prefix.
  bool truncated = false;

  std::size_t horizon() const { return degs.size() - 1; }
};

// d_n = degree of the reduced n-th iterate for n = 0..N.
DegreeSequence degree_sequence(const RationalMapPn& f, std::size_t horizon, std::size_t term_cap = kDefaultTermCap);

// First (m, n) with d_{m+n} > d_m d_n, if any.
std::optional<std::pair<std::size_t, std::size_t>> submultiplicativity_violation(const DegreeSequence& seq);

enum class DynDegMethod { exact_monomial, sequence_limit };

std::string to_string(DynDegMethod m);

struct DynDegReport {
  std::size_t i = 1;
  // exact_monomial: certified enclosure. sequence_limit: lower is the
  // heuristic tail estimate, upper = min_n d_n^{1/n} is rigorous.
  double lower = 0.0;
  double upper = 0.0;
  double estimate = 0.0;
  DynDegMethod method = DynDegMethod::exact_monomial;
  bool exact = false;
  // Tail window [window_begin, window_end] of the sequence estimate.
  std::size_t window_begin = 0;
  std::size_t window_end = 0;
};

// Needs at least three entries (d_0, d_1, d_2).
DynDegReport lambda1_estimate(const DegreeSequence& seq);

// lambda_i of x -> x^A as rho(wedge^i A); lambda_0 = 1, lambda_n = |det A|.
DynDegReport monomial_dyndeg(const IntMatrix& a, std::size_t i, double tol);

struct LawViolation {
  std::size_t i = 0;
  std::size_t m = 0;
  std::string what;
};

struct DegreeLawReport {
  std::size_t checks = 0;
  std::vector<LawViolation> violations;
  std::vector<DynDegReport> lambdas;  // i = 0..n

  bool ok() const { return violations.empty(); }
};

// Power compatibility (exactly on wedge powers and on certified radii) and
// log concavity for m = 1..m_max.
DegreeLawReport verify_degree_laws(const IntMatrix& a, std::size_t m_max, double tol);

enum class ZdoVerdict { satisfied, fails, inconclusive, not_applicable };

std::string to_string(ZdoVerdict v);

struct ZdoReport {
  ZdoVerdict verdict = ZdoVerdict::not_applicable;
  bool birational = false;
  std::optional<DynDegReport> lambda1;
  std::optional<DynDegReport> lambda3;  // only for n >= 3
  std::vector<std::vector<algebra::Integer>> invariant_monomials;
  // Only monomial invariants are checked; never a claim about all
  // invariant rational functions.
  bool monomial_invariant_free() const { return invariant_monomials.empty(); }
};

ZdoReport zdo_criterion(const IntMatrix& a, double tol);

}  // namespace orbitlab::degrees

#endif
