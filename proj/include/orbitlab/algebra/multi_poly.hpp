#ifndef ORBITLAB_ALGEBRA_MULTI_POLY_HPP
#define ORBITLAB_ALGEBRA_MULTI_POLY_HPP

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "orbitlab/algebra/integer.hpp"

namespace orbitlab::algebra {

using Exponents = std::vector<std::uint32_t>;

struct Term {
  Exponents exps;
  Integer coeff;
};

// Graded lexicographic comparison: total degree first, then lexicographic
// with x0 > x1 > ... . Returns <0, 0, >0.
int grlex_compare(const Exponents& a, const Exponents& b);

// Sparse multivariate polynomial over Z in variables x0..x{nvars-1}.
//
// Terms are kept sorted in decreasing graded lexicographic order, with no
// repeated exponent vectors and no zero coefficients, so two polynomials are
// equal iff their term vectors are equal.
class MultiPoly {
 public:
  // Degree of the zero polynomial.
  static constexpr long kZeroDegree = std::numeric_limits<long>::min();

  MultiPoly() = default;
  explicit MultiPoly(std::size_t nvars) : nvars_(nvars) {}

  static MultiPoly constant(std::size_t nvars, const Integer& c);
  static MultiPoly variable(std::size_t nvars, std::size_t index);
  static MultiPoly monomial(Exponents exps, const Integer& c);
  // Sorts, merges equal exponents and drops zeros.
  static MultiPoly from_terms(std::size_t nvars, std::vector<Term> terms);

  std::size_t nvars() const { return nvars_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  bool is_monomial() const { return terms_.size() == 1; }
  bool is_homogeneous() const;

  long degree() const;
  // Largest exponent of x{var} (kZeroDegree for zero).
  long degree_in(std::size_t var) const;
  bool involves(std::size_t var) const;

  // Leading term in grlex order. Requires !is_zero().
  const Term& leading_term() const { return terms_.front(); }
  const Integer& leading_coeff() const { return terms_.front().coeff; }

  // Nonnegative gcd of the coefficients (0 for the zero polynomial).
  Integer content() const;
  // Division by the content, sign chosen so the leading coefficient is > 0.
  MultiPoly primitive_part() const;
  // Componentwise minimum of the exponent vectors (the largest monomial
  // dividing every term). Requires !is_zero().
  Exponents monomial_content() const;

  Integer evaluate(std::span<const Integer> point) const;

  MultiPoly operator-() const;
  MultiPoly& operator+=(const MultiPoly& other);
  MultiPoly& operator-=(const MultiPoly& other);
  MultiPoly& operator*=(const Integer& c);

  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(MultiPoly a, const Integer& c) { return a *= c; }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
  friend bool operator==(const MultiPoly& a, const MultiPoly& b);

  // Canonical text form, e.g. "3*x0^2*x1 - x2 + 5".
  std::string to_string() const;

 private:
  std::size_t nvars_ = 0;
  std::vector<Term> terms_;
};

// Exact product. When term_cap is nonzero and the product accumulates more
// distinct monomials than that, throws TermCapExceeded.
MultiPoly poly_mul(const MultiPoly& p, const MultiPoly& q, std::size_t term_cap = 0);

MultiPoly poly_pow(const MultiPoly& p, unsigned long e, std::size_t term_cap = 0);

// Substitutes subs[i] for x_i. Throws ArityError when subs.size() != nvars
// or the substitutes disagree on their number of variables.
MultiPoly poly_compose(const MultiPoly& p, std::span<const MultiPoly> subs,
                       std::size_t term_cap = 0);

// Returns p / q when q divides p exactly in Z[x], nullopt otherwise.
std::optional<MultiPoly> poly_divide_exact(const MultiPoly& p, const MultiPoly& q);

// Greatest common divisor with positive leading coefficient;
// gcd(p, 0) is p normalised, gcd(0, 0) is 0.
MultiPoly poly_gcd(const MultiPoly& p, const MultiPoly& q);

// Parses the grammar: integers, x0..x{nvars-1}, + - * ^ and parentheses.
// Throws ParseError with a 1-based column.
MultiPoly parse_poly(const std::string& text, std::size_t nvars);

}  // namespace orbitlab::algebra

#endif
