#ifndef ORBITLAB_ALGEBRA_INTEGER_HPP
#define ORBITLAB_ALGEBRA_INTEGER_HPP

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace orbitlab::algebra {

using Integer = mpz_class;
using Rational = mpq_class;

// Number of bits of |z| (0 for z = 0).
std::size_t bit_size(const Integer& z);

// Natural log of |z|, accurate to long double precision even when |z|
// overflows every floating type. Requires z != 0.
long double log_abs(const Integer& z);

bool is_perfect_square(const Integer& z);

// Prime factorisation of |z| as (prime, exponent) pairs in increasing prime
// order. |z| <= 1 yields an empty list. Trial division followed by
// Pollard-Brent rho.
std::vector<std::pair<Integer, unsigned long>> factor_integer(const Integer& z);

// Parses "a" or "a/b" (optional sign, decimal digits). Throws ParseError.
Rational parse_rational(const std::string& text);

}  // namespace orbitlab::algebra

#endif
