#include "orbitlab/algebra/integer.hpp"

#include <algorithm>
#include <cmath>

#include "orbitlab/algebra/errors.hpp"

namespace orbitlab::algebra {

std::size_t bit_size(const Integer& z) {
  if (z == 0) return 0;
  return mpz_sizeinbase(z.get_mpz_t(), 2);
}

long double log_abs(const Integer& z) {
  std::size_t bits = bit_size(z);
  if (bits <= 64) {
    return std::log(std::fabs(static_cast<long double>(z.get_d())));
  }
  // Keep the leading 64 bits so the mantissa survives in a long double.
  Integer top = abs(z) >> static_cast<mp_bitcnt_t>(bits - 64);
  Integer hi = top >> 32;
  Integer lo = top - (hi << 32);
  long double t = static_cast<long double>(hi.get_ui()) * 4294967296.0L +
                  static_cast<long double>(lo.get_ui());
  return std::log(t) + static_cast<long double>(bits - 64) * std::log(2.0L);
}

bool is_perfect_square(const Integer& z) {
  if (z < 0) return false;
  return mpz_perfect_square_p(z.get_mpz_t()) != 0;
}

namespace {

Integer pollard_brent(const Integer& n, unsigned long c_seed) {
  if (mpz_even_p(n.get_mpz_t())) return 2;
  Integer c = c_seed;
  Integer y = 2, x, q = 1, g = 1, ys;
  auto step = [&](const Integer& v) {
    Integer r = v * v + c;
    mpz_mod(r.get_mpz_t(), r.get_mpz_t(), n.get_mpz_t());
    return r;
  };
  unsigned long r = 1;
  const unsigned long m = 128;
  while (g == 1) {
    x = y;
    for (unsigned long i = 0; i < r; ++i) y = step(y);
    unsigned long k = 0;
    while (k < r && g == 1) {
      ys = y;
      for (unsigned long i = 0; i < std::min(m, r - k); ++i) {
        y = step(y);
        Integer d = abs(x - y);
        q = q * d;
        mpz_mod(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
      }
      mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
      k += m;
    }
    r *= 2;
  }
  if (g == n) {
    do {
      ys = step(ys);
      Integer d = abs(x - ys);
      mpz_gcd(g.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
    } while (g == 1);
  }
  return g;
}

void split(const Integer& n, std::vector<Integer>& primes) {
  if (n == 1) return;
  if (mpz_probab_prime_p(n.get_mpz_t(), 30) != 0) {
    primes.push_back(n);
    return;
  }
  for (unsigned long c = 1;; ++c) {
    Integer d = pollard_brent(n, c);
    if (d != n && d != 1) {
      split(d, primes);
      split(n / d, primes);
      return;
    }
  }
}

}  // namespace

std::vector<std::pair<Integer, unsigned long>> factor_integer(const Integer& z) {
  Integer n = abs(z);
  std::vector<Integer> primes;
  for (unsigned long p = 2; p < 10000 && n > 1; p += (p == 2 ? 1 : 2)) {
    if (Integer(p) * p > n) break;
    while (mpz_divisible_ui_p(n.get_mpz_t(), p) != 0) {
      primes.emplace_back(p);
      n /= p;
    }
  }
  if (n > 1) split(n, primes);
  std::sort(primes.begin(), primes.end());
  std::vector<std::pair<Integer, unsigned long>> out;
  for (const auto& p : primes) {
    if (!out.empty() && out.back().first == p) {
      ++out.back().second;
    } else {
      out.emplace_back(p, 1);
    }
  }
  return out;
}

Rational parse_rational(const std::string& text) {
  std::size_t slash = text.find('/');
  auto valid_int = [](const std::string& s, bool allow_sign) {
    std::size_t i = 0;
    if (allow_sign && i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
    if (i == s.size()) return false;
    return std::all_of(s.begin() + static_cast<long>(i), s.end(),
                       [](char ch) { return ch >= '0' && ch <= '9'; });
  };
  std::string num = text.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : text.substr(slash + 1);
  if (!valid_int(num, true)) throw ParseError("malformed rational '" + text + "'", 1, 1);
  if (!valid_int(den, false)) throw ParseError("malformed rational '" + text + "'", 1, slash + 2);
  if (!num.empty() && num[0] == '+') num.erase(0, 1);
  Integer d(den, 10);
  if (d == 0) throw ParseError("zero denominator in '" + text + "'", 1, slash + 2);
  Rational r(Integer(num, 10), d);
  r.canonicalize();
  return r;
}

}  // namespace orbitlab::algebra
