// Multivariate gcd over Z: monomial and integer content are split off first,
// a modular probe proves coprimality cheaply in the common case, and the
// remaining work is a recursive subresultant pseudo-remainder sequence in one
// chosen variable with coefficients in the other variables.

#include <algorithm>
#include <random>

#include "orbitlab/algebra/errors.hpp"
#include "orbitlab/algebra/multi_poly.hpp"

namespace orbitlab::algebra {

namespace {

// ---- arithmetic modulo the Mersenne prime 2^61 - 1 -------------------------

constexpr std::uint64_t kProbePrime = (std::uint64_t{1} << 61) - 1;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % kProbePrime);
}

std::uint64_t addmod(std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = a + b;
  return s >= kProbePrime ? s - kProbePrime : s;
}

std::uint64_t submod(std::uint64_t a, std::uint64_t b) { return a >= b ? a - b : a + kProbePrime - b; }

std::uint64_t powmod(std::uint64_t b, std::uint64_t e) {
  std::uint64_t r = 1;
  while (e != 0) {
    if (e & 1U) r = mulmod(r, b);
    b = mulmod(b, b);
    e >>= 1;
  }
  return r;
}

std::uint64_t invmod(std::uint64_t a) { return powmod(a, kProbePrime - 2); }

std::uint64_t reduce(const Integer& c) {
  Integer r;
  mpz_fdiv_r_ui(r.get_mpz_t(), c.get_mpz_t(), kProbePrime);
  return r.get_ui();
}

using ModPoly = std::vector<std::uint64_t>;  // low to high

void trim(ModPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

// Degree of gcd of two univariate polynomials mod kProbePrime.
std::size_t mod_gcd_degree(ModPoly a, ModPoly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    // a <- a mod b
    std::uint64_t inv = invmod(b.back());
    while (a.size() >= b.size()) {
      std::uint64_t factor = mulmod(a.back(), inv);
      std::size_t shift = a.size() - b.size();
      for (std::size_t i = 0; i < b.size(); ++i) {
        a[i + shift] = submod(a[i + shift], mulmod(factor, b[i]));
      }
      trim(a);
      if (a.empty()) break;
    }
    std::swap(a, b);
  }
  return a.empty() ? 0 : a.size() - 1;
}

// Image of p in F_q[x_var] after substituting vals for the other variables.
ModPoly univariate_image(const MultiPoly& p, std::size_t var, const std::vector<std::uint64_t>& vals) {
  ModPoly out(static_cast<std::size_t>(p.degree_in(var)) + 1, 0);
  for (const Term& t : p.terms()) {
    std::uint64_t m = reduce(t.coeff);
    for (std::size_t i = 0; i < p.nvars() && m != 0; ++i) {
      if (i == var || t.exps[i] == 0) continue;
      m = mulmod(m, powmod(vals[i], t.exps[i]));
    }
    out[t.exps[var]] = addmod(out[t.exps[var]], m);
  }
  return out;
}

// True when gcd(a, b) provably involves none of the variables. Each
// variable is ruled out by a univariate modular gcd of degree 0 at a point
// where neither leading coefficient vanishes; a degree-0 image gcd there
// forces the true gcd to have degree 0 in that variable.
bool probe_coprime(const MultiPoly& a, const MultiPoly& b) {
  std::mt19937_64 rng(0x5eed0f0b175ULL);
  std::uniform_int_distribution<std::uint64_t> dist(1, kProbePrime - 1);
  for (std::size_t v = 0; v < a.nvars(); ++v) {
    if (!a.involves(v) || !b.involves(v)) continue;
    bool ruled_out = false;
    for (int attempt = 0; attempt < 3 && !ruled_out; ++attempt) {
      std::vector<std::uint64_t> vals(a.nvars());
      for (auto& x : vals) x = dist(rng);
      ModPoly ia = univariate_image(a, v, vals);
      ModPoly ib = univariate_image(b, v, vals);
      if (ia.back() == 0 || ib.back() == 0) continue;
      if (mod_gcd_degree(ia, ib) == 0) {
        ruled_out = true;
      } else {
        return false;
      }
    }
    if (!ruled_out) return false;
  }
  return true;
}

// ---- helpers in R[v], R = Z[other variables] -------------------------------

// Coefficient of v^k, as a polynomial not involving v.
MultiPoly coeff_in(const MultiPoly& p, std::size_t v, std::uint32_t k) {
  std::vector<Term> terms;
  for (const Term& t : p.terms()) {
    if (t.exps[v] != k) continue;
    Term c = t;
    c.exps[v] = 0;
    terms.push_back(std::move(c));
  }
  return MultiPoly::from_terms(p.nvars(), std::move(terms));
}

MultiPoly lead_in(const MultiPoly& p, std::size_t v) {
  return coeff_in(p, v, static_cast<std::uint32_t>(p.degree_in(v)));
}

MultiPoly var_power(std::size_t nvars, std::size_t v, std::uint32_t k) {
  Exponents e(nvars, 0);
  e[v] = k;
  return MultiPoly::monomial(std::move(e), 1);
}

MultiPoly exact(const MultiPoly& p, const MultiPoly& q) {
  auto r = poly_divide_exact(p, q);
  if (!r) throw std::logic_error("inexact division inside gcd: " + p.to_string() + " / " + q.to_string());
  return std::move(*r);
}

MultiPoly normalized(MultiPoly p) {
  if (!p.is_zero() && p.leading_coeff() < 0) p = -p;
  return p;
}

// Pseudo-remainder lc_v(b)^(deg a - deg b + 1) * a mod b in R[v].
MultiPoly pseudo_remainder(const MultiPoly& a, const MultiPoly& b, std::size_t v) {
  const long db = b.degree_in(v);
  const long delta = a.degree_in(v) - db;
  MultiPoly lb = lead_in(b, v);
  MultiPoly r = a;
  long steps = 0;
  while (!r.is_zero() && r.degree_in(v) >= db) {
    long dr = r.degree_in(v);
    MultiPoly lr = lead_in(r, v);
    r = poly_mul(r, lb) - poly_mul(poly_mul(lr, var_power(a.nvars(), v, static_cast<std::uint32_t>(dr - db))), b);
    ++steps;
  }
  if (delta + 1 - steps > 0) r = poly_mul(r, poly_pow(lb, static_cast<unsigned long>(delta + 1 - steps)));
  return r;
}

MultiPoly content_in(const MultiPoly& p, std::size_t v);
MultiPoly gcd_primitive(const MultiPoly& a, const MultiPoly& b);

MultiPoly content_in(const MultiPoly& p, std::size_t v) {
  long d = p.degree_in(v);
  MultiPoly g(p.nvars());
  for (long k = d; k >= 0; --k) {
    MultiPoly c = coeff_in(p, v, static_cast<std::uint32_t>(k));
    if (c.is_zero()) continue;
    g = poly_gcd(g, c);
    if (g.is_constant() && g.leading_coeff() == 1) break;
  }
  return g;
}

// Last nonzero element of the subresultant PRS of a and b in R[v]; a and b
// must be primitive in v.
MultiPoly subresultant_gcd(MultiPoly a, MultiPoly b, std::size_t v) {
  if (a.degree_in(v) < b.degree_in(v)) std::swap(a, b);
  const std::size_t n = a.nvars();
  MultiPoly g = MultiPoly::constant(n, 1);
  MultiPoly h = MultiPoly::constant(n, 1);
  for (;;) {
    long delta = a.degree_in(v) - b.degree_in(v);
    MultiPoly r = pseudo_remainder(a, b, v);
    if (r.is_zero()) return b;
    if (r.degree_in(v) == 0) return MultiPoly::constant(n, 1);
    a = std::move(b);
    b = exact(r, poly_mul(g, poly_pow(h, static_cast<unsigned long>(delta))));
    g = lead_in(a, v);
    if (delta == 0) continue;
    h = exact(poly_pow(g, static_cast<unsigned long>(delta)), poly_pow(h, static_cast<unsigned long>(delta - 1)));
  }
}

// a, b: nonzero, primitive over Z, not divisible by any variable.
MultiPoly gcd_primitive(const MultiPoly& a, const MultiPoly& b) {
  const std::size_t n = a.nvars();
  if (a.is_constant() || b.is_constant()) return MultiPoly::constant(n, 1);
  if (a == b) return normalized(a);
  if (probe_coprime(a, b)) return MultiPoly::constant(n, 1);

  // A variable present in only one input cannot occur in the gcd.
  for (std::size_t v = 0; v < n; ++v) {
    if (a.involves(v) && !b.involves(v)) return poly_gcd(content_in(a, v), b);
    if (b.involves(v) && !a.involves(v)) return poly_gcd(a, content_in(b, v));
  }

  std::size_t best = n;
  for (std::size_t v = 0; v < n; ++v) {
    if (!a.involves(v)) continue;
    if (best == n || std::max(a.degree_in(v), b.degree_in(v)) < std::max(a.degree_in(best), b.degree_in(best))) {
      best = v;
    }
  }
  const std::size_t v = best;
  MultiPoly ca = content_in(a, v);
  MultiPoly cb = content_in(b, v);
  MultiPoly cg = poly_gcd(ca, cb);
  MultiPoly pa = exact(a, ca);
  MultiPoly pb = exact(b, cb);
  MultiPoly s = subresultant_gcd(pa, pb, v);
  if (s.degree_in(v) > 0) {
    s = exact(s, content_in(s, v)).primitive_part();
  } else {
    s = MultiPoly::constant(n, 1);
  }
  return normalized(poly_mul(cg, s));
}

}  // namespace

MultiPoly poly_gcd(const MultiPoly& p, const MultiPoly& q) {
  if (p.nvars() != q.nvars()) throw ArityError("gcd of polynomials with different arity");
  if (p.is_zero()) return normalized(q);
  if (q.is_zero()) return normalized(p);
  const std::size_t n = p.nvars();

  Exponents mp = p.monomial_content();
  Exponents mq = q.monomial_content();
  Exponents m(n);
  for (std::size_t i = 0; i < n; ++i) m[i] = std::min(mp[i], mq[i]);

  Integer c;
  Integer cp = p.content();
  Integer cq = q.content();
  mpz_gcd(c.get_mpz_t(), cp.get_mpz_t(), cq.get_mpz_t());

  MultiPoly monomial_factor = MultiPoly::monomial(m, c);
  if (p.is_monomial() || q.is_monomial()) return monomial_factor;

  MultiPoly a = exact(p, MultiPoly::monomial(mp, 1)).primitive_part();
  MultiPoly b = exact(q, MultiPoly::monomial(mq, 1)).primitive_part();
  return normalized(poly_mul(monomial_factor, gcd_primitive(a, b)));
}

}  // namespace orbitlab::algebra
