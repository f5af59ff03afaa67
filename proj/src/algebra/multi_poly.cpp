#include "orbitlab/algebra/multi_poly.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "orbitlab/algebra/errors.hpp"

namespace orbitlab::algebra {

namespace {

std::uint64_t total_degree(const Exponents& e) {
  return std::accumulate(e.begin(), e.end(), std::uint64_t{0});
}

struct ExponentsHash {
  std::size_t operator()(const Exponents& e) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::uint32_t v : e) {
      h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

using Accumulator = std::unordered_map<Exponents, Integer, ExponentsHash>;

struct GrlexGreater {
  bool operator()(const Exponents& a, const Exponents& b) const { return grlex_compare(a, b) > 0; }
};

MultiPoly from_accumulator(std::size_t nvars, Accumulator&& acc) {
  std::vector<Term> terms;
  terms.reserve(acc.size());
  for (auto& [e, c] : acc) {
    if (c != 0) terms.push_back(Term{e, std::move(c)});
  }
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return grlex_compare(a.exps, b.exps) > 0; });
  return MultiPoly::from_terms(nvars, std::move(terms));
}

void require_same_nvars(const MultiPoly& a, const MultiPoly& b) {
  if (a.nvars() != b.nvars()) {
    throw ArityError("polynomials over " + std::to_string(a.nvars()) + " and " +
                     std::to_string(b.nvars()) + " variables");
  }
}

std::uint32_t add_exp(std::uint32_t a, std::uint32_t b) {
  std::uint32_t s = a + b;
  if (s < a) throw std::overflow_error("exponent exceeds 32 bits");
  return s;
}

void accumulate_product(const MultiPoly& p, const MultiPoly& q, const Integer& scale,
                        Accumulator& acc, std::size_t term_cap) {
  Exponents e(p.nvars());
  Integer c;
  for (const Term& a : p.terms()) {
    for (const Term& b : q.terms()) {
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = add_exp(a.exps[i], b.exps[i]);
      c = a.coeff * b.coeff;
      if (scale != 1) c *= scale;
      auto [it, inserted] = acc.try_emplace(e, c);
      if (!inserted) {
        it->second += c;
      } else if (term_cap != 0 && acc.size() > term_cap) {
        throw TermCapExceeded(term_cap);
      }
    }
  }
}

}  // namespace

int grlex_compare(const Exponents& a, const Exponents& b) {
  std::uint64_t da = total_degree(a);
  std::uint64_t db = total_degree(b);
  if (da != db) return da < db ? -1 : 1;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  }
  return 0;
}

MultiPoly MultiPoly::constant(std::size_t nvars, const Integer& c) {
  return monomial(Exponents(nvars, 0), c);
}

MultiPoly MultiPoly::variable(std::size_t nvars, std::size_t index) {
  if (index >= nvars) throw ArityError("variable index out of range");
  Exponents e(nvars, 0);
  e[index] = 1;
  return monomial(std::move(e), 1);
}

MultiPoly MultiPoly::monomial(Exponents exps, const Integer& c) {
  MultiPoly p(exps.size());
  if (c != 0) p.terms_.push_back(Term{std::move(exps), c});
  return p;
}

MultiPoly MultiPoly::from_terms(std::size_t nvars, std::vector<Term> terms) {
  for (const Term& t : terms) {
    if (t.exps.size() != nvars) throw ArityError("term arity does not match nvars");
  }
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return grlex_compare(a.exps, b.exps) > 0; });
  MultiPoly p(nvars);
  for (Term& t : terms) {
    if (!p.terms_.empty() && p.terms_.back().exps == t.exps) {
      p.terms_.back().coeff += t.coeff;
    } else {
      if (!p.terms_.empty() && p.terms_.back().coeff == 0) p.terms_.pop_back();
      p.terms_.push_back(std::move(t));
    }
  }
  if (!p.terms_.empty() && p.terms_.back().coeff == 0) p.terms_.pop_back();
  return p;
}

bool MultiPoly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && total_degree(terms_[0].exps) == 0);
}

bool MultiPoly::is_homogeneous() const {
  if (terms_.empty()) return true;
  std::uint64_t d = total_degree(terms_.front().exps);
  return std::all_of(terms_.begin(), terms_.end(),
                     [d](const Term& t) { return total_degree(t.exps) == d; });
}

long MultiPoly::degree() const {
  if (terms_.empty()) return kZeroDegree;
  return static_cast<long>(total_degree(terms_.front().exps));
}

long MultiPoly::degree_in(std::size_t var) const {
  if (terms_.empty()) return kZeroDegree;
  std::uint32_t d = 0;
  for (const Term& t : terms_) d = std::max(d, t.exps[var]);
  return d;
}

bool MultiPoly::involves(std::size_t var) const {
  return std::any_of(terms_.begin(), terms_.end(), [var](const Term& t) { return t.exps[var] != 0; });
}

Integer MultiPoly::content() const {
  Integer g = 0;
  for (const Term& t : terms_) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.coeff.get_mpz_t());
    if (g == 1) break;
  }
  return g;
}

MultiPoly MultiPoly::primitive_part() const {
  if (terms_.empty()) return *this;
  Integer g = content();
  if (leading_coeff() < 0) g = -g;
  MultiPoly out = *this;
  if (g != 1) {
    for (Term& t : out.terms_) mpz_divexact(t.coeff.get_mpz_t(), t.coeff.get_mpz_t(), g.get_mpz_t());
  }
  return out;
}

Exponents MultiPoly::monomial_content() const {
  Exponents m = terms_.front().exps;
  for (const Term& t : terms_) {
    for (std::size_t i = 0; i < nvars_; ++i) m[i] = std::min(m[i], t.exps[i]);
  }
  return m;
}

Integer MultiPoly::evaluate(std::span<const Integer> point) const {
  if (point.size() != nvars_) throw ArityError("evaluation point has wrong arity");
  // Cache powers per variable; exponents are usually small.
  std::vector<std::vector<Integer>> powers(nvars_);
  for (std::size_t i = 0; i < nvars_; ++i) powers[i].push_back(1);
  Integer acc = 0;
  Integer m;
  for (const Term& t : terms_) {
    m = t.coeff;
    for (std::size_t i = 0; i < nvars_; ++i) {
      std::uint32_t e = t.exps[i];
      if (e == 0) continue;
      auto& pw = powers[i];
      while (pw.size() <= e) pw.push_back(pw.back() * point[i]);
      m *= pw[e];
    }
    acc += m;
  }
  return acc;
}

MultiPoly MultiPoly::operator-() const {
  MultiPoly out = *this;
  for (Term& t : out.terms_) t.coeff = -t.coeff;
  return out;
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& other) {
  require_same_nvars(*this, other);
  if (&other == this) return *this *= 2;
  std::vector<Term> merged;
  merged.reserve(terms_.size() + other.terms_.size());
  std::size_t i = 0, j = 0;
  while (i < terms_.size() || j < other.terms_.size()) {
    int cmp = 0;
    if (i == terms_.size()) {
      cmp = -1;
    } else if (j == other.terms_.size()) {
      cmp = 1;
    } else {
      cmp = grlex_compare(terms_[i].exps, other.terms_[j].exps);
    }
    if (cmp > 0) {
      merged.push_back(std::move(terms_[i++]));
    } else if (cmp < 0) {
      merged.push_back(other.terms_[j++]);
    } else {
      Integer c = terms_[i].coeff + other.terms_[j].coeff;
      if (c != 0) merged.push_back(Term{std::move(terms_[i].exps), std::move(c)});
      ++i;
      ++j;
    }
  }
  terms_ = std::move(merged);
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& other) {
  if (&other == this) {
    terms_.clear();
    return *this;
  }
  return *this += -other;
}

MultiPoly& MultiPoly::operator*=(const Integer& c) {
  if (c == 0) {
    terms_.clear();
  } else if (c != 1) {
    for (Term& t : terms_) t.coeff *= c;
  }
  return *this;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) { return poly_mul(a, b); }

bool operator==(const MultiPoly& a, const MultiPoly& b) {
  if (a.nvars_ != b.nvars_ || a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    if (a.terms_[i].exps != b.terms_[i].exps || a.terms_[i].coeff != b.terms_[i].coeff) return false;
  }
  return true;
}

std::string MultiPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const Term& t : terms_) {
    Integer mag = abs(t.coeff);
    bool negative = t.coeff < 0;
    if (first) {
      if (negative) os << '-';
    } else {
      os << (negative ? " - " : " + ");
    }
    first = false;
    bool constant = total_degree(t.exps) == 0;
    bool wrote = false;
    if (mag != 1 || constant) {
      os << mag.get_str();
      wrote = true;
    }
    for (std::size_t i = 0; i < nvars_; ++i) {
      if (t.exps[i] == 0) continue;
      if (wrote) os << '*';
      os << 'x' << i;
      if (t.exps[i] > 1) os << '^' << t.exps[i];
      wrote = true;
    }
  }
  return os.str();
}

MultiPoly poly_mul(const MultiPoly& p, const MultiPoly& q, std::size_t term_cap) {
  require_same_nvars(p, q);
  if (p.is_zero() || q.is_zero()) return MultiPoly(p.nvars());
  if (p.is_monomial() || q.is_monomial()) {
    // Monomial times polynomial keeps the order; no merging needed.
    const MultiPoly& mono = p.is_monomial() ? p : q;
    const MultiPoly& poly = p.is_monomial() ? q : p;
    const Term& m = mono.leading_term();
    std::vector<Term> terms;
    terms.reserve(poly.size());
    for (const Term& t : poly.terms()) {
      Exponents e = t.exps;
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = add_exp(e[i], m.exps[i]);
      terms.push_back(Term{std::move(e), t.coeff * m.coeff});
    }
    if (term_cap != 0 && terms.size() > term_cap) throw TermCapExceeded(term_cap);
    return MultiPoly::from_terms(p.nvars(), std::move(terms));
  }
  Accumulator acc;
  acc.reserve(std::min<std::size_t>(p.size() * q.size(), 1u << 20));
  accumulate_product(p, q, 1, acc, term_cap);
  return from_accumulator(p.nvars(), std::move(acc));
}

MultiPoly poly_pow(const MultiPoly& p, unsigned long e, std::size_t term_cap) {
  MultiPoly result = MultiPoly::constant(p.nvars(), 1);
  MultiPoly base = p;
  while (e > 0) {
    if (e & 1UL) result = poly_mul(result, base, term_cap);
    e >>= 1;
    if (e > 0) base = poly_mul(base, base, term_cap);
  }
  return result;
}

MultiPoly poly_compose(const MultiPoly& p, std::span<const MultiPoly> subs, std::size_t term_cap) {
  if (subs.size() != p.nvars()) {
    throw ArityError("composition needs " + std::to_string(p.nvars()) + " substitutes, got " +
                     std::to_string(subs.size()));
  }
  if (subs.empty()) return p;
  std::size_t out_vars = subs.front().nvars();
  for (const MultiPoly& s : subs) {
    if (s.nvars() != out_vars) throw ArityError("substitutes disagree on number of variables");
  }
  if (p.is_zero()) return MultiPoly(out_vars);

  // Small exponents: consecutive powers. Large ones (monomial iterates reach
  // exponents in the millions) go through repeated squaring.
  constexpr std::uint32_t kDensePowers = 64;
  std::vector<std::vector<MultiPoly>> powers(subs.size());
  std::vector<std::map<std::uint32_t, MultiPoly>> sparse_powers(subs.size());
  for (std::size_t i = 0; i < subs.size(); ++i) powers[i].push_back(MultiPoly::constant(out_vars, 1));
  auto power = [&](std::size_t i, std::uint32_t e) -> const MultiPoly& {
    if (e > kDensePowers) {
      auto it = sparse_powers[i].find(e);
      if (it == sparse_powers[i].end()) it = sparse_powers[i].emplace(e, poly_pow(subs[i], e, term_cap)).first;
      return it->second;
    }
    auto& pw = powers[i];
    while (pw.size() <= e) pw.push_back(poly_mul(pw.back(), subs[i], term_cap));
    return pw[e];
  };

  Accumulator acc;
  for (const Term& t : p.terms()) {
    MultiPoly prod = MultiPoly::constant(out_vars, 1);
    for (std::size_t i = 0; i < subs.size(); ++i) {
      if (t.exps[i] == 0) continue;
      prod = poly_mul(prod, power(i, t.exps[i]), term_cap);
    }
    for (const Term& s : prod.terms()) {
      auto [it, inserted] = acc.try_emplace(s.exps, s.coeff * t.coeff);
      if (!inserted) {
        it->second += s.coeff * t.coeff;
      } else if (term_cap != 0 && acc.size() > term_cap) {
        throw TermCapExceeded(term_cap);
      }
    }
  }
  return from_accumulator(out_vars, std::move(acc));
}

std::optional<MultiPoly> poly_divide_exact(const MultiPoly& p, const MultiPoly& q) {
  require_same_nvars(p, q);
  if (q.is_zero()) throw std::domain_error("division by the zero polynomial");
  if (p.is_zero()) return MultiPoly(p.nvars());
  const std::size_t n = p.nvars();
  const Term& lq = q.leading_term();

  if (q.is_monomial()) {
    std::vector<Term> terms;
    terms.reserve(p.size());
    for (const Term& t : p.terms()) {
      Exponents e = t.exps;
      for (std::size_t i = 0; i < n; ++i) {
        if (e[i] < lq.exps[i]) return std::nullopt;
        e[i] -= lq.exps[i];
      }
      if (mpz_divisible_p(t.coeff.get_mpz_t(), lq.coeff.get_mpz_t()) == 0) return std::nullopt;
      Integer c;
      mpz_divexact(c.get_mpz_t(), t.coeff.get_mpz_t(), lq.coeff.get_mpz_t());
      terms.push_back(Term{std::move(e), std::move(c)});
    }
    return MultiPoly::from_terms(n, std::move(terms));
  }

  if (p.degree() < q.degree()) return std::nullopt;
  for (std::size_t i = 0; i < n; ++i) {
    if (p.degree_in(i) < q.degree_in(i)) return std::nullopt;
  }

  std::map<Exponents, Integer, GrlexGreater> rem;
  for (const Term& t : p.terms()) rem.emplace(t.exps, t.coeff);
  std::vector<Term> quotient;
  Exponents e(n);
  while (!rem.empty()) {
    auto lead = rem.begin();
    for (std::size_t i = 0; i < n; ++i) {
      if (lead->first[i] < lq.exps[i]) return std::nullopt;
      e[i] = lead->first[i] - lq.exps[i];
    }
    if (mpz_divisible_p(lead->second.get_mpz_t(), lq.coeff.get_mpz_t()) == 0) return std::nullopt;
    Integer c;
    mpz_divexact(c.get_mpz_t(), lead->second.get_mpz_t(), lq.coeff.get_mpz_t());
    Exponents shifted(n);
    for (const Term& t : q.terms()) {
      for (std::size_t i = 0; i < n; ++i) shifted[i] = t.exps[i] + e[i];
      Integer delta = t.coeff * c;
      auto it = rem.find(shifted);
      if (it == rem.end()) {
        rem.emplace(shifted, -delta);
      } else {
        it->second -= delta;
        if (it->second == 0) rem.erase(it);
      }
    }
    quotient.push_back(Term{e, std::move(c)});
  }
  return MultiPoly::from_terms(n, std::move(quotient));
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class PolyParser {
 public:
  PolyParser(const std::string& text, std::size_t nvars) : text_(text), nvars_(nvars) {}

  MultiPoly parse() {
    skip_ws();
    if (pos_ == text_.size()) fail("empty polynomial");
    MultiPoly p = expr();
    skip_ws();
    if (pos_ != text_.size()) fail(std::string("unexpected '") + text_[pos_] + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg + " at column " + std::to_string(pos_ + 1), 1, pos_ + 1);
  }

  void skip_ws() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  MultiPoly expr() {
    MultiPoly acc = term();
    for (;;) {
      if (accept('+')) {
        acc += term();
      } else if (accept('-')) {
        acc -= term();
      } else {
        return acc;
      }
    }
  }

  MultiPoly term() {
    MultiPoly acc = signed_factor();
    while (accept('*')) acc = poly_mul(acc, signed_factor());
    return acc;
  }

  // A leading sign binds looser than '^': -a^2 is -(a^2).
  MultiPoly signed_factor() {
    if (accept('-')) return -signed_factor();
    if (accept('+')) return signed_factor();
    return power();
  }

  MultiPoly power() {
    MultiPoly base = primary();
    if (accept('^')) {
      skip_ws();
      std::string digits = read_digits();
      if (digits.empty()) fail("expected exponent");
      if (digits.size() > 9) fail("exponent too large");
      return poly_pow(base, std::stoul(digits));
    }
    return base;
  }

  MultiPoly primary() {
    skip_ws();
    if (pos_ == text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      MultiPoly inner = expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (c >= '0' && c <= '9') {
      return MultiPoly::constant(nvars_, Integer(read_digits(), 10));
    }
    if (c == 'x') {
      std::size_t start = pos_;
      ++pos_;
      std::string digits = read_digits();
      if (digits.empty() || digits.size() > 6) {
        pos_ = start;
        fail("malformed variable");
      }
      std::size_t index = std::stoul(digits);
      if (index >= nvars_) {
        pos_ = start;
        fail("variable x" + digits + " out of range (x0..x" + std::to_string(nvars_ - 1) + ")");
      }
      return MultiPoly::variable(nvars_, index);
    }
    fail(std::string("unexpected '") + c + "'");
  }

  std::string read_digits() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9') ++pos_;
    return text_.substr(start, pos_ - start);
  }

  const std::string& text_;
  std::size_t nvars_;
  std::size_t pos_ = 0;
};

}  // namespace

MultiPoly parse_poly(const std::string& text, std::size_t nvars) {
  if (nvars == 0) throw ArityError("polynomials need at least one variable");
  return PolyParser(text, nvars).parse();
}

}  // namespace orbitlab::algebra
