#include "orbitlab/heights/heights.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "orbitlab/algebra/errors.hpp"
#include "orbitlab/maps/rational_map.hpp"

namespace orbitlab::heights {

using algebra::Integer;
using algebra::log_abs;

namespace {

// Keeps the top 64 bits, unlike get_d.
long double to_long_double(const Integer& z) {
  if (z.fits_slong_p()) return static_cast<long double>(z.get_si());
  std::size_t bits = mpz_sizeinbase(z.get_mpz_t(), 2);
  Integer top;
  mpz_tdiv_q_2exp(top.get_mpz_t(), z.get_mpz_t(), bits - 64);
  Integer mag = abs(top);
  long double v = std::ldexp(static_cast<long double>(mpz_getlimbn(mag.get_mpz_t(), 0)), static_cast<int>(bits - 64));
  return z < 0 ? -v : v;
}

}  // namespace

bool over_bit_cap(const ProjPointQ& p, std::size_t bit_cap) {
  if (p.max_bits() <= bit_cap) return false;
  if (p.max_bits() > bit_cap + 1) return true;
  // exactly bit_cap + 1 bits: only 2^bit_cap itself is within budget
  for (const Integer& c : p.coords())
    if (mpz_sizeinbase(c.get_mpz_t(), 2) == bit_cap + 1 && mpz_scan1(c.get_mpz_t(), 0) != bit_cap) return true;
  return false;
}

HeightValue weil_height(const ProjPointQ& p) {
  const Integer* best = &p.coords().front();
  for (const Integer& c : p.coords())
    if (mpz_cmpabs(c.get_mpz_t(), best->get_mpz_t()) > 0) best = &c;
  return HeightValue{log_abs(*best)};
}

HeightSeries orbit_heights(const maps::RationalMapPn& f, const ProjPointQ& x, std::size_t horizon,
                           std::size_t bit_cap) {
  HeightSeries out;
  ProjPointQ cur = x;
  out.values.push_back(weil_height(cur));
  for (std::size_t n = 1; n <= horizon; ++n) {
    auto next = maps::evaluate(f, cur);
    if (!next) {
      out.indeterminate_at = n - 1;
      return out;
    }
    if (over_bit_cap(*next, bit_cap)) {
      out.truncated = true;
      return out;
    }
    cur = std::move(*next);
    out.values.push_back(weil_height(cur));
  }
  // last point may itself be indeterminate; that only matters one step later
  return out;
}

TorusExponentState::TorusExponentState(IntMatrix a, const TorusPoint& x) : a_(std::move(a)) {
  if (!a_.is_square() || a_.dim() != x.size()) throw ArityError("torus point and exponent matrix disagree");
  const std::size_t n = x.size();
  std::map<Integer, std::vector<std::pair<std::size_t, long>>> support;
  sign_.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] == 0) throw std::invalid_argument("torus point has a zero coordinate");
    if (x[i] < 0) sign_[i] = 1;
    for (const auto& [p, e] : algebra::factor_integer(abs(x[i].get_num())))
      support[p].emplace_back(i, static_cast<long>(e));
    for (const auto& [p, e] : algebra::factor_integer(x[i].get_den()))
      support[p].emplace_back(i, -static_cast<long>(e));
  }
  exps_ = IntMatrix(n, support.size());
  std::size_t col = 0;
  for (const auto& [p, entries] : support) {
    primes_.push_back(p);
    logs_.push_back(log_abs(p));
    for (const auto& [i, e] : entries) exps_(i, col) += e;
    ++col;
  }
}

void TorusExponentState::step() {
  if (!primes_.empty()) exps_ = a_ * exps_;
  std::vector<Integer> s = a_.apply(sign_);
  for (Integer& v : s) mpz_fdiv_r_ui(v.get_mpz_t(), v.get_mpz_t(), 2);
  sign_ = std::move(s);
}

HeightValue TorusExponentState::height() const {
  const std::size_t n = a_.dim();
  // log of the common denominator: sum over p of log p * max(0, -min_i E(i,p))
  long double denominator = 0.0L;
  for (std::size_t p = 0; p < primes_.size(); ++p) {
    const Integer* lowest = &exps_(0, p);
    for (std::size_t i = 1; i < n; ++i)
      if (exps_(i, p) < *lowest) lowest = &exps_(i, p);
    if (*lowest < 0) denominator -= to_long_double(*lowest) * logs_[p];
  }
  long double archimedean = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    long double l = 0.0L;
    for (std::size_t p = 0; p < primes_.size(); ++p) l += to_long_double(exps_(i, p)) * logs_[p];
    archimedean = std::max(archimedean, l);
  }
  return HeightValue{denominator + archimedean};
}

std::string TorusExponentState::key() const {
  std::string k;
  for (const Integer& s : sign_) k += s == 0 ? '+' : '-';
  k += '|';
  for (std::size_t i = 0; i < exps_.rows(); ++i)
    for (std::size_t p = 0; p < exps_.cols(); ++p) {
      k += exps_(i, p).get_str(32);
      k += ',';
    }
  return k;
}

TorusPoint TorusExponentState::point() const {
  const std::size_t n = a_.dim();
  TorusPoint x(n, algebra::Rational(1));
  for (std::size_t i = 0; i < n; ++i) {
    Integer num = 1, den = 1;
    for (std::size_t p = 0; p < primes_.size(); ++p) {
      const Integer& e = exps_(i, p);
      Integer pw;
      mpz_pow_ui(pw.get_mpz_t(), primes_[p].get_mpz_t(), mpz_get_ui(Integer(abs(e)).get_mpz_t()));
      if (e > 0) num *= pw;
      if (e < 0) den *= pw;
    }
    x[i] = algebra::Rational(sign_[i] == 0 ? num : Integer(-num), den);
    x[i].canonicalize();
  }
  return x;
}

std::vector<HeightValue> monomial_orbit_heights(const IntMatrix& a, const TorusPoint& x, std::size_t horizon) {
  if (horizon < 1) throw std::invalid_argument("monomial_orbit_heights needs N >= 1");
  TorusExponentState state(a, x);
  std::vector<HeightValue> out;
  out.reserve(horizon + 1);
  out.push_back(state.height());
  for (std::size_t n = 1; n <= horizon; ++n) {
    state.step();
    out.push_back(state.height());
  }
  return out;
}

}  // namespace orbitlab::heights
