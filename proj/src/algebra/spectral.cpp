#include "orbitlab/algebra/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "orbitlab/algebra/errors.hpp"
#include "orbitlab/algebra/multi_poly.hpp"

namespace orbitlab::algebra {

namespace {

using UPoly = std::vector<Integer>;  // coefficients, low to high

void trim(UPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

MultiPoly to_multi(const UPoly& p) {
  std::vector<Term> terms;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (p[k] != 0) terms.push_back(Term{Exponents{static_cast<std::uint32_t>(k)}, p[k]});
  }
  return MultiPoly::from_terms(1, std::move(terms));
}

UPoly from_multi(const MultiPoly& m) {
  UPoly p(m.is_zero() ? 0 : static_cast<std::size_t>(m.degree()) + 1);
  for (const Term& t : m.terms()) p[t.exps[0]] = t.coeff;
  return p;
}

UPoly derivative(const UPoly& p) {
  UPoly d;
  for (std::size_t k = 1; k < p.size(); ++k) d.push_back(p[k] * static_cast<unsigned long>(k));
  trim(d);
  return d;
}

// Removes the positive integer content, keeping every sign.
void make_primitive(UPoly& p) {
  Integer g = 0;
  for (const Integer& c : p) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  if (g > 1)
    for (Integer& c : p) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
}

// |lc(b)|^(deg a - deg b + 1) * a mod b; the positive multiplier keeps Sturm
// signs intact.
UPoly positive_prem(UPoly a, const UPoly& b) {
  const std::size_t db = b.size() - 1;
  Integer lb = abs(b.back());
  int sign_b = sgn(b.back());
  while (a.size() >= b.size()) {
    Integer la = a.back();
    std::size_t shift = a.size() - b.size();
    for (Integer& c : a) c *= lb;
    // a <- lb*a - sign(lc b) * la * x^shift * b
    for (std::size_t i = 0; i <= db; ++i) {
      if (sign_b > 0) {
        a[i + shift] -= la * b[i];
      } else {
        a[i + shift] += la * b[i];
      }
    }
    trim(a);
    if (a.empty()) break;
  }
  return a;
}

// Sign of p(num/den) with den > 0.
int sign_at(const UPoly& p, const Rational& x) {
  const Integer& num = x.get_num();
  const Integer& den = x.get_den();
  const std::size_t n = p.size() - 1;
  Integer acc = 0;
  // Horner on the homogenised form sum c_k num^k den^(n-k).
  Integer den_pow = 1;
  for (std::size_t k = n + 1; k-- > 0;) {
    acc = acc * num + p[k] * den_pow;
    den_pow *= den;
  }
  return sgn(acc);
}

class SturmSequence {
 public:
  explicit SturmSequence(UPoly squarefree) {
    seq_.push_back(std::move(squarefree));
    if (seq_[0].size() <= 1) return;
    seq_.push_back(derivative(seq_[0]));
    while (seq_.back().size() > 1) {
      UPoly r = positive_prem(seq_[seq_.size() - 2], seq_.back());
      if (r.empty()) break;
      for (Integer& c : r) c = -c;
      make_primitive(r);
      seq_.push_back(std::move(r));
    }
  }

  // Number of distinct real roots in (x, +inf). Valid whether or not x is a
  // root, because seq_[1] is the derivative of a squarefree seq_[0].
  std::size_t roots_above(const Rational& x) const { return changes_at(x) - changes_at_infinity(); }

  const UPoly& poly() const { return seq_[0]; }

 private:
  std::size_t changes_at(const Rational& x) const {
    std::size_t changes = 0;
    int last = 0;
    for (const UPoly& p : seq_) {
      int s = sign_at(p, x);
      if (s == 0) continue;
      if (last != 0 && s != last) ++changes;
      last = s;
    }
    return changes;
  }

  std::size_t changes_at_infinity() const {
    std::size_t changes = 0;
    int last = 0;
    for (const UPoly& p : seq_) {
      int s = sgn(p.back());
      if (last != 0 && s != last) ++changes;
      last = s;
    }
    return changes;
  }

  std::vector<UPoly> seq_;
};

double down(double x) { return std::max(0.0, std::nextafter(x, -std::numeric_limits<double>::infinity())); }
double up(double x) { return std::nextafter(x, std::numeric_limits<double>::infinity()); }

double sqrt_lower(const Rational& q) {
  if (q <= 0) return 0.0;
  return down(std::sqrt(down(q.get_d())));
}

double sqrt_upper(const Rational& q) {
  if (q <= 0) return 0.0;
  return up(std::sqrt(up(q.get_d())));
}

SpectralInterval exact_interval(const Integer& rho_squared, std::size_t steps) {
  SpectralInterval out;
  out.n_power = steps;
  out.converged = true;
  if (is_perfect_square(rho_squared)) {
    Integer r = sqrt(rho_squared);
    double d = r.get_d();
    if (Integer(d) == r) {
      out.lower = out.upper = d;
      out.exact = true;
      return out;
    }
    out.lower = down(d);
    out.upper = up(d);
    return out;
  }
  out.lower = sqrt_lower(Rational(rho_squared));
  out.upper = sqrt_upper(Rational(rho_squared));
  return out;
}

// rho(A)^2 is the largest real root of the characteristic polynomial of the
// symmetric square: every eigenvalue of Sym^2 A is a product lambda_i lambda_j,
// real ones are bounded by rho^2, and rho^2 = lambda * conj(lambda) occurs.
SpectralInterval isolate_radius(const IntMatrix& a, double tol) {
  UPoly q = characteristic_polynomial(symmetric_square(a));
  MultiPoly qm = to_multi(q);
  MultiPoly g = poly_gcd(qm, to_multi(derivative(q)));
  auto sf = poly_divide_exact(qm, g);
  if (!sf) throw std::logic_error("squarefree part is not exact");
  UPoly squarefree = from_multi(sf->primitive_part());
  SturmSequence sturm(std::move(squarefree));
  const UPoly& p = sturm.poly();

  if (p.size() <= 1 || sturm.roots_above(Rational(0)) == 0) {
    return exact_interval(0, 0);
  }

  Integer bound = 0;
  {
    Integer lc = abs(p.back());
    for (std::size_t k = 0; k + 1 < p.size(); ++k) {
      Integer c = abs(p[k]);
      Integer ratio;
      mpz_cdiv_q(ratio.get_mpz_t(), c.get_mpz_t(), lc.get_mpz_t());
      if (ratio > bound) bound = ratio;
    }
    bound += 1;
  }
  Rational lo = 0;
  Rational hi = bound;
  const std::size_t max_steps = 400;
  std::size_t steps = 0;
  bool integer_probed = false;
  for (; steps < max_steps; ++steps) {
    if (sign_at(p, hi) == 0) {
      // hi is a root with nothing above it, so it is the largest root.
      if (hi.get_den() == 1) return exact_interval(hi.get_num(), steps);
      SpectralInterval out;
      out.lower = sqrt_lower(hi);
      out.upper = sqrt_upper(hi);
      out.n_power = steps;
      out.converged = true;
      return out;
    }
    if (!integer_probed && hi - lo < 1) {
      integer_probed = true;
      Integer k;
      mpz_fdiv_q(k.get_mpz_t(), hi.get_num().get_mpz_t(), hi.get_den().get_mpz_t());
      if (Rational(k) > lo && sign_at(p, Rational(k)) == 0 && sturm.roots_above(Rational(k)) == 0) {
        return exact_interval(k, steps);
      }
    }
    double l = sqrt_lower(lo);
    double u = sqrt_upper(hi);
    if (u - l <= tol) break;
    Rational mid = (lo + hi) / 2;
    if (sturm.roots_above(mid) >= 1) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  SpectralInterval out;
  out.lower = sqrt_lower(lo);
  out.upper = sqrt_upper(hi);
  out.n_power = steps;
  out.converged = out.upper - out.lower <= tol;
  return out;
}

}  // namespace

SpectralInterval gelfand_bounds(const IntMatrix& a, double tol) {
  if (!a.is_square() || a.dim() == 0) throw ArityError("spectral radius needs a nonempty square matrix");
  const long double log_n = std::log(static_cast<long double>(a.dim()));
  long double best_lower = 0.0L;
  long double best_upper = std::numeric_limits<long double>::infinity();
  IntMatrix power = a;
  std::size_t k = 1;
  std::size_t used = 1;
  const std::size_t max_bits = std::size_t{1} << 16;
  for (int round = 0; round < 24; ++round) {
    Integer norm = 0;
    for (std::size_t i = 0; i < power.rows(); ++i) {
      Integer row = 0;
      for (std::size_t j = 0; j < power.cols(); ++j) row += abs(power(i, j));
      if (row > norm) norm = row;
    }
    if (norm == 0) {
      SpectralInterval out;
      out.n_power = k;
      out.converged = true;
      out.exact = true;
      return out;
    }
    used = k;
    long double upper = std::exp(log_abs(norm) / static_cast<long double>(k));
    best_upper = std::min(best_upper, upper);
    Integer tr = power.trace();
    if (tr != 0) {
      long double lower = std::exp((log_abs(tr) - log_n) / static_cast<long double>(k));
      best_lower = std::max(best_lower, lower);
    }
    if (static_cast<double>(best_upper - best_lower) <= tol * 0.5) break;
    if (power.max_bits() > max_bits) break;
    power = power * power;
    k *= 2;
  }
  SpectralInterval out;
  out.lower = static_cast<double>(best_lower * (1.0L - 1e-12L));
  out.upper = static_cast<double>(best_upper * (1.0L + 1e-12L));
  out.n_power = used;
  out.converged = out.upper - out.lower <= tol;
  return out;
}

SpectralInterval spectral_radius(const IntMatrix& a, double tol) {
  if (!(tol > 0)) throw std::invalid_argument("spectral_radius needs tol > 0");
  if (!a.is_square() || a.dim() == 0) throw ArityError("spectral radius needs a nonempty square matrix");
  if (a.dim() <= kRootIsolationMaxDim) return isolate_radius(a, tol);
  return gelfand_bounds(a, tol);
}

}  // namespace orbitlab::algebra
