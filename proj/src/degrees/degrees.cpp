#include "orbitlab/degrees/degrees.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>

#include "orbitlab/algebra/errors.hpp"
#include "orbitlab/maps/monomial_map.hpp"

namespace orbitlab::degrees {

using algebra::Integer;

std::size_t term_cap_from_env() {
  const char* raw = std::getenv("ORBITLAB_TERM_CAP");
  if (raw == nullptr || *raw == '\0') return kDefaultTermCap;
  char* end = nullptr;
  unsigned long long v = std::strtoull(raw, &end, 10);
  if (*end != '\0' || v == 0) return kDefaultTermCap;
  return static_cast<std::size_t>(v);
}

DegreeSequence degree_sequence(const RationalMapPn& f, std::size_t horizon, std::size_t term_cap) {
  if (horizon < 1) throw std::invalid_argument("degree_sequence needs N >= 1");
  DegreeSequence seq;
  seq.degs.push_back(1);
  seq.degs.push_back(f.degree());
  RationalMapPn iterate = f;
  for (std::size_t n = 2; n <= horizon; ++n) {
    try {
      // f^n = f^{n-1} o f: the small map is substituted into the large one.
      iterate = maps::compose(iterate, f, term_cap);
    } catch (const TermCapExceeded&) {
      seq.truncated = true;
      break;
    } catch (const std::overflow_error&) {
      seq.truncated = true;
      break;
    }
    if (term_cap != 0 && iterate.term_count() > term_cap) {
      seq.truncated = true;
      break;
    }
    seq.degs.push_back(iterate.degree());
  }
  return seq;
}

std::optional<std::pair<std::size_t, std::size_t>> submultiplicativity_violation(const DegreeSequence& seq) {
  const std::size_t n = seq.degs.size();
  for (std::size_t a = 1; a < n; ++a) {
    for (std::size_t b = a; a + b < n; ++b) {
      Integer prod = Integer(seq.degs[a]) * seq.degs[b];
      if (Integer(seq.degs[a + b]) > prod) return std::make_pair(a, b);
    }
  }
  return std::nullopt;
}

std::string to_string(DynDegMethod m) {
  return m == DynDegMethod::exact_monomial ? "exact-monomial" : "sequence-limit";
}

DynDegReport lambda1_estimate(const DegreeSequence& seq) {
  if (seq.degs.size() < 3) throw std::invalid_argument("lambda1_estimate needs d_0, d_1, d_2 at least");
  DynDegReport r;
  r.i = 1;
  r.method = DynDegMethod::sequence_limit;
  double upper = std::numeric_limits<double>::infinity();
  for (std::size_t n = 1; n < seq.degs.size(); ++n) {
    upper = std::min(upper, std::pow(static_cast<double>(seq.degs[n]), 1.0 / static_cast<double>(n)));
  }
  // Fekete: inf_n d_n^{1/n} = lambda_1, so any term bounds it from above.
  r.upper = upper;
  const std::size_t last = seq.degs.size() - 1;
  std::size_t span = std::max<std::size_t>(1, last / 3);
  r.window_end = last;
  r.window_begin = last - span;
  // mean of log(d_{k+1}/d_k) over the window telescopes
  double est = std::exp((std::log(static_cast<double>(seq.degs[r.window_end])) -
                         std::log(static_cast<double>(seq.degs[r.window_begin]))) /
                        static_cast<double>(span));
  est = std::clamp(est, 1.0, std::max(1.0, upper));
  r.estimate = est;
  r.lower = est;
  return r;
}

DynDegReport monomial_dyndeg(const IntMatrix& a, std::size_t i, double tol) {
  if (!a.is_square()) throw ArityError("exponent matrix must be square");
  const std::size_t n = a.dim();
  if (i > n) throw std::out_of_range("dynamical degree index exceeds dimension");
  Integer det = a.determinant();
  if (det == 0) throw std::invalid_argument("singular exponent matrix");
  DynDegReport r;
  r.i = i;
  r.method = DynDegMethod::exact_monomial;
  if (i == 0 || i == n) {
    Integer value = i == 0 ? Integer(1) : Integer(abs(det));
    double v = value.get_d();
    r.lower = r.upper = r.estimate = v;
    r.exact = Integer(v) == value;
    if (!r.exact) {
      r.lower = std::nextafter(v, 0.0);
      r.upper = std::nextafter(v, std::numeric_limits<double>::infinity());
    }
    return r;
  }
  SpectralInterval s = algebra::spectral_radius(algebra::exterior_power(a, i), tol);
  r.lower = s.lower;
  r.upper = s.upper;
  r.estimate = s.midpoint();
  r.exact = s.exact;
  return r;
}

namespace {

double pow_down(double x, std::size_t m) { return std::pow(x, static_cast<double>(m)) * (1.0 - 1e-15); }
double pow_up(double x, std::size_t m) { return std::pow(x, static_cast<double>(m)) * (1.0 + 1e-15); }

}  // namespace

DegreeLawReport verify_degree_laws(const IntMatrix& a, std::size_t m_max, double tol) {
  if (m_max < 2) throw std::invalid_argument("verify_degree_laws needs m_max >= 2");
  const std::size_t n = a.dim();
  DegreeLawReport report;
  for (std::size_t i = 0; i <= n; ++i) report.lambdas.push_back(monomial_dyndeg(a, i, tol));

  for (std::size_t m = 1; m <= m_max; ++m) {
    IntMatrix am = algebra::matrix_power(a, m);
    for (std::size_t i = 1; i < n; ++i) {
      ++report.checks;
      IntMatrix wedge = algebra::exterior_power(a, i);
      if (algebra::exterior_power(am, i) != algebra::matrix_power(wedge, m)) {
        report.violations.push_back({i, m, "wedge^i(A^m) != (wedge^i A)^m"});
        continue;
      }
      ++report.checks;
      DynDegReport lm = monomial_dyndeg(am, i, tol);
      const DynDegReport& l1 = report.lambdas[i];
      double lo = pow_down(l1.lower, m) * (1.0 - tol);
      double hi = pow_up(l1.upper, m) * (1.0 + tol);
      if (lm.upper < lo || lm.lower > hi) {
        report.violations.push_back({i, m, "lambda_i(f^m) interval misses lambda_i(f)^m"});
      }
    }
  }
  for (std::size_t i = 1; i < n; ++i) {
    ++report.checks;
    const auto& prev = report.lambdas[i - 1];
    const auto& cur = report.lambdas[i];
    const auto& next = report.lambdas[i + 1];
    if (prev.lower * next.lower > cur.upper * cur.upper * (1.0 + tol)) {
      report.violations.push_back({i, 1, "log concavity lambda_{i-1} lambda_{i+1} <= lambda_i^2"});
    }
  }
  return report;
}

std::string to_string(ZdoVerdict v) {
  switch (v) {
    case ZdoVerdict::satisfied:
      return "criterion-satisfied";
    case ZdoVerdict::fails:
      return "criterion-fails";
    case ZdoVerdict::inconclusive:
      return "inconclusive";
    case ZdoVerdict::not_applicable:
      return "criterion-not-applicable";
  }
  return "?";
}

ZdoReport zdo_criterion(const IntMatrix& a, double tol) {
  if (!a.is_square() || a.dim() == 0) throw ArityError("zdo_criterion needs a nonempty square matrix");
  ZdoReport r;
  r.birational = maps::monomial_is_birational(a);
  r.invariant_monomials = maps::invariant_monomials(a);
  if (!r.birational) return r;
  r.lambda1 = monomial_dyndeg(a, 1, tol);
  const DynDegReport& l1 = *r.lambda1;
  if (a.dim() <= 2) {
    // lambda_3 condition is vacuous here
    if (l1.lower > 1.0) {
      r.verdict = ZdoVerdict::satisfied;
    } else if (l1.upper <= 1.0) {
      r.verdict = ZdoVerdict::fails;
    } else {
      r.verdict = ZdoVerdict::inconclusive;
    }
    return r;
  }
  r.lambda3 = monomial_dyndeg(a, 3, tol);
  const DynDegReport& l3 = *r.lambda3;
  if (l3.upper < l1.lower) {
    r.verdict = ZdoVerdict::satisfied;
  } else if (l3.lower >= l1.upper) {
    r.verdict = ZdoVerdict::fails;
  } else {
    r.verdict = ZdoVerdict::inconclusive;
  }
  return r;
}

}  // namespace orbitlab::degrees
