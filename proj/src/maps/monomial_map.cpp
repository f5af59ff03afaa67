#include "orbitlab/maps/monomial_map.hpp"

#include <algorithm>
#include <stdexcept>

#include "orbitlab/algebra/errors.hpp"

namespace orbitlab::maps {

using algebra::Exponents;

namespace {

long small(const Integer& z) {
  if (!z.fits_slong_p()) throw std::overflow_error("exponent does not fit in a machine word");
  return z.get_si();
}

Rational rational_power(const Rational& x, long e) {
  Integer num, den;
  unsigned long k = static_cast<unsigned long>(e < 0 ? -e : e);
  mpz_pow_ui(num.get_mpz_t(), x.get_num().get_mpz_t(), k);
  mpz_pow_ui(den.get_mpz_t(), x.get_den().get_mpz_t(), k);
  Rational r = e < 0 ? Rational(den, num) : Rational(num, den);
  r.canonicalize();
  return r;
}

}  // namespace

MonomialMap::MonomialMap(IntMatrix a) : a_(std::move(a)) {
  if (!a_.is_square() || a_.dim() == 0) throw std::invalid_argument("monomial map needs a square exponent matrix");
  if (a_.determinant() == 0) throw std::invalid_argument("singular exponent matrix (map is not dominant)");
}

TorusPoint MonomialMap::apply(const TorusPoint& x) const {
  if (x.size() != n()) throw ArityError("torus point has wrong dimension");
  TorusPoint out(n(), Rational(1));
  for (std::size_t i = 0; i < n(); ++i) {
    for (std::size_t j = 0; j < n(); ++j) {
      if (a_(i, j) == 0) continue;
      if (x[j] == 0) throw std::invalid_argument("torus point has a zero coordinate");
      out[i] *= rational_power(x[j], small(a_(i, j)));
    }
  }
  return out;
}

RationalMapPn monomial_to_rational(const IntMatrix& a) {
  MonomialMap checked(a);
  const std::size_t n = a.dim();
  // Laurent exponents of x_i / x_n-scaled coordinates; the last row is 1.
  std::vector<std::vector<long>> e(n + 1, std::vector<long>(n + 1, 0));
  for (std::size_t i = 0; i < n; ++i) {
    long row = 0;
    for (std::size_t j = 0; j < n; ++j) {
      e[i][j] = small(a(i, j));
      row += e[i][j];
    }
    e[i][n] = -row;
  }
  std::vector<long> clear(n + 1, 0);
  for (std::size_t k = 0; k <= n; ++k)
    for (std::size_t i = 0; i <= n; ++i) clear[k] = std::max(clear[k], -e[i][k]);
  std::vector<MultiPoly> coords;
  coords.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    Exponents ex(n + 1);
    for (std::size_t k = 0; k <= n; ++k) ex[k] = static_cast<std::uint32_t>(e[i][k] + clear[k]);
    coords.push_back(MultiPoly::monomial(std::move(ex), 1));
  }
  return reduce_map(std::move(coords)).map;
}

bool monomial_is_birational(const IntMatrix& a) {
  if (!a.is_square()) return false;
  Integer d = a.determinant();
  return d == 1 || d == -1;
}

std::vector<std::vector<Integer>> invariant_monomials(const IntMatrix& a) {
  return algebra::integer_kernel(a.transpose() - IntMatrix::identity(a.dim()));
}

}  // namespace orbitlab::maps
