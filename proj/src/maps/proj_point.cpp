#include "orbitlab/maps/proj_point.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace orbitlab::maps {

ProjPointQ::ProjPointQ(std::vector<Integer> coords) : coords_(std::move(coords)) {
  if (coords_.size() < 2) throw std::invalid_argument("projective point needs at least two coordinates");
  Integer g = 0;
  for (const Integer& c : coords_) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  if (g == 0) throw std::invalid_argument("projective point with all coordinates zero");
  auto first = std::find_if(coords_.begin(), coords_.end(), [](const Integer& c) { return c != 0; });
  if (*first < 0) g = -g;
  if (g != 1) {
    for (Integer& c : coords_) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
  }
}

ProjPointQ::ProjPointQ(std::initializer_list<long> coords)
    : ProjPointQ(std::vector<Integer>(coords.begin(), coords.end())) {}

std::size_t ProjPointQ::max_bits() const {
  std::size_t b = 0;
  for (const Integer& c : coords_) b = std::max(b, algebra::bit_size(c));
  return b;
}

std::string ProjPointQ::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < coords_.size(); ++i) os << (i ? ":" : "") << coords_[i].get_str();
  os << ']';
  return os.str();
}

std::size_t ProjPointHash::operator()(const ProjPointQ& p) const noexcept {
  std::uint64_t h = 0x84222325cbf29ce4ULL;
  for (const Integer& c : p.coords()) {
    const mpz_srcptr z = c.get_mpz_t();
    h ^= static_cast<std::uint64_t>(z->_mp_size) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    std::size_t limbs = mpz_size(z);
    for (std::size_t i = 0; i < limbs; ++i) {
      h ^= static_cast<std::uint64_t>(mpz_getlimbn(z, static_cast<mp_size_t>(i))) + 0x9e3779b97f4a7c15ULL +
           (h << 6) + (h >> 2);
    }
  }
  return static_cast<std::size_t>(h);
}

ProjPointQ torus_to_projective(const TorusPoint& x) {
  Integer l = 1;
  for (const Rational& c : x) {
    if (c == 0) throw std::invalid_argument("torus point has a zero coordinate");
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den().get_mpz_t());
  }
  std::vector<Integer> coords;
  coords.reserve(x.size() + 1);
  for (const Rational& c : x) coords.push_back(c.get_num() * (l / c.get_den()));
  coords.push_back(l);
  return ProjPointQ(std::move(coords));
}

std::string torus_to_string(const TorusPoint& x) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < x.size(); ++i) os << (i ? "," : "") << x[i].get_str();
  os << ')';
  return os.str();
}

}  // namespace orbitlab::maps
