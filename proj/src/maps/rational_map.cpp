#include "orbitlab/maps/rational_map.hpp"

#include <sstream>
#include <stdexcept>

#include "orbitlab/algebra/errors.hpp"

namespace orbitlab::maps {

using algebra::poly_divide_exact;
using algebra::poly_gcd;

std::size_t RationalMapPn::term_count() const {
  std::size_t t = 0;
  for (const MultiPoly& c : coords_) t += c.size();
  return t;
}

std::string RationalMapPn::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < coords_.size(); ++i) os << (i ? " : " : "") << coords_[i].to_string();
  os << ')';
  return os.str();
}

Reduction reduce_map(std::vector<MultiPoly> raw) {
  if (raw.size() < 2) throw std::invalid_argument("a self-map of P^n needs at least two coordinates");
  long degree = MultiPoly::kZeroDegree;
  for (const MultiPoly& c : raw) {
    if (c.nvars() != raw.size()) {
      throw ArityError("coordinates of a map of P^" + std::to_string(raw.size() - 1) + " must use " +
                       std::to_string(raw.size()) + " variables");
    }
    if (c.is_zero()) continue;
    if (!c.is_homogeneous()) throw std::invalid_argument("inhomogeneous coordinate " + c.to_string());
    if (degree == MultiPoly::kZeroDegree) {
      degree = c.degree();
    } else if (c.degree() != degree) {
      throw std::invalid_argument("coordinates of mixed degree");
    }
  }
  if (degree == MultiPoly::kZeroDegree) throw std::invalid_argument("all coordinates are zero");

  const std::size_t nvars = raw.size();
  MultiPoly g(nvars);
  for (const MultiPoly& c : raw) {
    if (c.is_zero()) continue;
    g = poly_gcd(g, c);
    if (g.is_constant()) break;
  }
  MultiPoly factor = g.is_constant() ? MultiPoly::constant(nvars, 1) : g.primitive_part();
  if (factor.degree() > 0) {
    for (MultiPoly& c : raw) {
      if (c.is_zero()) continue;
      auto q = poly_divide_exact(c, factor);
      if (!q) throw std::logic_error("gcd does not divide a coordinate");
      c = std::move(*q);
    }
  }
  if (degree - factor.degree() < 1) throw std::invalid_argument("map reduces to a constant");
  return Reduction{RationalMapPn(std::move(raw)), std::move(factor)};
}

RationalMapPn make_map(const std::vector<std::string>& coords) {
  std::vector<MultiPoly> polys;
  polys.reserve(coords.size());
  for (const std::string& s : coords) polys.push_back(algebra::parse_poly(s, coords.size()));
  return reduce_map(std::move(polys)).map;
}

RationalMapPn identity_map(std::size_t n) {
  std::vector<MultiPoly> coords;
  for (std::size_t i = 0; i <= n; ++i) coords.push_back(MultiPoly::variable(n + 1, i));
  return reduce_map(std::move(coords)).map;
}

Reduction compose_reduced(const RationalMapPn& f, const RationalMapPn& g, std::size_t term_cap) {
  if (f.n() != g.n()) throw ArityError("composing maps of P^" + std::to_string(f.n()) + " and P^" + std::to_string(g.n()));
  std::vector<MultiPoly> raw;
  raw.reserve(f.coords().size());
  for (const MultiPoly& c : f.coords()) raw.push_back(algebra::poly_compose(c, g.coords(), term_cap));
  return reduce_map(std::move(raw));
}

RationalMapPn compose(const RationalMapPn& f, const RationalMapPn& g, std::size_t term_cap) {
  return compose_reduced(f, g, term_cap).map;
}

std::optional<ProjPointQ> evaluate(const RationalMapPn& f, const ProjPointQ& p) {
  if (p.dim() != f.n()) throw ArityError("point and map live in different projective spaces");
  std::vector<Integer> image;
  image.reserve(f.coords().size());
  bool any = false;
  for (const MultiPoly& c : f.coords()) {
    image.push_back(c.evaluate(p.coords()));
    any = any || image.back() != 0;
  }
  if (!any) return std::nullopt;
  return ProjPointQ(std::move(image));
}

}  // namespace orbitlab::maps
