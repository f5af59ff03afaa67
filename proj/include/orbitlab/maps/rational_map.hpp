#ifndef ORBITLAB_MAPS_RATIONAL_MAP_HPP
#define ORBITLAB_MAPS_RATIONAL_MAP_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "orbitlab/algebra/multi_poly.hpp"
#include "orbitlab/maps/proj_point.hpp"

namespace orbitlab::maps {

using algebra::MultiPoly;

struct Reduction;
Reduction reduce_map(std::vector<MultiPoly> raw_coords);

// Dominant rational self-map of P^n: n+1 coprime homogeneous polynomials of
// one common degree in the variables x0..xn. Only built through reduce_map,
// so the invariants always hold.
class RationalMapPn {
 public:
  std::size_t n() const { return coords_.size() - 1; }
  long degree() const { return coords_.front().degree(); }
  const std::vector<MultiPoly>& coords() const { return coords_; }
  std::size_t term_count() const;

  std::string to_string() const;

  friend bool operator==(const RationalMapPn&, const RationalMapPn&) = default;

 private:
  friend Reduction reduce_map(std::vector<MultiPoly> raw_coords);
  explicit RationalMapPn(std::vector<MultiPoly> coords) : coords_(std::move(coords)) {}

  std::vector<MultiPoly> coords_;
};

struct Reduction {
  RationalMapPn map;
  // Common factor divided out (primitive, positive leading coefficient);
  // the constant 1 when the input was already coprime.
  MultiPoly removed_factor;

  long removed_degree() const { return removed_factor.degree(); }
};

// Divides out the polynomial gcd of positive degree. Integer content is kept.
// Throws std::invalid_argument on inhomogeneous, mixed-degree or all-zero
// input and ArityError when the variable count is not coords.size().
Reduction reduce_map(std::vector<MultiPoly> raw_coords);

// Convenience: parse "x0..xn" polynomial strings and reduce.
RationalMapPn make_map(const std::vector<std::string>& coords);

RationalMapPn identity_map(std::size_t n);

// f o g, reduced. A nonzero term_cap bounds the size of intermediate
// polynomials (TermCapExceeded).
Reduction compose_reduced(const RationalMapPn& f, const RationalMapPn& g, std::size_t term_cap = 0);
RationalMapPn compose(const RationalMapPn& f, const RationalMapPn& g, std::size_t term_cap = 0);

// Image of p, or nullopt when every coordinate vanishes (p lies in the
// indeterminacy locus).
std::optional<ProjPointQ> evaluate(const RationalMapPn& f, const ProjPointQ& p);

}  // namespace orbitlab::maps

#endif
