#ifndef ORBITLAB_MAPS_MONOMIAL_MAP_HPP
#define ORBITLAB_MAPS_MONOMIAL_MAP_HPP

#include <vector>

#include "orbitlab/algebra/int_matrix.hpp"
#include "orbitlab/maps/proj_point.hpp"
#include "orbitlab/maps/rational_map.hpp"

namespace orbitlab::maps {

using algebra::IntMatrix;

// Torus map x -> x^A: coordinate i of the image is prod_j x_j^{A_ij}.
// Composition matches matrix product: f_A o f_B = f_{AB}.
class MonomialMap {
 public:
  // Throws std::invalid_argument unless A is square with det A != 0.
  explicit MonomialMap(IntMatrix a);

  const IntMatrix& matrix() const { return a_; }
  std::size_t n() const { return a_.dim(); }

  // Exact image of a torus point (negative exponents invert).
  TorusPoint apply(const TorusPoint& x) const;

 private:
  IntMatrix a_;
};

// Homogenises x -> x^A onto P^n (extra coordinate last) by multiplying all
// coordinates with the smallest monomial clearing every negative exponent,
// then reduces. Throws std::invalid_argument for singular A.
RationalMapPn monomial_to_rational(const IntMatrix& a);

// det A = +-1.
bool monomial_is_birational(const IntMatrix& a);

// Z-basis of {v : A^T v = v}: exponent vectors of monomials x^v with
// x^v o f_A = x^v. Empty iff no nonconstant invariant monomial exists.
std::vector<std::vector<algebra::Integer>> invariant_monomials(const IntMatrix& a);

}  // namespace orbitlab::maps

#endif
