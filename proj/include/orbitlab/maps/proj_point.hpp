#ifndef ORBITLAB_MAPS_PROJ_POINT_HPP
#define ORBITLAB_MAPS_PROJ_POINT_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "orbitlab/algebra/integer.hpp"

namespace orbitlab::maps {

using algebra::Integer;
using algebra::Rational;

// A point of P^n(Q) in its canonical representative: coprime integer
// coordinates whose first nonzero entry is positive.
class ProjPointQ {
 public:
  ProjPointQ() = default;
  // Normalises; throws std::invalid_argument when every coordinate is zero
  // or fewer than two coordinates are given.
  explicit ProjPointQ(std::vector<Integer> coords);
  ProjPointQ(std::initializer_list<long> coords);

  const std::vector<Integer>& coords() const { return coords_; }
  std::size_t dim() const { return coords_.size() - 1; }
  // Largest bit size among the coordinates.
  std::size_t max_bits() const;

  std::string to_string() const;

  friend bool operator==(const ProjPointQ&, const ProjPointQ&) = default;

 private:
  std::vector<Integer> coords_;
};

struct ProjPointHash {
  std::size_t operator()(const ProjPointQ& p) const noexcept;
};

// A point of the torus (Q^*)^n.
using TorusPoint = std::vector<Rational>;

// [x_1 : ... : x_n : 1], the embedding used by homogenised monomial maps.
ProjPointQ torus_to_projective(const TorusPoint& x);

std::string torus_to_string(const TorusPoint& x);

}  // namespace orbitlab::maps

#endif
