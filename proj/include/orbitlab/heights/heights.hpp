#ifndef ORBITLAB_HEIGHTS_HEIGHTS_HPP
#define ORBITLAB_HEIGHTS_HEIGHTS_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "orbitlab/algebra/int_matrix.hpp"
#include "orbitlab/maps/proj_point.hpp"
#include "orbitlab/maps/rational_map.hpp"

namespace orbitlab::heights {

using algebra::IntMatrix;
using maps::ProjPointQ;
using maps::TorusPoint;

// Per-coordinate budget for orbits computed with explicit points: a point
// is over budget once some |x_i| > 2^bit_cap.
inline constexpr std::size_t kDefaultBitCap = std::size_t{1} << 20;

bool over_bit_cap(const ProjPointQ& p, std::size_t bit_cap);

// Natural-log Weil height; long double so that heights near 1e7 still
// carry ~1e-12 absolute accuracy.
struct HeightValue {
  long double h = 0.0L;
  long double clamped() const { return h < 1.0L ? 1.0L : h; }
};

// log max |x_i| of the normalised coordinates.
HeightValue weil_height(const ProjPointQ& p);

struct HeightSeries {
  std::vector<HeightValue> values;  // h(f^n x), n = 0, 1, ...
  // Index of the first iterate lying in the indeterminacy locus.
  std::optional<std::size_t> indeterminate_at;
  // Stopped early because a coordinate passed the bit cap.
  bool truncated = false;
};

HeightSeries orbit_heights(const maps::RationalMapPn& f, const ProjPointQ& x, std::size_t horizon,
                           std::size_t bit_cap = kDefaultBitCap);

// Torus point stored as prime exponents: x_i = s_i * prod_p p^{E(i,p)}.
// One step of x -> x^A is E <- A E, so nothing is ever materialised.
class TorusExponentState {
 public:
  // Throws std::invalid_argument on a zero coordinate or a wrong dimension.
  TorusExponentState(IntMatrix a, const TorusPoint& x);

  void step();
  // Height of [x_1 : ... : x_n : 1].
  HeightValue height() const;
  // Canonical text of the state; equal keys <=> equal points.
  std::string key() const;
  // Materialises the current point (exponential size; tests only).
  TorusPoint point() const;

  const std::vector<algebra::Integer>& primes() const { return primes_; }

 private:
  IntMatrix a_;
  std::vector<algebra::Integer> primes_;
  std::vector<long double> logs_;
  IntMatrix exps_;                   // n x |primes|
  std::vector<algebra::Integer> sign_;  // parity of the sign exponent, 0/1
};

// h(f_A^n x) for n = 0..N via the exponent-vector recursion.
std::vector<HeightValue> monomial_orbit_heights(const IntMatrix& a, const TorusPoint& x, std::size_t horizon);

}  // namespace orbitlab::heights

#endif
