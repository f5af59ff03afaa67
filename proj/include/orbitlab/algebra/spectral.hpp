#ifndef ORBITLAB_ALGEBRA_SPECTRAL_HPP
#define ORBITLAB_ALGEBRA_SPECTRAL_HPP

#include <cstddef>

#include "orbitlab/algebra/int_matrix.hpp"

namespace orbitlab::algebra {

// Certified enclosure lower <= rho(A) <= upper.
struct SpectralInterval {
  double lower = 0.0;
  double upper = 0.0;
  // Bisection steps (root isolation) or the largest matrix power used
  // (Gelfand bounds).
  std::size_t n_power = 0;
  // True when upper - lower <= the requested tolerance.
  bool converged = false;
  // True when rho is rational and lower == upper == rho.
  bool exact = false;

  double width() const { return upper - lower; }
  double midpoint() const { return 0.5 * (lower + upper); }
  bool contains(double x) const { return lower <= x && x <= upper; }
};

// Largest dimension for which characteristic-polynomial root isolation is
// used; larger matrices get Gelfand power bounds only.
inline constexpr std::size_t kRootIsolationMaxDim = 6;

// Spectral radius of a square integer matrix. Requires tol > 0.
SpectralInterval spectral_radius(const IntMatrix& a, double tol);

// Bounds from |tr A^k| / n <= rho^k <= ||A^k||_inf over k = 1, 2, 4, ...
SpectralInterval gelfand_bounds(const IntMatrix& a, double tol);

}  // namespace orbitlab::algebra

#endif
