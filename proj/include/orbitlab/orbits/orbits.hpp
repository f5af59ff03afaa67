#ifndef ORBITLAB_ORBITS_ORBITS_HPP
#define ORBITLAB_ORBITS_ORBITS_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "orbitlab/algebra/int_matrix.hpp"
#include "orbitlab/algebra/multi_poly.hpp"
#include "orbitlab/heights/heights.hpp"
#include "orbitlab/maps/proj_point.hpp"
#include "orbitlab/maps/rational_map.hpp"

namespace orbitlab::orbits {

using algebra::IntMatrix;
using algebra::MultiPoly;
using heights::HeightValue;
using maps::ProjPointQ;
using maps::RationalMapPn;
using maps::TorusPoint;

enum class OrbitStatus { complete, indeterminate, periodic, truncated };

struct OrbitRecord {
  std::string map_id;
  std::string seed;
  // f^n(x) for n = 0..; empty on the torus fast path.
  std::vector<ProjPointQ> points;
  bool points_elided = false;
  std::vector<HeightValue> heights;
  OrbitStatus status = OrbitStatus::complete;
  std::size_t horizon = 0;           // requested N
  std::size_t indeterminate_at = 0;  // f^k(x) in I_f
  // periodic: f^{preperiod+period}(x) = f^{preperiod}(x); the record holds
  // the preperiod + period distinct points only.
  std::size_t period = 0;
  std::size_t preperiod = 0;

  std::string status_text() const;
  // h_n for n = 0..horizon, unrolling a cycle; other records unchanged.
  std::vector<HeightValue> heights_to_horizon() const;
};

// Stops at N, at the first point of I_f, on an exact revisit, or when a
// coordinate passes bit_cap (status truncated).
OrbitRecord iterate_orbit(const RationalMapPn& f, const ProjPointQ& x, std::size_t horizon,
                          std::size_t bit_cap = heights::kDefaultBitCap, std::string map_id = "");

// Fast path for x -> x^A on the torus; points are elided, heights come from
// prime exponent vectors and cycles are found on those vectors.
OrbitRecord iterate_torus_orbit(const IntMatrix& a, const TorusPoint& x, std::size_t horizon, std::string map_id = "");

struct AlphaEstimate {
  double slope = 1.0;
  double cesaro = 1.0;
  std::size_t window_begin = 0;
  std::size_t window_end = 0;
};

inline constexpr std::size_t kAlphaMinEntries = 8;

// Both estimators over the final third of the record, on max(1, h).
// Periodic records give exactly 1. Throws std::invalid_argument for fewer
// than kAlphaMinEntries heights on any other record.
AlphaEstimate alpha_estimate(const OrbitRecord& rec);

struct AlphaBoundReport {
  bool pass = true;
  double slope = 1.0;
  double bound = 1.0;  // upper(lambda_1) * (1 + slack)
  std::string detail;
};

AlphaBoundReport check_alpha_bound(const OrbitRecord& rec, double lambda1_upper, double slack);

struct Progression {
  std::size_t start = 0;
  std::size_t step = 1;
  std::size_t count = 0;  // terms within the data
};

struct ReturnSetReport {
  std::size_t last_index = 0;
  std::vector<std::size_t> hits;
  std::vector<Progression> progressions;
  std::vector<std::size_t> finite;
  // Heuristic: the unexplained hits all sit in the first half of the data.
  bool consistent = true;
};

inline constexpr std::size_t kMinProgressionLength = 3;

// {n : w(f^n x) = 0} on the record, split greedily into progressions that
// run to the end of the data plus a finite remainder.
ReturnSetReport return_set(const OrbitRecord& rec, const MultiPoly& w);

struct InterpolationReport {
  unsigned degree = 0;
  std::size_t monomials = 0;
  std::size_t points = 0;
  std::size_t rank = 0;
  std::size_t kernel_dim = 0;
  bool exact_rank = true;  // false: multi-modular lower bound on the rank
  bool certified = true;   // kernel_dim is the true value
  bool underdetermined = false;
};

// Entries up to this many bits use exact Bareiss rank.
inline constexpr std::size_t kExactRankBits = 4096;

// Kernel of the evaluation pairing between degree-d forms and the points.
InterpolationReport orbit_zariski_test(const std::vector<ProjPointQ>& points, unsigned d);

struct ZariskiScan {
  std::vector<InterpolationReport> reports;  // d = 1..d_max
  bool no_obstruction = false;               // certified kernel 0 for every d
};

ZariskiScan zariski_scan(const std::vector<ProjPointQ>& points, unsigned d_max);

struct GapReport {
  std::vector<double> gaps;  // G_k = h_{(k+1)m} - c h_{km}
  // Start of the final run of positive gaps, when that run is sustained.
  std::optional<std::size_t> first_positive;
  std::vector<double> ratios;  // G_{k+1} / G_k along that run
  double fraction_at_least_beta = 0.0;
  bool degenerate() const { return !first_positive.has_value(); }
};

GapReport recursive_gap_tracker(const OrbitRecord& rec, double c, std::size_t m, double beta);

struct SearchEntry {
  std::string seed;
  std::string status;
  AlphaEstimate alpha;
  bool hit = false;
};

struct SearchReport {
  double lambda1_upper = 1.0;
  double threshold = 1.0;
  std::size_t sampled = 0;
  std::size_t excluded = 0;  // indeterminate or too short
  std::vector<SearchEntry> ranked;  // by slope estimate, descending
  std::size_t hits() const;
};

SearchReport rank_seeds(const std::vector<OrbitRecord>& records, double lambda1_upper, double eps);

// Seeds with integer coordinates in [-bound, bound], not all zero.
SearchReport high_alpha_search(const RationalMapPn& f, std::size_t samples, long bound, std::size_t horizon,
                               double eps, double lambda1_upper, std::uint64_t rng_seed);

// Torus seeds a/b with 0 < |a| <= bound, 1 <= b <= bound.
SearchReport high_alpha_search_torus(const IntMatrix& a, std::size_t samples, long bound, std::size_t horizon,
                                     double eps, double lambda1_upper, std::uint64_t rng_seed);

}  // namespace orbitlab::orbits

#endif
