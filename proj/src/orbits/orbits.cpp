#include "orbitlab/orbits/orbits.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "orbitlab/algebra/errors.hpp"

namespace orbitlab::orbits {

using algebra::Integer;

std::string OrbitRecord::status_text() const {
  switch (status) {
    case OrbitStatus::complete:
      return "complete";
    case OrbitStatus::indeterminate:
      return "indeterminate-at(" + std::to_string(indeterminate_at) + ")";
    case OrbitStatus::periodic:
      return "periodic(" + std::to_string(period) + "," + std::to_string(preperiod) + ")";
    case OrbitStatus::truncated:
      return "truncated(" + std::to_string(heights.size() - 1) + ")";
  }
  return "?";
}

std::vector<HeightValue> OrbitRecord::heights_to_horizon() const {
  if (status != OrbitStatus::periodic) return heights;
  std::vector<HeightValue> out;
  out.reserve(horizon + 1);
  for (std::size_t n = 0; n <= horizon; ++n) {
    out.push_back(n < heights.size() ? heights[n] : heights[preperiod + (n - preperiod) % period]);
  }
  return out;
}

OrbitRecord iterate_orbit(const RationalMapPn& f, const ProjPointQ& x, std::size_t horizon, std::size_t bit_cap,
                          std::string map_id) {
  if (horizon < 1) throw std::invalid_argument("iterate_orbit needs N >= 1");
  OrbitRecord rec;
  rec.map_id = std::move(map_id);
  rec.seed = x.to_string();
  rec.horizon = horizon;
  std::unordered_map<ProjPointQ, std::size_t, maps::ProjPointHash> seen;
  rec.points.push_back(x);
  rec.heights.push_back(heights::weil_height(x));
  seen.emplace(x, 0);
  for (std::size_t n = 1; n <= horizon; ++n) {
    auto next = maps::evaluate(f, rec.points.back());
    if (!next) {
      rec.status = OrbitStatus::indeterminate;
      rec.indeterminate_at = n - 1;
      return rec;
    }
    if (heights::over_bit_cap(*next, bit_cap)) {
      rec.status = OrbitStatus::truncated;
      return rec;
    }
    auto it = seen.find(*next);
    if (it != seen.end()) {
      rec.status = OrbitStatus::periodic;
      rec.preperiod = it->second;
      rec.period = n - it->second;
      return rec;
    }
    seen.emplace(*next, n);
    rec.heights.push_back(heights::weil_height(*next));
    rec.points.push_back(std::move(*next));
  }
  return rec;
}

OrbitRecord iterate_torus_orbit(const IntMatrix& a, const TorusPoint& x, std::size_t horizon, std::string map_id) {
  if (horizon < 1) throw std::invalid_argument("iterate_torus_orbit needs N >= 1");
  OrbitRecord rec;
  rec.map_id = std::move(map_id);
  rec.seed = maps::torus_to_string(x);
  rec.horizon = horizon;
  rec.points_elided = true;
  heights::TorusExponentState state(a, x);
  std::unordered_map<std::string, std::size_t> seen;
  seen.emplace(state.key(), 0);
  rec.heights.push_back(state.height());
  for (std::size_t n = 1; n <= horizon; ++n) {
    state.step();
    auto [it, fresh] = seen.emplace(state.key(), n);
    if (!fresh) {
      rec.status = OrbitStatus::periodic;
      rec.preperiod = it->second;
      rec.period = n - it->second;
      return rec;
    }
    rec.heights.push_back(state.height());
  }
  return rec;
}

AlphaEstimate alpha_estimate(const OrbitRecord& rec) {
  AlphaEstimate est;
  const std::size_t len = rec.heights.size();
  if (rec.status == OrbitStatus::periodic) {
    est.window_end = len - 1;
    est.window_begin = len - 1 - (len - 1) / 3;
    return est;
  }
  if (len < kAlphaMinEntries) {
    throw std::invalid_argument("alpha_estimate needs at least " + std::to_string(kAlphaMinEntries) +
                                " heights, record has " + std::to_string(len) + " (" + rec.status_text() + ")");
  }
  const std::size_t last = len - 1;
  const std::size_t span = std::max<std::size_t>(1, last / 3);
  est.window_end = last;
  est.window_begin = last - span;
  long double top = std::log(rec.heights[last].clamped());
  long double bottom = std::log(rec.heights[est.window_begin].clamped());
  est.slope = static_cast<double>(std::max(1.0L, std::exp((top - bottom) / static_cast<long double>(span))));
  est.cesaro = static_cast<double>(std::max(1.0L, std::exp(top / static_cast<long double>(last))));
  return est;
}

AlphaBoundReport check_alpha_bound(const OrbitRecord& rec, double lambda1_upper, double slack) {
  AlphaBoundReport r;
  AlphaEstimate est = alpha_estimate(rec);
  r.slope = est.slope;
  r.bound = lambda1_upper * (1.0 + slack);
  r.pass = est.slope <= r.bound;
  if (!r.pass) {
    r.detail = "map " + rec.map_id + " seed " + rec.seed + " " + rec.status_text() + ": slope " +
               std::to_string(est.slope) + " over window [" + std::to_string(est.window_begin) + "," +
               std::to_string(est.window_end) + "] exceeds " + std::to_string(r.bound);
  }
  return r;
}

ReturnSetReport return_set(const OrbitRecord& rec, const MultiPoly& w) {
  if (rec.points_elided) throw Unsupported("return sets need the orbit points, which this record elides");
  if (w.is_zero()) throw std::invalid_argument("return set of the zero polynomial");
  if (!w.is_homogeneous()) throw std::invalid_argument("return set needs a homogeneous polynomial");
  if (rec.points.empty()) throw std::invalid_argument("empty orbit record");
  if (w.nvars() != rec.points.front().coords().size()) throw ArityError("polynomial and orbit live in different spaces");

  ReturnSetReport out;
  std::vector<bool> in_points(rec.points.size());
  for (std::size_t k = 0; k < rec.points.size(); ++k) in_points[k] = w.evaluate(rec.points[k].coords()) == 0;
  const bool periodic = rec.status == OrbitStatus::periodic;
  out.last_index = periodic ? rec.horizon : rec.points.size() - 1;
  std::vector<bool> member(out.last_index + 1);
  for (std::size_t n = 0; n <= out.last_index; ++n) {
    std::size_t k = n < rec.points.size() ? n : rec.preperiod + (n - rec.preperiod) % rec.period;
    member[n] = in_points[k];
    if (member[n]) out.hits.push_back(n);
  }

  const std::size_t last = out.last_index;
  std::set<std::size_t> remaining(out.hits.begin(), out.hits.end());
  for (;;) {
    Progression best;
    for (std::size_t a : out.hits) {
      for (std::size_t d = 1; a + (kMinProgressionLength - 1) * d <= last; ++d) {
        std::size_t count = 0;
        bool full = true;
        bool fresh = false;
        for (std::size_t t = a; t <= last; t += d) {
          if (!member[t]) {
            full = false;
            break;
          }
          fresh = fresh || remaining.count(t) != 0;
          ++count;
        }
        if (!full || !fresh || count < kMinProgressionLength) continue;
        if (count > best.count) best = Progression{a, d, count};
      }
    }
    if (best.count == 0) break;
    for (std::size_t t = best.start; t <= last; t += best.step) remaining.erase(t);
    out.progressions.push_back(best);
  }
  out.finite.assign(remaining.begin(), remaining.end());
  for (std::size_t n : out.finite)
    if (2 * n > last) out.consistent = false;
  return out;
}

namespace {

std::vector<algebra::Exponents> degree_monomials(std::size_t nvars, unsigned d) {
  std::vector<algebra::Exponents> out;
  algebra::Exponents e(nvars, 0);
  // enumerate compositions of d into nvars parts
  auto rec = [&](auto&& self, std::size_t i, unsigned left) -> void {
    if (i + 1 == nvars) {
      e[i] = left;
      out.push_back(e);
      return;
    }
    for (unsigned k = left + 1; k-- > 0;) {
      e[i] = k;
      self(self, i + 1, left - k);
    }
  };
  rec(rec, 0, d);
  return out;
}

const std::vector<std::uint64_t>& rank_primes() {
  static const std::vector<std::uint64_t> primes = [] {
    std::vector<std::uint64_t> ps;
    for (unsigned k = 0; k < 4; ++k) {
      Integer start = (Integer(1) << 61) + Integer(k) * (Integer(1) << 40);
      Integer p;
      mpz_nextprime(p.get_mpz_t(), start.get_mpz_t());
      ps.push_back(p.get_ui());
    }
    return ps;
  }();
  return primes;
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}

std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1;
  while (e != 0) {
    if (e & 1U) r = mulmod(r, b, p);
    b = mulmod(b, b, p);
    e >>= 1;
  }
  return r;
}

std::size_t rank_mod(std::vector<std::vector<std::uint64_t>> m, std::uint64_t p) {
  const std::size_t rows = m.size();
  const std::size_t cols = rows == 0 ? 0 : m[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && m[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(m[piv], m[r]);
    std::uint64_t inv = powmod(m[r][c], p - 2, p);
    for (std::size_t i = r + 1; i < rows; ++i) {
      if (m[i][c] == 0) continue;
      std::uint64_t f = mulmod(m[i][c], inv, p);
      for (std::size_t k = c; k < cols; ++k) {
        std::uint64_t sub = mulmod(f, m[r][k], p);
        m[i][k] = m[i][k] >= sub ? m[i][k] - sub : m[i][k] + p - sub;
      }
    }
    ++r;
  }
  return r;
}

}  // namespace

InterpolationReport orbit_zariski_test(const std::vector<ProjPointQ>& points, unsigned d) {
  if (d < 1) throw std::invalid_argument("interpolation degree must be >= 1");
  if (points.empty()) throw std::invalid_argument("no points to interpolate");
  const std::size_t nvars = points.front().coords().size();
  for (const auto& p : points)
    if (p.coords().size() != nvars) throw ArityError("points of different dimensions");
  const auto mons = degree_monomials(nvars, d);
  InterpolationReport r;
  r.degree = d;
  r.monomials = mons.size();
  r.points = points.size();
  r.underdetermined = r.points < r.monomials;

  std::size_t bits = 0;
  for (const auto& p : points) bits = std::max(bits, p.max_bits());
  if (bits * d <= kExactRankBits) {
    IntMatrix m(points.size(), mons.size());
    for (std::size_t i = 0; i < points.size(); ++i)
      for (std::size_t j = 0; j < mons.size(); ++j) {
        Integer v = 1;
        for (std::size_t k = 0; k < nvars; ++k) {
          if (mons[j][k] == 0) continue;
          Integer pw;
          mpz_pow_ui(pw.get_mpz_t(), points[i].coords()[k].get_mpz_t(), mons[j][k]);
          v *= pw;
        }
        m(i, j) = v;
      }
    r.rank = algebra::rank(m);
  } else {
    // rank mod p never exceeds the rank over Q
    r.exact_rank = false;
    for (std::uint64_t p : rank_primes()) {
      std::vector<std::vector<std::uint64_t>> m(points.size(), std::vector<std::uint64_t>(mons.size()));
      for (std::size_t i = 0; i < points.size(); ++i) {
        std::vector<std::uint64_t> red(nvars);
        for (std::size_t k = 0; k < nvars; ++k) red[k] = mpz_fdiv_ui(points[i].coords()[k].get_mpz_t(), p);
        for (std::size_t j = 0; j < mons.size(); ++j) {
          std::uint64_t v = 1;
          for (std::size_t k = 0; k < nvars; ++k) v = mulmod(v, powmod(red[k], mons[j][k], p), p);
          m[i][j] = v;
        }
      }
      r.rank = std::max(r.rank, rank_mod(std::move(m), p));
      if (r.rank == mons.size()) break;
    }
  }
  r.kernel_dim = mons.size() - r.rank;
  r.certified = r.exact_rank || r.kernel_dim == 0;
  return r;
}

ZariskiScan zariski_scan(const std::vector<ProjPointQ>& points, unsigned d_max) {
  ZariskiScan scan;
  scan.no_obstruction = true;
  for (unsigned d = 1; d <= d_max; ++d) {
    scan.reports.push_back(orbit_zariski_test(points, d));
    const auto& r = scan.reports.back();
    if (r.kernel_dim != 0 || !r.certified) scan.no_obstruction = false;
  }
  return scan;
}

GapReport recursive_gap_tracker(const OrbitRecord& rec, double c, std::size_t m, double beta) {
  if (m < 1) throw std::invalid_argument("gap step m must be >= 1");
  std::vector<HeightValue> h = rec.heights_to_horizon();
  if (h.size() < 3 * m) throw std::invalid_argument("record too short for this step (needs 3m heights)");
  GapReport r;
  for (std::size_t k = 0; (k + 1) * m < h.size(); ++k) {
    r.gaps.push_back(static_cast<double>(h[(k + 1) * m].h - static_cast<long double>(c) * h[k * m].h));
  }
  std::size_t start = r.gaps.size();
  while (start > 0 && r.gaps[start - 1] > 0) --start;
  const std::size_t run = r.gaps.size() - start;
  // a lone positive gap at the end of an oscillating record is not a trend
  if (run == 0 || run < std::max<std::size_t>(2, (r.gaps.size() + 2) / 3)) return r;
  r.first_positive = start;
  std::size_t above = 0;
  for (std::size_t k = start; k + 1 < r.gaps.size(); ++k) {
    r.ratios.push_back(r.gaps[k + 1] / r.gaps[k]);
    if (r.ratios.back() >= beta) ++above;
  }
  r.fraction_at_least_beta = r.ratios.empty() ? 0.0 : static_cast<double>(above) / static_cast<double>(r.ratios.size());
  return r;
}

std::size_t SearchReport::hits() const {
  return static_cast<std::size_t>(std::count_if(ranked.begin(), ranked.end(), [](const SearchEntry& e) { return e.hit; }));
}

SearchReport rank_seeds(const std::vector<OrbitRecord>& records, double lambda1_upper, double eps) {
  if (!(eps > 0)) throw std::invalid_argument("eps must be positive");
  SearchReport out;
  out.lambda1_upper = lambda1_upper;
  out.threshold = (1.0 - eps) * lambda1_upper;
  out.sampled = records.size();
  for (const OrbitRecord& rec : records) {
    if (rec.status == OrbitStatus::indeterminate) {
      ++out.excluded;
      continue;
    }
    AlphaEstimate est;
    try {
      est = alpha_estimate(rec);
    } catch (const std::invalid_argument&) {
      ++out.excluded;
      continue;
    }
    out.ranked.push_back(SearchEntry{rec.seed, rec.status_text(), est, est.slope >= out.threshold});
  }
  std::stable_sort(out.ranked.begin(), out.ranked.end(),
                   [](const SearchEntry& a, const SearchEntry& b) { return a.alpha.slope > b.alpha.slope; });
  return out;
}

SearchReport high_alpha_search(const RationalMapPn& f, std::size_t samples, long bound, std::size_t horizon,
                               double eps, double lambda1_upper, std::uint64_t rng_seed) {
  std::mt19937_64 rng(rng_seed);
  std::uniform_int_distribution<long> coord(-bound, bound);
  std::vector<OrbitRecord> records;
  while (records.size() < samples) {
    std::vector<Integer> c(f.n() + 1);
    bool nonzero = false;
    for (Integer& v : c) {
      v = coord(rng);
      nonzero = nonzero || v != 0;
    }
    if (!nonzero) continue;
    records.push_back(iterate_orbit(f, ProjPointQ(std::move(c)), horizon));
  }
  return rank_seeds(records, lambda1_upper, eps);
}

SearchReport high_alpha_search_torus(const IntMatrix& a, std::size_t samples, long bound, std::size_t horizon,
                                     double eps, double lambda1_upper, std::uint64_t rng_seed) {
  std::mt19937_64 rng(rng_seed);
  std::uniform_int_distribution<long> num(-bound, bound);
  std::uniform_int_distribution<long> den(1, bound);
  std::vector<OrbitRecord> records;
  while (records.size() < samples) {
    TorusPoint x;
    while (x.size() < a.dim()) {
      long v = num(rng);
      if (v == 0) continue;
      algebra::Rational q(v, den(rng));
      q.canonicalize();
      x.push_back(q);
    }
    records.push_back(iterate_torus_orbit(a, x, horizon));
  }
  return rank_seeds(records, lambda1_upper, eps);
}

}  // namespace orbitlab::orbits
