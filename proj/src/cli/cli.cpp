#include "orbitlab/cli/cli.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "orbitlab/algebra/errors.hpp"
#include "orbitlab/degrees/degrees.hpp"
#include "orbitlab/heights/heights.hpp"
#include "orbitlab/maps/monomial_map.hpp"
#include "orbitlab/orbits/orbits.hpp"

namespace orbitlab::cli {

namespace {

using nlohmann::json;
using algebra::IntMatrix;
using algebra::Integer;
using algebra::Rational;
using maps::ProjPointQ;
using maps::RationalMapPn;
using maps::TorusPoint;

// Any failure that maps onto an exit code.
struct Failure {
  int code;
  std::string message;
};

[[noreturn]] void fail(int code, std::string message) { throw Failure{code, std::move(message)}; }

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

double rounded(double x) { return std::strtod(num(x).c_str(), nullptr); }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

std::string hex64(std::uint64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
  return buf;
}

std::pair<std::size_t, std::size_t> line_col(const std::string& text, std::size_t offset) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

struct Context {
  std::string text;  // raw config
  json cfg;
  std::uint64_t hash = 0;
  std::uint64_t seed = 0;

  std::string header() const {
    return std::string("# orbitlab ") + kToolVersion + " config=" + hex64(hash) + " seed=" + std::to_string(seed) + "\n";
  }

  template <class T>
  T get(const char* key, T fallback) const {
    if (!cfg.contains(key)) return fallback;
    try {
      return cfg.at(key).get<T>();
    } catch (const json::exception& e) {
      fail(kExitParse, std::string("config field '") + key + "': " + e.what());
    }
  }

  // Position of a string literal in the raw text, for diagnostics.
  std::optional<std::size_t> locate(const std::string& literal) const {
    std::string needle = json(literal).dump();
    std::size_t at = text.find(needle);
    if (at == std::string::npos) return std::nullopt;
    return at + 1;
  }
};

struct MapSpec {
  std::string kind;
  std::optional<IntMatrix> matrix;
  std::optional<RationalMapPn> map;  // homogeneous form (monomial: homogenised)
  std::string id;

  bool monomial() const { return matrix.has_value(); }
  std::size_t n() const { return monomial() ? matrix->dim() : map->n(); }
};

IntMatrix parse_matrix(const json& rows, const std::string& where) {
  if (!rows.is_array() || rows.empty()) fail(kExitParse, where + ": expected a nonempty array of integer rows");
  std::vector<std::vector<long>> out;
  for (const json& row : rows) {
    if (!row.is_array()) fail(kExitParse, where + ": rows must be arrays");
    std::vector<long> r;
    for (const json& v : row) {
      if (!v.is_number_integer()) fail(kExitParse, where + ": entries must be integers");
      r.push_back(v.get<long>());
    }
    if (r.size() != rows.size()) fail(kExitParse, where + ": matrix must be square");
    out.push_back(std::move(r));
  }
  return IntMatrix::from_rows(out);
}

MapSpec parse_map(const Context& ctx, std::size_t term_cap) {
  if (!ctx.cfg.contains("map")) fail(kExitParse, "config has no 'map' section");
  const json& m = ctx.cfg.at("map");
  if (!m.is_object() || !m.contains("kind") || !m.at("kind").is_string()) fail(kExitParse, "map.kind missing");
  MapSpec spec;
  spec.kind = m.at("kind").get<std::string>();
  if (spec.kind == "monomial") {
    if (!m.contains("matrix")) fail(kExitParse, "map.matrix missing");
    spec.matrix = parse_matrix(m.at("matrix"), "map.matrix");
    if (spec.matrix->determinant() == 0) fail(kExitUsage, "map.matrix is singular (map is not dominant)");
    spec.map = maps::monomial_to_rational(*spec.matrix);
    spec.id = "monomial" + spec.matrix->to_string();
    (void)term_cap;
    return spec;
  }
  if (spec.kind != "homogeneous") fail(kExitParse, "map.kind must be 'homogeneous' or 'monomial'");
  if (!m.contains("coords") || !m.at("coords").is_array()) fail(kExitParse, "map.coords missing");
  std::vector<std::string> coords;
  for (const json& c : m.at("coords")) {
    if (!c.is_string()) fail(kExitParse, "map.coords entries must be strings");
    coords.push_back(c.get<std::string>());
  }
  if (m.contains("n") && (!m.at("n").is_number_integer() || m.at("n").get<long>() + 1 != static_cast<long>(coords.size())))
    fail(kExitParse, "map.n does not match the number of coordinates");
  std::vector<algebra::MultiPoly> polys;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    try {
      polys.push_back(algebra::parse_poly(coords[i], coords.size()));
    } catch (const ParseError& e) {
      std::string where = "map.coords[" + std::to_string(i) + "]";
      if (auto at = ctx.locate(coords[i])) {
        auto [line, col] = line_col(ctx.text, *at + e.column() - 1);
        where = "config:" + std::to_string(line) + ":" + std::to_string(col) + ": " + where;
      }
      fail(kExitParse, where + ": column " + std::to_string(e.column()) + ": " + e.what());
    }
  }
  try {
    spec.map = maps::reduce_map(std::move(polys)).map;
  } catch (const std::invalid_argument& e) {
    fail(kExitParse, std::string("map.coords: ") + e.what());
  }
  spec.id = spec.map->to_string();
  return spec;
}

Rational parse_rational_value(const json& v, const std::string& where) {
  try {
    if (v.is_number_integer()) return Rational(Integer(v.get<long>()));
    if (v.is_string()) return algebra::parse_rational(v.get<std::string>());
  } catch (const std::exception& e) {
    fail(kExitParse, where + ": " + e.what());
  }
  fail(kExitParse, where + ": expected an integer or a \"p/q\" string");
}

// A seed is a torus point (length n, monomial maps only) or a projective
// point (length n + 1).
struct Seed {
  std::optional<TorusPoint> torus;
  std::optional<ProjPointQ> point;

  std::string text() const { return torus ? maps::torus_to_string(*torus) : point->to_string(); }
  ProjPointQ projective() const { return point ? *point : maps::torus_to_projective(*torus); }
};

Seed parse_seed(const json& v, const MapSpec& spec, const std::string& where) {
  if (!v.is_array()) fail(kExitParse, where + ": seed must be an array");
  Seed s;
  if (spec.monomial() && v.size() == spec.n()) {
    TorusPoint x;
    for (std::size_t i = 0; i < v.size(); ++i) {
      x.push_back(parse_rational_value(v[i], where + "[" + std::to_string(i) + "]"));
      if (x.back() == 0) fail(kExitParse, where + ": torus seeds need nonzero coordinates");
    }
    s.torus = std::move(x);
    return s;
  }
  if (v.size() != spec.n() + 1) fail(kExitParse, where + ": seed has the wrong length");
  std::vector<Integer> c;
  for (std::size_t i = 0; i < v.size(); ++i) {
    Rational q = parse_rational_value(v[i], where + "[" + std::to_string(i) + "]");
    if (q.get_den() != 1) fail(kExitParse, where + ": projective seeds need integer coordinates");
    c.push_back(q.get_num());
  }
  try {
    s.point = ProjPointQ(std::move(c));
  } catch (const std::invalid_argument& e) {
    fail(kExitParse, where + ": " + e.what());
  }
  return s;
}

std::vector<Seed> parse_seeds(const Context& ctx, const MapSpec& spec) {
  std::vector<Seed> out;
  if (ctx.cfg.contains("seeds")) {
    const json& list = ctx.cfg.at("seeds");
    if (!list.is_array()) fail(kExitParse, "seeds must be an array");
    for (std::size_t i = 0; i < list.size(); ++i) out.push_back(parse_seed(list[i], spec, "seeds[" + std::to_string(i) + "]"));
  } else if (ctx.cfg.contains("seed")) {
    out.push_back(parse_seed(ctx.cfg.at("seed"), spec, "seed"));
  } else {
    fail(kExitParse, "config needs 'seed' or 'seeds'");
  }
  return out;
}

orbits::OrbitRecord orbit_for(const MapSpec& spec, const Seed& seed, std::size_t horizon, std::size_t bit_cap) {
  if (seed.torus) return orbits::iterate_torus_orbit(*spec.matrix, *seed.torus, horizon, spec.id);
  return orbits::iterate_orbit(*spec.map, *seed.point, horizon, bit_cap, spec.id);
}

struct Output {
  std::string body;
  int code = kExitOk;
};

// ---- commands ---------------------------------------------------------------

Output cmd_degrees(const Context& ctx) {
  const std::size_t cap = degrees::term_cap_from_env();
  MapSpec spec = parse_map(ctx, cap);
  const std::size_t horizon = ctx.get<std::size_t>("horizon", 10);
  if (horizon < 1) fail(kExitUsage, "horizon must be >= 1");
  degrees::DegreeSequence seq = degrees::degree_sequence(*spec.map, horizon, cap);
  Output o;
  o.body = ctx.header() + "n,deg,deg_root,ratio\n";
  for (std::size_t n = 0; n < seq.degs.size(); ++n) {
    double d = static_cast<double>(seq.degs[n]);
    o.body += std::to_string(n) + "," + std::to_string(seq.degs[n]) + ",";
    if (n > 0) {
      o.body += num(std::pow(d, 1.0 / static_cast<double>(n))) + "," +
                num(d / static_cast<double>(seq.degs[n - 1]));
    } else {
      o.body += ",";
    }
    o.body += "\n";
  }
  if (seq.truncated) {
    o.body += "# truncated: iterate " + std::to_string(seq.degs.size()) + " exceeded the term cap of " +
              std::to_string(cap) + " or 32-bit exponents\n";
    o.code = kExitCapExceeded;
  }
  return o;
}

struct Lambda {
  std::size_t i;
  double lower, upper, estimate;
  std::string method;
};

Output cmd_dyndeg(const Context& ctx) {
  MapSpec spec = parse_map(ctx, degrees::term_cap_from_env());
  const double tol = ctx.get<double>("tolerance", 1e-9);
  if (!(tol > 0)) fail(kExitUsage, "tolerance must be positive");
  std::vector<std::size_t> indices;
  if (ctx.cfg.contains("indices")) {
    indices = ctx.get<std::vector<std::size_t>>("indices", {});
  } else {
    for (std::size_t i = 0; i <= (spec.monomial() ? spec.n() : 1); ++i) indices.push_back(i);
  }
  std::vector<Lambda> rows;
  std::optional<degrees::DynDegReport> seq_l1;
  for (std::size_t i : indices) {
    if (i > spec.n()) fail(kExitUsage, "index " + std::to_string(i) + " exceeds the dimension");
    if (spec.monomial()) {
      auto r = degrees::monomial_dyndeg(*spec.matrix, i, tol);
      rows.push_back({i, r.lower, r.upper, r.estimate, to_string(r.method)});
    } else if (i == 0) {
      rows.push_back({0, 1.0, 1.0, 1.0, "definition"});
    } else if (i == 1) {
      if (!seq_l1) {
        const std::size_t cap = degrees::term_cap_from_env();
        auto seq = degrees::degree_sequence(*spec.map, ctx.get<std::size_t>("horizon", 12), cap);
        if (seq.degs.size() < 3) fail(kExitCapExceeded, "term cap exceeded before d_2");
        seq_l1 = degrees::lambda1_estimate(seq);
      }
      rows.push_back({1, seq_l1->lower, seq_l1->upper, seq_l1->estimate, to_string(seq_l1->method)});
    } else {
      throw Unsupported("lambda_" + std::to_string(i) + " of a non-monomial map is not implemented");
    }
  }
  Output o;
  o.body = ctx.header() + "i,lower,upper,estimate,method,mu_lower,mu_upper\n";
  for (const Lambda& r : rows) {
    o.body += std::to_string(r.i) + "," + num(r.lower) + "," + num(r.upper) + "," + num(r.estimate) + "," + r.method + ",";
    auto prev = std::find_if(rows.begin(), rows.end(), [&](const Lambda& p) { return p.i + 1 == r.i; });
    if (r.i > 0 && prev != rows.end() && prev->lower > 0) {
      o.body += num(r.lower / prev->upper) + "," + num(r.upper / prev->lower);
    } else {
      o.body += ",";
    }
    o.body += "\n";
  }
  return o;
}

Output cmd_orbit(const Context& ctx) {
  MapSpec spec = parse_map(ctx, degrees::term_cap_from_env());
  std::vector<Seed> seeds = parse_seeds(ctx, spec);
  const std::size_t horizon = ctx.get<std::size_t>("horizon", 20);
  const std::size_t bit_cap = ctx.get<std::size_t>("bit_cap", heights::kDefaultBitCap);
  if (horizon < 1) fail(kExitUsage, "horizon must be >= 1");
  Output o;
  o.body = ctx.header();
  std::string rows = "seed,n,h,log_h\n";
  for (const Seed& s : seeds) {
    orbits::OrbitRecord rec = orbit_for(spec, s, horizon, bit_cap);
    o.body += "# seed " + rec.seed + " status=" + rec.status_text() + "\n";
    auto hs = rec.heights_to_horizon();
    for (std::size_t n = 0; n < hs.size(); ++n) {
      double h = static_cast<double>(hs[n].h);
      rows += csv_field(rec.seed) + "," + std::to_string(n) + "," + num(h) + "," +
              num(static_cast<double>(std::log(hs[n].h))) + "\n";
    }
  }
  o.body += rows;
  return o;
}

Output cmd_alpha(const Context& ctx) {
  MapSpec spec = parse_map(ctx, degrees::term_cap_from_env());
  std::vector<Seed> seeds = parse_seeds(ctx, spec);
  const std::size_t horizon = ctx.get<std::size_t>("horizon", spec.monomial() ? 100 : 20);
  const std::size_t bit_cap = ctx.get<std::size_t>("bit_cap", heights::kDefaultBitCap);
  Output o;
  o.body = ctx.header() + "seed,status,slope_estimate,cesaro_estimate,window_begin,window_end\n";
  for (const Seed& s : seeds) {
    orbits::OrbitRecord rec = orbit_for(spec, s, horizon, bit_cap);
    o.body += csv_field(rec.seed) + "," + rec.status_text() + ",";
    try {
      auto a = orbits::alpha_estimate(rec);
      o.body += num(a.slope) + "," + num(a.cesaro) + "," + std::to_string(a.window_begin) + "," +
                std::to_string(a.window_end) + "\n";
    } catch (const std::invalid_argument&) {
      o.body += ",,,\n";
    }
  }
  return o;
}

json interval_json(const degrees::DynDegReport& r) {
  return json{{"lower", rounded(r.lower)}, {"upper", rounded(r.upper)}, {"exact", r.exact}};
}

json report_json(const Context& ctx) {
  return json{{"tool_version", kToolVersion}, {"config_hash", hex64(ctx.hash)}, {"rng_seed", ctx.seed}};
}

Output cmd_zdo(const Context& ctx) {
  MapSpec spec = parse_map(ctx, degrees::term_cap_from_env());
  if (!spec.monomial()) throw Unsupported("the zdo criterion is implemented for monomial maps only");
  const double tol = ctx.get<double>("tolerance", 1e-9);
  if (!(tol > 0)) fail(kExitUsage, "tolerance must be positive");
  degrees::ZdoReport r = degrees::zdo_criterion(*spec.matrix, tol);
  json j = report_json(ctx);
  j["map"] = spec.id;
  j["birational"] = r.birational;
  j["verdict"] = to_string(r.verdict);
  j["lambda1"] = r.lambda1 ? interval_json(*r.lambda1) : json(nullptr);
  j["lambda3"] = r.lambda3 ? interval_json(*r.lambda3) : json(nullptr);
  j["lambda3_condition_vacuous"] = spec.n() <= 2;
  j["invariant_check"] = r.monomial_invariant_free() ? "monomial-invariant-free" : "invariant-monomials-found";
  json inv = json::array();
  for (const auto& v : r.invariant_monomials) {
    json row = json::array();
    for (const Integer& e : v) row.push_back(e.get_str());
    inv.push_back(row);
  }
  j["invariant_monomials"] = inv;
  Output o;
  o.body = j.dump(2) + "\n";
  return o;
}

TorusPoint sample_torus(std::mt19937_64& rng, std::size_t n, long bound) {
  std::uniform_int_distribution<long> numer(-bound, bound), denom(1, bound);
  TorusPoint x;
  while (x.size() < n) {
    long a = numer(rng);
    if (a == 0 || a == 1 || a == -1) continue;
    Rational q(a, denom(rng));
    q.canonicalize();
    x.push_back(q);
  }
  return x;
}

Output cmd_verify(const Context& ctx) {
  const std::size_t m_max = ctx.get<std::size_t>("m_max", 3);
  const double tol = ctx.get<double>("tolerance", 1e-9);
  const double slack = ctx.get<double>("slack", 0.05);
  const std::size_t horizon = ctx.get<std::size_t>("horizon", 100);
  if (m_max < 2) fail(kExitUsage, "m_max must be >= 2");
  std::mt19937_64 rng(ctx.seed);
  std::vector<IntMatrix> mats;
  if (ctx.cfg.contains("map")) {
    MapSpec spec = parse_map(ctx, degrees::term_cap_from_env());
    if (!spec.monomial()) throw Unsupported("verify runs on monomial maps only");
    mats.push_back(*spec.matrix);
  }
  if (ctx.cfg.contains("random_matrices")) {
    const json& rm = ctx.cfg.at("random_matrices");
    std::size_t count, dim;
    long lo, hi;
    try {
      count = rm.at("count").get<std::size_t>();
      dim = rm.at("dim").get<std::size_t>();
      lo = rm.value("lo", -2L);
      hi = rm.value("hi", 2L);
    } catch (const json::exception& e) {
      fail(kExitParse, std::string("random_matrices: ") + e.what());
    }
    if (dim == 0 || lo > hi) fail(kExitUsage, "random_matrices: empty sampling range");
    std::uniform_int_distribution<long> entry(lo, hi);
    while (mats.size() < count + (ctx.cfg.contains("map") ? 1 : 0)) {
      IntMatrix m(dim);
      for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t k = 0; k < dim; ++k) m(i, k) = entry(rng);
      if (m.determinant() != 0) mats.push_back(std::move(m));
    }
  }
  if (mats.empty()) fail(kExitParse, "verify needs 'map' or 'random_matrices'");

  Output o;
  std::string rows = "index,matrix,det,law_checks,law_violations,lambda1_upper,alpha_slope,alpha_pass\n";
  std::string notes;
  for (std::size_t k = 0; k < mats.size(); ++k) {
    const IntMatrix& a = mats[k];
    degrees::DegreeLawReport laws = degrees::verify_degree_laws(a, m_max, tol);
    for (const auto& v : laws.violations)
      notes += "# violation " + a.to_string() + " i=" + std::to_string(v.i) + " m=" + std::to_string(v.m) + ": " + v.what + "\n";
    double upper = laws.lambdas[1 < laws.lambdas.size() ? 1 : 0].upper;
    orbits::OrbitRecord rec = orbits::iterate_torus_orbit(a, sample_torus(rng, a.dim(), 9), horizon, a.to_string());
    orbits::AlphaBoundReport ab = orbits::check_alpha_bound(rec, upper, slack);
    if (!ab.pass) notes += "# violation " + ab.detail + "\n";
    if (!laws.ok() || !ab.pass) o.code = kExitPropertyViolation;
    rows += std::to_string(k) + "," + csv_field(a.to_string()) + "," + a.determinant().get_str() + "," +
            std::to_string(laws.checks) + "," + std::to_string(laws.violations.size()) + "," + num(upper) + "," +
            num(ab.slope) + "," + (ab.pass ? "true" : "false") + "\n";
  }
  o.body = ctx.header() + notes + rows;
  return o;
}

Output cmd_interpolate(const Context& ctx) {
  const unsigned d_max = ctx.get<unsigned>("d_max", 3);
  if (d_max < 1) fail(kExitUsage, "d_max must be >= 1");
  std::vector<ProjPointQ> points;
  std::string source;
  if (ctx.cfg.contains("points")) {
    const json& list = ctx.cfg.at("points");
    if (!list.is_array() || list.empty()) fail(kExitParse, "points must be a nonempty array");
    for (std::size_t i = 0; i < list.size(); ++i) {
      MapSpec dummy;
      dummy.map = maps::identity_map(list[i].size() - 1);
      points.push_back(parse_seed(list[i], dummy, "points[" + std::to_string(i) + "]").projective());
    }
    source = "points";
  } else {
    MapSpec spec = parse_map(ctx, degrees::term_cap_from_env());
    std::vector<Seed> seeds = parse_seeds(ctx, spec);
    const std::size_t horizon = ctx.get<std::size_t>("horizon", 39);
    auto rec = orbits::iterate_orbit(*spec.map, seeds.front().projective(), horizon,
                                     ctx.get<std::size_t>("bit_cap", heights::kDefaultBitCap), spec.id);
    points = rec.points;
    source = "orbit of " + rec.seed + " status=" + rec.status_text();
  }
  orbits::ZariskiScan scan = orbits::zariski_scan(points, d_max);
  Output o;
  o.body = ctx.header() + "# " + source + ", " + std::to_string(points.size()) + " points\n";
  if (scan.no_obstruction) o.body += "# no obstruction to density up to degree " + std::to_string(d_max) + "\n";
  o.body += "d,monomials,points,rank,kernel_dim,exact_rank,certified,underdetermined\n";
  for (const auto& r : scan.reports) {
    o.body += std::to_string(r.degree) + "," + std::to_string(r.monomials) + "," + std::to_string(r.points) + "," +
              std::to_string(r.rank) + "," + std::to_string(r.kernel_dim) + "," + (r.exact_rank ? "true" : "false") +
              "," + (r.certified ? "true" : "false") + "," + (r.underdetermined ? "true" : "false") + "\n";
  }
  return o;
}

Output cmd_search(const Context& ctx) {
  MapSpec spec = parse_map(ctx, degrees::term_cap_from_env());
  const std::size_t samples = ctx.get<std::size_t>("samples", 100);
  const long bound = ctx.get<long>("coord_bound", 9);
  const double eps = ctx.get<double>("eps", 0.05);
  const std::size_t horizon = ctx.get<std::size_t>("horizon", spec.monomial() ? 100 : 20);
  if (!(eps > 0) || bound < 1) fail(kExitUsage, "search needs eps > 0 and coord_bound >= 1");
  orbits::SearchReport r;
  if (spec.monomial()) {
    double upper = degrees::monomial_dyndeg(*spec.matrix, 1, 1e-9).upper;
    r = orbits::high_alpha_search_torus(*spec.matrix, samples, bound, horizon, eps, upper, ctx.seed);
  } else {
    auto seq = degrees::degree_sequence(*spec.map, ctx.get<std::size_t>("degree_horizon", 10),
                                        degrees::term_cap_from_env());
    if (seq.degs.size() < 3) fail(kExitCapExceeded, "term cap exceeded before d_2");
    double upper = degrees::lambda1_estimate(seq).upper;
    r = orbits::high_alpha_search(*spec.map, samples, bound, horizon, eps, upper, ctx.seed);
  }
  Output o;
  o.body = ctx.header() + "# lambda1_upper=" + num(r.lambda1_upper) + " threshold=" + num(r.threshold) +
           " sampled=" + std::to_string(r.sampled) + " excluded=" + std::to_string(r.excluded) +
           " hits=" + std::to_string(r.hits()) + "\n";
  o.body += "rank,seed,status,slope_estimate,cesaro_estimate,hit\n";
  for (std::size_t k = 0; k < r.ranked.size(); ++k) {
    const auto& e = r.ranked[k];
    o.body += std::to_string(k + 1) + "," + csv_field(e.seed) + "," + e.status + "," + num(e.alpha.slope) + "," +
              num(e.alpha.cesaro) + "," + (e.hit ? "true" : "false") + "\n";
  }
  return o;
}

Context load(const std::string& path, std::optional<std::uint64_t> seed) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(kExitUsage, "cannot read config " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  Context ctx;
  ctx.text = ss.str();
  ctx.hash = config_hash(ctx.text);
  try {
    ctx.cfg = json::parse(ctx.text);
  } catch (const json::parse_error& e) {
    auto [line, col] = line_col(ctx.text, e.byte == 0 ? 0 : e.byte - 1);
    fail(kExitParse, path + ":" + std::to_string(line) + ":" + std::to_string(col) + ": invalid JSON");
  }
  if (!ctx.cfg.is_object()) fail(kExitParse, path + ":1:1: config must be a JSON object");
  ctx.seed = seed ? *seed : ctx.get<std::uint64_t>("rng_seed", 0);
  return ctx;
}

}  // namespace

std::uint64_t config_hash(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"orbitlab: exact experiments on degrees, heights and orbits of rational maps", "orbitlab"};
  app.require_subcommand(1, 1);
  std::string config, out_path;
  std::optional<std::uint64_t> seed;
  const std::vector<std::pair<std::string, std::string>> commands{
      {"degrees", "degree sequence of the reduced iterates"},
      {"dyndeg", "dynamical degrees and Lyapunov ratios"},
      {"orbit", "heights along orbits"},
      {"alpha", "arithmetic degree estimates"},
      {"zdo", "dense-orbit criterion verdict for a monomial map (JSON)"},
      {"verify", "degree-law and alpha-bound property runs"},
      {"interpolate", "kernel dimensions of degree-d forms through orbit points"},
      {"search", "random search for seeds of large arithmetic degree"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config, "JSON config")->required();
    sub->add_option("--out", out_path, "output file (default stdout)");
    sub->add_option("--seed", seed, "rng seed, overrides rng_seed in the config");
  }
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "orbitlab: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  Output result;
  try {
    Context ctx = load(config, seed);
    if (command == "degrees") result = cmd_degrees(ctx);
    else if (command == "dyndeg") result = cmd_dyndeg(ctx);
    else if (command == "orbit") result = cmd_orbit(ctx);
    else if (command == "alpha") result = cmd_alpha(ctx);
    else if (command == "zdo") result = cmd_zdo(ctx);
    else if (command == "verify") result = cmd_verify(ctx);
    else if (command == "interpolate") result = cmd_interpolate(ctx);
    else result = cmd_search(ctx);
  } catch (const Failure& f) {
    err << "orbitlab: " << f.message << "\n";
    return f.code;
  } catch (const TermCapExceeded& e) {
    err << "orbitlab: " << e.what() << "\n";
    return kExitCapExceeded;
  } catch (const Unsupported& e) {
    err << "orbitlab: unsupported feature: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "orbitlab: " << e.what() << "\n";
    return kExitUsage;
  }

  if (out_path.empty()) {
    out << result.body;
  } else {
    std::ofstream f(out_path, std::ios::binary | std::ios::trunc);
    if (!f) {
      err << "orbitlab: cannot write " << out_path << "\n";
      return kExitUsage;
    }
    f << result.body;
  }
  return result.code;
}

}  // namespace orbitlab::cli
