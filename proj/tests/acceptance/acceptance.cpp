// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "json.hpp"
#include "oracles.hpp"
#include "orbitlab/cli/cli.hpp"
#include "orbitlab/degrees/degrees.hpp"
#include "orbitlab/heights/heights.hpp"
#include "orbitlab/maps/monomial_map.hpp"
#include "orbitlab/orbits/orbits.hpp"

using namespace orbitlab;
using algebra::IntMatrix;
using algebra::Rational;
using maps::ProjPointQ;
namespace fs = std::filesystem;

namespace {

// Tolerances and budgets, fixed here.
constexpr double kSpectralTol = 1e-9;
constexpr double kDegreeAgreement = 0.05;
constexpr double kLawTol = 1e-9;
constexpr std::size_t kLawPowers = 3;
constexpr double kAlphaSlack = 0.05;
constexpr double kMorphismAlphaTol = 1e-6;
constexpr double kPerronAlphaTol = 1e-3;
constexpr long double kHeightTol = 1e-9L;
constexpr std::uint64_t kRngSeed = 20240601;

struct Outcome {
  bool pass = true;
  std::string note;
};

void require(Outcome& o, bool cond, const std::string& what) {
  if (!cond && o.pass) {
    o.pass = false;
    o.note = what;
  }
}

fs::path scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("orbitlab_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string write_config(const std::string& name, const std::string& text) {
  fs::path p = scratch() / name;
  std::ofstream(p, std::ios::binary) << text;
  return p.string();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

int cli(const std::vector<std::string>& args, std::string* out = nullptr) {
  std::ostringstream o, e;
  int code = cli::run(args, o, e);
  if (out) *out = o.str();
  return code;
}

IntMatrix random_unimodular(std::mt19937_64& rng, std::size_t n) {
  for (;;) {
    auto m = oracle::random_matrix(rng, n, -2, 2);
    mpz_class d = oracle::cofactor_det(m);
    if (d == 1 || d == -1) return IntMatrix::from_rows(m);
  }
}

maps::TorusPoint random_torus(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<long> num(-9, 9), den(1, 9);
  maps::TorusPoint x;
  while (x.size() < n) {
    long a = num(rng);
    if (a == 0 || a == 1 || a == -1) continue;
    Rational q(a, den(rng));
    q.canonicalize();
    x.push_back(q);
  }
  return x;
}

const maps::RationalMapPn& cremona() {
  static const auto s = maps::make_map({"x1*x2", "x0*x2", "x0*x1"});
  return s;
}

Outcome c1() {
  Outcome o;
  auto seq = degrees::degree_sequence(cremona(), 10);
  require(o, seq.degs.size() == 11 && !seq.truncated, "sequence length");
  for (std::size_t n = 0; n < seq.degs.size(); ++n)
    require(o, seq.degs[n] == (n % 2 == 0 ? 1 : 2), "d_" + std::to_string(n) + " = " + std::to_string(seq.degs[n]));
  auto r = maps::compose_reduced(cremona(), cremona());
  require(o, r.map == maps::identity_map(2), "sigma o sigma is not the identity");
  require(o, r.map.degree() == 1, "identity degree");
  require(o, r.removed_degree() == 3, "removed factor degree");
  return o;
}

Outcome c2() {
  Outcome o;
  IntMatrix a{{2, 1}, {1, 1}};
  auto [lo, hi] = oracle::bisect_root({1, -3, 1}, 2, 3, 1e-13);
  auto l1 = degrees::monomial_dyndeg(a, 1, kSpectralTol);
  require(o, l1.lower <= hi && l1.upper >= lo, "interval misses the root of t^2-3t+1");
  require(o, l1.upper - l1.lower <= kSpectralTol, "interval wider than tol");
  auto l2 = degrees::monomial_dyndeg(a, 2, kSpectralTol);
  require(o, l2.exact && l2.lower == 1.0 && l2.upper == 1.0, "lambda_2 != 1 exactly");
  char buf[96];
  std::snprintf(buf, sizeof buf, "lambda1 in [%.12f, %.12f]", l1.lower, l1.upper);
  if (o.pass) o.note = buf;
  return o;
}

Outcome c3() {
  Outcome o;
  IntMatrix a{{2, 1}, {1, 1}};
  auto seq = degrees::degree_sequence(maps::monomial_to_rational(a), 12);
  require(o, seq.degs.size() == 13, "sequence truncated before n = 12");
  if (!o.pass) return o;
  require(o, !degrees::submultiplicativity_violation(seq).has_value(), "submultiplicativity violated");
  auto l1 = degrees::monomial_dyndeg(a, 1, kSpectralTol);
  double root = std::pow(static_cast<double>(seq.degs[12]), 1.0 / 12.0);
  double dist = root < l1.lower ? l1.lower - root : (root > l1.upper ? root - l1.upper : 0.0);
  require(o, dist <= kDegreeAgreement * l1.lower, "d_12^(1/12) too far from lambda_1");
  char buf[96];
  std::snprintf(buf, sizeof buf, "d_12^(1/12) = %.6f, relative gap %.4f", root, dist / l1.lower);
  if (o.pass) o.note = buf;
  return o;
}

Outcome c4() {
  Outcome o;
  std::mt19937_64 rng(kRngSeed);
  std::size_t checks = 0, matrices = 0;
  while (matrices < 100) {
    IntMatrix a = IntMatrix::from_rows(oracle::random_matrix(rng, 4, -2, 2));
    if (a.determinant() == 0) continue;
    ++matrices;
    auto r = degrees::verify_degree_laws(a, kLawPowers, kLawTol);
    checks += r.checks;
    if (!r.ok()) {
      require(o, false, a.to_string() + ": " + r.violations.front().what);
      return o;
    }
  }
  o.note = std::to_string(matrices) + " matrices, " + std::to_string(checks) + " checks, 0 violations";
  return o;
}

Outcome c5() {
  Outcome o;
  std::mt19937_64 rng(kRngSeed + 5);
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    IntMatrix a = random_unimodular(rng, 3);
    double upper = degrees::monomial_dyndeg(a, 1, kSpectralTol).upper;
    auto rec = orbits::iterate_torus_orbit(a, random_torus(rng, 3), 100, a.to_string());
    auto r = orbits::check_alpha_bound(rec, upper, kAlphaSlack);
    worst = std::max(worst, r.slope / upper);
    require(o, r.pass, r.detail);
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "max slope/lambda1 = %.6f", worst);
  if (o.pass) o.note = buf;
  return o;
}

Outcome c6() {
  Outcome o;
  auto rec = orbits::iterate_orbit(maps::make_map({"x0^2", "x1^2"}), ProjPointQ{2, 1}, 20);
  require(o, rec.status == orbits::OrbitStatus::complete && rec.heights.size() == 21, "power orbit " + rec.status_text());
  if (!o.pass) return o;
  auto a = orbits::alpha_estimate(rec);
  require(o, std::fabs(a.slope - 2.0) <= kMorphismAlphaTol, "slope " + std::to_string(a.slope));
  auto per = orbits::iterate_orbit(cremona(), ProjPointQ{1, 2, 3}, 20);
  auto ap = orbits::alpha_estimate(per);
  require(o, per.status == orbits::OrbitStatus::periodic && ap.slope == 1.0 && ap.cesaro == 1.0, "sigma periodic alpha");
  auto tor = orbits::iterate_torus_orbit({{0, 1}, {1, 0}}, {Rational(2), Rational(-3, 5)}, 50);
  auto at = orbits::alpha_estimate(tor);
  require(o, tor.status == orbits::OrbitStatus::periodic && at.slope == 1.0 && at.cesaro == 1.0, "torus periodic alpha");
  return o;
}

Outcome c7() {
  Outcome o;
  IntMatrix a{{2, 1}, {1, 1}};
  auto rec = orbits::iterate_torus_orbit(a, {Rational(2), Rational(3)}, 200);
  require(o, rec.heights.size() == 201, "orbit " + rec.status_text());
  if (!o.pass) return o;
  double mid = degrees::monomial_dyndeg(a, 1, kSpectralTol).estimate;
  double slope = orbits::alpha_estimate(rec).slope;
  require(o, std::fabs(slope - mid) <= kPerronAlphaTol, "slope " + std::to_string(slope));
  char buf[64];
  std::snprintf(buf, sizeof buf, "|slope - lambda1| = %.3g", std::fabs(slope - mid));
  if (o.pass) o.note = buf;
  return o;
}

std::string zdo_verdict(const std::string& name, const std::string& matrix) {
  std::string cfg = write_config(name, R"({"map": {"kind": "monomial", "matrix": )" + matrix + "}}");
  std::string out;
  if (cli({"zdo", "--config", cfg}, &out) != 0) return "exit-error";
  return nlohmann::json::parse(out)["verdict"].get<std::string>();
}

Outcome c8() {
  Outcome o;
  require(o, zdo_verdict("fib.json", "[[1,1],[1,0]]") == "criterion-satisfied", "[[1,1],[1,0]] not satisfied");
  for (const std::string& p : {std::string("[[1]]"), std::string("[[0,1],[1,0]]"), std::string("[[1,0],[0,1]]"),
                               std::string("[[0,1,0],[0,0,1],[1,0,0]]"), std::string("[[0,0,0,1],[1,0,0,0],[0,0,1,0],[0,1,0,0]]")}) {
    require(o, zdo_verdict("perm.json", p) == "criterion-fails", "permutation " + p + " does not fail");
  }
  IntMatrix plastic{{0, 0, 1}, {1, 0, 1}, {0, 1, 0}};
  require(o, zdo_verdict("plastic.json", "[[0,0,1],[1,0,1],[0,1,0]]") == "criterion-satisfied", "plastic map not satisfied");
  auto rec = orbits::iterate_orbit(maps::monomial_to_rational(plastic), ProjPointQ{2, 3, 5, 1}, 39);
  require(o, rec.points.size() == 40, "40-point orbit: " + rec.status_text());
  if (!o.pass) return o;
  auto scan = orbits::zariski_scan(rec.points, 3);
  for (const auto& r : scan.reports)
    require(o, r.kernel_dim == 0 && r.certified, "kernel at d = " + std::to_string(r.degree));
  require(o, scan.no_obstruction, "obstruction reported");
  return o;
}

Outcome c9() {
  Outcome o;
  std::mt19937_64 rng(kRngSeed + 9);
  long double worst = 0.0L;
  for (int k = 0; k < 10; ++k) {
    IntMatrix a = random_unimodular(rng, 2);
    auto x = random_torus(rng, 2);
    auto fast = heights::monomial_orbit_heights(a, x, 12);
    auto slow = heights::orbit_heights(maps::monomial_to_rational(a), maps::torus_to_projective(x), 12);
    require(o, slow.values.size() == 13, a.to_string() + ": general path stopped early");
    if (!o.pass) return o;
    for (std::size_t n = 0; n <= 12; ++n) worst = std::max(worst, std::fabs(fast[n].h - slow.values[n].h));
  }
  require(o, worst <= kHeightTol, "max deviation too large");
  char buf[64];
  std::snprintf(buf, sizeof buf, "max |fast - general| = %.3Lg", worst);
  o.note = o.pass ? buf : o.note + "; " + buf;
  return o;
}

Outcome c10() {
  Outcome o;
  std::string search = write_config("det_search.json",
                                    R"({"map": {"kind": "monomial", "matrix": [[2,1],[1,1]]}, "samples": 25, "horizon": 80})");
  std::string verify = write_config("det_verify.json", R"({"random_matrices": {"count": 5, "dim": 3}})");
  for (const auto& [cmd, cfg] : {std::pair{std::string("search"), search}, std::pair{std::string("verify"), verify}}) {
    fs::path a = scratch() / (cmd + "_a.csv"), b = scratch() / (cmd + "_b.csv");
    require(o, cli({cmd, "--config", cfg, "--seed", "1234", "--out", a.string()}) == 0, cmd + " run 1 failed");
    require(o, cli({cmd, "--config", cfg, "--seed", "1234", "--out", b.string()}) == 0, cmd + " run 2 failed");
    std::string sa = slurp(a);
    require(o, !sa.empty() && sa == slurp(b), cmd + " outputs differ");
  }
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "Cremona involution", 1.0, c1},
      {2, "monomial lambda_1 and lambda_2 exactness", 1.0, c2},
      {3, "degree growth vs certified lambda_1", 120.0, c3},
      {4, "power law and log concavity, 100 random 4x4", 120.0, c4},
      {5, "alpha upper bound, 50 GL3(Z) torus orbits", 60.0, c5},
      {6, "alpha exactness on morphisms and cycles", 1.0, c6},
      {7, "alpha convergence on the Perron map", 5.0, c7},
      {8, "dense-orbit criterion harness", 60.0, c8},
      {9, "fast vs general height pipelines", 30.0, c9},
      {10, "byte-identical reruns", 60.0, c10},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.note = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (o.pass && secs > c.budget_s) {
      o.pass = false;
      o.note = "over time budget";
    }
    if (!o.pass) ++failed;
    std::printf("%s %2d %s (%.3f s / %.0f s)%s%s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs, c.budget_s,
                o.note.empty() ? "" : ": ", o.note.c_str());
    std::fflush(stdout);
  }
  std::error_code ec;
  fs::remove_all(scratch(), ec);
  return failed == 0 ? 0 : 1;
}
