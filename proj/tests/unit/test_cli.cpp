#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "orbitlab/cli/cli.hpp"

using namespace orbitlab::cli;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

fs::path scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("orbitlab_cli_test_" + std::to_string(::getpid()));
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

Run run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

const char* kCremona = R"({"map": {"kind": "homogeneous", "n": 2, "coords": ["x1*x2", "x0*x2", "x0*x1"]},
 "horizon": 6, "seed": [1, 2, 3]})";

}  // namespace

TEST_CASE("degrees table") {
  std::string cfg = write_config("cremona.json", kCremona);
  Run r = run_cli({"degrees", "--config", cfg});
  REQUIRE(r.code == 0);
  auto ls = lines(r.out);
  REQUIRE(ls.size() == 9);
  CHECK(ls[0].rfind("# orbitlab 0.3.0 config=", 0) == 0);
  CHECK(ls[0].find(" seed=0") != std::string::npos);
  CHECK(ls[1] == "n,deg,deg_root,ratio");
  CHECK(ls[2] == "0,1,,");
  CHECK(ls[3] == "1,2,2,2");
  CHECK(ls[4] == "2,1,1,0.5");
  CHECK(r.out.find('\r') == std::string::npos);

  std::string pw = write_config("power.json", R"({"map": {"kind": "homogeneous", "coords": ["x0^2", "x1^2"]}, "horizon": 3})");
  auto pl = lines(run_cli({"degrees", "--config", pw}).out);
  REQUIRE(pl.size() == 6);
  CHECK(pl[2].rfind("0,1,", 0) == 0);
  CHECK(pl[3].rfind("1,2,", 0) == 0);
  CHECK(pl[4].rfind("2,4,", 0) == 0);
  CHECK(pl[5].rfind("3,8,", 0) == 0);
}

TEST_CASE("parse errors carry line and column") {
  std::string bad = write_config("bad.json", "{\"map\": {\"kind\": \"homogeneous\",\n  \"coords\": [\"x0^2 + *x1\", \"x1^2\"]}}");
  Run r = run_cli({"degrees", "--config", bad});
  CHECK(r.code == kExitParse);
  CHECK(r.err.find("config:2:22") != std::string::npos);
  std::string broken = write_config("broken.json", "{\"map\": \n {\"kind\" 1}}");
  Run b = run_cli({"degrees", "--config", broken});
  CHECK(b.code == kExitParse);
  CHECK(b.err.find(":2:") != std::string::npos);
}

TEST_CASE("usage errors") {
  CHECK(run_cli({}).code == kExitUsage);
  CHECK(run_cli({"frobnicate", "--config", "x"}).code == kExitUsage);
  CHECK(run_cli({"degrees"}).code == kExitUsage);
  CHECK(run_cli({"degrees", "--config", (scratch() / "missing.json").string()}).code == kExitUsage);
  CHECK(run_cli({"--help"}).code == kExitOk);
}

TEST_CASE("dyndeg rows") {
  std::string m = write_config("perron.json", R"({"map": {"kind": "monomial", "matrix": [[2, 1], [1, 1]]}})");
  auto ls = lines(run_cli({"dyndeg", "--config", m}).out);
  REQUIRE(ls.size() == 5);
  CHECK(ls[1] == "i,lower,upper,estimate,method,mu_lower,mu_upper");
  CHECK(ls[3].rfind("1,2.61803398", 0) == 0);
  CHECK(ls[4].rfind("2,1,1,1,exact-monomial,", 0) == 0);

  std::string id = write_config("id.json", R"({"map": {"kind": "monomial", "matrix": [[1, 0, 0], [0, 1, 0], [0, 0, 1]]}})");
  auto il = lines(run_cli({"dyndeg", "--config", id}).out);
  REQUIRE(il.size() == 6);
  for (std::size_t k = 2; k < il.size(); ++k) CHECK(il[k].substr(1, 7) == ",1,1,1,");

  std::string c2 = write_config("c2.json", R"({"map": {"kind": "homogeneous", "coords": ["x1*x2", "x0*x2", "x0*x1"]}, "indices": [2]})");
  Run u = run_cli({"dyndeg", "--config", c2});
  CHECK(u.code == kExitUsage);
  CHECK(u.err.find("unsupported feature") != std::string::npos);
}

TEST_CASE("zdo verdicts") {
  std::string f = write_config("fib.json", R"({"map": {"kind": "monomial", "matrix": [[1, 1], [1, 0]]}})");
  Run r = run_cli({"zdo", "--config", f, "--seed", "5"});
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["verdict"] == "criterion-satisfied");
  CHECK(j["birational"] == true);
  CHECK(j["invariant_check"] == "monomial-invariant-free");
  CHECK(j["rng_seed"] == 5);
  CHECK(j["tool_version"] == "0.3.0");

  std::string p = write_config("perm.json", R"({"map": {"kind": "monomial", "matrix": [[0, 1, 0], [0, 0, 1], [1, 0, 0]]}})");
  CHECK(nlohmann::json::parse(run_cli({"zdo", "--config", p}).out)["verdict"] == "criterion-fails");
  CHECK(run_cli({"zdo", "--config", write_config("cr.json", kCremona)}).code == kExitUsage);
}

TEST_CASE("verify, alpha, orbit, interpolate, search") {
  std::string v = write_config("verify.json", R"({"random_matrices": {"count": 20, "dim": 3, "lo": -2, "hi": 2}, "rng_seed": 4})");
  Run vr = run_cli({"verify", "--config", v});
  CHECK(vr.code == 0);
  CHECK(lines(vr.out).size() == 22);

  std::string cr = write_config("cremona2.json", kCremona);
  auto al = lines(run_cli({"alpha", "--config", cr}).out);
  REQUIRE(al.size() == 3);
  CHECK(al[2].rfind("[1:2:3],periodic(2,0),1,1,", 0) == 0);

  auto ol = lines(run_cli({"orbit", "--config", cr}).out);
  CHECK(ol[1] == "# seed [1:2:3] status=periodic(2,0)");
  CHECK(ol.size() == 3 + 7);

  std::string pts = write_config("pts.json", R"({"points": [[1, 1, 2], [2, 2, 5], [3, 3, 1], [4, 4, 9]], "d_max": 1})");
  auto il = lines(run_cli({"interpolate", "--config", pts}).out);
  CHECK(il.back().rfind("1,3,4,2,1,", 0) == 0);

  std::string s = write_config("search.json", R"({"map": {"kind": "monomial", "matrix": [[2, 1], [1, 1]]}, "samples": 10, "horizon": 60})");
  Run sr = run_cli({"search", "--config", s, "--seed", "9"});
  CHECK(sr.code == 0);
  CHECK(sr.out.find("hits=10") != std::string::npos);
}

TEST_CASE("term cap exit code") {
  std::string cfg = write_config("dense.json",
                                 R"({"map": {"kind": "homogeneous", "coords": ["x0^2 + x1*x2 + x2^2", "x1^2 - x0*x2", "x2^2 + x0*x1"]}, "horizon": 12})");
  ::setenv("ORBITLAB_TERM_CAP", "300", 1);
  Run r = run_cli({"degrees", "--config", cfg});
  ::unsetenv("ORBITLAB_TERM_CAP");
  CHECK(r.code == kExitCapExceeded);
  CHECK(r.out.find("# truncated") != std::string::npos);
}

TEST_CASE("determinism and --out") {
  std::string s = write_config("det.json", R"({"map": {"kind": "monomial", "matrix": [[2, 1], [1, 1]]}, "samples": 15, "horizon": 50})");
  fs::path a = scratch() / "a.csv", b = scratch() / "b.csv";
  REQUIRE(run_cli({"search", "--config", s, "--seed", "42", "--out", a.string()}).code == 0);
  REQUIRE(run_cli({"search", "--config", s, "--seed", "42", "--out", b.string()}).code == 0);
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  CHECK(slurp(a) == slurp(b));
  CHECK_FALSE(slurp(a).empty());
  Run other = run_cli({"search", "--config", s, "--seed", "43"});
  CHECK(other.out != slurp(a));
  CHECK(config_hash("") == 0xcbf29ce484222325ULL);
}
