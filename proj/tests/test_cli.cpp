#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "maslov/cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "maslov");
  std::ostringstream out, err;
  int code = maslov::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  fs::path d = fs::temp_directory_path() / ("maslov-cli-test-" + name);
  fs::remove_all(d);
  return d;
}

}  // namespace

TEST_CASE("usage and config errors exit 1") {
  CHECK(run({}).code == 1);
  CHECK(run({"box"}).code == 1);
  CHECK(run({"box", "example1", "--bogus"}).code == 1);
  CHECK(run({"box", "/nonexistent/config.json", "--out", scratch("missing").string()}).code == 1);
  CHECK(run({"box", "example1", "--x-steps", "-3"}).code == 1);
  fs::path bad = scratch("badjson");
  fs::create_directories(bad);
  std::ofstream(bad / "c.json") << "{\"kind\": \"higher_order\", \"n\": 2, \"colour\": 1}";
  Run r = run({"box", (bad / "c.json").string(), "--out", (bad / "o").string()});
  CHECK(r.code == 1);
  CHECK_FALSE(r.err.empty());
}

TEST_CASE("box on Example 1 writes shelves and summary deterministically") {
  fs::path a = scratch("det-a"), b = scratch("det-b");
  Run ra = run({"box", "example1", "--out", a.string()});
  Run rb = run({"box", "example1", "--out", b.string()});
  REQUIRE(ra.code == 0);
  REQUIRE(rb.code == 0);
  for (const char* f : {"shelf_bottom.csv", "shelf_right.csv", "shelf_top.csv", "shelf_left.csv",
                        "summary.json", "box.svg"}) {
    CHECK(fs::exists(a / f));
    CHECK(slurp(a / f) == slurp(b / f));
  }
  std::string csv = slurp(a / "shelf_left.csv");
  CHECK(csv.rfind("param,omega1,omega2,psi1,psi2,rho\n", 0) == 0);
  json s = json::parse(slurp(a / "summary.json"));
  CHECK(s["lower_bound"] == 1);
  CHECK(s["m_frak"] == 0);
  CHECK(s["ind_left"] == 1);
  CHECK(s["eigenvalues"].size() == 1);
}

TEST_CASE("box exits 2 on an invariance violation and still reports the count") {
  fs::path d = scratch("viol");
  Run r = run({"box", "harmonic-dirichlet", "--lambda", "0", "50", "--out", d.string()});
  CHECK(r.code == 2);
  json s = json::parse(slurp(d / "summary.json"));
  CHECK(s["invariance_violation"]["shelf"] == "top");
  CHECK(s["left_count"] == 2);
  CHECK(s["eigenvalues"].size() == 2);
}

TEST_CASE("blow-up without rescaling exits 3") {
  fs::path d = scratch("blow");
  fs::create_directories(d);
  std::ofstream(d / "c.json") << R"({"kind": "second-order", "l": 1, "B": [1],
    "V": [["1000000"]], "W": [["0"]], "P": "dirichlet", "Q": "dirichlet",
    "lambda": [0, 1], "x_steps": 200, "lambda_steps": 10})";
  Run r = run({"left-shelf", (d / "c.json").string(), "--no-rescale", "--out", (d / "o").string()});
  CHECK(r.code == 3);
}

TEST_CASE("left-shelf and invariance subcommands") {
  fs::path d = scratch("left");
  REQUIRE(run({"left-shelf", "example1", "--out", d.string()}).code == 0);
  json s = json::parse(slurp(d / "summary.json"));
  CHECK(s["count"] == 1);
  CHECK(s["audit_ok"] == true);
  CHECK(fs::exists(d / "shelf_left.csv"));

  fs::path e = scratch("free");
  REQUIRE(run({"left-shelf", "harmonic-dirichlet", "--lambda", "12", "35", "--out", e.string()}).code == 0);
  CHECK(json::parse(slurp(e / "summary.json"))["count"] == 0);

  fs::path i = scratch("inv");
  REQUIRE(run({"invariance", "example1", "--out", i.string()}).code == 0);
  json inv = json::parse(slurp(i / "summary.json"));
  CHECK(inv["certified"] == true);
  CHECK(inv["delta_method"] == "hadamard");
}
