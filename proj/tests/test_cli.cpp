#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "nnapprox/cli.hpp"
#include "nnapprox/documents.hpp"

using namespace nnapprox;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch_dir() {
  const auto dir = fs::temp_directory_path() / "nnapprox_cli_test";
  fs::create_directories(dir);
  return dir;
}

std::string write(const std::string& name, const std::string& text) {
  const auto path = scratch_dir() / name;
  std::ofstream(path) << text;
  return path.string();
}

}  // namespace

TEST_CASE("construct then check on a halfspace") {
  const auto set = write("hs0.json", R"({"kind":"halfspace","dim":1,"w":[1],"theta":0})");
  const auto poly = (scratch_dir() / "q0.json").string();
  const auto c = run({"construct", "--set", set, "--epsilon", "0.3", "--out", poly});
  REQUIRE(c.code == kExitOk);
  CHECK(c.out.find("t                  168") != std::string::npos);
  CHECK(c.out.find("deg(q)             336") != std::string::npos);
  const auto k = run({"check", "--poly", poly, "--set", set, "--checks", "definition", "--n", "100000"});
  CHECK(k.code == kExitOk);
  CHECK(k.out.find("violated") == std::string::npos);
}

TEST_CASE("full space gives a constant document with t = 0") {
  const auto set = write("full.json", R"({"kind":"full","dim":2})");
  const auto poly = (scratch_dir() / "full_q.json").string();
  REQUIRE(run({"construct", "--set", set, "--epsilon", "0.1", "--out", poly}).code == kExitOk);
  const auto doc = load_polynomial_document(poly);
  REQUIRE(doc.params);
  CHECK(doc.params->t == 0);
  CHECK(expansion_eval(doc.form, std::vector<double>{1.0, 2.0}) == doctest::Approx(1.0));
}

TEST_CASE("invalid epsilon exits 2 and names the interval") {
  const auto set = write("hs1.json", R"({"kind":"halfspace","dim":1,"w":[1],"theta":0})");
  const auto r = run({"construct", "--set", set, "--epsilon", "0.7", "--out", (scratch_dir() / "x.json").string()});
  CHECK(r.code == kExitInvalid);
  CHECK(r.err.find("(0, 1/2)") != std::string::npos);
}

TEST_CASE("budget violations exit 3") {
  const auto set = write("ball3.json", R"({"kind":"ball","dim":3,"center":[0,0,0],"radius":1})");
  const auto r = run({"construct", "--set", set, "--epsilon", "0.3", "--method", "mc", "--budget", "1000", "--out",
                      (scratch_dir() / "y.json").string()});
  CHECK(r.code == kExitBudget);
}

TEST_CASE("zero polynomial violates the definition check") {
  const auto set = write("hs2.json", R"({"kind":"halfspace","dim":1,"w":[1],"theta":0})");
  const auto poly = write("zero.json", R"({"format_version":1,"dim":1,"basis":"hermite-probabilists-orthonormal",
    "representation":"expansion","terms":[]})");
  const auto r = run({"check", "--poly", poly, "--set", set, "--epsilon", "0.1", "--n", "20000"});
  CHECK(r.code == kExitViolated);
}

TEST_CASE("parse and dimension failures exit 2") {
  const auto set = write("hs3.json", R"({"kind":"halfspace","dim":2,"w":[1,0],"theta":0})");
  const auto poly = write("one_d.json", R"({"format_version":1,"dim":1,"basis":"hermite-probabilists-orthonormal",
    "representation":"expansion","terms":[]})");
  CHECK(run({"check", "--poly", poly, "--set", set, "--epsilon", "0.1"}).code == kExitInvalid);
  const auto broken = write("broken.json", "{");
  CHECK(run({"check", "--poly", broken, "--set", set}).code == kExitInvalid);
  CHECK(run({"check", "--poly", poly}).code == kExitInvalid);
  CHECK(run({"frobnicate"}).code == kExitInvalid);
}

TEST_CASE("lemma checks on a set without an exact path exit 2") {
  const auto set = write("ball2.json", R"({"kind":"ball","dim":2,"center":[0,0],"radius":1})");
  const auto poly = (scratch_dir() / "ball_q.json").string();
  REQUIRE(run({"construct", "--set", set, "--epsilon", "0.45", "--gsa", "value:0.01", "--method", "mc", "--out", poly}).code == kExitOk);
  const auto r = run({"check", "--poly", poly, "--set", set, "--checks", "lemma"});
  CHECK(r.code == kExitInvalid);
  CHECK(r.err.find("limitation") != std::string::npos);
}

TEST_CASE("gsa subcommand") {
  const auto hs = write("hs4.json", R"({"kind":"halfspace","dim":1,"w":[1],"theta":3})");
  const auto r = run({"gsa", "--set", hs, "--method", "closed"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("0.00443") != std::string::npos);
  const auto no_dist =
      write("nodist.json", R"({"kind":"interval_union","dim":1,"intervals":[[0,1]],"signed_distance":false})");
  CHECK(run({"gsa", "--set", no_dist, "--method", "thickening"}).code == kExitInvalid);
}

TEST_CASE("sweep output is byte-identical across runs") {
  const std::vector<std::string> args{"sweep", "--family", "epsilon", "--range", "0.4,0.3,0.2", "--n", "20000",
                                      "--seed", "3"};
  const auto a = run(args);
  const auto b = run(args);
  REQUIRE(a.code == kExitOk);
  CHECK(a.out == b.out);
  CHECK(a.out.rfind("set,epsilon,gamma", 0) == 0);
}
