#include "doctest.h"

#include "linmvn/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

using namespace linmvn;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch_dir() {
  static const fs::path dir = [] {
    fs::path p = fs::temp_directory_path() / ("linmvn_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

std::string write_file(const std::string& name, const std::string& body) {
  const fs::path p = scratch_dir() / name;
  std::ofstream(p) << body;
  return p.string();
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fixture(const std::string& name) {
  return std::string(LINMVN_FIXTURE_DIR) + "/" + name + ".json";
}

}  // namespace

TEST_CASE("cli: fixtures writes three problem files") {
  const Run r = cli({"fixtures", "--name", "pentagon", "--out-dir", scratch_dir().string()});
  CHECK(r.code == kExitOk);
  for (const char* name : {"pentagon_inequality", "pentagon_equality", "pentagon_combined"}) {
    const fs::path p = scratch_dir() / (std::string(name) + ".json");
    CHECK(fs::exists(p));
    CHECK(read_file(p) == read_file(fixture(name)));
  }
  CHECK(cli({"fixtures", "--name", "hexagon"}).code == kExitMalformedInput);
}

TEST_CASE("cli: check on pentagon fixtures") {
  Run r = cli({"check", "--problem", fixture("pentagon_combined")});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("equality system: Infinite") != std::string::npos);
  CHECK(r.out.find("FullDimensional") != std::string::npos);
  r = cli({"check", "--problem", fixture("pentagon_inequality")});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("FullDimensional") != std::string::npos);
}

TEST_CASE("cli: contradictory equalities exit 2 naming the zero-solution branch") {
  const std::string p = write_file(
      "contradictory.json",
      R"({"n": 2, "mu": [0, 0], "sigma": [[1, 0], [0, 1]], "C": [[1, 0], [1, 0]], "d": [0, -1]})");
  Run r = cli({"sample", "--problem", p, "--n", "5", "--seed", "1", "--out",
               (scratch_dir() / "never.csv").string()});
  CHECK(r.code == kExitInfeasible);
  CHECK(r.err.find("zero solutions") != std::string::npos);
  r = cli({"check", "--problem", p});
  CHECK(r.code == kExitInfeasible);
}

TEST_CASE("cli: infeasible inequalities exit 2") {
  const std::string p = write_file(
      "infeasible.json", R"({"n": 1, "mu": [0], "sigma": [[1]], "A": [[1], [-1]], "b": [-1, 0]})");
  CHECK(cli({"check", "--problem", p}).code == kExitInfeasible);
  CHECK(cli({"sample", "--problem", p, "--n", "3", "--seed", "1", "--out", "-"}).code ==
        kExitInfeasible);
}

TEST_CASE("cli: malformed input exits 1") {
  const std::string bad_json = write_file("bad.json", "{ not json");
  Run r = cli({"check", "--problem", bad_json});
  CHECK(r.code == kExitMalformedInput);
  CHECK(r.err.find("InvalidProblem") != std::string::npos);

  const std::string missing_b =
      write_file("missing_b.json", R"({"n": 1, "mu": [0], "sigma": [[1]], "A": [[1]]})");
  CHECK(cli({"check", "--problem", missing_b}).code == kExitMalformedInput);

  const std::string asym = write_file(
      "asym.json", R"({"n": 2, "mu": [0, 0], "sigma": [[1, 0.5], [0.2, 1]]})");
  r = cli({"check", "--problem", asym});
  CHECK(r.code == kExitMalformedInput);
  CHECK(r.err.find("NotSymmetric") != std::string::npos);

  CHECK(cli({"check", "--problem", (scratch_dir() / "absent.json").string()}).code ==
        kExitMalformedInput);
  CHECK(cli({"sample", "--problem", fixture("pentagon_equality"), "--n", "5"}).code ==
        kExitMalformedInput);  // --seed is mandatory
  CHECK(cli({"frobnicate"}).code == kExitMalformedInput);
  CHECK(cli({}).code == kExitMalformedInput);
}

TEST_CASE("cli: numerical failures exit 3 and are named") {
  const std::string p = write_file(
      "segment.json",
      R"({"n": 2, "mu": [0, 0], "sigma": [[1, 0], [0, 1]], "A": [[1, 0], [-1, 0], [0, 1]], "b": [0, 0, 0]})");
  const Run r = cli({"sample", "--problem", p, "--n", "5", "--seed", "1", "--out", "-"});
  CHECK(r.code == kExitNumericalFailure);
  CHECK(r.err.find("DegenerateRegion") != std::string::npos);

  const std::string g = write_file(
      "gram.json",
      R"({"n": 2, "mu": [0, 0], "sigma": [[1, 0], [0, 0]], "C": [[0, 1]], "d": [0]})");
  const Run rg = cli({"sample", "--problem", g, "--n", "5", "--seed", "1", "--out", "-"});
  CHECK(rg.code == kExitNumericalFailure);
  CHECK(rg.err.find("SingularEqualityGram") != std::string::npos);
}

TEST_CASE("cli: sample writes N rows deterministically") {
  const fs::path a = scratch_dir() / "a.csv";
  const fs::path b = scratch_dir() / "b.csv";
  const std::vector<std::string> base = {"sample", "--problem", fixture("pentagon_combined"),
                                         "--n", "500", "--seed", "42", "--out"};
  auto args_a = base;
  args_a.push_back(a.string());
  auto args_b = base;
  args_b.push_back(b.string());
  const Run ra = cli(args_a);
  CHECK(ra.code == kExitOk);
  CHECK(ra.out.find("recipe: equality-and-inequality") != std::string::npos);
  CHECK(cli(args_b).code == kExitOk);
  const std::string csv = read_file(a);
  CHECK(csv == read_file(b));

  std::istringstream is(csv);
  std::string line;
  std::getline(is, line);
  CHECK(line == "x1,x2,x3,x4");
  int rows = 0;
  while (std::getline(is, line)) {
    ++rows;
    std::istringstream fields(line);
    std::string cell;
    int cols = 0;
    while (std::getline(fields, cell, ',')) {
      CHECK(std::isfinite(std::stod(cell)));
      ++cols;
    }
    CHECK(cols == 4);
  }
  CHECK(rows == 500);

  auto args_c = base;
  args_c[6] = "43";
  args_c.push_back((scratch_dir() / "c.csv").string());
  CHECK(cli(args_c).code == kExitOk);
  CHECK(read_file(scratch_dir() / "c.csv") != csv);
}

TEST_CASE("cli: point mass writes N identical rows") {
  const std::string p = write_file(
      "point.json", R"({"n": 2, "mu": [0, 0], "sigma": [[1, 0], [0, 1]], "C": [[1, 0], [0, 1]], "d": [-1, -2]})");
  const Run r = cli({"sample", "--problem", p, "--n", "3", "--seed", "1", "--out", "-"});
  CHECK(r.code == kExitOk);
  CHECK(r.out == "x1,x2\n1,2\n1,2\n1,2\n");
}

TEST_CASE("cli: compare against the conditional oracle") {
  const fs::path json_out = scratch_dir() / "report.json";
  const Run r = cli({"compare", "--problem", fixture("pentagon_equality"), "--n", "20000",
                     "--seed", "3", "--oracle", "conditional", "--json", json_out.string()});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("cov[4,4]") != std::string::npos);
  CHECK(fs::exists(json_out));

  // A wrong oracle for the problem type is malformed input.
  CHECK(cli({"compare", "--problem", fixture("pentagon_equality"), "--n", "100", "--seed", "3",
             "--oracle", "rejection"})
            .code == kExitMalformedInput);
}

TEST_CASE("cli: compare failure exits 4") {
  // Tiny sigma level makes any sampling noise a failure.
  const Run r = cli({"compare", "--problem", fixture("pentagon_equality"), "--n", "2000",
                     "--seed", "3", "--oracle", "conditional", "--sigma", "1e-6"});
  CHECK(r.code == kExitComparisonFailed);
}
