#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "doctest.h"
#include "subdep/csv.hpp"

using namespace subdep;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("subdep_cli_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("zero horizon writes only the header") {
    const Run r = run({"simulate", "--n", "2", "--alpha", "1", "--t-end", "0"});
    CHECK(r.code == 0);
    CHECK(r.out == "t,tau,zeta,c1,y\n");
  }

  TEST_CASE("simulate writes a passing mass check and a manifest") {
    const auto dir = scratch("simulate");
    const Run r = run({"simulate", "--t-end", "100", "--out", (dir / "run.csv").string()});
    REQUIRE(r.code == 0);
    std::ifstream in(dir / "run.mass.csv");
    const csv::Table t = csv::read(in);
    REQUIRE(!t.rows.empty());
    for (const auto& row : t.rows) CHECK(row[t.column("pass")] == "1");
    const std::string manifest = slurp(dir / "run.manifest.json");
    CHECK(manifest.find("config_hash") != std::string::npos);
    CHECK(manifest.find("\"simulate\"") != std::string::npos);
    std::filesystem::remove_all(dir);
  }

  TEST_CASE("small truncation on a long horizon exits with 3") {
    const Run r = run({"simulate", "--t-end", "100", "--truncation", "16"});
    CHECK(r.code == 3);
    CHECK(r.err.find("TruncationBreach") != std::string::npos);
  }

  TEST_CASE("configuration errors are listed together and exit with 2") {
    const Run r = run({"simulate", "--n", "1", "--alpha", "0", "--tol", "1"});
    CHECK(r.code == 2);
    CHECK(r.err.find("--n") != std::string::npos);
    CHECK(r.err.find("--alpha") != std::string::npos);
    CHECK(r.err.find("--tol") != std::string::npos);
    CHECK(run({"nonsense"}).code == 2);
    CHECK(run({"simulate", "--bogus", "1"}).code == 2);
    CHECK(run({"rate", "--eta", "1.01"}).code == 2);
    CHECK(run({"asymptotics", "--oracle", "nope"}).code == 2);
    CHECK(run({"--help"}).code == 0);
  }

  TEST_CASE("profile") {
    CHECK(run({"profile", "--eta", "2"}).out == "0\n");
    const Run grid = run({"profile", "--eta-min", "0.1", "--eta-max", "1.9", "--points", "19"});
    CHECK(grid.code == 0);
    CHECK(grid.out.find("\n1,") == std::string::npos);
    CHECK(grid.out.rfind("eta,profile\n", 0) == 0);
  }

  TEST_CASE("manifold slope for n = 2") {
    const Run r = run({"manifold", "--n", "2"});
    REQUIRE(r.code == 0);
    std::istringstream in(r.out);
    const csv::Table t = csv::read(in);
    CHECK(csv::parse_double(t.rows[0][t.column("slope")]) == doctest::Approx(8.0).epsilon(0.02));
  }

  TEST_CASE("rate summary matches a direct measurement") {
    const Run r = run({"rate", "--n", "2", "--eta", "0.5", "--tau-min", "1000", "--tau-max",
                       "10000", "--tau-points", "9", "--min-decades", "1"});
    REQUIRE(r.code == 0);
    std::istringstream in(r.out);
    const csv::Table t = csv::read(in);
    REQUIRE(t.rows.size() == 1);
    const double ratio = csv::parse_double(t.rows[0][t.column("envelope_ratio_median")]);
    CHECK(ratio >= 0.5);
    CHECK(ratio <= 2.0);
    CHECK(t.rows[0][t.column("regime")] == "LogOverTau");
  }

  TEST_CASE("identical configurations give byte-identical outputs") {
    const auto dir = scratch("determinism");
    const std::vector<std::string> sim{"simulate", "--init", "powerlaw", "--t-end", "30"};
    CHECK(run(sim).out == run(sim).out);
    for (const char* sub : {"a", "b"}) {
      const Run r = run({"rate", "--mu", "monomeric", "1.5", "--eta", "0.5", "2", "--tau-max",
                         "3000", "--tau-points", "8", "--min-decades", "1.4", "--out", (dir / sub).string()});
      REQUIRE(r.code == 0);
    }
    for (const char* f : {"summary.csv", "cell_0000.csv", "cell_0003.csv", "manifest.json"}) {
      CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
      CHECK(!slurp(dir / "a" / f).empty());
    }
    const std::vector<std::string> mono{"monomer", "--t-end", "1e5"};
    CHECK(run(mono).out == run(mono).out);
    std::filesystem::remove_all(dir);
  }

  TEST_CASE("query reads a file and writes CSV") {
    const auto dir = scratch("query");
    {
      std::ofstream f(dir / "in.csv");
      f << "eta,tau\n0.5,200\n1.5,100\n";
    }
    const Run r = run({"query", "--in", (dir / "in.csv").string()});
    REQUIRE(r.code == 0);
    std::istringstream in(r.out);
    const csv::Table t = csv::read(in);
    CHECK(t.rows.size() == 2);
    CHECK(t.column("envelope") == 6);
    CHECK(run({"query", "--in", (dir / "missing.csv").string()}).code == 2);
    std::filesystem::remove_all(dir);
  }

  TEST_CASE("asymptotics oracle output") {
    const Run r = run({"asymptotics", "--oracle", "monomer", "--from", "1e6", "--to", "1e6",
                       "--points", "1"});
    REQUIRE(r.code == 0);
    std::istringstream in(r.out);
    const csv::Table t = csv::read(in);
    CHECK(csv::parse_double(t.rows[0][1]) == doctest::Approx(6.93428e-3).epsilon(1e-6));
  }
}
