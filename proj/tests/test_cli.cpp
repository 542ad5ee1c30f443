#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "phasefrac/cli.hpp"
#include "phasefrac/io.hpp"
#include "support.hpp"

using namespace phasefrac;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / ("phasefrac_cli_" + std::to_string(::getpid()))) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name, const std::string& content) const {
    std::ofstream(path / name) << content;
    return (path / name).string();
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Three turns per period at 60 degrees: eight steps cannot resolve the overlap phase.
const char* kFastPrecession = R"({
  "schema": 1, "name": "fast", "dimension": 2,
  "hamiltonian": [[[1.5, 0], [0, 0]], [[0, 0], [-1.5, 0]]],
  "initial_state": [[0.8660254037844386, 0], [0.5, 0]],
  "t_final": 6.283185307179586
})";

}  // namespace

TEST_CASE("evolve of the eigenstate keeps |c| = 1") {
  const auto r = run({"evolve", "--scenario", "builtin:eigenstate", "--steps", "32"});
  REQUIRE(r.code == 0);
  std::istringstream lines(r.out);
  std::string header, line;
  std::getline(lines, header);
  CHECK(header == "t,re_0,im_0,re_1,im_1,abs_c,arg_c,phi_total,node");
  std::size_t rows = 0;
  while (std::getline(lines, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
    CHECK(std::abs(std::stod(cells[5]) - 1.0) <= 1e-15);
    ++rows;
  }
  CHECK(rows == 33);
}

TEST_CASE("phase resolution failure advises more steps") {
  TempDir tmp;
  const auto path = tmp.file("fast.json", kFastPrecession);
  const auto r = run({"evolve", "--scenario", path, "--steps", "8"});
  CHECK(r.code == 3);
  CHECK(r.err.find("PhaseResolutionExceeded") != std::string::npos);
  CHECK(r.err.find("--steps") != std::string::npos);
  CHECK(run({"evolve", "--scenario", path, "--steps", "256"}).code == 0);
}

TEST_CASE("malformed input: exit 2 and no output file") {
  TempDir tmp;
  const auto bad = tmp.file("bad.json", "{\"schema\": 1, \"dimension\": ");
  const auto out = tmp.path / "out.csv";
  const auto r = run({"phases", "--scenario", bad, "--out", out.string()});
  CHECK(r.code == 2);
  CHECK_FALSE(fs::exists(out));
  std::size_t entries = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(tmp.path)) ++entries;
  CHECK(entries == 1);

  std::string doc = kFastPrecession;
  doc.replace(doc.find("0.5, 0]]"), 3, "0.7");
  const auto r2 = run({"phases", "--scenario", tmp.file("unnorm.json", doc)});
  CHECK(r2.code == 2);
  CHECK(r2.err.find("initial_state") != std::string::npos);
  CHECK(run({"phases", "--scenario", "builtin:nope"}).code == 2);
  CHECK(run({"phases"}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("phases and geometry output") {
  const auto r = run({"phases", "--scenario", "builtin:precession-th60"});
  REQUIRE(r.code == 0);
  const std::string last = r.out.substr(r.out.rfind('\n', r.out.size() - 2) + 1);
  std::vector<std::string> cells;
  std::stringstream ss(last);
  for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
  CHECK(std::abs(std::stod(cells[4]) + testing::pi / 2) <= 1e-4);

  const auto g = run({"geometry", "--scenario", "builtin:eigenstate", "--format", "json"});
  REQUIRE(g.code == 0);
  const Table t = table_from_json(nlohmann::json::parse(g.out));
  CHECK(std::abs(t.rows.back().back()) <= 1e-12);
}

TEST_CASE("qsl report") {
  const auto r = run({"qsl", "--scenario", "builtin:precession-th60"});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["mt_bound"] == 0.0);
  CHECK(doc["geometric_bound_rot"].get<double>() > 0.0);
  CHECK(doc["notes"][0] == "cyclic");
  CHECK(doc["meta"]["tool"] == "phasefrac");
  CHECK(run({"qsl", "--scenario", "builtin:two-segment"}).code == 2);
}

TEST_CASE("verify exit codes") {
  CHECK(run({"verify", "--scenario", "builtin:precession-th60"}).code == 0);
  const auto strict = run({"verify", "--scenario", "builtin:precession-th90", "--strict-nodes"});
  CHECK(strict.code == 1);
  CHECK(strict.err.find("NodeEncountered") != std::string::npos);
  CHECK(strict.err.find("3.14159") != std::string::npos);
  const auto tight = run({"verify", "--scenario", "builtin:random-d4-s1", "--tol", "1e-12"});
  CHECK(tight.code == 1);
  CHECK(tight.err.find("invariant violated") != std::string::npos);
  CHECK(run({"verify"}).code == 2);
  CHECK(run({"verify", "--all", "--scenario", "builtin:eigenstate"}).code == 2);
}

TEST_CASE("tolerance from the environment") {
  ::setenv("PHASEFRAC_TOL", "1e-12", 1);
  CHECK(run({"verify", "--scenario", "builtin:random-d4-s1"}).code == 1);
  // the flag wins over the environment
  CHECK(run({"verify", "--scenario", "builtin:random-d4-s1", "--tol", "1e-5"}).code == 0);
  ::setenv("PHASEFRAC_TOL", "loose", 1);
  CHECK(run({"verify", "--scenario", "builtin:random-d4-s1"}).code == 2);
  ::unsetenv("PHASEFRAC_TOL");
  CHECK(run({"verify", "--scenario", "builtin:random-d4-s1"}).code == 0);
}

TEST_CASE("outputs are byte-identical across runs") {
  TempDir tmp;
  for (const char* cmd : {"evolve", "phases", "geometry"}) {
    for (const char* format : {"csv", "json"}) {
      const auto a = tmp.path / "a";
      const auto b = tmp.path / "b";
      REQUIRE(run({cmd, "--scenario", "builtin:random-d6-s2", "--steps", "512", "--format", format,
                   "--out", a.string()}).code == 0);
      REQUIRE(run({cmd, "--scenario", "builtin:random-d6-s2", "--steps", "512", "--format", format,
                   "--out", b.string()}).code == 0);
      CHECK(slurp(a) == slurp(b));
      CHECK(slurp(a).find('\r') == std::string::npos);
    }
  }
  const auto v1 = run({"verify", "--all", "--out", (tmp.path / "v1").string()});
  const auto v2 = run({"verify", "--all", "--out", (tmp.path / "v2").string()});
  CHECK(v1.code == 0);
  CHECK(v1.out == v2.out);
  for (const auto& e : fs::directory_iterator(tmp.path / "v1")) {
    CHECK(slurp(e.path()) == slurp(tmp.path / "v2" / e.path().filename()));
  }
}

TEST_CASE("scenario list and show") {
  const auto list = run({"scenario", "list"});
  CHECK(list.code == 0);
  CHECK(list.out.find("precession-th90-half") != std::string::npos);
  const auto show = run({"scenario", "show", "random-d2-s1"});
  REQUIRE(show.code == 0);
  const Scenario s = parse_scenario_json(show.out);
  CHECK(scenario_hash(s) == scenario_hash(builtin_scenario("random-d2-s1")));
}
