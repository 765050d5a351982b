#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "fedpart/cli.hpp"
#include "support.hpp"

using namespace fedpart;
namespace fs = std::filesystem;

namespace {

struct Run {
  int status = 0;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Run r;
  r.status = dispatch(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("fedpart-cli-" + std::to_string(::getpid()) + "-" + std::to_string(counter()++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int& counter() {
    static int n = 0;
    return n;
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string write_scenario(const TempDir& dir, const Scenario& s, const std::string& name) {
  const auto path = dir.file(name);
  std::ofstream(path) << dump_scenario(s);
  return path;
}

}  // namespace

TEST_CASE("simulate writes the trace to --out") {
  TempDir dir;
  const auto scenario = write_scenario(dir, test::four_client_oracle(), "s.json");
  const auto r = run({"simulate", "--scenario", scenario, "--out", dir.file("t.csv")});
  CHECK(r.status == 0);
  CHECK(r.out.empty());
  CHECK(test::read_file(dir.file("t.csv")) == test::read_file(FEDPART_TEST_DATA "/oracle_four_client_trace.csv"));
}

TEST_CASE("map covers the whole domain") {
  TempDir dir;
  const auto scenario = write_scenario(dir, test::four_client_oracle(), "s.json");
  const auto r = run({"map", "--scenario", scenario});
  CHECK(r.status == 0);
  CHECK(r.out == "x,h\n0,0\n1,1\n2,1\n3,3\n4,3\n5,3\n6,6\n7,6\n8,6\n9,10\n10,10\n");
  CHECK(r.err.empty());
}

TEST_CASE("payment with a small budget is truncated") {
  TempDir dir;
  const auto scenario = write_scenario(dir, test::four_client_oracle(), "s.json");
  const auto r = run({"payment", "--scenario", scenario, "--budget", "0.01"});
  CHECK(r.status == 0);
  CHECK(r.out ==
        "record,stage,at_point,paid_ids,amounts,post_point,total,final_point,budget_truncated\n"
        "summary,,,,,,0,0,true\n");
  const auto text = run({"payment", "--scenario", scenario, "--efficient", "--format", "text"});
  CHECK(text.status == 0);
  CHECK(text.out.find("final_point 10") != std::string::npos);
}

TEST_CASE("every verb runs and repeats byte for byte") {
  TempDir dir;
  const auto scenario = write_scenario(dir, test::homogeneous({0.5, 1.2, 1.3, 1.6, 1.65}, 1, 0.5), "s.json");
  for (const std::string verb : {"simulate", "map", "equilibria", "basins", "payment"}) {
    for (const std::string format : {"csv", "text"}) {
      CAPTURE(verb);
      const auto a = run({verb, "--scenario", scenario, "--format", format});
      const auto b = run({verb, "--scenario", scenario, "--format", format});
      CHECK(a.status == 0);
      CHECK_FALSE(a.out.empty());
      CHECK(a.out == b.out);
    }
  }
  const auto v1 = run({"verify", "--seed", "3", "--count", "5", "--max-clients", "6"});
  const auto v2 = run({"verify", "--seed", "3", "--count", "5", "--max-clients", "6"});
  CHECK(v1.status == 0);
  CHECK(v1.out == v2.out);
  const auto csv = run({"verify", "--seed", "3", "--count", "5", "--format", "csv", "--mode", "oracle"});
  CHECK(csv.status == 0);
  CHECK(csv.out.rfind("scenario,check,status", 0) == 0);
}

TEST_CASE("gen writes loadable, reproducible scenarios") {
  TempDir a, b;
  CHECK(run({"gen", "--seed", "0", "--count", "5", "--out-dir", a.path.string()}).status == 0);
  CHECK(run({"gen", "--seed", "0", "--count", "5", "--out-dir", b.path.string()}).status == 0);
  int files = 0;
  for (const auto& entry : fs::directory_iterator(a.path)) {
    ++files;
    const auto twin = b.path / entry.path().filename();
    CHECK(test::read_file(entry.path().string()) == test::read_file(twin.string()));
    CHECK_NOTHROW(load_scenario_file(entry.path().string()));
  }
  CHECK(files == 5);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run({}).status == 2);
  CHECK(run({"teleport"}).status == 2);
  CHECK(run({"map"}).status == 2);
  const auto unknown = run({"map", "--scenario", "x.json", "--colour", "red"});
  CHECK(unknown.status == 2);
  CHECK(unknown.out.empty());
  CHECK_FALSE(unknown.err.empty());
  CHECK(run({"map", "--scenario", "x.json", "--format", "xml"}).status == 2);
  CHECK(run({"verify", "--max-clients", "40"}).status == 2);
  CHECK(run({"--help"}).status == 0);
}

TEST_CASE("domain errors exit with 1") {
  TempDir dir;
  const auto missing = run({"map", "--scenario", dir.file("absent.json")});
  CHECK(missing.status == 1);
  CHECK(missing.out.empty());
  CHECK(missing.err.find("error") != std::string::npos);

  std::ofstream(dir.file("bad.json")) << R"({"name": "bad", "sigma_theta_sq": 1, "utility_mode": "homogeneous",
    "clients": [{"id": 1, "samples": 0, "cost": 0.1}]})";
  const auto bad = run({"simulate", "--scenario", dir.file("bad.json")});
  CHECK(bad.status == 1);
  CHECK(bad.err.find("invariant violation") != std::string::npos);

  auto no_start = test::homogeneous({0.1}, 1, 1.0);
  no_start.initial = std::monostate{};
  const auto path = write_scenario(dir, no_start, "nostart.json");
  CHECK(run({"simulate", "--scenario", path}).status == 1);
}
