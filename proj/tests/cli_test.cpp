#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kData = PMAPS_DATA_DIR;
const std::string kGolden = PMAPS_GOLDEN_DIR;

struct Result {
  int code = 0;
  json report;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "pmaps");
  std::ostringstream out, err;
  Result r;
  r.code = pmaps::cli::run(args, out, err, false);
  r.err = err.str();
  if (r.code == 0) r.report = json::parse(out.str());
  return r;
}

fs::path scratch() {
  fs::path dir = fs::temp_directory_path() / "pmaps_cli_test";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

bool updating() { return std::getenv("PMAPS_UPDATE_GOLDEN") != nullptr; }

void golden_text(const std::string& name, const std::string& actual) {
  const fs::path path = fs::path(kGolden) / name;
  if (updating()) {
    std::ofstream(path, std::ios::binary) << actual;
    return;
  }
  REQUIRE(fs::exists(path));
  CHECK(slurp(path) == actual);
}

void golden_json(const std::string& name, const json& actual) { golden_text(name, actual.dump(2) + "\n"); }

}  // namespace

TEST_CASE("enumerate golden") {
  const fs::path out = scratch() / "all3.txt";
  Result r = run({"enumerate", "--n", "3", "--class", "all", "--out", out.string()});
  REQUIRE(r.code == 0);
  CHECK(r.report["results"]["count"]["value"] == "54");
  golden_text("enumerate_all_n3.txt", slurp(out));
  golden_json("enumerate_all_n3.json", r.report["results"]);
  CHECK(r.report["format"] == "pmaps-report");
  CHECK(r.report["version"] == 1);
  CHECK_FALSE(r.report.contains("timing_seconds"));
}

TEST_CASE("occurrences golden") {
  Result r = run({"occurrences", "--pattern", kData + "/digon.map", "--host", kData + "/triple.map"});
  REQUIRE(r.code == 0);
  CHECK(r.report["results"]["hosts"][0]["count"]["value"] == 2);
  golden_json("occurrences_digon_triple.json", r.report["results"]);
}

TEST_CASE("itypes golden") {
  const fs::path out = scratch() / "types.json";
  Result r = run({"itypes", "--pattern", kData + "/fly.map", "--out", out.string(), "--threads", "4"});
  REQUIRE(r.code == 0);
  CHECK(r.report["results"]["types"]["value"] == 15);
  CHECK(r.report["results"]["families"]["value"] == 7);
  CHECK(json::parse(slurp(out)) == json::parse(slurp(fs::path(kGolden) / "fly_types.json")));
}

TEST_CASE("solve golden") {
  const fs::path out = scratch() / "series.json";
  Result r = run({"solve", "--class", "all", "--Nz", "5", "--Nx", "0", "--out", out.string()});
  REQUIRE(r.code == 0);
  CHECK(r.report["results"]["counts_at_u1"]["value"] == json({"1", "2", "9", "54", "378", "2916"}));
  golden_text("solve_all_nz5.json", slurp(out));

  const fs::path out2 = scratch() / "digon.json";
  r = run({"solve", "--class", "bipartite", "--pattern", kData + "/digon.map", "--Nz", "6", "--out", out2.string()});
  REQUIRE(r.code == 0);
  golden_text("solve_bipartite_digon_nz6.json", slurp(out2));
}

TEST_CASE("solve with a types file") {
  const fs::path out = scratch() / "fly_series.json";
  Result r = run({"solve", "--class", "all", "--pattern", kData + "/fly.map", "--types", kGolden + "/fly_types.json",
                  "--Nz", "7", "--out", out.string()});
  REQUIRE(r.code == 0);
  CHECK(r.report["results"]["intersection_types"] == 15);
}

TEST_CASE("moments golden") {
  Result r = run({"moments", "--series", kGolden + "/solve_bipartite_digon_nz6.json", "--csv",
                  (scratch() / "moments.csv").string()});
  REQUIRE(r.code == 0);
  CHECK(r.report["results"]["warnings"].size() == 1);
  golden_json("moments_bipartite_digon_nz6.json", r.report["results"]);
  golden_text("moments_bipartite_digon_nz6.csv", slurp(scratch() / "moments.csv"));
}

TEST_CASE("clt golden") {
  const fs::path out = scratch() / "report.json";
  Result r = run({"clt", "--pattern", kData + "/fly.map", "--class", "all", "--nmax", "6", "--Nz", "0", "--out",
                  out.string(), "--csv", (scratch() / "clt.csv").string()});
  REQUIRE(r.code == 0);
  golden_json("clt_fly_nmax6.json", r.report["results"]);
  golden_text("clt_fly_nmax6.csv", slurp(scratch() / "clt.csv"));
  CHECK(json::parse(slurp(out))["results"] == r.report["results"]);
}

TEST_CASE("clt with an undersized nmax") {
  Result r = run({"clt", "--pattern", kData + "/fly.map", "--class", "all", "--nmax", "3", "--Nz", "0"});
  REQUIRE(r.code == 0);
  CHECK(r.report["results"]["ks"].empty());
  CHECK_FALSE(r.report["results"]["warnings"].empty());
  CHECK(r.err.find("warning") != std::string::npos);
}

TEST_CASE("saddle-check golden") {
  Result r = run({"saddle-check", "--n", "10000", "--k", "100", "--f", "2.4849066497880004,0.3,-0.05,0.01", "--g",
                  "0.1,0.2"});
  REQUIRE(r.code == 0);
  CHECK(std::abs(r.report["results"]["relative_difference"].get<double>()) < 0.05);
  golden_json("saddle_check.json", r.report["results"]);
}

TEST_CASE("exit codes") {
  CHECK(run({}).code == pmaps::cli::kUsage);
  CHECK(run({"solve", "--class", "torus"}).code == pmaps::cli::kUsage);
  CHECK(run({"enumerate"}).code == pmaps::cli::kUsage);
  CHECK(run({"occurrences", "--pattern", "/nonexistent", "--host", "/nonexistent"}).code == pmaps::cli::kUsage);
  CHECK(run({"saddle-check", "--f", "1,x"}).code == pmaps::cli::kUsage);
  CHECK(run({"solve", "--types", kGolden + "/fly_types.json"}).code == pmaps::cli::kUsage);
  CHECK(run({"enumerate", "--n", "12"}).code == pmaps::cli::kResource);
  CHECK(run({"enumerate", "--n", "5", "--limit", "4"}).code == pmaps::cli::kResource);
  std::ostringstream out, err;
  CHECK(pmaps::cli::run({"pmaps", "--version"}, out, err, false) == pmaps::cli::kOk);
  CHECK(out.str().find(pmaps::cli::kToolVersion) != std::string::npos);
}

TEST_CASE("cache directory from the environment") {
  const fs::path dir = scratch() / "cache";
  fs::remove_all(dir);
  ::setenv(pmaps::cli::kCacheEnv, dir.string().c_str(), 1);
  Result r = run({"enumerate", "--n", "4", "--class", "2conn"});
  ::unsetenv(pmaps::cli::kCacheEnv);
  REQUIRE(r.code == 0);
  CHECK(fs::exists(dir / "2conn_n4.pmapbin"));
}

TEST_CASE("reports are byte-identical across runs and thread counts") {
  auto a = run({"clt", "--pattern", kData + "/fly.map", "--nmax", "6", "--Nz", "0", "--threads", "1"});
  auto b = run({"clt", "--pattern", kData + "/fly.map", "--nmax", "6", "--Nz", "0", "--threads", "8"});
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  CHECK(a.report["results"].dump() == b.report["results"].dump());
}
