#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <string>

#include <sys/wait.h>

#include "json.hpp"

using json = nlohmann::json;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run(const std::string& args) {
  std::string cmd = std::string(CALABI_CONE_BIN) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

json run_json(const std::string& args) {
  RunResult r = run(args + " --json --no-timestamp");
  REQUIRE(r.exit_code == 0);
  return json::parse(r.out);
}

std::string data(const std::string& name) { return std::string(CALABI_DATA_DIR) + "/" + name; }

}  // namespace

TEST_CASE("spq family report") {
  json j = run_json("cone spq 5 3");
  const json& res = j["results"];
  CHECK(res["gorenstein"] == true);
  CHECK(res["gamma"] == json({"0", "0", "-1"}));
  CHECK(res["resolution"]["c_x"] == "4");
  CHECK(res["resolution"]["euler"] == "10");
  CHECK(res["resolution"]["smooth"] == true);
  CHECK(res["resolution"]["invariants"]["b2"] == "5");
  CHECK(res["reeb"]["quasi_regular"] == false);
  CHECK(res["square_test"]["value"] == 73);
  CHECK(res["square_test"]["quasi_regular"] == false);
  CHECK(j["warnings"].empty());

  json quasi = run_json("cone spq 7 3");
  CHECK(quasi["results"]["square_test"]["quasi_regular"] == true);
  CHECK(quasi["results"]["reeb"]["quasi_regular"] == true);
}

TEST_CASE("reeb minimization on the two-points fixture") {
  json j = run_json("cone reeb " + data("twopoints.json"));
  const json& res = j["results"];
  CHECK(res["converged"] == true);
  double x0 = res["xi"][0].get<double>();
  double x1 = res["xi"][1].get<double>();
  double x2 = res["xi"][2].get<double>();
  double expected = 9.0 / 16.0 * (-1.0 + std::sqrt(33.0));
  CHECK(std::abs(x0 - expected) < 1e-6);
  CHECK(std::abs(x1 - x0) < 1e-9);
  CHECK(std::abs(x2 - 3.0) < 1e-9);
  CHECK(res["quasi_regular"] == false);
}

TEST_CASE("family report matches the library tables") {
  json j = run_json("link family --name cubic --k 7");
  const json& res = j["results"];
  CHECK(res["c_x"] == 2);
  CHECK(res["b3"] == 4);
  CHECK(res["h2"]["display"] == "Z_7^2");
  CHECK(res["torsion_order"] == "49");

  json k6 = run_json("link family --name cubic --k 6");
  CHECK(k6["results"]["h2"]["display"] == "Z^6 + Z_2^2");
  CHECK(k6["results"]["euler"] == "9");
}

TEST_CASE("hodge report on the cubic surface") {
  json j = run_json("link hodge --weights 1,1,1,1 --degree 3 --exponents 3,3,3,3");
  const json& res = j["results"];
  CHECK(res["poincare"] == json({1, 4, 6, 4, 1}));
  CHECK(res["milnor_number"] == 16);
  CHECK(res["s"] == 7);
  CHECK(res["fano"] == true);
}

TEST_CASE("seifert cohomology table") {
  json j = run_json("link seifert --s 7 --branch 2:1");
  CHECK(j["results"]["cohomology"]["H3"]["display"] == "Z^6 + Z_2^2");
  CHECK(j["results"]["h2_lower"]["display"] == "Z^6 + Z_2^2");
}

TEST_CASE("resolved fan files round-trip through check") {
  std::string out = "/tmp/calabi_cli_roundtrip.json";
  json r = run_json("cone resolve " + data("twopoints.json") + " --out " + out);
  CHECK(r["results"]["c_x"] == "1");
  CHECK(r["results"]["smooth"] == true);

  json c = run_json("cone check " + out);
  CHECK(c["results"]["gorenstein"] == true);
  CHECK(c["results"]["smooth"] == true);
  CHECK(c["results"]["cones"] == 5);
  std::remove(out.c_str());
}

TEST_CASE("quotient subcommand verifies the euler count") {
  json j = run_json("cone quotient --order 5 --weights 1,2,2");
  CHECK(j["results"]["euler_matches_order"] == true);
  CHECK(j["results"]["group_elements"] == 5);
  CHECK(j["results"]["resolution"]["euler"] == "5");
}

TEST_CASE("reports are deterministic without the timestamp") {
  std::string cmd = "cone invariants " + data("c3.json") + " --json --no-timestamp";
  RunResult a = run(cmd);
  RunResult b = run(cmd);
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);

  RunResult stamped = run("cone invariants " + data("c3.json") + " --json");
  CHECK(json::parse(stamped.out).contains("timestamp"));
  CHECK(!json::parse(a.out).contains("timestamp"));
}

TEST_CASE("threads come from the environment when not given") {
  std::string cmd = std::string("CALABI_CONE_THREADS=3 ") + CALABI_CONE_BIN + " cone reeb " +
                    data("c3.json") + " --json --no-timestamp 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  REQUIRE(WEXITSTATUS(pclose(pipe)) == 0);
  json j = json::parse(out);
  double x0 = j["results"]["xi"][0].get<double>();
  CHECK(std::abs(x0 - 1.0) < 1e-8);
}

TEST_CASE("exit codes distinguish usage and domain errors") {
  RunResult domain = run("cone quotient --order 5 --weights 1,1,2");
  CHECK(domain.exit_code == 2);
  CHECK(domain.out.find("NotGorensteinGroup") != std::string::npos);

  RunResult spq_bad = run("cone spq 4 2");
  CHECK(spq_bad.exit_code == 2);
  CHECK(spq_bad.out.find("BadParameters") != std::string::npos);

  RunResult usage = run("cone nonsense");
  CHECK(usage.exit_code == 1);

  RunResult missing = run("cone check /nonexistent/fan.json");
  CHECK(missing.exit_code == 1);

  RunResult help = run("--help");
  CHECK(help.exit_code == 0);

  RunResult family_bad = run("link family --name cubic --k 5");
  CHECK(family_bad.exit_code == 2);
  CHECK(family_bad.out.find("UnresolvedResidual") != std::string::npos);
}
