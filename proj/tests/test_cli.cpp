#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "diracham/commands.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace diracham;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
};

// Runs the installed binary, capturing standard output.
Run run_binary(const std::string& args) {
  const std::string cmd = std::string(DIRACHAM_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

Run run_in_process(std::vector<std::string> args) {
  args.insert(args.begin(), "diracham");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str()};
}

}  // namespace

TEST_CASE("exit codes") {
  CHECK(run_binary("verify-algebra --samples 50").code == 0);
  CHECK(run_binary("verify-algebra --inject-fault gamma --samples 20").code == 1);
  CHECK(run_binary("no-such-command").code == 2);
  CHECK(run_binary("verify-algebra --rep nonsense").code == 2);
  CHECK(run_binary("bergmann --sites 2").code == 2);
  CHECK(run_binary("bergmann --inject-fault gamma").code == 2);
  CHECK(run_binary("quantize --dx 0.1").code == 2);
  CHECK(run_binary("evolve --dt 0.06 --steps 10").code == 2);
  CHECK(run_binary("evolve --hbar 0").code == 2);
}

TEST_CASE("fault reports name the broken identity") {
  auto r = run_binary("verify-algebra --rep dirac --inject-fault gamma --samples 20");
  CHECK(r.code == 1);
  CHECK(r.out.find("clifford") != std::string::npos);

  auto m = run_in_process({"bergmann", "--track", "spinorial", "--sites", "3", "--samples", "10", "--inject-fault",
                           "momentum", "--out", "-"});
  CHECK(m.code == 1);
  auto doc = json::parse(m.out);
  CHECK(doc["first_failure"]["name"] == "momentum_pi");
}

TEST_CASE("JSON report layout") {
  auto r = run_in_process({"verify-algebra", "--samples", "30", "--out", "-"});
  REQUIRE(r.code == 0);
  auto doc = json::parse(r.out);
  for (const char* key : {"schema_version", "command", "config", "passed", "failures", "first_failure", "checks",
                          "details"})
    CHECK(doc.contains(key));
  CHECK(doc["schema_version"] == kReportSchemaVersion);
  CHECK(doc["command"] == "verify-algebra");
  CHECK(doc["passed"] == true);
  CHECK(doc["failures"] == 0);
  CHECK(doc["first_failure"].is_null());
  CHECK(doc["config"]["samples"] == 30);
  REQUIRE(doc["checks"].is_array());
  for (const auto& c : doc["checks"]) {
    CHECK(c.contains("suite"));
    CHECK(c.contains("name"));
    CHECK(c["passed"].is_boolean());
    CHECK(c["residual"].is_number());
  }
}

TEST_CASE("same seed, same report") {
  auto a = run_in_process({"verify-algebra", "--samples", "40", "--seed", "99", "--out", "-"});
  auto b = run_in_process({"verify-algebra", "--samples", "40", "--seed", "99", "--out", "-"});
  CHECK(a.out == b.out);
}

TEST_CASE("config file with command-line override") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto ini = dir / "diracham_test.ini";
  const auto report = dir / "diracham_test.json";
  const auto table = dir / "diracham_test.txt";
  {
    std::ofstream f(ini);
    f << "sites = 16\nsteps = 40\nrecord-every = 20\nmass = 1/2\ntable = " << table.string() << "\n";
  }
  auto r = run_binary("evolve --config " + ini.string() + " --steps 20 --out " + report.string());
  CHECK(r.code == 0);
  std::ifstream in(report);
  REQUIRE(in);
  auto doc = json::parse(in);
  CHECK(doc["config"]["sites"] == 16);
  CHECK(doc["config"]["steps"] == 20);
  CHECK(doc["config"]["mass"] == "1/2");
  CHECK(doc["details"].contains("omega_measured"));
  std::ifstream t(table);
  std::string first;
  std::getline(t, first);
  CHECK(first.rfind("# step", 0) == 0);

  {
    std::ofstream f(ini);
    f << "sites = many\n";
  }
  CHECK(run_binary("evolve --config " + ini.string()).code == 2);
  CHECK(run_binary("evolve --config " + (dir / "missing.ini").string()).code == 2);
  std::filesystem::remove(ini);
  std::filesystem::remove(report);
  std::filesystem::remove(table);
}

TEST_CASE("quantize and evolve through the CLI") {
  auto q = run_in_process({"quantize", "--track", "grassmann-r", "--out", "-"});
  CHECK(q.code == 0);
  CHECK(json::parse(q.out)["passed"] == true);
  auto e = run_in_process({"evolve", "--initial", "zero", "--steps", "20", "--out", "-"});
  CHECK(e.code == 0);
}
