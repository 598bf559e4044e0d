#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "bdconvex/lsd.hpp"
#include "bdconvex/relent.hpp"

using json = nlohmann::json;

namespace {

struct CmdResult {
  int exit_code;
  std::string out;
};

std::string temp_state_file(const std::string& contents) {
  static int counter = 0;
  const std::string path = "/tmp/bdconvex_cli_test_" + std::to_string(getpid()) + "_" +
                           std::to_string(counter++) + ".json";
  std::ofstream f(path);
  f << contents;
  return path;
}

CmdResult run_cli(const std::string& args, const std::string& stdin_json = "",
                  const std::string& env = "") {
  std::string cmd = env.empty() ? "" : env + " ";
  cmd += std::string(BDCONVEX_CLI_PATH) + " " + args;
  if (!stdin_json.empty()) cmd += " < " + temp_state_file(stdin_json);
  cmd += " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::vector<std::string> split_lines(const std::string& s) {
  std::vector<std::string> lines;
  std::istringstream in(s);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

}  // namespace

TEST_CASE("analyze reports the full closed-form picture") {
  const std::string state = R"({"p": [0.7, 0.1, 0.1, 0.1]})";
  const CmdResult r = run_cli("analyze --state -", state);
  REQUIRE(r.exit_code == 0);

  const json doc = json::parse(r.out);
  CHECK(doc["classification"] == "entangled");
  CHECK(doc["bell_index"] == 1);
  CHECK(std::abs(doc["concurrence"].get<double>() - 0.4) < 1e-14);
  CHECK(std::abs(doc["lsd"]["lambda"].get<double>() - 0.6) < 1e-14);
  CHECK(doc["lsd"]["pure_index"] == 1);
  CHECK(std::abs(doc["ree"]["bits"].get<double>() - 0.1257693834979822) < 1e-12);
  CHECK(doc["coincidence"] == true);
  CHECK(std::abs(doc["state"]["t"][0].get<double>() - 0.6) < 1e-14);

  // field order is pinned
  CHECK(r.out.find("\"state\"") < r.out.find("\"classification\""));
  CHECK(r.out.find("\"classification\"") < r.out.find("\"lsd\""));
  CHECK(r.out.find("\"lsd\"") < r.out.find("\"ree\""));
  CHECK(r.out.find("\"ree\"") < r.out.find("\"coincidence\""));

  // numbers are reproducible from the library at 15-digit precision
  using namespace bdconvex;
  const BDState rho = bd_from_probs({0.7, 0.1, 0.1, 0.1});
  CHECK(std::abs(doc["lsd"]["lambda"].get<double>() - optimal_lsd(rho).lambda) <= 1e-14);
  CHECK(std::abs(doc["ree"]["bits"].get<double>() - ree_bd(rho).value_bits) <= 1e-14);
}

TEST_CASE("analyze output is byte-stable") {
  const std::string state = R"({"p": [0.61, 0.17, 0.12, 0.1]})";
  const CmdResult first = run_cli("analyze --state -", state);
  const CmdResult second = run_cli("analyze --state -", state);
  REQUIRE(first.exit_code == 0);
  CHECK(first.out == second.out);
  CHECK(first.out.back() == '\n');
}

TEST_CASE("analyze accepts both state forms and a file argument") {
  const CmdResult t_form = run_cli("analyze --state -", R"({"t": [0, 0, 0]})");
  REQUIRE(t_form.exit_code == 0);
  const json doc = json::parse(t_form.out);
  CHECK(doc["classification"] == "separable_interior");
  CHECK(doc["lsd"]["lambda"] == 1.0);
  CHECK(doc["ree"]["bits"] == 0.0);
  CHECK(doc["coincidence"] == true);

  const std::string path = temp_state_file(R"({"p": [0.7, 0.1, 0.1, 0.1]})");
  const CmdResult from_file = run_cli("analyze --state " + path);
  CHECK(from_file.exit_code == 0);
}

TEST_CASE("analyze on a pure Bell state flags the infinite value") {
  const CmdResult r = run_cli("analyze --state -", R"({"p": [0, 1, 0, 0]})");
  REQUIRE(r.exit_code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc["ree"]["infinite"] == true);
  CHECK(doc["ree"]["bits"].is_null());
  CHECK(doc["concurrence"] == 1.0);
  CHECK(doc["lsd"]["lambda"] == 0.0);
}

TEST_CASE("analyze exit codes") {
  CHECK(run_cli("analyze --state -", R"({"p": [0.7, 0.1, 0.1]})").exit_code == 2);
  CHECK(run_cli("analyze --state -", "garbage").exit_code == 2);
  CHECK(run_cli("analyze --state -", R"({"p": [0.7, 0.2, 0.2, 0.1]})").exit_code == 3);
  CHECK(run_cli("analyze --state -", R"({"t": [1, 1, 1]})").exit_code == 3);
  CHECK(run_cli("analyze --bogus-flag").exit_code == 2);
}

TEST_CASE("sweep emits the closed forms as csv") {
  const CmdResult r = run_cli("sweep 0.6 0.9 4");
  REQUIRE(r.exit_code == 0);
  const auto lines = split_lines(r.out);
  REQUIRE(lines.size() == 5);
  CHECK(lines[0] == "p1,lambda,ree_bits,concurrence,w1,w2,w3,w4");

  double prev_p1 = 0.0;
  for (size_t i = 1; i < lines.size(); ++i) {
    std::istringstream row(lines[i]);
    std::string cell;
    std::vector<double> v;
    while (std::getline(row, cell, ',')) v.push_back(std::stod(cell));
    REQUIRE(v.size() == 8);
    const double p1 = v[0];
    CHECK(p1 > prev_p1);
    prev_p1 = p1;
    CHECK(std::abs(v[1] - 2.0 * (1.0 - p1)) <= 5e-15);  // lambda column: closed form
    const double c = 2.0 * p1 - 1.0;
    CHECK(std::abs(v[2] + 0.5 * std::log2(1.0 - c * c)) <= 1e-12);
    CHECK(v[3] == doctest::Approx(c).epsilon(1e-15));
    CHECK(v[4] == 0.5);  // dominant closest-state component
  }
  // endpoints included
  CHECK(split_lines(run_cli("sweep 0.6 0.9 4").out)[1].substr(0, 4) == "0.6,");
}

TEST_CASE("sweep near the boundary tends to zero entanglement") {
  const CmdResult r = run_cli("sweep 0.5001 0.501 3");
  REQUIRE(r.exit_code == 0);
  const auto lines = split_lines(r.out);
  for (size_t i = 1; i < lines.size(); ++i) {
    std::istringstream row(lines[i]);
    std::string cell;
    std::vector<double> v;
    while (std::getline(row, cell, ',')) v.push_back(std::stod(cell));
    CHECK(v[2] <= 1e-2);  // ree_bits
  }
}

TEST_CASE("sweep validates its range") {
  CHECK(run_cli("sweep 0.4 0.9 4").exit_code == 4);
  CHECK(run_cli("sweep 0.9 0.6 4").exit_code == 4);
  CHECK(run_cli("sweep 0.6 1.0 4").exit_code == 4);
  CHECK(run_cli("sweep 0.6 0.9 1").exit_code == 4);
}

TEST_CASE("sweep json format") {
  const CmdResult r = run_cli("sweep 0.6 0.9 4 --format json");
  REQUIRE(r.exit_code == 0);
  const json doc = json::parse(r.out);
  REQUIRE(doc["rows"].size() == 4);
  CHECK(std::abs(doc["rows"][0]["lambda"].get<double>() - 0.8) < 1e-15);
}

TEST_CASE("verify quick passes on an entangled state") {
  const CmdResult r = run_cli("verify --state - --level quick", R"({"p": [0.7, 0.1, 0.1, 0.1]})");
  REQUIRE(r.exit_code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc["pass"] == true);
  REQUIRE(doc["checks"].size() == 5);
  const char* expected[] = {"sdp_lambda", "lp_lambda", "kkt_ree", "slackness", "residual_purity"};
  for (size_t i = 0; i < 5; ++i) {
    CHECK(doc["checks"][i]["name"] == expected[i]);
    CHECK(doc["checks"][i]["pass"] == true);
    CHECK(doc["checks"][i]["residual"].get<double>() <=
          doc["checks"][i]["tolerance"].get<double>());
  }
}

TEST_CASE("verify full adds the grid oracles and the seeded batch") {
  const CmdResult r = run_cli("verify --state - --level full --step 0.005",
                              R"({"p": [0.7, 0.1, 0.1, 0.1]})");
  REQUIRE(r.exit_code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc["pass"] == true);
  std::vector<std::string> names;
  for (const auto& c : doc["checks"]) names.push_back(c["name"]);
  CHECK(std::find(names.begin(), names.end(), "grid_min_ree") != names.end());
  CHECK(std::find(names.begin(), names.end(), "grid_max_lambda") != names.end());
  CHECK(std::find(names.begin(), names.end(), "random_coincidence") != names.end());
}

TEST_CASE("verify is deterministic under a fixed seed") {
  const std::string state = R"({"p": [0.66, 0.2, 0.08, 0.06]})";
  const std::string args = "verify --state - --level full --step 0.01";
  const CmdResult a = run_cli(args, state, "BDCONVEX_SEED=7");
  const CmdResult b = run_cli(args, state, "BDCONVEX_SEED=7");
  REQUIRE(a.exit_code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("verify rejects inapplicable states") {
  CHECK(run_cli("verify --state -", R"({"p": [0.25, 0.25, 0.25, 0.25]})").exit_code == 3);
  CHECK(run_cli("verify --state -", R"({"p": [0.5, 0.25, 0.15, 0.1]})").exit_code == 3);
  CHECK(run_cli("verify --state -", "junk").exit_code == 2);
}
