#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "relayline/deploy.hpp"
#include "relayline/io.hpp"
#include "relayline/mdp.hpp"

using namespace relayline;

namespace {

MdpSolution tiny_policy() {
  MdpConfig cfg;
  cfg.Lambda = 0.5;
  cfg.xi = 0.05;
  cfg.state_step = 0.05;
  cfg.action_step = 0.01;
  return solve_mdp(cfg);
}

struct TempFile {
  std::string path;
  explicit TempFile(std::string name) : path(std::move(name)) {}
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("fixed formatting is six decimals with a dot") {
  CHECK(format_fixed(1.0) == "1.000000");
  CHECK(format_fixed(-0.5) == "-0.500000");
  CHECK(format_fixed(8.4185) == "8.418500");
  CHECK(format_fixed(std::nan("")) == "nan");
}

TEST_CASE("policy tables survive a CSV round trip") {
  const auto sol = tiny_policy();
  TempFile tmp("io_test_policy.csv");
  write_policy_csv(sol, tmp.path);
  const auto rows = read_policy_csv(tmp.path);
  REQUIRE(rows.size() == sol.states.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(std::abs(rows[i].s - sol.states[i]) <= 5e-7);
    CHECK(std::abs(rows[i].J - sol.J[i]) <= 5e-7);
    CHECK(std::abs(rows[i].a_star - sol.policy[i]) <= 5e-7);
  }
  const std::string text = format_policy_csv(sol);
  CHECK(text.rfind("s,J,a_star\n", 0) == 0);
  CHECK(text.find("e-") == std::string::npos);  // never scientific notation
}

TEST_CASE("trace tables survive a CSV round trip including NaN") {
  DeploymentTrace with;
  with.line_length = 3.25;
  with.placements = {1.0, 3.25};
  with.states = {1.0, 0.6};
  with.relay_count = 1;
  with.h_sequential = 4.5;
  with.h_offline = 4.25;
  with.e_percent = 100.0 * (4.5 - 4.25) / 4.25;
  DeploymentTrace without = with;
  without.h_offline = std::nan("");
  without.e_percent = 0.0;

  TempFile tmp("io_test_traces.csv");
  write_trace_csv({with, without}, tmp.path);
  const auto rows = read_trace_csv(tmp.path);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].sample_index == 0);
  CHECK(rows[1].sample_index == 1);
  CHECK(rows[0].length == doctest::Approx(3.25).epsilon(1e-9));
  CHECK(rows[0].n_relays == 1);
  CHECK(std::abs(rows[0].h_off - 4.25) <= 5e-7);
  CHECK(std::isnan(rows[1].h_off));
  CHECK(rows[1].e_percent == 0.0);
}

TEST_CASE("reports survive a JSON round trip at emitted precision") {
  ComparisonReport report;
  report.Lambda = 0.1;
  report.xi = 0.123456789;
  report.sample_count = 1234;
  report.seed = 987654321;
  report.mean_percent_error = 1.23456749;
  report.mean_relays = 2.000151;
  report.zero_relay_cases = 17;
  report.max_percent_error = 9.87654321;

  TempFile tmp("io_test_report.json");
  write_report_json(report, tmp.path);
  const auto back = read_report_json(tmp.path);
  CHECK(back.Lambda == doctest::Approx(0.1).epsilon(1e-9));
  CHECK(back.xi == doctest::Approx(0.123457).epsilon(1e-9));
  CHECK(back.sample_count == 1234);
  CHECK(back.seed == 987654321);
  CHECK(back.mean_relays == doctest::Approx(2.000151).epsilon(1e-9));
  CHECK(back.zero_relay_cases == 17);

  const std::string text = format_report_json(report);
  const auto j = nlohmann::json::parse(text);
  CHECK(j.at("sample_count") == 1234);
  CHECK(j.at("mean_percent_error").get<double>() ==
        doctest::Approx(1.234567).epsilon(1e-12));
}

TEST_CASE("malformed files are rejected loudly") {
  TempFile tmp("io_test_malformed.csv");

  write_text_file(tmp.path, "wrong,header\n0.1,0.2,0.3\n");
  CHECK_THROWS_AS(read_policy_csv(tmp.path), std::runtime_error);

  write_text_file(tmp.path, "s,J,a_star\n0.1,0.2\n");
  CHECK_THROWS_AS(read_policy_csv(tmp.path), std::runtime_error);

  write_text_file(tmp.path, "s,J,a_star\n0.1,abc,0.3\n");
  CHECK_THROWS_AS(read_policy_csv(tmp.path), std::runtime_error);

  write_text_file(tmp.path, "{ not json");
  CHECK_THROWS_AS(read_report_json(tmp.path), std::runtime_error);

  CHECK_THROWS_AS(read_policy_csv("does_not_exist_anywhere.csv"),
                  std::runtime_error);
}

TEST_CASE("policy metadata records the grid and the tie-break rule") {
  const auto sol = tiny_policy();
  const auto j = nlohmann::json::parse(format_policy_metadata_json(sol));
  CHECK(j.at("Lambda").get<double>() == 0.5);
  CHECK(j.at("xi").get<double>() == 0.05);
  CHECK(j.at("state_count").get<int>() == 20);
  CHECK(j.at("a_max").get<double>() == 25.0);
  CHECK(j.at("tie_break").get<std::string>() == "smallest-action");
  CHECK(j.at("converged").get<bool>());
  CHECK(j.at("theta").get<double>() == 1.0);
  CHECK(j.contains("iterations"));
  CHECK(j.contains("final_sup_diff"));
  CHECK(j.contains("boundary_minimizer"));
}

// ---------------------------------------------------------------------------
// End-to-end checks of the installed command-line binary. The test runner
// exports RELAYLINE_CLI with the binary's path.

TEST_SUITE("cli") {

namespace {

struct CmdResult {
  int code = -1;
  std::string out;
};

std::string cli_path() {
  const char* p = std::getenv("RELAYLINE_CLI");
  REQUIRE_MESSAGE(p != nullptr, "RELAYLINE_CLI must point at the binary");
  return p;
}

CmdResult run_cmd(const std::string& args, const std::string& stdin_text = "") {
  std::string cmd;
  if (!stdin_text.empty()) {
    cmd = "printf '" + stdin_text + "' | ";
  }
  cmd += cli_path() + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CmdResult result;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0)
    result.out.append(buf, n);
  const int status = pclose(pipe);
  result.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      lines.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) lines.push_back(cur);
  return lines;
}

// Fast MDP grid shared by every CLI invocation that solves a policy.
const std::string kCoarse =
    "--Lambda 0.5 --xi 0.05 --state-step 0.05 --action-step 0.01";

}  // namespace

TEST_CASE("help exits cleanly and a missing subcommand does not") {
  CHECK(run_cmd("--help").code == 0);
  CHECK(run_cmd("").code == 2);
  CHECK(run_cmd("single-relay --model exp --lambda 1 --bogus").code == 2);
}

TEST_CASE("single-relay solves and validates its flag combinations") {
  const auto weak = run_cmd("single-relay --model exp --lambda 0.5");
  REQUIRE(weak.code == 0);
  const auto j = nlohmann::json::parse(weak.out);
  CHECK(j.at("regime").get<std::string>() == "at_source_full_power");
  CHECK(j.at("x_star").get<double>() == 0.0);
  CHECK(j.at("alpha_star").get<double>() == 1.0);
  CHECK(j.at("rate").get<double>() == doctest::Approx(0.5).epsilon(1e-12));

  const auto pw = run_cmd("single-relay --model powerlaw --eta 2");
  REQUIRE(pw.code == 0);
  const auto jp = nlohmann::json::parse(pw.out);
  CHECK(jp.at("regime").get<std::string>() == "interior");
  CHECK(jp.at("x_star").get<double>() > 0.3);
  CHECK(jp.at("x_star").get<double>() < 0.42);

  CHECK(run_cmd("single-relay --model exp --lambda -1").code == 2);
  CHECK(run_cmd("single-relay --model exp --lambda 1 --eta 2").code == 2);
  CHECK(run_cmd("single-relay --model powerlaw --eta 2 --b-over-l 0.1").code ==
        2);
  CHECK(run_cmd("single-relay --model modified --eta 2").code == 2);
}

TEST_CASE("single-relay sweeps emit one CSV row per parameter") {
  const auto res = run_cmd("single-relay --model exp --sweep 0.5:3:6");
  REQUIRE(res.code == 0);
  const auto rows = lines_of(res.out);
  REQUIRE(rows.size() == 7);
  CHECK(rows[0] == "lambda,x_star,alpha_star,rate");
  CHECK(rows[1].rfind("0.500000,", 0) == 0);
  CHECK(rows[6].rfind("3.000000,", 0) == 0);
}

TEST_CASE("place reports the closed-form single relay optimum") {
  const auto res = run_cmd("place --lambda 2 --n 1");
  REQUIRE(res.code == 0);
  const auto j = nlohmann::json::parse(res.out);
  const double z = std::sqrt(1.0 + std::exp(2.0)) - 1.0;
  REQUIRE(j.at("y_over_l").size() == 1);
  CHECK(j.at("y_over_l")[0].get<double>() ==
        doctest::Approx(std::log(z) / 2.0).epsilon(1e-6));
  CHECK(j.at("converged").get<bool>());
}

TEST_CASE("place tables grow monotonically in the relay count") {
  const auto res = run_cmd("place --lambda 2 --n-max 4");
  REQUIRE(res.code == 0);
  const auto rows = lines_of(res.out);
  REQUIRE(rows.size() == 5);
  CHECK(rows[0] == "n,rate,gain");
  double prev = 0.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    double n = 0.0, rate = 0.0, gain = 0.0;
    REQUIRE(std::sscanf(rows[i].c_str(), "%lf,%lf,%lf", &n, &rate, &gain) ==
            3);
    CHECK(n == static_cast<double>(i));
    CHECK(rate > prev);
    prev = rate;
  }
}

TEST_CASE("mdp writes a policy table with metadata next to it") {
  TempFile csv("cli_test_policy.csv");
  TempFile meta("cli_test_policy.csv.meta.json");
  const auto res = run_cmd("mdp " + kCoarse + " --out " + csv.path);
  REQUIRE(res.code == 0);
  const auto rows = read_policy_csv(csv.path);
  REQUIRE(rows.size() == 20);
  CHECK(rows.back().s == doctest::Approx(1.0).epsilon(1e-9));

  std::ifstream meta_in(meta.path);
  REQUIRE(meta_in.good());
  nlohmann::json j;
  meta_in >> j;
  CHECK(j.at("converged").get<bool>());
  CHECK(j.at("state_count").get<int>() == 20);

  const auto to_stdout = run_cmd("mdp " + kCoarse);
  REQUIRE(to_stdout.code == 0);
  CHECK(to_stdout.out.rfind("s,J,a_star\n", 0) == 0);
}

TEST_CASE("deploy on a known length reports placements ending at the sink") {
  const auto res = run_cmd("deploy " + kCoarse + " --length 4");
  REQUIRE(res.code == 0);
  const auto j = nlohmann::json::parse(res.out);
  CHECK(j.at("line_length").get<double>() == 4.0);
  const auto placements = j.at("placements");
  REQUIRE(placements.size() >= 1);
  CHECK(placements.back().get<double>() == 4.0);
  CHECK(j.at("h_offline").is_number());

  const auto blind = run_cmd("deploy " + kCoarse + " --length 4 --no-offline");
  REQUIRE(blind.code == 0);
  const auto jb = nlohmann::json::parse(blind.out);
  CHECK(jb.at("h_offline").is_null());

  CHECK(run_cmd("deploy " + kCoarse + " --length 4 --samples 5").code == 2);
  CHECK(run_cmd("deploy " + kCoarse).code == 2);
}

TEST_CASE("monte carlo deploys are byte-identical for a fixed seed") {
  const std::string args =
      "deploy " + kCoarse + " --samples 50 --seed 7 --no-offline";
  const auto a = run_cmd(args);
  const auto b = run_cmd(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  const auto j = nlohmann::json::parse(a.out);
  CHECK(j.at("sample_count").get<int>() == 50);
  CHECK(j.at("seed").get<std::uint64_t>() == 7);
  CHECK(j.at("zero_relay_cases").get<int>() >= 0);
}

TEST_CASE("interactive mode advises one distance per prompt") {
  const auto ok =
      run_cmd("deploy " + kCoarse + " --interactive", "continue 2\\nend\\n");
  REQUIRE(ok.code == 0);
  const auto advice = lines_of(ok.out);
  REQUIRE(advice.size() == 2);
  for (const auto& line : advice) {
    double a = -1.0;
    REQUIRE(std::sscanf(line.c_str(), "%lf", &a) == 1);
    CHECK(a >= 0.0);
  }

  const auto bad =
      run_cmd("deploy " + kCoarse + " --interactive", "walk 3\\n");
  CHECK(bad.code == 2);
}

}  // TEST_SUITE("cli")
