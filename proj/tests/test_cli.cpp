// End-to-end checks of the command-line tool; every path must be a thin
// wrapper over the library calls.

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "aoi/experiments.hpp"
#include "doctest.h"

namespace {

struct CommandResult {
  int exit_code = -1;
  std::string output;
};

CommandResult run_command(const std::string& arguments) {
  const std::string command = std::string(AOI_CLI_PATH) + " " + arguments + " 2>&1";
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CommandResult result;
  std::array<char, 4096> buffer{};
  while (std::fgets(buffer.data(), buffer.size(), pipe) != nullptr) result.output += buffer.data();
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("greedy on an all-OFF horizon prints the total age cost") {
  const auto result = run_command("simulate --p 0 --T 5 --c 3 --algo greedy");
  CHECK(result.exit_code == 0);
  CHECK(contains(result.output, "cost=15"));
}

TEST_CASE("randomized single runs print the initial u for replay") {
  const auto result = run_command("simulate --p 0.5 --T 50 --c 2 --algo randomized --seed 4");
  CHECK(result.exit_code == 0);
  CHECK(contains(result.output, " u=0."));
  const auto replay = run_command("simulate --p 0.5 --T 50 --c 2 --algo randomized --seed 4");
  CHECK(replay.output == result.output);
}

TEST_CASE("fixed u requires the randomized algorithm and a single trial") {
  CHECK(run_command("simulate --p 0.5 --T 10 --c 2 --algo greedy --u 0.5").exit_code == 2);
  CHECK(run_command("simulate --p 0.5 --T 10 --c 2 --algo randomized --trials 3 --u 0.5").exit_code ==
        2);
  CHECK(run_command("simulate --p 0.5 --T 10 --c 2 --algo randomized --u 0.5").exit_code == 0);
}

TEST_CASE("pattern sources are mutually exclusive") {
  const auto result = run_command("simulate --p 0.5 --pattern-file nope.txt --c 2");
  CHECK(result.exit_code == 2);
}

TEST_CASE("multi-trial bernoulli runs emit the same bytes as a direct grid call") {
  const auto result =
      run_command("simulate --p 0.3 --T 200 --c 2 --algo randomized --trials 4 --seed 7");
  CHECK(result.exit_code == 0);
  CHECK(contains(result.output, "randomized,0.3,2,200,4,"));
  CHECK(contains(result.output, "opt,0.3,2,200,4,"));

  aoi::ExperimentConfig config;
  config.p_list = {0.3};
  config.c_list = {2.0};
  config.horizon = 200;
  config.trials = 4;
  config.seed = 7;
  config.run_greedy = false;
  std::ostringstream expected;
  aoi::emit_report_csv(aoi::run_grid(config), expected);
  CHECK(result.output == expected.str());
}

TEST_CASE("pattern files drive per-line reports") {
  const std::string path = "cli_patterns_test.txt";
  {
    std::ofstream out(path);
    out << "101\n0011 2,4\n";
  }
  const auto opt = run_command("simulate --pattern-file " + path + " --c 2 --algo opt");
  CHECK(opt.exit_code == 0);
  CHECK(contains(opt.output, "line=1 algo=opt cost=5"));
  CHECK(contains(opt.output, "line=2 algo=opt cost=6"));

  const auto randomized =
      run_command("simulate --pattern-file " + path + " --c 2 --algo randomized --u 0.2");
  CHECK(randomized.exit_code == 0);
  CHECK(contains(randomized.output, "u=0.2"));
  std::remove(path.c_str());
}

TEST_CASE("bad pattern files are usage errors naming the position") {
  const std::string path = "cli_bad_pattern_test.txt";
  {
    std::ofstream out(path);
    out << "10x\n";
  }
  const auto result = run_command("simulate --pattern-file " + path + " --c 2 --algo opt");
  CHECK(result.exit_code == 2);
  CHECK(contains(result.output, "line 1, column 3"));
  std::remove(path.c_str());
}

TEST_CASE("trace emits the hand-traced iteration records") {
  const auto result = run_command("trace --pattern 11 --c 2");
  CHECK(result.exit_code == 0);
  CHECK(contains(result.output, "{\"t\":1,\"i\":1,\"d_before\":0.0,\"d_after\":0.4,"));
  int lines = 0;
  for (const char ch : result.output) {
    if (ch == '\n') ++lines;
  }
  CHECK(lines == 3);
}

TEST_CASE("worst-case search reports the short-horizon maximizer") {
  const auto result = run_command("worst-case --max-t 2 --c 2");
  CHECK(result.exit_code == 0);
  CHECK(contains(result.output, "worst_pattern=1 "));
  CHECK(contains(result.output, "ratio=1.4"));
  CHECK(contains(result.output, "bound_ok=yes"));
}

TEST_CASE("verify runs the selected suite") {
  const auto result = run_command("verify --suite oracle --max-t 5");
  CHECK(result.exit_code == 0);
  CHECK(contains(result.output, "PASS oracle"));
  const auto all = run_command("verify --max-t 4 --random-patterns 5 --empirical-trials 2000");
  CHECK(all.exit_code == 0);
  CHECK(contains(all.output, "PASS feasibility"));
  CHECK(contains(all.output, "PASS lemma2"));
  CHECK(contains(all.output, "PASS theorem1"));
  CHECK(contains(all.output, "PASS lemma4"));
}

TEST_CASE("unknown flags and suites are usage errors") {
  CHECK(run_command("simulate --p 0.5 --T 10 --c 2 --frobnicate").exit_code == 2);
  CHECK(run_command("verify --suite nonsense").exit_code == 2);
  CHECK(run_command("").exit_code == 2);
}

TEST_CASE("AOI_SEED provides the default seed") {
  const auto seeded = run_command("simulate --p 0.5 --T 40 --c 2 --algo randomized --seed 123");
  const std::string command = std::string("AOI_SEED=123 ") + AOI_CLI_PATH +
                              " simulate --p 0.5 --T 40 --c 2 --algo randomized 2>&1";
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string output;
  std::array<char, 4096> buffer{};
  while (std::fgets(buffer.data(), buffer.size(), pipe) != nullptr) output += buffer.data();
  pclose(pipe);
  CHECK(output == seeded.output);
}

TEST_SUITE_END();
