#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "aoi/experiments.hpp"
#include "aoi/offline.hpp"
#include "doctest.h"
#include "test_helpers.hpp"

using namespace aoi;

TEST_SUITE_BEGIN("experiments");

TEST_CASE("bernoulli generation") {
  SUBCASE("degenerate probabilities") {
    CHECK(generate_bernoulli_pattern(0.0, 50, 1).on_count() == 0);
    CHECK(generate_bernoulli_pattern(1.0, 50, 1).on_count() == 50);
  }
  SUBCASE("ON fraction concentrates at p") {
    const auto pattern = generate_bernoulli_pattern(0.5, 10000, 7);
    const double fraction = static_cast<double>(pattern.on_count()) / 10000.0;
    CHECK(std::abs(fraction - 0.5) <= 3.0 * std::sqrt(0.25 / 10000.0));
  }
  SUBCASE("seeds are reproducible and distinct") {
    CHECK(generate_bernoulli_pattern(0.3, 100, 5) == generate_bernoulli_pattern(0.3, 100, 5));
    CHECK(generate_bernoulli_pattern(0.3, 100, 5) != generate_bernoulli_pattern(0.3, 100, 6));
  }
  SUBCASE("bad arguments") {
    CHECK_THROWS_AS(generate_bernoulli_pattern(1.5, 10, 1), std::invalid_argument);
    CHECK_THROWS_AS(generate_bernoulli_pattern(0.5, 0, 1), std::invalid_argument);
  }
}

TEST_CASE("grid runs aggregate per cell") {
  ExperimentConfig config;
  config.p_list = {0.4};
  config.c_list = {2.0};
  config.horizon = 300;
  config.trials = 6;
  config.seed = 11;
  const ExperimentReport report = run_grid(config);
  REQUIRE(report.cells.size() == 3);  // randomized, greedy, opt
  CHECK(report.cells[0].algorithm == "randomized");
  CHECK(report.cells[1].algorithm == "greedy");
  CHECK(report.cells[2].algorithm == "opt");
  for (const CellStats& cell : report.cells) {
    CHECK(cell.ratio_to_opt >= 1.0 - 1e-9);
    CHECK(cell.mean_cost > 0.0);
    CHECK(cell.trials == 6);
  }
  CHECK(report.cells[2].ratio_to_opt == doctest::Approx(1.0).epsilon(1e-12));

  // a trial reproduces from its derived seed
  const std::uint64_t trial_seed = derive_trial_seed(config.seed, 0, 0);
  const auto pattern = generate_bernoulli_pattern(0.4, config.horizon, trial_seed);
  VectorPatternStream stream(pattern);
  const double cost = run_randomized_online(stream, 2.0, trial_seed).cost / config.horizon;
  CHECK(cost > 0.0);
}

TEST_CASE("reports are deterministic and round-trip through JSON") {
  ExperimentConfig config;
  config.p_list = {0.2, 0.7};
  config.c_list = {3.0};
  config.horizon = 200;
  config.trials = 4;
  config.seed = 99;

  const ExperimentReport first = run_grid(config);
  const ExperimentReport second = run_grid(config);
  CHECK(first == second);

  std::ostringstream csv_a, csv_b, json_a, json_b;
  emit_report_csv(first, csv_a);
  emit_report_csv(second, csv_b);
  CHECK(csv_a.str() == csv_b.str());
  emit_report_json(first, json_a);
  emit_report_json(second, json_b);
  CHECK(json_a.str() == json_b.str());

  std::istringstream parse_in(json_a.str());
  const ExperimentReport parsed = parse_report_json(parse_in);
  CHECK(parsed == first);
}

TEST_CASE("csv layout is stable") {
  ExperimentReport report;
  report.master_seed = 5;
  report.horizon = 10;
  report.trials = 2;
  SUBCASE("empty report is header-only") {
    std::ostringstream out;
    emit_report_csv(report, out);
    CHECK(out.str() == "algorithm,p,c,T,trials,mean_cost,stderr,ratio_to_opt,seed\n");
  }
  SUBCASE("rows carry the shortest round-trip doubles") {
    CellStats cell;
    cell.algorithm = "opt";
    cell.p = 0.25;
    cell.c = 5.0;
    cell.horizon = 10;
    cell.trials = 2;
    cell.mean_cost = 1.5;
    cell.stderr_mean = 0.0;
    cell.ratio_to_opt = 1.0;
    cell.seed = 5;
    report.cells.push_back(cell);
    std::ostringstream out;
    emit_report_csv(report, out);
    CHECK(out.str() ==
          "algorithm,p,c,T,trials,mean_cost,stderr,ratio_to_opt,seed\n"
          "opt,0.25,5,10,2,1.5,0,1,5\n");
  }
}

TEST_CASE("emit_report writes files and rejects unknown formats") {
  ExperimentReport report;
  report.master_seed = 1;
  const std::string path = "experiments_emit_test.csv";
  emit_report(report, "csv", path);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "algorithm,p,c,T,trials,mean_cost,stderr,ratio_to_opt,seed");
  in.close();
  std::remove(path.c_str());
  CHECK_THROWS_AS(emit_report(report, "xml", path), std::invalid_argument);
  CHECK_THROWS_WITH_AS(emit_report(report, "csv", "no_such_dir/x.csv"), doctest::Contains("cannot open"),
                       std::invalid_argument);
}

TEST_CASE("worst-case search over short horizons") {
  const WorstCaseResult result = worst_case_search(2, 2.0);
  CHECK(result.patterns_checked == 6);
  CHECK(result.pattern.to_string() == "1");
  CHECK(result.ratio == doctest::Approx(1.4).epsilon(1e-12));
  CHECK(result.expected_cost == doctest::Approx(1.4).epsilon(1e-12));
  CHECK(result.opt == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(result.bound_ok);
  CHECK_THROWS_AS(worst_case_search(15, 2.0), std::invalid_argument);
}

TEST_CASE("experiment config files parse") {
  const std::string path = "experiments_config_test.cfg";
  {
    std::ofstream out(path);
    out << "# reproduction preset\n"
        << "generator = bernoulli\n"
        << "p_list = 0.1,0.5\n"
        << "c_list = 5\n"
        << "T = 1000\n"
        << "trials = 3\n"
        << "seed = 17\n"
        << "algorithms = randomized,opt\n"
        << "output = out.csv\n";
  }
  const ExperimentConfig config = load_experiment_config(path);
  CHECK(config.p_list == std::vector<double>{0.1, 0.5});
  CHECK(config.c_list == std::vector<double>{5.0});
  CHECK(config.horizon == 1000);
  CHECK(config.trials == 3);
  CHECK(config.seed == 17);
  CHECK(config.run_randomized);
  CHECK_FALSE(config.run_greedy);
  CHECK(config.run_opt);
  CHECK(config.output == "out.csv");
  std::remove(path.c_str());

  {
    std::ofstream out(path);
    out << "p_list = 0.1\nwhatever = 3\n";
  }
  CHECK_THROWS_WITH_AS(load_experiment_config(path), doctest::Contains("line 2"),
                       std::invalid_argument);
  std::remove(path.c_str());
}

TEST_SUITE_END();
