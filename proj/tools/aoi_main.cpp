// Command-line front end: simulate | reproduce-figs | worst-case | verify | trace.
// Exit codes: 0 success, 1 assertion/check failure, 2 usage or input error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "aoi/experiments.hpp"
#include "aoi/extensions.hpp"
#include "aoi/offline.hpp"
#include "aoi/online.hpp"
#include "aoi/primal_dual.hpp"
#include "aoi/verify.hpp"
#include "json.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

std::uint64_t seed_or_env(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("AOI_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw std::invalid_argument("AOI_SEED is not a valid seed: " + std::string(env));
    }
  }
  return 1;
}

std::vector<double> parse_double_list(const std::string& text, const char* what) {
  std::vector<double> values;
  std::stringstream stream(text);
  std::string piece;
  while (std::getline(stream, piece, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(piece, &used));
      if (used != piece.size()) throw std::invalid_argument(piece);
    } catch (const std::exception&) {
      throw std::invalid_argument(std::string(what) + ": bad number '" + piece + "'");
    }
  }
  if (values.empty()) throw std::invalid_argument(std::string(what) + ": empty list");
  return values;
}

void write_or_print(const aoi::ExperimentReport& report, const std::string& output,
                    const std::string& format) {
  if (output.empty()) {
    if (format == "json") {
      aoi::emit_report_json(report, std::cout);
    } else {
      aoi::emit_report_csv(report, std::cout);
    }
  } else {
    aoi::emit_report(report, format, output);
    std::cerr << "wrote " << output << " (" << report.cells.size() << " rows, "
              << aoi::format_double(report.wall_seconds) << "s)\n";
  }
}

struct SimulateArgs {
  std::string pattern_file;
  std::optional<double> p;
  int horizon = 10000;
  double c = 5.0;
  std::string algo = "randomized";
  int trials = 1;
  std::optional<std::uint64_t> seed;
  std::optional<double> u;
  std::string levels;
  std::string output;
  std::string format = "csv";
  std::string config;
  int jobs = 0;
};

int run_simulate(const SimulateArgs& args) {
  if (args.u && (args.algo != "randomized" || args.trials != 1)) {
    throw std::invalid_argument("--u is only valid with --algo randomized and --trials 1");
  }
  const std::uint64_t seed = seed_or_env(args.seed);

  if (!args.pattern_file.empty()) {
    const auto entries = aoi::load_pattern_file(args.pattern_file);
    for (const auto& entry : entries) {
      const aoi::ConnectivityPattern& pattern = entry.pattern;
      std::vector<double> levels;
      std::vector<double> by_slot;
      if (!entry.on_costs.empty()) {
        by_slot = aoi::expand_on_costs(pattern, entry.on_costs);
        if (!args.levels.empty()) {
          levels = parse_double_list(args.levels, "--levels");
        } else {
          levels = entry.on_costs;
          std::sort(levels.begin(), levels.end());
          levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
        }
      }
      const aoi::CostModel model =
          by_slot.empty() ? aoi::CostModel::constant_linear(args.c)
                          : aoi::CostModel{aoi::DownloadCost::per_slot(levels, by_slot),
                                           aoi::AgeCost::linear()};

      std::cout << "line=" << entry.line << " algo=" << args.algo;
      if (args.algo == "opt") {
        const auto solution = aoi::dp_opt(pattern, model);
        std::cout << " cost=" << aoi::format_double(solution.value)
                  << " schedule=" << solution.schedule.to_string() << '\n';
      } else if (args.algo == "greedy") {
        aoi::VectorPatternStream stream(pattern);
        std::cout << " cost=" << aoi::format_double(aoi::run_greedy_online(stream, args.c).cost)
                  << '\n';
      } else if (args.algo == "randomized") {
        if (args.trials == 1) {
          const double u0 = args.u ? *args.u : aoi::derive_u(seed, 0);
          aoi::VectorPatternStream stream(pattern, by_slot);
          const aoi::OnlineResult result =
              by_slot.empty() ? aoi::run_randomized_online_with_u(stream, args.c, u0)
                              : aoi::run_randomized_online_power_with_u(stream, levels, u0);
          std::cout << " cost=" << aoi::format_double(result.cost)
                    << " u=" << aoi::format_double(result.initial_u) << '\n';
        } else {
          double sum = 0.0, squares = 0.0;
          for (int trial = 0; trial < args.trials; ++trial) {
            const double u0 = aoi::derive_u(seed, static_cast<std::uint32_t>(trial));
            aoi::VectorPatternStream stream(pattern, by_slot);
            const double cost =
                (by_slot.empty() ? aoi::run_randomized_online_with_u(stream, args.c, u0)
                                 : aoi::run_randomized_online_power_with_u(stream, levels, u0))
                    .cost;
            sum += cost;
            squares += cost * cost;
          }
          const double mean = sum / args.trials;
          const double variance =
              args.trials > 1 ? (squares - sum * mean) / (args.trials - 1) : 0.0;
          std::cout << " mean_cost=" << aoi::format_double(mean) << " stderr="
                    << aoi::format_double(std::sqrt(std::max(0.0, variance) / args.trials))
                    << " trials=" << args.trials << " seed=" << seed << '\n';
        }
      } else {
        throw std::invalid_argument("unknown algorithm: " + args.algo);
      }
    }
    return kExitOk;
  }

  // Bernoulli source.
  aoi::ExperimentConfig config;
  if (!args.config.empty()) config = aoi::load_experiment_config(args.config);
  if (args.p) config.p_list = {*args.p};
  if (config.p_list.empty()) {
    throw std::invalid_argument("exactly one pattern source is required: --pattern-file or --p");
  }
  config.c_list = {args.c};
  config.horizon = args.horizon;
  config.trials = args.trials;
  config.seed = seed;
  config.jobs = args.jobs;

  if (args.trials == 1) {
    // Single trial: run the realized pattern directly and print the total
    // cost. The pattern seed matches run_grid's first trial.
    const std::uint64_t trial_seed = aoi::derive_trial_seed(seed, 0, 0);
    const aoi::ConnectivityPattern pattern =
        aoi::generate_bernoulli_pattern(config.p_list.front(), config.horizon, trial_seed);
    aoi::VectorPatternStream stream(pattern);
    std::cout << "algo=" << args.algo;
    if (args.algo == "randomized") {
      const double u0 = args.u ? *args.u : aoi::derive_u(trial_seed, 0);
      const auto result = aoi::run_randomized_online_with_u(stream, args.c, u0);
      std::cout << " cost=" << aoi::format_double(result.cost)
                << " u=" << aoi::format_double(result.initial_u) << '\n';
    } else if (args.algo == "greedy") {
      std::cout << " cost=" << aoi::format_double(aoi::run_greedy_online(stream, args.c).cost)
                << '\n';
    } else {
      const auto solution = aoi::dp_opt(pattern, aoi::CostModel::constant_linear(args.c));
      std::cout << " cost=" << aoi::format_double(solution.value) << '\n';
    }
    return kExitOk;
  }

  config.run_randomized = args.algo == "randomized";
  config.run_greedy = args.algo == "greedy";
  config.run_opt = true;  // ratios need the baseline
  const aoi::ExperimentReport report = aoi::run_grid(config);
  write_or_print(report, args.output.empty() ? config.output : args.output,
                 args.format.empty() ? config.format : args.format);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online energy-efficient scheduling for timely information downloads"};
  app.require_subcommand(1);

  SimulateArgs simulate_args;
  CLI::App* simulate = app.add_subcommand("simulate", "Run one algorithm on patterns");
  auto* src_file = simulate->add_option("--pattern-file", simulate_args.pattern_file,
                                        "Pattern file (one 0/1 pattern per line)");
  auto* src_p = simulate->add_option("--p", simulate_args.p, "Bernoulli connectivity probability");
  src_file->excludes(src_p);
  simulate->add_option("--T", simulate_args.horizon, "Horizon for generated patterns");
  simulate->add_option("--c", simulate_args.c, "Download cost");
  simulate->add_option("--algo", simulate_args.algo, "randomized|greedy|opt")
      ->check(CLI::IsMember({"randomized", "greedy", "opt"}));
  simulate->add_option("--trials", simulate_args.trials, "Independent trials");
  simulate->add_option("--seed", simulate_args.seed, "Master seed (default: AOI_SEED or 1)");
  simulate->add_option("--u", simulate_args.u, "Fixed initial u for deterministic replay");
  simulate->add_option("--levels", simulate_args.levels, "Declared power levels (comma list)");
  simulate->add_option("--output", simulate_args.output, "Report file");
  simulate->add_option("--format", simulate_args.format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));
  simulate->add_option("--config", simulate_args.config, "Experiment config file");
  simulate->add_option("--jobs", simulate_args.jobs, "Worker threads (0 = all)");

  std::optional<std::uint64_t> figs_seed;
  std::string figs_output, figs_format = "csv";
  int figs_trials = 20, figs_horizon = 10000, figs_jobs = 0;
  CLI::App* figs = app.add_subcommand(
      "reproduce-figs", "Average-cost grid: p in 0.1..0.9, c in {5,10,15}, T=10000, 20 trials");
  figs->add_option("--seed", figs_seed, "Master seed (default: AOI_SEED or 1)");
  figs->add_option("--output", figs_output, "Report file");
  figs->add_option("--format", figs_format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
  figs->add_option("--trials", figs_trials, "Trials per cell");
  figs->add_option("--T", figs_horizon, "Horizon");
  figs->add_option("--jobs", figs_jobs, "Worker threads (0 = all)");

  int worst_max_t = 10;
  double worst_c = 100.0;
  CLI::App* worst = app.add_subcommand("worst-case", "Exhaustive worst-case ratio search");
  worst->add_option("--max-t", worst_max_t, "Maximum pattern length (<= 14)");
  worst->add_option("--c", worst_c, "Download cost");

  int verify_max_t = 10;
  std::string verify_c_list, verify_suite = "all";
  int verify_random = 1000, verify_trials = 100000;
  CLI::App* verify = app.add_subcommand("verify", "Run lemma/theorem certification suites");
  verify->add_option("--max-t", verify_max_t, "Exhaustive pattern length cap");
  verify->add_option("--c-list", verify_c_list, "Comma list of c values (suite defaults otherwise)");
  verify->add_option("--suite", verify_suite, "feasibility|lemma2|theorem1|lemma4|oracle|all");
  verify->add_option("--random-patterns", verify_random, "Random horizon-50 instances");
  verify->add_option("--empirical-trials", verify_trials, "Draws for the lemma4 empirical check");

  std::string trace_pattern;
  double trace_c = 2.0;
  std::string trace_format = "jsonl";
  CLI::App* trace = app.add_subcommand("trace", "Dump the primal-dual iteration trace");
  trace->add_option("--pattern", trace_pattern, "Pattern bits, e.g. 1011")->required();
  trace->add_option("--c", trace_c, "Download cost");
  trace->add_option("--format", trace_format, "jsonl")->check(CLI::IsMember({"jsonl"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (simulate->parsed()) return run_simulate(simulate_args);

    if (figs->parsed()) {
      aoi::ExperimentConfig config;
      config.p_list = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
      config.c_list = {5.0, 10.0, 15.0};
      config.horizon = figs_horizon;
      config.trials = figs_trials;
      config.seed = seed_or_env(figs_seed);
      config.jobs = figs_jobs;
      const aoi::ExperimentReport report = aoi::run_grid(config);
      write_or_print(report, figs_output, figs_format);
      return kExitOk;
    }

    if (worst->parsed()) {
      const aoi::WorstCaseResult result = aoi::worst_case_search(worst_max_t, worst_c);
      std::cout << "worst_pattern=" << result.pattern.to_string()
                << " ratio=" << aoi::format_double(result.ratio)
                << " expected_cost=" << aoi::format_double(result.expected_cost)
                << " opt=" << aoi::format_double(result.opt)
                << " bound=" << aoi::format_double(result.bound)
                << " patterns=" << result.patterns_checked
                << " bound_ok=" << (result.bound_ok ? "yes" : "no") << '\n';
      return result.bound_ok ? kExitOk : kExitCheckFailed;
    }

    if (verify->parsed()) {
      aoi::verify::SuiteParams params;
      params.max_t = verify_max_t;
      params.random_patterns = verify_random;
      params.empirical_trials = verify_trials;
      if (!verify_c_list.empty()) params.c_list = parse_double_list(verify_c_list, "--c-list");
      const std::vector<std::string> names =
          verify_suite == "all" ? aoi::verify::suite_names() : std::vector<std::string>{verify_suite};
      bool all_ok = true;
      nlohmann::ordered_json failures = nlohmann::ordered_json::array();
      for (const std::string& name : names) {
        const aoi::verify::SuiteResult result = aoi::verify::run_suite(name, params);
        std::cout << (result.ok ? "PASS" : "FAIL") << ' ' << result.name << " checks="
                  << result.checked << " failures=" << result.failure_count << " ("
                  << aoi::format_double(result.seconds) << "s)\n";
        for (const std::string& failure : result.failures) {
          failures.push_back({{"suite", result.name}, {"detail", failure}});
        }
        all_ok = all_ok && result.ok;
      }
      if (!all_ok) std::cout << failures.dump() << '\n';
      return all_ok ? kExitOk : kExitCheckFailed;
    }

    if (trace->parsed()) {
      const aoi::ConnectivityPattern pattern = aoi::ConnectivityPattern::from_string(trace_pattern);
      const aoi::PrimalDualState state = aoi::run_primal_dual(pattern, trace_c);
      aoi::dump_trace_jsonl(state, std::cout);
      return kExitOk;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitCheckFailed;
  }
  return kExitUsage;
}
