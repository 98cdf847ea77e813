#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "aoi/core.hpp"

// Pattern generation, the Monte Carlo harness of the numerical study, and
// the exhaustive worst-case ratio search.
namespace aoi {

// i.i.d. Bernoulli(p) connectivity; deterministic given the seed.
ConnectivityPattern generate_bernoulli_pattern(double p, int horizon, std::uint64_t seed);

// Per-trial seed used by run_grid for cell (p,c) index `cell`, trial `trial`.
std::uint64_t derive_trial_seed(std::uint64_t master, std::uint64_t cell, std::uint64_t trial);

struct ExperimentConfig {
  std::vector<double> p_list;
  std::vector<double> c_list;
  int horizon = 10000;
  int trials = 20;
  std::uint64_t seed = 1;
  bool run_randomized = true;
  bool run_greedy = true;
  bool run_opt = true;
  int jobs = 0;  // 0 = hardware concurrency
  std::string output;
  std::string format = "csv";
};

// Key-value config file: generator, p_list, c_list, T, trials, seed,
// algorithms, output, format. '#' starts a comment.
ExperimentConfig load_experiment_config(const std::string& path);

struct CellStats {
  std::string algorithm;
  double p = 0.0;
  double c = 0.0;
  int horizon = 0;
  int trials = 0;
  double mean_cost = 0.0;  // mean time-average cost over trials
  double stderr_mean = 0.0;
  double ratio_to_opt = 0.0;
  std::uint64_t seed = 0;

  bool operator==(const CellStats&) const = default;
};

struct ExperimentReport {
  std::vector<CellStats> cells;
  std::uint64_t master_seed = 0;
  int horizon = 0;
  int trials = 0;
  std::string baseline = "per-realization optimum (dp_opt) on each sampled pattern";
  double wall_seconds = 0.0;  // provenance only; never emitted

  bool operator==(const ExperimentReport& other) const {
    return cells == other.cells && master_seed == other.master_seed && horizon == other.horizon &&
           trials == other.trials && baseline == other.baseline;
  }
};

// One cell per (p, c): `trials` independent (pattern, u) draws with the
// randomized, greedy and offline-optimal costs on the same realized pattern.
// Fully reproducible from the master seed; cells and trials run in parallel
// with per-trial generators, aggregation is an ordered reduction.
ExperimentReport run_grid(const ExperimentConfig& config);

// CSV columns: algorithm,p,c,T,trials,mean_cost,stderr,ratio_to_opt,seed.
void emit_report_csv(const ExperimentReport& report, std::ostream& out);
void emit_report_json(const ExperimentReport& report, std::ostream& out);
void emit_report(const ExperimentReport& report, const std::string& format, const std::string& path);
ExperimentReport parse_report_json(std::istream& in);

struct WorstCaseResult {
  ConnectivityPattern pattern;
  double ratio = 0.0;
  double expected_cost = 0.0;
  double opt = 0.0;
  double bound = 0.0;  // (1+1/theta) + T(T+1)/(2c) at the worst pattern's T
  bool bound_ok = true;
  std::uint64_t patterns_checked = 0;
};

// Enumerates every pattern of each length 1..max_t and maximizes
// exact_expected_cost / dp_opt; checks the per-pattern ratio bound.
WorstCaseResult worst_case_search(int max_t, double c);

// Shortest round-trip formatting used by every emitted artifact.
std::string format_double(double value);

}  // namespace aoi
