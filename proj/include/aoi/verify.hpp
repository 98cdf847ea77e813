#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "aoi/core.hpp"

// Executable certificates: each suite sweeps an instance family and checks
// one lemma- or theorem-level claim, reporting every violation found.
namespace aoi::verify {

struct SuiteResult {
  std::string name;
  bool ok = true;
  std::uint64_t checked = 0;
  std::vector<std::string> failures;  // capped; see failures_truncated
  std::uint64_t failure_count = 0;
  double seconds = 0.0;
};

struct SuiteParams {
  int max_t = 10;
  std::vector<double> c_list;   // empty = suite default
  int random_patterns = 1000;   // extra random instances at horizon 50
  int random_horizon = 50;
  int empirical_trials = 100000;
  std::uint64_t seed = 20260810;
};

// dp_opt == brute_force_opt exactly over all patterns with T <= max_t
// (default c list {0.5, 1, 1.5, 2, 5}).
SuiteResult run_oracle_suite(const SuiteParams& params = {});

// Primal and dual feasibility of the finalized run over all patterns
// T <= max_t plus random horizon-50 patterns (default c {1.5, 5, 10}).
SuiteResult run_feasibility_suite(const SuiteParams& params = {});

// Ordered-set growth bound on the same instance family.
SuiteResult run_lemma2_suite(const SuiteParams& params = {});

// Weak duality, the per-iteration accounting, the primal bound, and
// P = (1+1/theta) D on all-ON patterns.
SuiteResult run_theorem1_suite(const SuiteParams& params = {});

// Interval-oracle flush probabilities equal min(d,1) within tolerance for
// all patterns T <= max_t (default 8), plus empirical frequencies within
// four standard deviations.
SuiteResult run_lemma4_suite(const SuiteParams& params = {});

SuiteResult run_suite(const std::string& name, const SuiteParams& params);
std::vector<std::string> suite_names();

}  // namespace aoi::verify
