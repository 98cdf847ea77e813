#include "aoi/verify.hpp"

#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "aoi/experiments.hpp"
#include "aoi/offline.hpp"
#include "aoi/online.hpp"
#include "aoi/primal_dual.hpp"

namespace aoi::verify {

namespace {

constexpr std::size_t kFailureCap = 20;

class SuiteRun {
 public:
  explicit SuiteRun(std::string name) : start_(std::chrono::steady_clock::now()) {
    result_.name = std::move(name);
  }

  void check(bool ok, const std::function<std::string()>& describe) {
    ++result_.checked;
    if (ok) return;
    result_.ok = false;
    ++result_.failure_count;
    if (result_.failures.size() < kFailureCap) result_.failures.push_back(describe());
  }

  SuiteResult finish() {
    result_.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    return result_;
  }

 private:
  SuiteResult result_;
  std::chrono::steady_clock::time_point start_;
};

// All patterns of every length 1..max_t, then `extra` random patterns of the
// given horizon (seeded, Bernoulli 1/2).
void for_each_instance(int max_t, int extra, int extra_horizon, std::uint64_t seed,
                       const std::function<void(const ConnectivityPattern&)>& fn) {
  for (int horizon = 1; horizon <= max_t; ++horizon) {
    for (std::uint64_t index = 0; index < (std::uint64_t{1} << horizon); ++index) {
      fn(ConnectivityPattern::from_index(horizon, index));
    }
  }
  for (int k = 0; k < extra; ++k) {
    fn(generate_bernoulli_pattern(0.5, extra_horizon, seed + static_cast<std::uint64_t>(k)));
  }
}

std::vector<double> defaulted(const std::vector<double>& c_list, std::vector<double> fallback) {
  return c_list.empty() ? std::move(fallback) : c_list;
}

}  // namespace

SuiteResult run_oracle_suite(const SuiteParams& params) {
  SuiteRun run("oracle");
  const std::vector<double> c_list = defaulted(params.c_list, {0.5, 1.0, 1.5, 2.0, 5.0});
  for (int horizon = 1; horizon <= params.max_t; ++horizon) {
    for (std::uint64_t index = 0; index < (std::uint64_t{1} << horizon); ++index) {
      const ConnectivityPattern pattern = ConnectivityPattern::from_index(horizon, index);
      for (const double c : c_list) {
        const CostModel model = CostModel::constant_linear(c);
        const OfflineSolution brute = brute_force_opt(pattern, model);
        const OfflineSolution dp = dp_opt(pattern, model);
        run.check(brute.value == dp.value, [&] {
          std::ostringstream out;
          out << "oracle mismatch: s=" << pattern.to_string() << " c=" << c
              << " brute=" << brute.value << " dp=" << dp.value;
          return out.str();
        });
        run.check(std::abs(total_cost(pattern, dp.schedule, model) - dp.value) <= kCostTolerance,
                  [&] { return "dp schedule does not attain its value on s=" + pattern.to_string(); });
        run.check(
            std::abs(total_cost(pattern, brute.schedule, model) - brute.value) <= kCostTolerance,
            [&] { return "brute schedule does not attain its value on s=" + pattern.to_string(); });
      }
    }
  }
  return run.finish();
}

SuiteResult run_feasibility_suite(const SuiteParams& params) {
  SuiteRun run("feasibility");
  const std::vector<double> c_list = defaulted(params.c_list, {1.5, 5.0, 10.0});
  for_each_instance(params.max_t, params.random_patterns, params.random_horizon, params.seed,
                    [&](const ConnectivityPattern& pattern) {
                      for (const double c : c_list) {
                        PrimalDualOptions options;
                        options.record_trace = false;
                        const PrimalDualState state = run_primal_dual(pattern, c, options);
                        const FeasibilityReport primal = check_primal_feasibility(state, pattern);
                        run.check(primal.primal_ok, [&] {
                          return "primal infeasible: s=" + pattern.to_string() + " c=" +
                                 format_double(c) + " first=" +
                                 (primal.violations.empty() ? "?" : primal.violations.front().constraint);
                        });
                        const PrimalDualState final_state = finalize_y(state, pattern, c);
                        const FeasibilityReport dual = check_dual_feasibility(final_state, pattern, c);
                        run.check(dual.dual_ok, [&] {
                          return "dual infeasible: s=" + pattern.to_string() + " c=" + format_double(c) +
                                 " first=" +
                                 (dual.violations.empty() ? "?" : dual.violations.front().constraint);
                        });
                      }
                    });
  return run.finish();
}

SuiteResult run_lemma2_suite(const SuiteParams& params) {
  SuiteRun run("lemma2");
  const std::vector<double> c_list = defaulted(params.c_list, {1.5, 5.0, 10.0});
  for_each_instance(params.max_t, params.random_patterns, params.random_horizon, params.seed,
                    [&](const ConnectivityPattern& pattern) {
                      for (const double c : c_list) {
                        const PrimalDualState state = run_primal_dual(pattern, c);
                        const auto violation = check_lemma2_bound(state, pattern);
                        run.check(!violation.has_value(), [&] {
                          std::ostringstream out;
                          out << "lemma2 violated: s=" << pattern.to_string() << " c=" << c
                              << " t=" << violation->start_slot << " q=" << violation->q
                              << " (i=" << violation->packet << ", xi=" << violation->slot
                              << ") sum=" << violation->window_sum << " bound=" << violation->bound;
                          return out.str();
                        });
                      }
                    });
  return run.finish();
}

SuiteResult run_theorem1_suite(const SuiteParams& params) {
  SuiteRun run("theorem1");
  const std::vector<double> c_list = defaulted(params.c_list, {1.5, 5.0, 10.0});
  for_each_instance(
      params.max_t, params.random_patterns, params.random_horizon, params.seed,
      [&](const ConnectivityPattern& pattern) {
        for (const double c : c_list) {
          const CostModel model = CostModel::constant_linear(c);
          const double opt = dp_opt(pattern, model).value;
          // dp_opt is the exact optimum (oracle suite); cross-check it
          // against the enumeration where the cap allows.
          if (pattern.on_count() <= 16) {
            const double brute = brute_force_opt(pattern, model).value;
            run.check(brute == opt,
                      [&] { return "opt mismatch on s=" + pattern.to_string(); });
          }
          const PrimalDualState state =
              finalize_y(run_primal_dual(pattern, c), pattern, c);
          const Theorem1Report report = check_theorem1_accounting(state, pattern, c, opt);
          run.check(report.weak_duality_ok, [&] {
            return "weak duality violated: s=" + pattern.to_string() + " c=" + format_double(c) +
                   " D=" + format_double(report.dual_objective) + " OPT=" + format_double(opt);
          });
          run.check(report.per_iteration_ok, [&] {
            return "per-iteration accounting violated: s=" + pattern.to_string() + " c=" +
                   format_double(c);
          });
          run.check(report.bound_ok, [&] {
            return "primal bound violated: s=" + pattern.to_string() + " c=" + format_double(c) +
                   " P=" + format_double(report.primal_objective) + " bound=" +
                   format_double(report.bound);
          });
          if (pattern.on_count() == pattern.horizon()) {
            const double target = (1.0 + 1.0 / state.theta) * report.dual_objective;
            run.check(std::abs(report.primal_objective - target) <= kCostTolerance, [&] {
              return "all-ON tightness violated: s=" + pattern.to_string() + " c=" +
                     format_double(c) + " P=" + format_double(report.primal_objective) +
                     " (1+1/theta)D=" + format_double(target);
            });
          }
        }
      });
  return run.finish();
}

SuiteResult run_lemma4_suite(const SuiteParams& params) {
  SuiteRun run("lemma4");
  const std::vector<double> c_list = defaulted(params.c_list, {1.5, 5.0, 10.0});
  const int max_t = params.max_t > 8 ? 8 : params.max_t;
  std::uint64_t instance = 0;
  for (int horizon = 1; horizon <= max_t; ++horizon) {
    for (std::uint64_t index = 0; index < (std::uint64_t{1} << horizon); ++index) {
      const ConnectivityPattern pattern = ConnectivityPattern::from_index(horizon, index);
      for (const double c : c_list) {
        ++instance;
        const ExpectedCostResult oracle = exact_expected_cost(pattern, c);
        VectorPatternStream stream(pattern);
        const OnlineResult reference = run_randomized_online_with_u(stream, c, 0.0);
        for (int t = 1; t <= horizon; ++t) {
          const double expected =
              pattern.on(t) ? std::min(reference.d[static_cast<std::size_t>(t - 1)], 1.0) : 0.0;
          const double actual = oracle.flush_probability[static_cast<std::size_t>(t - 1)];
          run.check(std::abs(actual - expected) <= kCostTolerance, [&] {
            std::ostringstream out;
            out << "interval probability off: s=" << pattern.to_string() << " c=" << c << " t=" << t
                << " oracle=" << actual << " min(d,1)=" << expected;
            return out.str();
          });
        }
        if (params.empirical_trials > 0) {
          const auto frequency = empirical_flush_frequency(pattern, c, params.empirical_trials,
                                                           params.seed + instance);
          for (int t = 1; t <= horizon; ++t) {
            const double p = oracle.flush_probability[static_cast<std::size_t>(t - 1)];
            const double observed = frequency[static_cast<std::size_t>(t - 1)];
            const double sigma =
                std::sqrt(p * (1.0 - p) / static_cast<double>(params.empirical_trials));
            const bool ok = sigma == 0.0 ? std::abs(observed - p) <= kCostTolerance
                                         : std::abs(observed - p) <= 4.0 * sigma;
            run.check(ok, [&] {
              std::ostringstream out;
              out << "empirical frequency off: s=" << pattern.to_string() << " c=" << c
                  << " t=" << t << " observed=" << observed << " expected=" << p
                  << " sigma=" << sigma;
              return out.str();
            });
          }
        }
      }
    }
  }
  return run.finish();
}

SuiteResult run_suite(const std::string& name, const SuiteParams& params) {
  if (name == "oracle") return run_oracle_suite(params);
  if (name == "feasibility") return run_feasibility_suite(params);
  if (name == "lemma2") return run_lemma2_suite(params);
  if (name == "theorem1") return run_theorem1_suite(params);
  if (name == "lemma4") return run_lemma4_suite(params);
  throw std::invalid_argument("unknown suite: " + name);
}

std::vector<std::string> suite_names() {
  return {"oracle", "feasibility", "lemma2", "theorem1", "lemma4"};
}

}  // namespace aoi::verify
