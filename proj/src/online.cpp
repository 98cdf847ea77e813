#include "aoi/online.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "aoi/detail/fractional_engine.hpp"
#include "aoi/detail/mix.hpp"
#include "online_core.hpp"

namespace aoi {

namespace detail {

OnlineCoreResult run_online_core(PatternStream& stream, double update_c, const AgeCost& age_cost,
                                 const std::vector<double>* levels, double initial_u,
                                 const OnlineOptions& options) {
  if (!(initial_u >= 0.0 && initial_u < 1.0)) {
    throw std::invalid_argument("initial u must lie in [0,1), got " + std::to_string(initial_u));
  }

  OnlineCoreResult result;
  result.initial_u = initial_u;
  result.ages.push_back(0);

  FractionalEngine engine(update_c, options.reduced_iterations);
  KahanSum cumulative;
  std::vector<int> packet_arrivals;
  std::int64_t age = 0;
  std::int64_t pending = 0;
  double u = initial_u;
  int t = 0;

  while (auto reveal = stream.next()) {
    ++t;
    const std::int64_t born = age_cost(age + 1) - age_cost(age);
    if (born < 0) {
      throw std::invalid_argument("age cost decreases at age " + std::to_string(age + 1) +
                                  " (slot " + std::to_string(t) + ")");
    }
    for (std::int64_t k = 0; k < born; ++k) packet_arrivals.push_back(t);
    pending += born;

    bool flush = false;
    if (reveal->on) {
      double charge = update_c;
      if (levels != nullptr) {
        charge = reveal->download_cost;
        const bool known = std::any_of(levels->begin(), levels->end(), [&](double level) {
          return std::abs(level - charge) <= kCostTolerance;
        });
        if (!known) {
          throw std::invalid_argument("revealed download cost " + std::to_string(charge) +
                                      " at slot " + std::to_string(t) +
                                      " is outside the declared level set");
        }
      }
      engine.on_slot(std::span<const int>(packet_arrivals),
                     [](int, int, double, double, double, bool) {});
      const double pre = cumulative.value();
      cumulative.add(std::min(engine.d(t), 1.0));
      const double sum = cumulative.value();
      if (pre <= u && u < sum) {
        flush = true;
        u += 1.0;
        result.flush_slots.push_back(t);
        result.cost += charge;
      }
      result.pre_sum.push_back(pre);
      result.sum.push_back(sum);
    } else {
      engine.off_slot();
      result.pre_sum.push_back(cumulative.value());
      result.sum.push_back(cumulative.value());
    }

    if (flush) {
      age = 0;
      pending = 0;
    } else {
      age += 1;
      result.cost += static_cast<double>(age_cost(age));
    }
    result.schedule.decisions.push_back(flush ? 1 : 0);
    result.arrivals_per_slot.push_back(born);
    result.pending_per_slot.push_back(pending);
    result.ages.push_back(age);
  }

  result.d = engine.d_values();
  return result;
}

std::vector<std::uint8_t> walk_flush_rule(const ConnectivityPattern& pattern,
                                          const std::vector<double>& pre_sum,
                                          const std::vector<double>& sum, double initial_u) {
  std::vector<std::uint8_t> flush(static_cast<std::size_t>(pattern.horizon()), 0);
  double u = initial_u;
  for (int t = 1; t <= pattern.horizon(); ++t) {
    if (!pattern.on(t)) continue;
    const double pre = pre_sum[static_cast<std::size_t>(t - 1)];
    const double cur = sum[static_cast<std::size_t>(t - 1)];
    if (pre <= u && u < cur) {
      flush[static_cast<std::size_t>(t - 1)] = 1;
      u += 1.0;
    }
  }
  return flush;
}

}  // namespace detail

double derive_u(std::uint64_t seed, std::uint32_t trial) {
  return detail::uniform_from_bits(detail::mix64(seed, trial));
}

namespace {

OnlineResult to_online_result(detail::OnlineCoreResult&& core) {
  OnlineResult result;
  result.schedule = std::move(core.schedule);
  result.cost = core.cost;
  result.initial_u = core.initial_u;
  result.flush_slots = std::move(core.flush_slots);
  result.d = std::move(core.d);
  result.pre_sum = std::move(core.pre_sum);
  result.sum = std::move(core.sum);
  return result;
}

}  // namespace

OnlineResult run_randomized_online_with_u(PatternStream& stream, double c, double initial_u,
                                          const OnlineOptions& options) {
  return to_online_result(detail::run_online_core(stream, c, AgeCost::linear(), nullptr, initial_u, options));
}

OnlineResult run_randomized_online(PatternStream& stream, double c, std::uint64_t seed,
                                   const OnlineOptions& options) {
  return run_randomized_online_with_u(stream, c, derive_u(seed, 0), options);
}

OnlineResult run_greedy_online(PatternStream& stream, double c) {
  if (!(c > 0)) throw std::invalid_argument("greedy: c must be positive");
  OnlineResult result;
  std::int64_t age = 0;
  int t = 0;
  while (auto reveal = stream.next()) {
    ++t;
    const std::int64_t pending_age = age + 1;
    if (reveal->on && static_cast<double>(pending_age) >= c) {
      result.schedule.decisions.push_back(1);
      result.flush_slots.push_back(t);
      result.cost += c;
      age = 0;
    } else {
      result.schedule.decisions.push_back(0);
      age = pending_age;
      result.cost += static_cast<double>(age);
    }
  }
  return result;
}

ExpectedCostResult exact_expected_cost(const ConnectivityPattern& pattern, double c,
                                       const CostModel& model, int horizon_cap) {
  const int T = pattern.horizon();
  if (T > horizon_cap) {
    throw std::invalid_argument("exact_expected_cost: horizon " + std::to_string(T) +
                                " exceeds the cap of " + std::to_string(horizon_cap));
  }
  if (!model.age.is_linear()) {
    throw std::invalid_argument("exact_expected_cost handles linear age cost; use the non-linear "
                                "extension oracle for general f");
  }

  // The fractional trajectory ignores u, so one run pins (pre_sum, sum).
  std::vector<double> cost_by_slot;
  if (!model.download.is_constant()) cost_by_slot = model.download.costs_by_slot();
  VectorPatternStream probe(pattern, cost_by_slot);
  const detail::OnlineCoreResult base =
      detail::run_online_core(probe, c, AgeCost::linear(), nullptr, 0.0, OnlineOptions{});

  // The schedule as a function of the initial u changes only where some
  // u + (flush count) crosses a pre_sum/sum value, i.e. at their fractional
  // parts.
  std::set<double> breakpoints{0.0};
  for (int t = 1; t <= T; ++t) {
    if (!pattern.on(t)) continue;
    for (const double value : {base.pre_sum[static_cast<std::size_t>(t - 1)],
                               base.sum[static_cast<std::size_t>(t - 1)]}) {
      const double fractional = value - std::floor(value);
      if (fractional >= 0.0 && fractional < 1.0) breakpoints.insert(fractional);
    }
  }

  std::vector<double> cuts(breakpoints.begin(), breakpoints.end());
  cuts.push_back(1.0);

  ExpectedCostResult result;
  result.flush_probability.assign(static_cast<std::size_t>(T), 0.0);
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double width = cuts[k + 1] - cuts[k];
    if (width <= 0.0) continue;
    ++result.intervals;
    const double representative = cuts[k] + width / 2.0;
    const auto flush = detail::walk_flush_rule(pattern, base.pre_sum, base.sum, representative);

    double cost = 0.0;
    std::int64_t age = 0;
    for (int t = 1; t <= T; ++t) {
      if (flush[static_cast<std::size_t>(t - 1)]) {
        cost += model.download.at(t);
        age = 0;
        result.flush_probability[static_cast<std::size_t>(t - 1)] += width;
      } else {
        age += 1;
        cost += static_cast<double>(age);
      }
    }
    result.expected_cost += width * cost;
  }
  return result;
}

std::vector<double> empirical_flush_frequency(const ConnectivityPattern& pattern, double c,
                                              int trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("empirical_flush_frequency: trials must be >= 1");
  const int T = pattern.horizon();

  VectorPatternStream probe(pattern);
  const detail::OnlineCoreResult base =
      detail::run_online_core(probe, c, AgeCost::linear(), nullptr, 0.0, OnlineOptions{});

  std::vector<std::int64_t> counts(static_cast<std::size_t>(T), 0);
  for (int trial = 0; trial < trials; ++trial) {
    const double u = derive_u(seed, static_cast<std::uint32_t>(trial));
    const auto flush = detail::walk_flush_rule(pattern, base.pre_sum, base.sum, u);
    for (int t = 1; t <= T; ++t) {
      counts[static_cast<std::size_t>(t - 1)] += flush[static_cast<std::size_t>(t - 1)];
    }
  }

  std::vector<double> frequency(static_cast<std::size_t>(T), 0.0);
  for (int t = 1; t <= T; ++t) {
    frequency[static_cast<std::size_t>(t - 1)] =
        static_cast<double>(counts[static_cast<std::size_t>(t - 1)]) / static_cast<double>(trials);
  }
  return frequency;
}

}  // namespace aoi
