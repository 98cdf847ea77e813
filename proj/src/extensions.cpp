#include "aoi/extensions.hpp"

#include <cmath>
#include <stdexcept>

#include "online_core.hpp"
#include "primal_dual_impl.hpp"

namespace aoi {

namespace {

void validate_levels(const std::vector<double>& levels) {
  if (levels.empty()) throw std::invalid_argument("power control: empty level set");
  for (std::size_t k = 0; k < levels.size(); ++k) {
    if (!(levels[k] > 0)) throw std::invalid_argument("power control: levels must be positive");
    if (k > 0 && !(levels[k - 1] < levels[k])) {
      throw std::invalid_argument("power control: levels must be strictly increasing");
    }
  }
}

GeneralOnlineResult to_general_result(detail::OnlineCoreResult&& core) {
  GeneralOnlineResult result;
  result.arrivals_per_slot = std::move(core.arrivals_per_slot);
  result.pending_per_slot = std::move(core.pending_per_slot);
  result.ages = std::move(core.ages);
  result.online.schedule = std::move(core.schedule);
  result.online.cost = core.cost;
  result.online.initial_u = core.initial_u;
  result.online.flush_slots = std::move(core.flush_slots);
  result.online.d = std::move(core.d);
  result.online.pre_sum = std::move(core.pre_sum);
  result.online.sum = std::move(core.sum);
  return result;
}

}  // namespace

PrimalDualState run_primal_dual_general(const ConnectivityPattern& pattern, double c,
                                        const AgeCost& age_cost, const PrimalDualOptions& options) {
  const int T = pattern.horizon();
  std::vector<std::int64_t> arrivals(static_cast<std::size_t>(T), 0);
  std::int64_t previous = 0;
  std::int64_t packets = 0;
  for (int t = 1; t <= T; ++t) {
    const std::int64_t value = age_cost(t);
    if (value < previous) {
      throw std::invalid_argument("age cost decreases at age " + std::to_string(t));
    }
    arrivals[static_cast<std::size_t>(t - 1)] = value - previous;
    packets += value - previous;
    if (packets > 10000000) {
      throw std::invalid_argument("age cost grows too quickly: more than 1e7 packets by slot " +
                                  std::to_string(t));
    }
    previous = value;
  }
  return detail::run_primal_dual_with_arrivals(pattern, c, arrivals, options);
}

GeneralOnlineResult run_randomized_online_general_with_u(PatternStream& stream, double c,
                                                         const AgeCost& age_cost, double initial_u,
                                                         const OnlineOptions& options) {
  return to_general_result(detail::run_online_core(stream, c, age_cost, nullptr, initial_u, options));
}

OnlineResult run_randomized_online_power_with_u(PatternStream& stream,
                                                const std::vector<double>& levels, double initial_u,
                                                const OnlineOptions& options) {
  validate_levels(levels);
  detail::OnlineCoreResult core =
      detail::run_online_core(stream, levels.front(), AgeCost::linear(), &levels, initial_u, options);
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

OnlineResult run_randomized_online_power(PatternStream& stream, const std::vector<double>& levels,
                                         std::uint64_t seed, const OnlineOptions& options) {
  return run_randomized_online_power_with_u(stream, levels, derive_u(seed, 0), options);
}

ExpectedCostResult exact_expected_cost_power(const ConnectivityPattern& pattern,
                                             const CostModel& model, int horizon_cap) {
  const std::vector<double>& levels = model.download.levels();
  validate_levels(levels);
  if (!model.download.is_constant()) {
    for (int t = 1; t <= pattern.horizon(); ++t) {
      if (!pattern.on(t)) continue;
      const double cost = model.download.at(t);
      const bool known = std::any_of(levels.begin(), levels.end(), [&](double level) {
        return std::abs(level - cost) <= kCostTolerance;
      });
      if (!known) {
        throw std::invalid_argument("per-slot cost " + std::to_string(cost) + " at slot " +
                                    std::to_string(t) + " is outside the declared level set");
      }
    }
  }
  return exact_expected_cost(pattern, levels.front(), model, horizon_cap);
}

ExpectedCostResult exact_expected_cost_general(const ConnectivityPattern& pattern, double c,
                                               const AgeCost& age_cost, int horizon_cap) {
  const int T = pattern.horizon();
  if (T > horizon_cap) {
    throw std::invalid_argument("exact_expected_cost_general: horizon " + std::to_string(T) +
                                " exceeds the cap of " + std::to_string(horizon_cap));
  }

  ExpectedCostResult result;
  result.flush_probability.assign(static_cast<std::size_t>(T), 0.0);

  double frontier = 0.0;
  int guard = 0;
  const int guard_limit = 16 * T * (T + 1) + 64;
  while (frontier < 1.0) {
    if (++guard > guard_limit) {
      throw std::runtime_error("exact_expected_cost_general: interval scan failed to advance");
    }
    VectorPatternStream stream(pattern);
    const detail::OnlineCoreResult run =
        detail::run_online_core(stream, c, age_cost, nullptr, frontier, OnlineOptions{});

    // Maximal u interval whose runs share this decision path: every slot
    // constrains u0 + (flushes before the slot) against [pre_sum, sum).
    double hi = 1.0;
    int flushes = 0;
    for (int t = 1; t <= T; ++t) {
      if (!pattern.on(t)) continue;
      const double pre = run.pre_sum[static_cast<std::size_t>(t - 1)] - flushes;
      const double cur = run.sum[static_cast<std::size_t>(t - 1)] - flushes;
      if (run.schedule.download(t)) {
        hi = std::min(hi, cur);
        ++flushes;
      } else if (frontier < pre) {
        hi = std::min(hi, pre);
      }
    }
    const double next = std::max(hi, std::nextafter(frontier, 2.0));
    const double width = std::min(next, 1.0) - frontier;
    result.expected_cost += width * run.cost;
    for (const int t : run.flush_slots) {
      result.flush_probability[static_cast<std::size_t>(t - 1)] += width;
    }
    ++result.intervals;
    frontier = next;
  }
  return result;
}

ScaledCost scale_costs_to_integer(const std::function<double(std::int64_t)>& f, double c,
                                  std::int64_t max_age, std::int64_t max_multiplier) {
  if (!f) throw std::invalid_argument("scale_costs_to_integer: empty function");
  const auto integral = [](double value) {
    return std::abs(value - std::round(value)) <= 1e-9 * std::max(1.0, std::abs(value));
  };
  for (std::int64_t m = 1; m <= max_multiplier; ++m) {
    bool ok = true;
    for (std::int64_t a = 0; a <= max_age && ok; ++a) {
      ok = integral(static_cast<double>(m) * f(a));
    }
    if (!ok) continue;
    const double scale = static_cast<double>(m);
    ScaledCost scaled;
    scaled.age = AgeCost::general([f, scale](std::int64_t a) {
      return static_cast<std::int64_t>(std::llround(scale * f(a)));
    });
    scaled.c = scale * c;
    scaled.multiplier = m;
    return scaled;
  }
  throw std::invalid_argument("scale_costs_to_integer: no multiplier up to " +
                              std::to_string(max_multiplier) + " makes f integral");
}

}  // namespace aoi
