#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "aoi/core.hpp"
#include "aoi/online.hpp"
#include "aoi/primal_dual.hpp"

// Generalizations of the base algorithms: non-linear age cost via batch
// packet arrivals, and dynamic power control via per-slot download costs.
namespace aoi {

// Ledger view of one online run under a general age cost.
struct GeneralOnlineResult {
  OnlineResult online;
  std::vector<std::int64_t> arrivals_per_slot;  // b(t) = f(a(t-1)+1) - f(a(t-1))
  std::vector<std::int64_t> pending_per_slot;   // pending packets after slot t
  std::vector<std::int64_t> ages;               // realized a(0..T)
};

// Alg. 1 with the per-slot loop ranging over every packet present; the
// fractional run never flushes, so b(t) follows the unbroken age ramp
// (f(t) - f(t-1) arrivals at slot t). With f(a) = a this is the base run.
PrimalDualState run_primal_dual_general(const ConnectivityPattern& pattern, double c,
                                        const AgeCost& age_cost,
                                        const PrimalDualOptions& options = {});

// Alg. 2 with the ledger driven by the run's own realized trajectory: a
// flush resets the age and with it the arrival schedule, so the fractional
// trajectory depends on u.
GeneralOnlineResult run_randomized_online_general_with_u(PatternStream& stream, double c,
                                                         const AgeCost& age_cost, double initial_u,
                                                         const OnlineOptions& options = {});

// Dynamic power control: fractional updates use the lowest level c_1 (and
// theta_1), the flush charge is the revealed per-slot cost. Rounding is
// unchanged.
OnlineResult run_randomized_online_power_with_u(PatternStream& stream,
                                                const std::vector<double>& levels, double initial_u,
                                                const OnlineOptions& options = {});
OnlineResult run_randomized_online_power(PatternStream& stream, const std::vector<double>& levels,
                                         std::uint64_t seed, const OnlineOptions& options = {});

// Exact expectation for the power-control run; the model must carry per-slot
// costs whose values all lie in its level set.
ExpectedCostResult exact_expected_cost_power(const ConnectivityPattern& pattern,
                                             const CostModel& model, int horizon_cap = 64);

// Exact expectation under a general age cost. The trajectory depends on u,
// so the u axis is scanned adaptively: simulate at the current frontier,
// derive the maximal interval producing the same decision path, advance.
ExpectedCostResult exact_expected_cost_general(const ConnectivityPattern& pattern, double c,
                                               const AgeCost& age_cost, int horizon_cap = 64);

// Scales a rational-valued (f, c) pair by a common multiplier so that the
// age-cost values become integers. Total costs scale by the multiplier.
struct ScaledCost {
  AgeCost age;
  double c = 0.0;
  std::int64_t multiplier = 1;
};
ScaledCost scale_costs_to_integer(const std::function<double(std::int64_t)>& f, double c,
                                  std::int64_t max_age, std::int64_t max_multiplier = 1000000);

}  // namespace aoi
