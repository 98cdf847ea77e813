#pragma once

#include <cstdint>
#include <vector>

#include "aoi/core.hpp"
#include "aoi/online.hpp"

namespace aoi::detail {

// Full state of one streamed run, including the virtual-queue ledger view
// used by the non-linear extension.
struct OnlineCoreResult {
  Schedule schedule;
  double cost = 0.0;
  double initial_u = 0.0;
  std::vector<int> flush_slots;
  std::vector<double> d;
  std::vector<double> pre_sum;
  std::vector<double> sum;
  std::vector<std::int64_t> arrivals_per_slot;  // b(t) = f(a(t-1)+1) - f(a(t-1))
  std::vector<std::int64_t> pending_per_slot;   // pending packets after slot t
  std::vector<std::int64_t> ages;               // realized a(0..T)
};

// Unified Alg. 2 engine. `update_c` drives the fractional updates (c, or the
// lowest level c_1 under power control). The ledger of packet arrivals is
// driven by the run's own realized age trajectory. When `levels` is given,
// the flush charge is the revealed per-slot cost, validated against the
// level set; otherwise it is `update_c`.
OnlineCoreResult run_online_core(PatternStream& stream, double update_c, const AgeCost& age_cost,
                                 const std::vector<double>* levels, double initial_u,
                                 const OnlineOptions& options);

// The flush rule alone: replays u against fixed (pre_sum, sum) sequences.
// Matches run_online_core decision-for-decision when the fractional
// trajectory does not depend on u (linear age cost).
std::vector<std::uint8_t> walk_flush_rule(const ConnectivityPattern& pattern,
                                          const std::vector<double>& pre_sum,
                                          const std::vector<double>& sum, double initial_u);

}  // namespace aoi::detail
