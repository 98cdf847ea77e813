#pragma once

#include "aoi/core.hpp"

// Offline-optimal baselines OPT(s): the denominator of every competitive
// ratio. Both methods minimize the exact total cost for a known pattern.
namespace aoi {

enum class OfflineMethod { BruteForce, DynamicProgram };

struct OfflineSolution {
  double value = 0.0;
  Schedule schedule;
  OfflineMethod method = OfflineMethod::BruteForce;
};

// Exhaustive minimum over all 2^K subsets of the K ON slots. Ties are broken
// toward fewer downloads, then the lexicographically earliest schedule.
// Refuses instances with K above the cap.
OfflineSolution brute_force_opt(const ConnectivityPattern& pattern, const CostModel& model,
                                int max_on_slots = 20);

// O(K^2) dynamic program over "slot of last download" (sentinel: none yet).
// Gap costs are separable under the total-cost decomposition, so segment
// costs come from prefix sums of f. Supports general f and per-slot costs.
OfflineSolution dp_opt(const ConnectivityPattern& pattern, const CostModel& model);

}  // namespace aoi
