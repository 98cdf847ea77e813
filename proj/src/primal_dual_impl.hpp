#pragma once

#include <cstdint>
#include <vector>

#include "aoi/primal_dual.hpp"

namespace aoi::detail {

// Shared main loop: `arrivals_per_slot[t-1]` packets join at the start of
// slot t, each carrying arrival slot t for its covering window. The base
// algorithm is the one-packet-per-slot case.
PrimalDualState run_primal_dual_with_arrivals(const ConnectivityPattern& pattern, double c,
                                              const std::vector<std::int64_t>& arrivals_per_slot,
                                              const PrimalDualOptions& options);

}  // namespace aoi::detail
