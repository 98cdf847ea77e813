#include "aoi/offline.hpp"

#include <limits>
#include <stdexcept>

namespace aoi {

namespace {

Schedule schedule_from_on_mask(const std::vector<int>& on_slots, std::uint64_t mask, int horizon) {
  Schedule schedule = Schedule::none(horizon);
  for (std::size_t j = 0; j < on_slots.size(); ++j) {
    if ((mask >> j) & 1u) schedule.decisions[static_cast<std::size_t>(on_slots[j] - 1)] = 1;
  }
  return schedule;
}

}  // namespace

OfflineSolution brute_force_opt(const ConnectivityPattern& pattern, const CostModel& model,
                                int max_on_slots) {
  const std::vector<int> on = pattern.on_slots();
  const int K = static_cast<int>(on.size());
  if (K > max_on_slots || K > 30) {
    throw std::invalid_argument("brute_force_opt: K = " + std::to_string(K) +
                                " ON slots exceeds the cap of " +
                                std::to_string(std::min(max_on_slots, 30)));
  }
  const int T = pattern.horizon();
  const std::vector<double> prefix = model.age.prefix_costs(T);

  double best_value = std::numeric_limits<double>::infinity();
  int best_downloads = 0;
  std::uint64_t best_mask = 0;

  // Lexicographically earlier schedule == 0 at the lowest differing ON slot.
  const auto lex_earlier = [&](std::uint64_t a, std::uint64_t b) {
    const std::uint64_t diff = a ^ b;
    if (diff == 0) return false;
    const std::uint64_t low = diff & (~diff + 1);
    return (a & low) == 0;
  };

  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << K); ++mask) {
    double value = 0.0;
    int last = 0;
    int downloads = 0;
    for (int j = 0; j < K; ++j) {
      if ((mask >> j) & 1u) {
        value += model.download.at(on[static_cast<std::size_t>(j)]);
        value += prefix[static_cast<std::size_t>(on[static_cast<std::size_t>(j)] - 1 - last)];
        last = on[static_cast<std::size_t>(j)];
        ++downloads;
      }
    }
    value += prefix[static_cast<std::size_t>(T - last)];

    if (value < best_value ||
        (value == best_value &&
         (downloads < best_downloads ||
          (downloads == best_downloads && lex_earlier(mask, best_mask))))) {
      best_value = value;
      best_downloads = downloads;
      best_mask = mask;
    }
  }

  return OfflineSolution{best_value, schedule_from_on_mask(on, best_mask, T), OfflineMethod::BruteForce};
}

OfflineSolution dp_opt(const ConnectivityPattern& pattern, const CostModel& model) {
  const std::vector<int> on = pattern.on_slots();
  const int K = static_cast<int>(on.size());
  const int T = pattern.horizon();
  const std::vector<double> prefix = model.age.prefix_costs(T);

  // best[k] = minimal cost of slots 1..on[k-1] given a download at on[k-1];
  // best[0] is the "no download yet" sentinel at slot 0.
  std::vector<double> best(static_cast<std::size_t>(K) + 1, 0.0);
  std::vector<int> parent(static_cast<std::size_t>(K) + 1, -1);
  const double* pf = prefix.data();

  for (int k = 1; k <= K; ++k) {
    const int slot = on[static_cast<std::size_t>(k - 1)];
    const double download = model.download.at(slot);
    double value = best[0] + pf[slot - 1];
    int arg = 0;
    for (int j = 1; j < k; ++j) {
      const double candidate = best[static_cast<std::size_t>(j)] + pf[slot - 1 - on[static_cast<std::size_t>(j - 1)]];
      if (candidate < value) {
        value = candidate;
        arg = j;
      }
    }
    best[static_cast<std::size_t>(k)] = value + download;
    parent[static_cast<std::size_t>(k)] = arg;
  }

  double opt = best[0] + pf[T];
  int arg = 0;
  for (int k = 1; k <= K; ++k) {
    const double candidate = best[static_cast<std::size_t>(k)] + pf[T - on[static_cast<std::size_t>(k - 1)]];
    if (candidate < opt) {
      opt = candidate;
      arg = k;
    }
  }

  Schedule schedule = Schedule::none(T);
  for (int k = arg; k > 0; k = parent[static_cast<std::size_t>(k)]) {
    schedule.decisions[static_cast<std::size_t>(on[static_cast<std::size_t>(k - 1)] - 1)] = 1;
  }
  return OfflineSolution{opt, schedule, OfflineMethod::DynamicProgram};
}

}  // namespace aoi
