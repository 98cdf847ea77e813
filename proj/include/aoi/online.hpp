#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "aoi/core.hpp"

// The randomized online scheduler, the greedy baseline, and the exact
// expected-cost oracle over the rounding randomness.
namespace aoi {

struct SlotReveal {
  bool on = false;
  double download_cost = 0.0;  // read only in power mode, only at ON slots
};

// One slot at a time; the consumer never sees future slots.
class PatternStream {
 public:
  virtual ~PatternStream() = default;
  virtual std::optional<SlotReveal> next() = 0;
};

class VectorPatternStream final : public PatternStream {
 public:
  explicit VectorPatternStream(ConnectivityPattern pattern, std::vector<double> cost_by_slot = {},
                               int truncate_at = -1)
      : pattern_(std::move(pattern)), cost_by_slot_(std::move(cost_by_slot)), truncate_at_(truncate_at) {}

  std::optional<SlotReveal> next() override {
    const int limit = truncate_at_ >= 0 ? std::min(truncate_at_, pattern_.horizon()) : pattern_.horizon();
    if (cursor_ >= limit) return std::nullopt;
    ++cursor_;
    SlotReveal reveal;
    reveal.on = pattern_.on(cursor_);
    if (!cost_by_slot_.empty()) reveal.download_cost = cost_by_slot_[static_cast<std::size_t>(cursor_ - 1)];
    return reveal;
  }

 private:
  ConnectivityPattern pattern_;
  std::vector<double> cost_by_slot_;
  int truncate_at_;
  int cursor_ = 0;
};

struct OnlineOptions {
  bool reduced_iterations = true;
};

struct OnlineResult {
  Schedule schedule;
  double cost = 0.0;
  double initial_u = 0.0;
  std::vector<int> flush_slots;
  std::vector<double> d;        // fractional trajectory at the end of each slot
  std::vector<double> pre_sum;  // cumulative min(d,1) before each slot's addition
  std::vector<double> sum;      // cumulative min(d,1) including the slot
};

// Deterministic replay with a fixed initial u in [0,1).
OnlineResult run_randomized_online_with_u(PatternStream& stream, double c, double initial_u,
                                          const OnlineOptions& options = {});

// Draws the initial u from the seed (trial 0 of the u-derivation scheme used
// across the project) and records it in the result for replay.
OnlineResult run_randomized_online(PatternStream& stream, double c, std::uint64_t seed,
                                   const OnlineOptions& options = {});

// Baseline of the numerical study: at an ON slot, download iff the pending
// age a(t-1)+1 has reached c.
OnlineResult run_greedy_online(PatternStream& stream, double c);

struct ExpectedCostResult {
  double expected_cost = 0.0;
  std::vector<double> flush_probability;  // per slot; must equal min(d(t),1)
  int intervals = 0;
};

// Exact expectation over the single uniform draw: the fractional trajectory
// does not depend on u, so the realized schedule is piecewise constant in u.
// Enumerates the breakpoints, simulates one representative per interval and
// weights costs by interval lengths. Linear age cost; the model may carry
// per-slot download costs (then c must be the lowest level).
ExpectedCostResult exact_expected_cost(const ConnectivityPattern& pattern, double c,
                                       const CostModel& model, int horizon_cap = 64);

inline ExpectedCostResult exact_expected_cost(const ConnectivityPattern& pattern, double c,
                                              int horizon_cap = 64) {
  return exact_expected_cost(pattern, c, CostModel::constant_linear(c), horizon_cap);
}

// Per-slot flush frequencies over independent u draws; trial k draws
// derive_u(seed, k), so trial 0 reproduces run_randomized_online(seed).
std::vector<double> empirical_flush_frequency(const ConnectivityPattern& pattern, double c,
                                              int trials, std::uint64_t seed);

// The project-wide u derivation: uniform in [0,1), deterministic across
// platforms and processes.
double derive_u(std::uint64_t seed, std::uint32_t trial);

}  // namespace aoi
