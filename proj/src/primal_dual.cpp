#include "aoi/primal_dual.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "json.hpp"
#include "primal_dual_impl.hpp"

namespace aoi {

namespace detail {

PrimalDualState run_primal_dual_with_arrivals(const ConnectivityPattern& pattern, double c,
                                              const std::vector<std::int64_t>& arrivals_per_slot,
                                              const PrimalDualOptions& options) {
  const int T = pattern.horizon();
  if (static_cast<int>(arrivals_per_slot.size()) != T) {
    throw std::invalid_argument("arrivals_per_slot must have one entry per slot");
  }
  if (options.record_trace && T > options.trace_horizon_cap) {
    throw std::invalid_argument("trace recording is O(T^2); horizon " + std::to_string(T) +
                                " exceeds the trace cap of " + std::to_string(options.trace_horizon_cap) +
                                " (disable record_trace)");
  }

  PrimalDualState state;
  state.c = c;
  state.theta = theta_constant(c);
  state.horizon = T;
  state.traced = options.record_trace;
  state.holding_by_slot.assign(static_cast<std::size_t>(T), 0.0);

  detail::FractionalEngine engine(c, options.reduced_iterations);
  std::vector<double> z_current;  // per packet, value in the current slot (traced runs only)
  double off_holding = 0.0;       // running sum of carried z values across OFF slots

  for (int t = 1; t <= T; ++t) {
    const std::int64_t born = arrivals_per_slot[static_cast<std::size_t>(t - 1)];
    if (born < 0) throw std::invalid_argument("negative packet arrival count at slot " + std::to_string(t));
    for (std::int64_t k = 0; k < born; ++k) state.packet_arrival.push_back(t);
    if (state.traced) z_current.resize(state.packet_arrival.size(), 0.0);

    if (pattern.on(t)) {
      if (state.traced) std::fill(z_current.begin(), z_current.end(), 0.0);
      double slot_holding = 0.0;
      engine.on_slot(std::span<const int>(state.packet_arrival), [&](int packet, int arrival, double window,
                                                                     double d_before, double d_after,
                                                                     bool updated) {
        TraceRecord record;
        record.slot = t;
        record.packet = packet;
        record.arrival = arrival;
        record.window = window;
        record.d_before = d_before;
        record.d_after = d_after;
        record.updated = updated;
        if (updated) {
          const double z_value = 1.0 - window;
          state.z[{packet, t}] = z_value;
          state.y.insert({packet, t});
          slot_holding += z_value;
          record.z_written = true;
          record.z_value = z_value;
          record.y_set = true;
          if (state.traced) z_current[static_cast<std::size_t>(packet - 1)] = z_value;
        }
        if (state.traced) state.trace.push_back(record);
      });
      state.holding_by_slot[static_cast<std::size_t>(t - 1)] = slot_holding;
      off_holding = slot_holding;
    } else {
      engine.off_slot();
      // Existing packets carry z from the previous slot; the packets arriving
      // this slot hold a full unit each.
      if (state.traced) {
        for (std::int64_t k = 0; k < born; ++k) {
          z_current[z_current.size() - 1 - static_cast<std::size_t>(k)] = 1.0;
        }
      }
      off_holding += static_cast<double>(born);
      state.holding_by_slot[static_cast<std::size_t>(t - 1)] = off_holding;
      if (state.traced) {
        for (int packet = 1; packet <= state.packet_count(); ++packet) {
          TraceRecord record;
          record.slot = t;
          record.packet = packet;
          record.arrival = state.arrival_of(packet);
          record.d_before = 0.0;
          record.d_after = 0.0;
          record.z_written = true;
          record.z_value = z_current[static_cast<std::size_t>(packet - 1)];
          state.trace.push_back(record);
        }
      }
    }
  }

  state.d = engine.d_values();
  for (int t = 1; t <= T; ++t) {
    state.primal_objective += c * state.d[static_cast<std::size_t>(t - 1)] +
                              state.holding_by_slot[static_cast<std::size_t>(t - 1)];
  }
  return state;
}

}  // namespace detail

PrimalDualState run_primal_dual(const ConnectivityPattern& pattern, double c,
                                const PrimalDualOptions& options) {
  std::vector<std::int64_t> one_per_slot(static_cast<std::size_t>(pattern.horizon()), 1);
  return detail::run_primal_dual_with_arrivals(pattern, c, one_per_slot, options);
}

double PrimalDualState::z_at(int packet, int slot, const ConnectivityPattern& pattern) const {
  const int arrival = arrival_of(packet);
  if (slot < arrival) return 0.0;
  if (!z_off_implicit) {
    const auto it = z.find({packet, slot});
    return it == z.end() ? 0.0 : it->second;
  }
  int tau = slot;
  while (tau > arrival && !pattern.on(tau)) --tau;
  if (pattern.on(tau)) {
    const auto it = z.find({packet, tau});
    return it == z.end() ? 0.0 : it->second;
  }
  return 1.0;  // arrived at an OFF slot and never reached an ON slot since
}

PrimalDualState finalize_y(PrimalDualState state, const ConnectivityPattern& pattern, double c) {
  const int T = pattern.horizon();
  if (state.horizon != T) throw std::invalid_argument("finalize_y: state/pattern horizon mismatch");

  // Number of y entries whose dual constraint window [arr(i), tau] contains
  // each slot, via a difference array.
  std::vector<double> constraint_sum(static_cast<std::size_t>(T) + 2, 0.0);
  for (const auto& [packet, tau] : state.y) {
    constraint_sum[static_cast<std::size_t>(state.arrival_of(packet))] += 1.0;
    constraint_sum[static_cast<std::size_t>(tau) + 1] -= 1.0;
  }
  for (int t = 1; t <= T; ++t) constraint_sum[static_cast<std::size_t>(t)] += constraint_sum[static_cast<std::size_t>(t - 1)];

  const std::vector<int> on = pattern.on_slots();
  for (int t = 1; t <= T; ++t) {
    if (pattern.on(t)) continue;
    for (int packet = 1; packet <= state.packet_count(); ++packet) {
      const int arrival = state.arrival_of(packet);
      if (arrival > t) break;  // arrivals are non-decreasing in packet index
      if (state.y.count({packet, t})) continue;
      const auto begin = std::lower_bound(on.begin(), on.end(), arrival);
      const auto end = std::upper_bound(on.begin(), on.end(), t);
      bool fits = true;
      for (auto it = begin; it != end; ++it) {
        if (constraint_sum[static_cast<std::size_t>(*it)] + 1.0 > c + kCostTolerance) {
          fits = false;
          break;
        }
      }
      if (fits) {
        state.y.insert({packet, t});
        for (auto it = begin; it != end; ++it) constraint_sum[static_cast<std::size_t>(*it)] += 1.0;
        // OFF slots in [arrival, t] never constrain; only ON sums are read.
      }
    }
  }
  state.finalized = true;
  return state;
}

FeasibilityReport check_primal_feasibility(const PrimalDualState& state,
                                           const ConnectivityPattern& pattern) {
  const int T = pattern.horizon();
  FeasibilityReport report;

  // Masked prefix sums: only ON-slot download levels count in the covering.
  std::vector<double> prefix(static_cast<std::size_t>(T) + 1, 0.0);
  for (int t = 1; t <= T; ++t) {
    const double dt = state.d[static_cast<std::size_t>(t - 1)];
    if (dt < -kCostTolerance) {
      report.primal_ok = false;
      report.violations.push_back({"d(" + std::to_string(t) + ") >= 0", -dt});
    }
    prefix[static_cast<std::size_t>(t)] =
        prefix[static_cast<std::size_t>(t - 1)] + (pattern.on(t) ? dt : 0.0);
  }

  double holding_total = 0.0;
  for (int packet = 1; packet <= state.packet_count(); ++packet) {
    const int arrival = state.arrival_of(packet);
    for (int t = arrival; t <= T; ++t) {
      const double z = state.z_at(packet, t, pattern);
      holding_total += z;
      if (z < -kCostTolerance) {
        report.primal_ok = false;
        report.violations.push_back(
            {"z(" + std::to_string(packet) + "," + std::to_string(t) + ") >= 0", -z});
      }
      const double covered = z + (prefix[static_cast<std::size_t>(t)] -
                                  prefix[static_cast<std::size_t>(arrival - 1)]);
      if (covered < 1.0 - kCostTolerance) {
        report.primal_ok = false;
        report.violations.push_back(
            {"primal covering (i=" + std::to_string(packet) + ",t=" + std::to_string(t) + ")",
             1.0 - covered});
      }
    }
  }

  double download_total = 0.0;
  for (int t = 1; t <= T; ++t) download_total += state.c * state.d[static_cast<std::size_t>(t - 1)];
  report.primal_objective = download_total + holding_total;
  return report;
}

double dual_constraint_sum(const PrimalDualState& state, int t) {
  double sum = 0.0;
  for (const auto& [packet, tau] : state.y) {
    if (state.arrival_of(packet) <= t && tau >= t) sum += 1.0;
  }
  return sum;
}

FeasibilityReport check_dual_feasibility(const PrimalDualState& state,
                                         const ConnectivityPattern& pattern, double c) {
  FeasibilityReport report;
  for (const auto& [packet, tau] : state.y) {
    if (packet < 1 || packet > state.packet_count() || tau < state.arrival_of(packet) ||
        tau > pattern.horizon()) {
      report.dual_ok = false;
      report.violations.push_back(
          {"y(" + std::to_string(packet) + "," + std::to_string(tau) + ") out of range", 0.0});
    }
  }
  for (int t = 1; t <= pattern.horizon(); ++t) {
    if (!pattern.on(t)) continue;
    const double sum = dual_constraint_sum(state, t);
    if (sum > c + kCostTolerance) {
      report.dual_ok = false;
      report.violations.push_back({"dual (t=" + std::to_string(t) + ")", sum - c});
    }
  }
  report.dual_objective = state.dual_objective();
  return report;
}

std::optional<Lemma2Violation> check_lemma2_bound(const PrimalDualState& state,
                                                  const ConnectivityPattern& pattern) {
  if (!state.traced) throw std::invalid_argument("check_lemma2_bound needs a traced state");
  const int T = pattern.horizon();
  std::vector<double> prefix(static_cast<std::size_t>(T) + 1, 0.0);
  for (int t = 1; t <= T; ++t) {
    prefix[static_cast<std::size_t>(t)] =
        prefix[static_cast<std::size_t>(t - 1)] + state.d[static_cast<std::size_t>(t - 1)];
  }
  const double base = 1.0 + 1.0 / state.c;

  for (int start = 1; start <= T; ++start) {
    int q = 0;
    for (const TraceRecord& record : state.trace) {
      if (record.slot < start || !pattern.on(record.slot)) continue;
      if (record.arrival > start) continue;  // not a member of Y(start)
      if (!record.updated) continue;
      ++q;
      const double bound = (std::pow(base, q) - 1.0) / state.theta;
      const double window = (prefix[static_cast<std::size_t>(record.slot - 1)] -
                             prefix[static_cast<std::size_t>(start - 1)]) +
                            record.d_after;
      if (window < bound - kCostTolerance) {
        return Lemma2Violation{start, q, record.packet, record.slot, bound, window};
      }
    }
  }
  return std::nullopt;
}

Theorem1Report check_theorem1_accounting(const PrimalDualState& state,
                                         const ConnectivityPattern& pattern, double c,
                                         double opt_value) {
  if (!state.finalized) throw std::invalid_argument("check_theorem1_accounting needs a finalized state");
  if (!state.traced) throw std::invalid_argument("check_theorem1_accounting needs a traced state");
  const int T = pattern.horizon();
  const double ratio = 1.0 + 1.0 / state.theta;

  Theorem1Report report;
  for (const TraceRecord& record : state.trace) {
    if (!pattern.on(record.slot)) continue;
    const double delta_p =
        c * (record.d_after - record.d_before) + (record.z_written ? record.z_value : 0.0);
    if (state.y.count({record.packet, record.slot})) {
      if (delta_p > ratio + kCostTolerance) report.per_iteration_ok = false;
    } else if (delta_p > kCostTolerance) {
      report.per_iteration_ok = false;  // untouched iterations must be free
    }
  }
  for (int t = 1; t <= T; ++t) {
    if (pattern.on(t)) continue;
    for (int packet = 1; packet <= state.packet_count(); ++packet) {
      if (state.arrival_of(packet) > t) break;
      if (!state.y.count({packet, t})) continue;
      const double delta_p = state.z_at(packet, t, pattern);
      if (delta_p > ratio + kCostTolerance) report.per_iteration_ok = false;
    }
  }

  for (int t = 1; t <= T; ++t) {
    const double slot_primal = c * state.d[static_cast<std::size_t>(t - 1)] +
                               state.holding_by_slot[static_cast<std::size_t>(t - 1)];
    if (pattern.on(t)) {
      report.primal_on += slot_primal;
    } else {
      report.primal_off += slot_primal;
    }
  }
  report.primal_objective = report.primal_on + report.primal_off;
  report.dual_objective = state.dual_objective();
  report.weak_duality_ok = report.dual_objective <= opt_value + kCostTolerance;
  report.bound = ratio * opt_value +
                 (static_cast<double>(T) * (static_cast<double>(T) + 1.0) / (2.0 * c)) * opt_value;
  report.bound_ok = report.primal_objective <= report.bound + kCostTolerance;
  return report;
}

void dump_trace_jsonl(const PrimalDualState& state, std::ostream& out) {
  if (!state.traced) throw std::invalid_argument("state carries no trace");
  for (const TraceRecord& record : state.trace) {
    nlohmann::ordered_json line;
    line["t"] = record.slot;
    line["i"] = record.packet;
    line["d_before"] = record.d_before;
    line["d_after"] = record.d_after;
    if (record.z_written) {
      line["z_set"] = record.z_value;
    } else {
      line["z_set"] = nullptr;
    }
    line["y_set"] = record.y_set;
    out << line.dump() << '\n';
  }
}

}  // namespace aoi
