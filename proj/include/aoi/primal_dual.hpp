#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <utility>
#include <vector>

#include "aoi/core.hpp"
#include "aoi/detail/fractional_engine.hpp"

// The fractional primal-dual run, the end-of-horizon dual fix-up, and
// certifiers for the feasibility, ordering and accounting claims it obeys.
namespace aoi {

struct TraceRecord {
  int slot = 0;           // t
  int packet = 0;         // i (1-based, arrival order)
  int arrival = 0;        // arrival slot of packet i (== i in the base run)
  double d_before = 0.0;  // d(t) entering the iteration
  double d_after = 0.0;   // d(t) leaving it
  double window = 0.0;    // sum_{tau=arrival..t} d(tau) entering the iteration
  bool updated = false;   // window < 1 held (ON slots)
  bool z_written = false;
  double z_value = 0.0;
  bool y_set = false;
};

struct PrimalDualOptions {
  bool reduced_iterations = false;
  bool record_trace = true;
  int trace_horizon_cap = 2000;  // traces are O(T^2); refuse beyond this
};

struct PrimalDualState {
  double c = 0.0;
  double theta = 0.0;
  int horizon = 0;
  std::vector<double> d;            // d[t-1] = fractional download level
  std::vector<int> packet_arrival;  // arrival slot per packet (1-based packets)
  // Sparse variables keyed (packet, slot). z holds explicit ON-slot writes;
  // OFF-slot values are implied by the carry rule unless z_off_implicit is
  // cleared (hand-built states store everything explicitly).
  std::map<std::pair<int, int>, double> z;
  std::set<std::pair<int, int>> y;  // entries equal to one
  std::vector<double> holding_by_slot;  // sum_i z_i(t), carry included
  double primal_objective = 0.0;
  bool z_off_implicit = true;
  bool traced = false;
  bool finalized = false;
  std::vector<TraceRecord> trace;

  int packet_count() const { return static_cast<int>(packet_arrival.size()); }
  int arrival_of(int packet) const { return packet_arrival[static_cast<std::size_t>(packet - 1)]; }
  double dual_objective() const { return static_cast<double>(y.size()); }

  // Resolves z_i(t) including the OFF-slot carry chain.
  double z_at(int packet, int slot, const ConnectivityPattern& pattern) const;
};

// Alg. 1 main loop: slots 1..T in order, ON-slot packet loop in arrival
// order with the window test evaluated against mid-slot values. The
// end-of-horizon dual fix-up is not applied here. Requires c >= 1.
PrimalDualState run_primal_dual(const ConnectivityPattern& pattern, double c,
                                const PrimalDualOptions& options = {});

// End-of-horizon fix-up: for OFF slots t (ascending) and packets i
// (ascending), sets y_i(t) = 1 unless a containing ON-slot constraint would
// be pushed above c by the unit increment.
PrimalDualState finalize_y(PrimalDualState state, const ConnectivityPattern& pattern, double c);

struct FeasibilityViolation {
  std::string constraint;
  double slack = 0.0;
};

struct FeasibilityReport {
  bool primal_ok = true;
  bool dual_ok = true;
  std::vector<FeasibilityViolation> violations;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
};

// Covering constraint z_i(t) + sum_{tau=arr(i)..t} s(tau) d(tau) >= 1 for
// every packet i and slot t >= arr(i), plus non-negativity.
FeasibilityReport check_primal_feasibility(const PrimalDualState& state,
                                           const ConnectivityPattern& pattern);

// Dual constraint s(t) sum_{arr(i)<=t} sum_{tau>=t} y_i(tau) <= c per slot,
// plus the box constraints.
FeasibilityReport check_dual_feasibility(const PrimalDualState& state,
                                         const ConnectivityPattern& pattern, double c);

// sum over y entries (i, tau) with arr(i) <= t <= tau; the left side of the
// dual constraint at slot t (before the s(t) factor).
double dual_constraint_sum(const PrimalDualState& state, int t);

struct Lemma2Violation {
  int start_slot = 0;  // the t whose ordered set Y(t) is being scanned
  int q = 0;           // index among elements of Y(t) updated to one
  int packet = 0;
  int slot = 0;
  double bound = 0.0;
  double window_sum = 0.0;
};

// For every start slot t, walks Y(t) = {y_i(tau): arr(i) <= t, tau >= t,
// s(tau) = 1} in processing order; each element updated to one as the q-th
// updated member must satisfy sum_{tau=t..xi} d(tau), taken at the end of
// its iteration, >= ((1+1/c)^q - 1)/theta (the minimal window dominates all
// i <= t, t' >= xi since d is non-negative). Requires a traced state.
std::optional<Lemma2Violation> check_lemma2_bound(const PrimalDualState& state,
                                                  const ConnectivityPattern& pattern);

struct Theorem1Report {
  bool per_iteration_ok = true;  // dP_i(t) <= (1+1/theta) dD_i(t) whenever y_i(t)=1
  bool weak_duality_ok = true;   // D <= OPT
  bool bound_ok = true;          // P <= (1+1/theta) OPT + T(T+1)/(2c) OPT
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double primal_on = 0.0;
  double primal_off = 0.0;
  double bound = 0.0;
};

// Requires a finalized, traced state and the offline optimum.
Theorem1Report check_theorem1_accounting(const PrimalDualState& state,
                                         const ConnectivityPattern& pattern, double c,
                                         double opt_value);

// One JSON object per iteration: {t, i, d_before, d_after, z_set, y_set}.
void dump_trace_jsonl(const PrimalDualState& state, std::ostream& out);

}  // namespace aoi
