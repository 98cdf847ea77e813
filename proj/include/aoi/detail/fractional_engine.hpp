#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace aoi {

// theta = (1+1/c)^floor(c) - 1. Requires c >= 1: floor(c) = 0 gives theta = 0
// and the update step 1/(theta c) is undefined.
inline double theta_constant(double c) {
  if (!(c >= 1.0)) {
    throw std::invalid_argument("theta is zero for c < 1; the primal-dual update needs c >= 1 (got c = " +
                                std::to_string(c) + ")");
  }
  return std::pow(1.0 + 1.0 / c, std::floor(c)) - 1.0;
}

namespace detail {

// The covering test is "window < 1" in exact arithmetic, and after floor(c)
// updates the window equals exactly 1 by the choice of theta. Rounding can
// land that sum a few ulps below 1, which would admit one spurious extra
// update and push a dual constraint a full unit past c. The guard sits far
// above accumulated rounding noise and far below the 1e-9 checker tolerance.
inline constexpr double kWindowEpsilon = 1e-10;

// Incremental engine for the fractional download levels d(t). Slots are
// appended in order; only the current slot's d value ever changes, so prefix
// sums over completed slots stay valid. Shared by the primal-dual run and
// the online scheduler so both produce bit-identical trajectories.
class FractionalEngine {
 public:
  FractionalEngine(double c, bool reduced_iterations)
      : c_(c),
        theta_(theta_constant(c)),
        inv_theta_c_(1.0 / (theta_ * c)),
        floor_c_(static_cast<int>(std::floor(c))),
        reduced_(reduced_iterations) {
    prefix_.push_back(0.0);
  }

  double c() const { return c_; }
  double theta() const { return theta_; }
  int slots() const { return static_cast<int>(d_.size()); }

  void off_slot() {
    d_.push_back(0.0);
    prefix_.push_back(prefix_.back());
  }

  // Appends ON slot t = slots()+1 and runs the packet loop over `arrivals`
  // (arrival slot of every packet present, in arrival order). For each
  // examined packet, calls
  //   visit(packet_index, arrival_slot, window_before, d_before, d_after, updated)
  // where window_before = sum_{tau=arrival..t} d(tau) entering the iteration.
  template <class Visit>
  void on_slot(std::span<const int> arrivals, Visit&& visit) {
    const int t = slots() + 1;
    double dt = 0.0;

    // Packets with at least floor(c) ON slots since arrival can no longer
    // pass the window < 1 test, so the loop may start at the floor(c)-th
    // ON slot before t.
    std::size_t first = 0;
    if (reduced_ && static_cast<int>(on_slots_.size()) >= floor_c_) {
      const int start_slot = on_slots_[on_slots_.size() - static_cast<std::size_t>(floor_c_)];
      first = static_cast<std::size_t>(
          std::lower_bound(arrivals.begin(), arrivals.end(), start_slot) - arrivals.begin());
    }

    const double before_t = prefix_.back();
    for (std::size_t idx = first; idx < arrivals.size(); ++idx) {
      const int arrival = arrivals[idx];
      const double window = (before_t - prefix_[static_cast<std::size_t>(arrival - 1)]) + dt;
      const double d_before = dt;
      bool updated = false;
      if (window < 1.0 - kWindowEpsilon) {
        dt = dt + window / c_ + inv_theta_c_;
        updated = true;
      }
      visit(static_cast<int>(idx) + 1, arrival, window, d_before, dt, updated);
    }

    d_.push_back(dt);
    prefix_.push_back(before_t + dt);
    on_slots_.push_back(t);
  }

  double d(int t) const { return d_[static_cast<std::size_t>(t - 1)]; }
  const std::vector<double>& d_values() const { return d_; }

  // sum_{tau=from..to} d(tau) over completed slots.
  double window_sum(int from, int to) const {
    return prefix_[static_cast<std::size_t>(to)] - prefix_[static_cast<std::size_t>(from - 1)];
  }

 private:
  double c_;
  double theta_;
  double inv_theta_c_;
  int floor_c_;
  bool reduced_;
  std::vector<double> d_;
  std::vector<double> prefix_;    // prefix_[k] = sum_{tau<=k} d(tau)
  std::vector<int> on_slots_;
};

// Compensated accumulation; keeps the breakpoint geometry of the rounding
// sums stable over long horizons.
struct KahanSum {
  double sum = 0.0;
  double compensation = 0.0;

  void add(double x) {
    const double y = x - compensation;
    const double t = sum + y;
    compensation = (t - sum) - y;
    sum = t;
  }
  double value() const { return sum; }
};

}  // namespace detail
}  // namespace aoi
