#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

// Discrete-time model shared by every module: ON/OFF connectivity patterns,
// download schedules, the age process, and the cost accounting.
// Slots are numbered 1..T in all public interfaces; storage is 0-based.
namespace aoi {

struct ConnectivityPattern {
  std::vector<std::uint8_t> bits;  // bits[t-1] = s(t), each 0 or 1

  int horizon() const { return static_cast<int>(bits.size()); }
  bool on(int t) const { return bits[static_cast<std::size_t>(t - 1)] != 0; }
  int on_count() const;
  std::vector<int> on_slots() const;

  // Parses a run of '0'/'1' characters, e.g. "1011".
  static ConnectivityPattern from_string(std::string_view text);
  // Pattern of length T whose slot t is ON iff bit (t-1) of `index` is set.
  static ConnectivityPattern from_index(int horizon, std::uint64_t index);
  static ConnectivityPattern all_on(int horizon);
  static ConnectivityPattern all_off(int horizon);
  std::string to_string() const;

  bool operator==(const ConnectivityPattern&) const = default;
};

struct Schedule {
  std::vector<std::uint8_t> decisions;  // decisions[t-1] = d(t)

  int horizon() const { return static_cast<int>(decisions.size()); }
  bool download(int t) const { return decisions[static_cast<std::size_t>(t - 1)] != 0; }
  int download_count() const;
  std::vector<int> download_slots() const;

  static Schedule none(int horizon);
  static Schedule from_string(std::string_view text);
  std::string to_string() const;

  bool operator==(const Schedule&) const = default;
};

// a(0..T) with a(0) = 0 and a(t) in {0, a(t-1)+1}.
struct AgeTrajectory {
  std::vector<std::int64_t> ages;

  std::int64_t at(int t) const { return ages[static_cast<std::size_t>(t)]; }
  int horizon() const { return static_cast<int>(ages.size()) - 1; }
};

// Age-cost function f: linear (f(a) = a) or a general non-decreasing
// integer-valued map with f(0) = 0. General f is validated on the range it
// is actually evaluated over (non-decreasing, non-negative).
class AgeCost {
 public:
  static AgeCost linear() { return AgeCost{}; }
  static AgeCost general(std::function<std::int64_t(std::int64_t)> f);

  bool is_linear() const { return !f_; }
  std::int64_t operator()(std::int64_t age) const;

  // F[n] = sum_{u=1..n} f(u) for n = 0..up_to, as exact small integers in
  // doubles. Throws if f decreases anywhere on [0, up_to].
  std::vector<double> prefix_costs(int up_to) const;

 private:
  std::function<std::int64_t(std::int64_t)> f_;  // empty means linear
};

// Download cost: a constant c, or per-slot costs drawn from a declared level
// set c_1 < ... < c_m (dynamic power control). Per-slot entries are only
// meaningful at ON slots.
class DownloadCost {
 public:
  static DownloadCost constant(double c);
  static DownloadCost per_slot(std::vector<double> levels, std::vector<double> cost_by_slot);

  bool is_constant() const { return cost_by_slot_.empty(); }
  double base_cost() const { return levels_.front(); }  // c, or the lowest level c_1
  double max_level() const { return levels_.back(); }
  double at(int t) const;  // realized download cost in slot t
  const std::vector<double>& levels() const { return levels_; }
  const std::vector<double>& costs_by_slot() const { return cost_by_slot_; }

 private:
  std::vector<double> levels_;
  std::vector<double> cost_by_slot_;
};

struct CostModel {
  DownloadCost download;
  AgeCost age;

  static CostModel constant_linear(double c) { return {DownloadCost::constant(c), AgeCost::linear()}; }
};

// Slots with d(t) = 1 but s(t) = 0, in increasing order; empty means valid.
// Throws only on a horizon mismatch.
std::vector<int> validate_schedule(const ConnectivityPattern& pattern, const Schedule& schedule);

// Age recursion a(t) = 0 if s(t)d(t) = 1 else a(t-1)+1, with a(0) = 0.
// Throws if the schedule is invalid for the pattern, naming the first slot.
AgeTrajectory evolve_age(const ConnectivityPattern& pattern, const Schedule& schedule);

// J = sum_t (download_cost(t) d(t) + f(a(t))).
double total_cost(const ConnectivityPattern& pattern, const Schedule& schedule, const CostModel& model);

// Comparison tolerance used by every checker in the project.
inline constexpr double kCostTolerance = 1e-9;

// Pattern files: one pattern per line as a run of '0'/'1' characters
// (whitespace between digits allowed). A final token containing any other
// character supplies per-ON-slot download costs, comma separated.
struct PatternFileEntry {
  ConnectivityPattern pattern;
  std::vector<double> on_costs;  // empty when the line has no cost field
  int line = 0;
};

PatternFileEntry parse_pattern_line(std::string_view line, int line_no);
std::vector<PatternFileEntry> load_pattern_file(const std::string& path);

// Expands per-ON-slot costs into a full-length per-slot vector.
std::vector<double> expand_on_costs(const ConnectivityPattern& pattern, const std::vector<double>& on_costs);

}  // namespace aoi
