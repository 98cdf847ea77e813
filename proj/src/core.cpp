#include "aoi/core.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace aoi {

namespace {

void require_equal_horizons(int a, int b) {
  if (a != b) {
    throw std::invalid_argument("horizon mismatch: pattern has " + std::to_string(a) +
                                " slots, schedule has " + std::to_string(b));
  }
}

std::vector<std::uint8_t> bits_from_string(std::string_view text, const char* what) {
  std::vector<std::uint8_t> bits;
  bits.reserve(text.size());
  for (std::size_t k = 0; k < text.size(); ++k) {
    const char ch = text[k];
    if (ch == '0' || ch == '1') {
      bits.push_back(static_cast<std::uint8_t>(ch - '0'));
    } else if (!std::isspace(static_cast<unsigned char>(ch))) {
      throw std::invalid_argument(std::string(what) + ": invalid character '" + ch +
                                  "' at position " + std::to_string(k + 1));
    }
  }
  return bits;
}

}  // namespace

int ConnectivityPattern::on_count() const {
  return static_cast<int>(std::count(bits.begin(), bits.end(), std::uint8_t{1}));
}

std::vector<int> ConnectivityPattern::on_slots() const {
  std::vector<int> slots;
  for (int t = 1; t <= horizon(); ++t) {
    if (on(t)) slots.push_back(t);
  }
  return slots;
}

ConnectivityPattern ConnectivityPattern::from_string(std::string_view text) {
  return ConnectivityPattern{bits_from_string(text, "pattern")};
}

ConnectivityPattern ConnectivityPattern::from_index(int horizon, std::uint64_t index) {
  ConnectivityPattern p;
  p.bits.resize(static_cast<std::size_t>(horizon));
  for (int t = 1; t <= horizon; ++t) {
    p.bits[static_cast<std::size_t>(t - 1)] = static_cast<std::uint8_t>((index >> (t - 1)) & 1u);
  }
  return p;
}

ConnectivityPattern ConnectivityPattern::all_on(int horizon) {
  return ConnectivityPattern{std::vector<std::uint8_t>(static_cast<std::size_t>(horizon), 1)};
}

ConnectivityPattern ConnectivityPattern::all_off(int horizon) {
  return ConnectivityPattern{std::vector<std::uint8_t>(static_cast<std::size_t>(horizon), 0)};
}

std::string ConnectivityPattern::to_string() const {
  std::string out(bits.size(), '0');
  for (std::size_t k = 0; k < bits.size(); ++k) out[k] = bits[k] ? '1' : '0';
  return out;
}

int Schedule::download_count() const {
  return static_cast<int>(std::count(decisions.begin(), decisions.end(), std::uint8_t{1}));
}

std::vector<int> Schedule::download_slots() const {
  std::vector<int> slots;
  for (int t = 1; t <= horizon(); ++t) {
    if (download(t)) slots.push_back(t);
  }
  return slots;
}

Schedule Schedule::none(int horizon) {
  return Schedule{std::vector<std::uint8_t>(static_cast<std::size_t>(horizon), 0)};
}

Schedule Schedule::from_string(std::string_view text) {
  return Schedule{bits_from_string(text, "schedule")};
}

std::string Schedule::to_string() const {
  std::string out(decisions.size(), '0');
  for (std::size_t k = 0; k < decisions.size(); ++k) out[k] = decisions[k] ? '1' : '0';
  return out;
}

AgeCost AgeCost::general(std::function<std::int64_t(std::int64_t)> f) {
  if (!f) throw std::invalid_argument("age cost: empty function");
  if (f(0) != 0) throw std::invalid_argument("age cost: f(0) must be 0, got " + std::to_string(f(0)));
  AgeCost cost;
  cost.f_ = std::move(f);
  return cost;
}

std::int64_t AgeCost::operator()(std::int64_t age) const {
  return f_ ? f_(age) : age;
}

std::vector<double> AgeCost::prefix_costs(int up_to) const {
  std::vector<double> prefix(static_cast<std::size_t>(up_to) + 1, 0.0);
  std::int64_t previous = 0;
  std::int64_t running = 0;
  for (int n = 1; n <= up_to; ++n) {
    const std::int64_t value = (*this)(n);
    if (value < previous) {
      throw std::invalid_argument("age cost: f decreases at age " + std::to_string(n) + " (" +
                                  std::to_string(previous) + " -> " + std::to_string(value) + ")");
    }
    previous = value;
    running += value;
    prefix[static_cast<std::size_t>(n)] = static_cast<double>(running);
  }
  return prefix;
}

DownloadCost DownloadCost::constant(double c) {
  if (!(c > 0)) throw std::invalid_argument("download cost must be positive, got " + std::to_string(c));
  DownloadCost cost;
  cost.levels_ = {c};
  return cost;
}

DownloadCost DownloadCost::per_slot(std::vector<double> levels, std::vector<double> cost_by_slot) {
  if (levels.empty()) throw std::invalid_argument("download cost: empty level set");
  for (std::size_t k = 0; k < levels.size(); ++k) {
    if (!(levels[k] > 0)) throw std::invalid_argument("download cost: levels must be positive");
    if (k > 0 && !(levels[k - 1] < levels[k])) {
      throw std::invalid_argument("download cost: levels must be strictly increasing");
    }
  }
  DownloadCost cost;
  cost.levels_ = std::move(levels);
  cost.cost_by_slot_ = std::move(cost_by_slot);
  return cost;
}

double DownloadCost::at(int t) const {
  if (is_constant()) return levels_.front();
  return cost_by_slot_[static_cast<std::size_t>(t - 1)];
}

std::vector<int> validate_schedule(const ConnectivityPattern& pattern, const Schedule& schedule) {
  require_equal_horizons(pattern.horizon(), schedule.horizon());
  std::vector<int> violations;
  for (int t = 1; t <= pattern.horizon(); ++t) {
    if (schedule.download(t) && !pattern.on(t)) violations.push_back(t);
  }
  return violations;
}

AgeTrajectory evolve_age(const ConnectivityPattern& pattern, const Schedule& schedule) {
  const auto violations = validate_schedule(pattern, schedule);
  if (!violations.empty()) {
    throw std::invalid_argument("invalid schedule: download at slot " + std::to_string(violations.front()) +
                                " but the pattern is OFF there");
  }
  AgeTrajectory trajectory;
  trajectory.ages.resize(static_cast<std::size_t>(pattern.horizon()) + 1, 0);
  for (int t = 1; t <= pattern.horizon(); ++t) {
    const bool reset = pattern.on(t) && schedule.download(t);
    trajectory.ages[static_cast<std::size_t>(t)] = reset ? 0 : trajectory.ages[static_cast<std::size_t>(t - 1)] + 1;
  }
  return trajectory;
}

double total_cost(const ConnectivityPattern& pattern, const Schedule& schedule, const CostModel& model) {
  const AgeTrajectory ages = evolve_age(pattern, schedule);
  double cost = 0.0;
  for (int t = 1; t <= pattern.horizon(); ++t) {
    if (schedule.download(t)) cost += model.download.at(t);
    cost += static_cast<double>(model.age(ages.at(t)));
  }
  return cost;
}

PatternFileEntry parse_pattern_line(std::string_view line, int line_no) {
  PatternFileEntry entry;
  entry.line = line_no;

  struct Token {
    std::string_view text;
    int column;
  };
  std::vector<Token> tokens;
  std::size_t k = 0;
  while (k < line.size()) {
    while (k < line.size() && std::isspace(static_cast<unsigned char>(line[k]))) ++k;
    if (k >= line.size()) break;
    const std::size_t start = k;
    while (k < line.size() && !std::isspace(static_cast<unsigned char>(line[k]))) ++k;
    tokens.push_back({line.substr(start, k - start), static_cast<int>(start) + 1});
  }
  if (tokens.empty()) {
    throw std::invalid_argument("line " + std::to_string(line_no) + ": empty pattern line");
  }

  const auto is_binary = [](std::string_view token) {
    return std::all_of(token.begin(), token.end(), [](char ch) { return ch == '0' || ch == '1'; });
  };

  std::size_t bit_tokens = tokens.size();
  if (tokens.size() > 1 && !is_binary(tokens.back().text)) {
    bit_tokens = tokens.size() - 1;
    // Trailing cost field: comma-separated doubles aligned with the ON slots.
    std::string_view field = tokens.back().text;
    std::size_t pos = 0;
    while (pos <= field.size()) {
      const std::size_t comma = std::min(field.find(',', pos), field.size());
      const std::string piece(field.substr(pos, comma - pos));
      try {
        std::size_t used = 0;
        const double value = std::stod(piece, &used);
        if (used != piece.size()) throw std::invalid_argument(piece);
        entry.on_costs.push_back(value);
      } catch (const std::exception&) {
        throw std::invalid_argument("line " + std::to_string(line_no) + ", column " +
                                    std::to_string(tokens.back().column + static_cast<int>(pos)) +
                                    ": bad cost value '" + piece + "'");
      }
      pos = comma + 1;
      if (comma == field.size()) break;
    }
  }
  if (bit_tokens == 0) {
    throw std::invalid_argument("line " + std::to_string(line_no) + ": no pattern bits before the cost field");
  }

  for (std::size_t idx = 0; idx < bit_tokens; ++idx) {
    const Token& token = tokens[idx];
    for (std::size_t j = 0; j < token.text.size(); ++j) {
      const char ch = token.text[j];
      if (ch != '0' && ch != '1') {
        throw std::invalid_argument("line " + std::to_string(line_no) + ", column " +
                                    std::to_string(token.column + static_cast<int>(j)) +
                                    ": invalid pattern character '" + ch + "'");
      }
      entry.pattern.bits.push_back(static_cast<std::uint8_t>(ch - '0'));
    }
  }

  if (!entry.on_costs.empty() &&
      static_cast<int>(entry.on_costs.size()) != entry.pattern.on_count()) {
    throw std::invalid_argument("line " + std::to_string(line_no) + ": " +
                                std::to_string(entry.on_costs.size()) + " costs given for " +
                                std::to_string(entry.pattern.on_count()) + " ON slots");
  }
  return entry;
}

std::vector<PatternFileEntry> load_pattern_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open pattern file: " + path);
  std::vector<PatternFileEntry> entries;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const bool blank = std::all_of(line.begin(), line.end(),
                                   [](char ch) { return std::isspace(static_cast<unsigned char>(ch)); });
    if (blank) continue;
    entries.push_back(parse_pattern_line(line, line_no));
  }
  return entries;
}

std::vector<double> expand_on_costs(const ConnectivityPattern& pattern, const std::vector<double>& on_costs) {
  if (static_cast<int>(on_costs.size()) != pattern.on_count()) {
    throw std::invalid_argument("expected " + std::to_string(pattern.on_count()) + " per-ON-slot costs, got " +
                                std::to_string(on_costs.size()));
  }
  std::vector<double> by_slot(static_cast<std::size_t>(pattern.horizon()), 0.0);
  std::size_t next = 0;
  for (int t = 1; t <= pattern.horizon(); ++t) {
    if (pattern.on(t)) by_slot[static_cast<std::size_t>(t - 1)] = on_costs[next++];
  }
  return by_slot;
}

}  // namespace aoi
