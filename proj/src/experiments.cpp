#include "aoi/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "aoi/detail/mix.hpp"
#include "aoi/offline.hpp"
#include "aoi/online.hpp"
#include "aoi/primal_dual.hpp"
#include "json.hpp"

namespace aoi {

std::string format_double(double value) {
  char buffer[64];
  const auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc{}) throw std::runtime_error("format_double failed");
  return std::string(buffer, end);
}

ConnectivityPattern generate_bernoulli_pattern(double p, int horizon, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in [0,1]");
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  std::seed_seq sequence{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                         std::uint32_t{0x9e3779b9}};
  std::mt19937_64 engine(sequence);
  ConnectivityPattern pattern;
  pattern.bits.resize(static_cast<std::size_t>(horizon));
  for (int t = 0; t < horizon; ++t) {
    const double u = static_cast<double>(engine() >> 11) * 0x1.0p-53;
    pattern.bits[static_cast<std::size_t>(t)] = u < p ? 1 : 0;
  }
  return pattern;
}

std::uint64_t derive_trial_seed(std::uint64_t master, std::uint64_t cell, std::uint64_t trial) {
  return detail::mix64(detail::mix64(master, cell), trial);
}

namespace {

struct TrialCosts {
  double randomized = 0.0;
  double greedy = 0.0;
  double opt = 0.0;
};

struct MeanStderr {
  double mean = 0.0;
  double stderr_mean = 0.0;
};

MeanStderr aggregate(const std::vector<double>& samples) {
  MeanStderr out;
  const double n = static_cast<double>(samples.size());
  for (const double x : samples) out.mean += x;
  out.mean /= n;
  if (samples.size() > 1) {
    double ss = 0.0;
    for (const double x : samples) ss += (x - out.mean) * (x - out.mean);
    out.stderr_mean = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  }
  return out;
}

void run_tasks(int jobs, int task_count, const std::function<void(int)>& task) {
  const int hardware = static_cast<int>(std::thread::hardware_concurrency());
  const int threads = std::max(1, std::min(jobs > 0 ? jobs : std::max(1, hardware), task_count));
  if (threads == 1) {
    for (int k = 0; k < task_count; ++k) task(k);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&]() {
      for (int k = next.fetch_add(1); k < task_count; k = next.fetch_add(1)) task(k);
    });
  }
  for (auto& worker : pool) worker.join();
}

}  // namespace

ExperimentReport run_grid(const ExperimentConfig& config) {
  if (config.p_list.empty() || config.c_list.empty()) {
    throw std::invalid_argument("run_grid: p_list and c_list must be non-empty");
  }
  if (config.trials < 1) throw std::invalid_argument("run_grid: trials must be >= 1");
  if (config.horizon < 1) throw std::invalid_argument("run_grid: T must be >= 1");

  const auto start = std::chrono::steady_clock::now();
  struct Cell {
    double p;
    double c;
  };
  std::vector<Cell> cells;
  for (const double p : config.p_list) {
    for (const double c : config.c_list) cells.push_back({p, c});
  }

  std::vector<std::vector<TrialCosts>> costs(cells.size(),
                                             std::vector<TrialCosts>(static_cast<std::size_t>(config.trials)));

  const int task_count = static_cast<int>(cells.size()) * config.trials;
  run_tasks(config.jobs, task_count, [&](int task) {
    const int cell_index = task / config.trials;
    const int trial = task % config.trials;
    const Cell& cell = cells[static_cast<std::size_t>(cell_index)];
    const std::uint64_t trial_seed = derive_trial_seed(
        config.seed, static_cast<std::uint64_t>(cell_index), static_cast<std::uint64_t>(trial));

    const ConnectivityPattern pattern = generate_bernoulli_pattern(cell.p, config.horizon, trial_seed);
    TrialCosts& out = costs[static_cast<std::size_t>(cell_index)][static_cast<std::size_t>(trial)];
    const double scale = 1.0 / static_cast<double>(config.horizon);
    if (config.run_randomized) {
      VectorPatternStream stream(pattern);
      out.randomized = run_randomized_online(stream, cell.c, trial_seed).cost * scale;
    }
    if (config.run_greedy) {
      VectorPatternStream stream(pattern);
      out.greedy = run_greedy_online(stream, cell.c).cost * scale;
    }
    if (config.run_opt || config.run_randomized || config.run_greedy) {
      out.opt = dp_opt(pattern, CostModel::constant_linear(cell.c)).value * scale;
    }
  });

  ExperimentReport report;
  report.master_seed = config.seed;
  report.horizon = config.horizon;
  report.trials = config.trials;

  for (std::size_t cell_index = 0; cell_index < cells.size(); ++cell_index) {
    const Cell& cell = cells[cell_index];
    std::vector<double> randomized, greedy, opt;
    for (const TrialCosts& trial : costs[cell_index]) {
      randomized.push_back(trial.randomized);
      greedy.push_back(trial.greedy);
      opt.push_back(trial.opt);
    }
    const MeanStderr opt_stats = aggregate(opt);
    const auto emit = [&](const char* name, const std::vector<double>& samples) {
      const MeanStderr stats = aggregate(samples);
      CellStats row;
      row.algorithm = name;
      row.p = cell.p;
      row.c = cell.c;
      row.horizon = config.horizon;
      row.trials = config.trials;
      row.mean_cost = stats.mean;
      row.stderr_mean = stats.stderr_mean;
      row.ratio_to_opt = opt_stats.mean > 0.0 ? stats.mean / opt_stats.mean : 1.0;
      row.seed = config.seed;
      report.cells.push_back(row);
    };
    if (config.run_randomized) emit("randomized", randomized);
    if (config.run_greedy) emit("greedy", greedy);
    if (config.run_opt) emit("opt", opt);
  }

  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

void emit_report_csv(const ExperimentReport& report, std::ostream& out) {
  out << "algorithm,p,c,T,trials,mean_cost,stderr,ratio_to_opt,seed\n";
  for (const CellStats& cell : report.cells) {
    out << cell.algorithm << ',' << format_double(cell.p) << ',' << format_double(cell.c) << ','
        << cell.horizon << ',' << cell.trials << ',' << format_double(cell.mean_cost) << ','
        << format_double(cell.stderr_mean) << ',' << format_double(cell.ratio_to_opt) << ','
        << cell.seed << '\n';
  }
}

namespace {

nlohmann::ordered_json report_to_json(const ExperimentReport& report) {
  nlohmann::ordered_json doc;
  doc["meta"] = {{"seed", report.master_seed},
                 {"T", report.horizon},
                 {"trials", report.trials},
                 {"baseline", report.baseline}};
  doc["cells"] = nlohmann::ordered_json::array();
  for (const CellStats& cell : report.cells) {
    doc["cells"].push_back({{"algorithm", cell.algorithm},
                            {"p", cell.p},
                            {"c", cell.c},
                            {"T", cell.horizon},
                            {"trials", cell.trials},
                            {"mean_cost", cell.mean_cost},
                            {"stderr", cell.stderr_mean},
                            {"ratio_to_opt", cell.ratio_to_opt},
                            {"seed", cell.seed}});
  }
  return doc;
}

}  // namespace

void emit_report_json(const ExperimentReport& report, std::ostream& out) {
  out << report_to_json(report).dump(2) << '\n';
}

void emit_report(const ExperimentReport& report, const std::string& format, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open output file: " + path);
  if (format == "csv") {
    emit_report_csv(report, out);
  } else if (format == "json") {
    emit_report_json(report, out);
  } else {
    throw std::invalid_argument("unknown report format: " + format);
  }
  if (!out.good()) throw std::runtime_error("failed while writing " + path);
}

ExperimentReport parse_report_json(std::istream& in) {
  nlohmann::json doc = nlohmann::json::parse(in);
  ExperimentReport report;
  report.master_seed = doc.at("meta").at("seed").get<std::uint64_t>();
  report.horizon = doc.at("meta").at("T").get<int>();
  report.trials = doc.at("meta").at("trials").get<int>();
  report.baseline = doc.at("meta").at("baseline").get<std::string>();
  for (const auto& item : doc.at("cells")) {
    CellStats cell;
    cell.algorithm = item.at("algorithm").get<std::string>();
    cell.p = item.at("p").get<double>();
    cell.c = item.at("c").get<double>();
    cell.horizon = item.at("T").get<int>();
    cell.trials = item.at("trials").get<int>();
    cell.mean_cost = item.at("mean_cost").get<double>();
    cell.stderr_mean = item.at("stderr").get<double>();
    cell.ratio_to_opt = item.at("ratio_to_opt").get<double>();
    cell.seed = item.at("seed").get<std::uint64_t>();
    report.cells.push_back(cell);
  }
  return report;
}

WorstCaseResult worst_case_search(int max_t, double c) {
  if (max_t < 1 || max_t > 14) {
    throw std::invalid_argument("worst_case_search: max_t must lie in [1,14], got " +
                                std::to_string(max_t));
  }
  const double theta = theta_constant(c);

  WorstCaseResult worst;
  worst.ratio = 0.0;
  for (int horizon = 1; horizon <= max_t; ++horizon) {
    const double bound = 1.0 + 1.0 / theta +
                         static_cast<double>(horizon) * (static_cast<double>(horizon) + 1.0) / (2.0 * c);
    for (std::uint64_t index = 0; index < (std::uint64_t{1} << horizon); ++index) {
      const ConnectivityPattern pattern = ConnectivityPattern::from_index(horizon, index);
      const double expected = exact_expected_cost(pattern, c).expected_cost;
      const double opt = dp_opt(pattern, CostModel::constant_linear(c)).value;
      const double ratio = expected / opt;
      ++worst.patterns_checked;
      if (ratio > bound + kCostTolerance) worst.bound_ok = false;
      if (ratio > worst.ratio) {
        worst.ratio = ratio;
        worst.pattern = pattern;
        worst.expected_cost = expected;
        worst.opt = opt;
        worst.bound = bound;
      }
    }
  }
  return worst;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);

  const auto parse_double_list = [](const std::string& text, int line_no) {
    std::vector<double> values;
    std::stringstream stream(text);
    std::string piece;
    while (std::getline(stream, piece, ',')) {
      try {
        std::size_t used = 0;
        values.push_back(std::stod(piece, &used));
        if (used != piece.size()) throw std::invalid_argument(piece);
      } catch (const std::exception&) {
        throw std::invalid_argument("config line " + std::to_string(line_no) + ": bad number '" +
                                    piece + "'");
      }
    }
    return values;
  };

  ExperimentConfig config;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t comment = line.find('#');
    if (comment != std::string::npos) line.erase(comment);
    const auto trim = [](std::string text) {
      const auto begin = text.find_first_not_of(" \t\r");
      if (begin == std::string::npos) return std::string{};
      const auto end = text.find_last_not_of(" \t\r");
      return text.substr(begin, end - begin + 1);
    };
    const std::string trimmed = trim(line);
    if (trimmed.empty()) continue;
    const std::size_t eq = trimmed.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(trimmed.substr(0, eq));
    const std::string value = trim(trimmed.substr(eq + 1));
    try {
      if (key == "p_list") {
        config.p_list = parse_double_list(value, line_no);
      } else if (key == "c_list") {
        config.c_list = parse_double_list(value, line_no);
      } else if (key == "T") {
        config.horizon = std::stoi(value);
      } else if (key == "trials") {
        config.trials = std::stoi(value);
      } else if (key == "seed") {
        config.seed = std::stoull(value);
      } else if (key == "jobs") {
        config.jobs = std::stoi(value);
      } else if (key == "output") {
        config.output = value;
      } else if (key == "format") {
        config.format = value;
      } else if (key == "generator") {
        if (value != "bernoulli") {
          throw std::invalid_argument("config line " + std::to_string(line_no) +
                                      ": only the bernoulli generator is configurable here");
        }
      } else if (key == "algorithms") {
        config.run_randomized = value.find("randomized") != std::string::npos;
        config.run_greedy = value.find("greedy") != std::string::npos;
        config.run_opt = value.find("opt") != std::string::npos;
      } else {
        throw std::invalid_argument("config line " + std::to_string(line_no) + ": unknown key '" +
                                    key + "'");
      }
    } catch (const std::invalid_argument&) {
      throw;
    } catch (const std::exception&) {
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": bad value '" + value +
                                  "'");
    }
  }
  return config;
}

}  // namespace aoi
