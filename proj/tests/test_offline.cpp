#include <random>

#include "aoi/offline.hpp"
#include "doctest.h"
#include "test_helpers.hpp"

using namespace aoi;

TEST_SUITE_BEGIN("offline");

TEST_CASE("brute force matches the frozen examples") {
  {
    const auto solution = brute_force_opt(ConnectivityPattern::from_string("111"),
                                          CostModel::constant_linear(1.5));
    CHECK(solution.value == doctest::Approx(3.5).epsilon(1e-12));
    CHECK(solution.schedule.to_string() == "010");
  }
  {
    const auto solution =
        brute_force_opt(ConnectivityPattern::from_string("101"), CostModel::constant_linear(1));
    CHECK(solution.value == doctest::Approx(3).epsilon(1e-12));
    CHECK(solution.schedule.to_string() == "101");
  }
  for (const int T : {1, 4, 9}) {
    const auto solution =
        brute_force_opt(ConnectivityPattern::all_off(T), CostModel::constant_linear(2));
    CHECK(solution.value == doctest::Approx(T * (T + 1) / 2.0).epsilon(1e-12));
    CHECK(solution.schedule.download_count() == 0);
  }
}

TEST_CASE("brute force ties prefer fewer downloads then the lexicographically earliest schedule") {
  // all of {}, {1}, {2} cost 3 at c=2; no downloads wins
  const auto solution =
      brute_force_opt(ConnectivityPattern::from_string("11"), CostModel::constant_linear(2));
  CHECK(solution.value == doctest::Approx(3).epsilon(1e-12));
  CHECK(solution.schedule.download_count() == 0);
  // c=1: {1,0,...} vs later downloads; at c=1 on "11": {1},{2},{1,2} all cost 2? no:
  // {}: 3, {1}: 1+1=2, {2}: 1+1=2, {1,2}: 2. one download wins; "01" is lex-earlier than "10".
  const auto tie = brute_force_opt(ConnectivityPattern::from_string("11"), CostModel::constant_linear(1));
  CHECK(tie.value == doctest::Approx(2).epsilon(1e-12));
  CHECK(tie.schedule.to_string() == "01");
}

TEST_CASE("brute force refuses large ON counts, naming K") {
  const auto pattern = ConnectivityPattern::all_on(25);
  CHECK_THROWS_WITH_AS(brute_force_opt(pattern, CostModel::constant_linear(2)),
                       doctest::Contains("K = 25"), std::invalid_argument);
}

TEST_CASE("dynamic program matches the frozen examples") {
  CHECK(dp_opt(ConnectivityPattern::from_string("11"), CostModel::constant_linear(2)).value ==
        doctest::Approx(3).epsilon(1e-12));
  {
    const auto solution =
        dp_opt(ConnectivityPattern::from_string("01"), CostModel::constant_linear(1));
    CHECK(solution.value == doctest::Approx(2).epsilon(1e-12));
    CHECK(solution.schedule.to_string() == "01");
  }
  {
    // per-slot costs (3,1,3) from levels {1,3}
    const CostModel model{DownloadCost::per_slot({1.0, 3.0}, {3.0, 1.0, 3.0}), AgeCost::linear()};
    const auto pattern = ConnectivityPattern::from_string("111");
    const auto brute = brute_force_opt(pattern, model);
    const auto dp = dp_opt(pattern, model);
    CHECK(brute.value == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(brute.schedule.to_string() == "010");
    CHECK(dp.value == brute.value);
  }
}

TEST_CASE("both methods agree with direct schedule enumeration") {
  // The independent oracle evaluates every valid schedule through
  // evolve_age/total_cost; both offline methods must reproduce it exactly.
  for (int T = 1; T <= 8; ++T) {
    for (std::uint64_t index = 0; index < (std::uint64_t{1} << T); ++index) {
      const auto pattern = ConnectivityPattern::from_index(T, index);
      for (const double c : {0.5, 1.0, 1.5, 5.0}) {
        const CostModel model = CostModel::constant_linear(c);
        const double reference = test::enumerate_opt(pattern, model);
        const auto brute = brute_force_opt(pattern, model);
        const auto dp = dp_opt(pattern, model);
        CAPTURE(pattern.to_string());
        CAPTURE(c);
        CHECK(brute.value == reference);
        CHECK(dp.value == reference);
        CHECK(total_cost(pattern, brute.schedule, model) == brute.value);
        CHECK(total_cost(pattern, dp.schedule, model) == dp.value);
      }
    }
  }
}

TEST_CASE("methods agree on random horizons 11 and 12") {
  std::mt19937_64 rng(23);
  for (int round = 0; round < 1000; ++round) {
    const int T = 11 + static_cast<int>(rng() % 2);
    const auto pattern = test::random_pattern(rng, T);
    for (const double c : {0.5, 1.0, 1.5, 5.0}) {
      const CostModel model = CostModel::constant_linear(c);
      CHECK(dp_opt(pattern, model).value == brute_force_opt(pattern, model).value);
    }
  }
}

TEST_CASE("general age cost goes through both methods") {
  const auto quadratic = AgeCost::general([](std::int64_t a) { return a * a; });
  for (int T = 1; T <= 6; ++T) {
    for (std::uint64_t index = 0; index < (std::uint64_t{1} << T); ++index) {
      const auto pattern = ConnectivityPattern::from_index(T, index);
      const CostModel model{DownloadCost::constant(3.0), quadratic};
      const double reference = test::enumerate_opt(pattern, model);
      CHECK(brute_force_opt(pattern, model).value == reference);
      CHECK(dp_opt(pattern, model).value == reference);
    }
  }
}

TEST_CASE("general age cost combines with per-slot download costs") {
  const auto quadratic = AgeCost::general([](std::int64_t a) { return a * a; });
  std::mt19937_64 rng(53);
  for (int round = 0; round < 200; ++round) {
    const int T = 1 + static_cast<int>(rng() % 10);
    const auto pattern = test::random_pattern(rng, T);
    std::vector<double> by_slot(static_cast<std::size_t>(T), 0.0);
    for (int t = 1; t <= T; ++t) {
      if (pattern.on(t)) by_slot[static_cast<std::size_t>(t - 1)] = (rng() & 1u) ? 2.0 : 7.0;
    }
    const CostModel model{DownloadCost::per_slot({2.0, 7.0}, by_slot), quadratic};
    const double reference = test::enumerate_opt(pattern, model);
    CHECK(brute_force_opt(pattern, model).value == reference);
    CHECK(dp_opt(pattern, model).value == reference);
  }
}

TEST_CASE("OPT is monotone in c and in connectivity") {
  std::mt19937_64 rng(31);
  for (int round = 0; round < 100; ++round) {
    const int T = 2 + static_cast<int>(rng() % 12);
    const auto pattern = test::random_pattern(rng, T);
    double previous = 0.0;
    for (const double c : {0.5, 1.0, 1.5, 5.0, 20.0}) {
      const double value = dp_opt(pattern, CostModel::constant_linear(c)).value;
      CHECK(value >= previous - kCostTolerance);
      previous = value;
      // more connectivity never hurts
      const double all_on = dp_opt(ConnectivityPattern::all_on(T), CostModel::constant_linear(c)).value;
      CHECK(all_on <= value + kCostTolerance);
    }
  }
}

TEST_CASE("dynamic program scales to long sparse horizons") {
  std::mt19937_64 rng(47);
  ConnectivityPattern pattern;
  pattern.bits.resize(100000, 0);
  for (auto& bit : pattern.bits) bit = (rng() % 50 == 0) ? 1 : 0;
  const auto solution = dp_opt(pattern, CostModel::constant_linear(7.5));
  CHECK(solution.value > 0);
  CHECK(total_cost(pattern, solution.schedule, CostModel::constant_linear(7.5)) ==
        doctest::Approx(solution.value).epsilon(1e-12));
}

TEST_SUITE_END();
