#include <cstdio>
#include <fstream>
#include <random>

#include "aoi/core.hpp"
#include "doctest.h"
#include "test_helpers.hpp"

using namespace aoi;

TEST_SUITE_BEGIN("core");

TEST_CASE("age evolution follows the post-decision recursion") {
  SUBCASE("every permitted download resets the age") {
    const auto ages = evolve_age(ConnectivityPattern::from_string("101"), Schedule::from_string("101"));
    CHECK(ages.ages == std::vector<std::int64_t>{0, 0, 1, 0});
  }
  SUBCASE("no download means linear growth") {
    const auto ages = evolve_age(ConnectivityPattern::from_string("0000"), Schedule::from_string("0000"));
    CHECK(ages.ages == std::vector<std::int64_t>{0, 1, 2, 3, 4});
  }
  SUBCASE("single reset") {
    const auto ages = evolve_age(ConnectivityPattern::from_string("11"), Schedule::from_string("01"));
    CHECK(ages.ages == std::vector<std::int64_t>{0, 1, 0});
  }
}

TEST_CASE("age evolution rejects bad inputs") {
  CHECK_THROWS_WITH_AS(evolve_age(ConnectivityPattern::from_string("10"), Schedule::from_string("011")),
                       doctest::Contains("horizon mismatch"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(evolve_age(ConnectivityPattern::from_string("10"), Schedule::from_string("01")),
                       doctest::Contains("slot 2"), std::invalid_argument);
}

TEST_CASE("total cost matches the cost expression") {
  CHECK(total_cost(ConnectivityPattern::from_string("0000"), Schedule::from_string("0000"),
                   CostModel::constant_linear(5)) == doctest::Approx(10).epsilon(1e-12));
  CHECK(total_cost(ConnectivityPattern::from_string("11"), Schedule::from_string("01"),
                   CostModel::constant_linear(2)) == doctest::Approx(3).epsilon(1e-12));
  // greedy schedule on the all-ON horizon of six slots
  CHECK(total_cost(ConnectivityPattern::from_string("111111"), Schedule::from_string("001001"),
                   CostModel::constant_linear(3)) == doctest::Approx(12).epsilon(1e-12));
}

TEST_CASE("schedule validation lists offending slots") {
  CHECK(validate_schedule(ConnectivityPattern::from_string("10"), Schedule::from_string("10")).empty());
  CHECK(validate_schedule(ConnectivityPattern::from_string("10"), Schedule::from_string("01")) ==
        std::vector<int>{2});
  CHECK(validate_schedule(ConnectivityPattern::from_string("111"), Schedule::from_string("111")).empty());
}

TEST_CASE("linear cost decomposes into downloads plus total age") {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 200; ++round) {
    const auto pattern = test::random_pattern(rng, 1 + static_cast<int>(rng() % 30));
    Schedule schedule = Schedule::none(pattern.horizon());
    for (int t = 1; t <= pattern.horizon(); ++t) {
      if (pattern.on(t) && (rng() & 1u)) schedule.decisions[static_cast<std::size_t>(t - 1)] = 1;
    }
    const double c = 0.5 + static_cast<double>(rng() % 100) / 10.0;
    const auto ages = evolve_age(pattern, schedule);
    double age_sum = 0;
    for (int t = 1; t <= pattern.horizon(); ++t) age_sum += static_cast<double>(ages.at(t));
    const double expected = c * schedule.download_count() + age_sum;
    CHECK(total_cost(pattern, schedule, CostModel::constant_linear(c)) ==
          doctest::Approx(expected).epsilon(1e-12));

    // identity f through the general branch agrees with linear
    const CostModel general{DownloadCost::constant(c),
                            AgeCost::general([](std::int64_t a) { return a; })};
    CHECK(total_cost(pattern, schedule, general) ==
          total_cost(pattern, schedule, CostModel::constant_linear(c)));
  }
}

TEST_CASE("all-ON pattern downloaded every slot costs c*T") {
  for (const int T : {1, 5, 17}) {
    const auto pattern = ConnectivityPattern::all_on(T);
    Schedule all{std::vector<std::uint8_t>(static_cast<std::size_t>(T), 1)};
    CHECK(total_cost(pattern, all, CostModel::constant_linear(2.5)) ==
          doctest::Approx(2.5 * T).epsilon(1e-12));
  }
}

TEST_CASE("age cost validation") {
  CHECK_THROWS_AS(AgeCost::general([](std::int64_t a) { return a + 1; }), std::invalid_argument);
  const auto bad = AgeCost::general([](std::int64_t a) { return a < 3 ? a : 0; });
  CHECK_THROWS_WITH_AS(bad.prefix_costs(5), doctest::Contains("decreases"), std::invalid_argument);
  const auto quad = AgeCost::general([](std::int64_t a) { return a * a; });
  CHECK(quad.prefix_costs(3) == std::vector<double>{0, 1, 5, 14});
}

TEST_CASE("download cost validation") {
  CHECK_THROWS_AS(DownloadCost::constant(0.0), std::invalid_argument);
  CHECK_THROWS_AS(DownloadCost::per_slot({2.0, 2.0}, {2.0}), std::invalid_argument);
  CHECK_THROWS_AS(DownloadCost::per_slot({}, {}), std::invalid_argument);
  const auto cost = DownloadCost::per_slot({1.0, 3.0}, {3.0, 0.0, 1.0});
  CHECK(cost.base_cost() == 1.0);
  CHECK(cost.max_level() == 3.0);
  CHECK(cost.at(1) == 3.0);
  CHECK(cost.at(3) == 1.0);
}

TEST_CASE("pattern line parsing") {
  SUBCASE("plain bits") {
    const auto entry = parse_pattern_line("10110", 1);
    CHECK(entry.pattern.to_string() == "10110");
    CHECK(entry.on_costs.empty());
  }
  SUBCASE("whitespace separated bits") {
    const auto entry = parse_pattern_line(" 1 0 11 ", 3);
    CHECK(entry.pattern.to_string() == "1011");
  }
  SUBCASE("trailing per-ON-slot cost field") {
    const auto entry = parse_pattern_line("0101 2.5,4", 2);
    CHECK(entry.pattern.to_string() == "0101");
    CHECK(entry.on_costs == std::vector<double>{2.5, 4.0});
  }
  SUBCASE("bad character names line and column") {
    CHECK_THROWS_WITH_AS(parse_pattern_line("10x1", 7), doctest::Contains("line 7, column 3"),
                         std::invalid_argument);
  }
  SUBCASE("cost count must match ON slots") {
    CHECK_THROWS_WITH_AS(parse_pattern_line("101 2.0", 4), doctest::Contains("2 ON slots"),
                         std::invalid_argument);
  }
  SUBCASE("bad cost value") {
    CHECK_THROWS_WITH_AS(parse_pattern_line("11 2.0,oops", 9), doctest::Contains("line 9"),
                         std::invalid_argument);
  }
}

TEST_CASE("pattern files load per line") {
  const std::string path = "core_patterns_test.txt";
  {
    std::ofstream out(path);
    out << "101\n\n  0011 2,4\n";
  }
  const auto entries = load_pattern_file(path);
  REQUIRE(entries.size() == 2);
  CHECK(entries[0].pattern.to_string() == "101");
  CHECK(entries[0].line == 1);
  CHECK(entries[1].pattern.to_string() == "0011");
  CHECK(entries[1].on_costs == std::vector<double>{2.0, 4.0});
  CHECK(entries[1].line == 3);
  const auto by_slot = expand_on_costs(entries[1].pattern, entries[1].on_costs);
  CHECK(by_slot == std::vector<double>{0.0, 0.0, 2.0, 4.0});
  std::remove(path.c_str());
  CHECK_THROWS_WITH_AS(load_pattern_file("does_not_exist.txt"), doctest::Contains("cannot open"),
                       std::invalid_argument);
}

TEST_SUITE_END();
