#include <random>

#include "gtest/gtest.h"

#include "urt/config.hpp"
#include "urt/error.hpp"
#include "urt/model.hpp"

using namespace urt;

namespace {

economic_params elastic(double e_c, double e_f) {
  economic_params p;
  p.fare_elasticity = e_c;
  p.frequency_attraction = e_f;
  return p;
}

line_config reference_line() {
  line_config l;
  l.carriages = 6;
  l.carriage_capacity = 310;
  return l;
}

}  // namespace

TEST(frequency_bounds, from_headways) {
  line_config l;
  l.min_headway = 90;
  l.max_headway = 600;
  auto const b = make_frequency_bounds(l);
  EXPECT_DOUBLE_EQ(b.max, 40.0);
  EXPECT_DOUBLE_EQ(b.min, 6.0);
  l.max_headway = 90;
  EXPECT_THROW(make_frequency_bounds(l), config_error);
}

TEST(actual_traffic, examples) {
  auto const p = elastic(0.01, 0.01);
  EXPECT_EQ(actual_traffic(3e4, 0, 0, p).passengers, 3e4);
  EXPECT_NEAR(actual_traffic(3e4, 70, 24, p).passengers, 16200.0, 1e-9);
  auto const edge = actual_traffic(100, 2, 0, elastic(0.5, 0.0));
  EXPECT_EQ(edge.passengers, 0.0);
  EXPECT_FALSE(edge.clamped);
  auto const neg = actual_traffic(100, 3, 0, elastic(0.5, 0.0));
  EXPECT_EQ(neg.passengers, 0.0);
  EXPECT_TRUE(neg.clamped);
}

TEST(income, examples_and_expansion) {
  auto const p = elastic(0.01, 0.01);
  EXPECT_EQ(income(3e4, 0, 24, p), 0.0);
  EXPECT_NEAR(income(3e4, 70, 24, p), 1134000.0, 1e-6);

  std::mt19937_64 rng{7};
  std::uniform_real_distribution<double> u{0.0, 1.0};
  for (int i = 0; i < 200; ++i) {
    auto const q = 1e5 * u(rng);
    auto const c = 40 * u(rng);
    auto const f = 40 * u(rng);
    auto const e_c = 0.02 * u(rng);
    auto const e_f = 0.02 * u(rng);
    auto const expanded = c * q - e_c * q * c * c + e_f * q * c * f;
    EXPECT_NEAR(income(q, c, f, elastic(e_c, e_f)), expanded,
                1e-9 * std::max(1.0, std::abs(expanded)));
  }
}

TEST(income, quadratic_in_fare_linear_in_frequency) {
  auto const p = elastic(0.004, 0.01);
  for (double f : {6.0, 17.0, 33.0}) {
    for (double c = 1; c < 80; c += 7) {
      // third difference in c vanishes, second difference is -2 e_c Q
      auto const i = [&](double x) { return income(2e4, x, f, p); };
      auto const d3 = i(c + 3) - 3 * i(c + 2) + 3 * i(c + 1) - i(c);
      EXPECT_NEAR(d3, 0.0, 1e-6);
      auto const d2 = i(c + 2) - 2 * i(c + 1) + i(c);
      EXPECT_NEAR(d2, -2 * 0.004 * 2e4, 1e-6);
      // second difference in f vanishes
      auto const g = [&](double x) { return income(2e4, c, x, p); };
      EXPECT_NEAR(g(f + 2) - 2 * g(f + 1) + g(f), 0.0, 1e-6);
    }
  }
}

TEST(cost_coefficient, examples) {
  line_config l;
  l.travel_time = 1;
  economic_params p;
  p.energy_per_trip = 3000;
  p.period = 1;
  p.wage_per_hour = 1500;
  EXPECT_DOUBLE_EQ(cost_coefficient(l, p), 6000.0);

  economic_params zero;
  zero.period = 1;
  EXPECT_DOUBLE_EQ(cost_coefficient(l, zero), 0.0);

  p.depreciation = 252;
  p.maintenance_per_day = 500;
  l.operating_time = 1;
  EXPECT_DOUBLE_EQ(cost_coefficient(l, p), 7504.0);

  p.cost_coefficient = 7004;
  EXPECT_DOUBLE_EQ(cost_coefficient(l, p), 7004.0);
}

TEST(operation_cost, linear_and_homogeneous) {
  EXPECT_EQ(operation_cost(0, 6000), 0.0);
  EXPECT_EQ(operation_cost(24, 6000), 144000.0);
  for (double f = 0.5; f < 40; f += 3.25) {
    EXPECT_DOUBLE_EQ(operation_cost(2 * f, 7004), 2 * operation_cost(f, 7004));
  }
}

TEST(operator_utility, examples) {
  auto const p = elastic(0.01, 0.01);
  EXPECT_EQ(operator_utility(3e4, 0, 0, 7004, p), 0.0);
  EXPECT_NEAR(operator_utility(3e4, 70, 24, 7004, p), 965904.0, 1e-6);
  // e_f = 0: income does not depend on f, so U_l drops by exactly B df.
  auto const q = elastic(0.01, 0.0);
  EXPECT_NEAR(operator_utility(3e4, 50, 10, 7004, q) -
                  operator_utility(3e4, 50, 13, 7004, q),
              3 * 7004.0, 1e-6);
}

TEST(passenger_utility, examples_and_symmetry) {
  EXPECT_EQ(passenger_utility(0, 24, 0.171428), 0.0);
  EXPECT_NEAR(passenger_utility(70, 24, 0.171428), 840.0, 0.01);
  for (double alpha : {0.1, 0.171428, 0.7}) {
    auto const peak = 24 / (2 * alpha);
    for (double d : {0.5, 3.0, 11.0}) {
      EXPECT_NEAR(passenger_utility(peak - d, 24, alpha),
                  passenger_utility(peak + d, 24, alpha), 1e-9);
    }
  }
}

TEST(passenger_utility, second_difference_is_minus_two_alpha) {
  std::mt19937_64 rng{11};
  std::uniform_real_distribution<double> u{0.0, 1.0};
  for (int i = 0; i < 500; ++i) {
    auto const alpha = 0.01 + u(rng);
    auto const f = 6 + 34 * u(rng);
    for (double c = 1; c < 100; c += 9) {
      auto const d2 = passenger_utility(c + 1, f, alpha) -
                      2 * passenger_utility(c, f, alpha) +
                      passenger_utility(c - 1, f, alpha);
      EXPECT_NEAR(d2, -2 * alpha, 1e-9 * 2 * alpha);
      EXPECT_LT(d2, 0.0);
    }
  }
}

TEST(load_factor, examples) {
  auto const l = reference_line();
  EXPECT_DOUBLE_EQ(load_factor(24 * 1860.0, 24, l, 1.0), 1.0);
  EXPECT_NEAR(load_factor(16200, 24, l, 1.0), 16200.0 / 44640.0, 1e-15);
  EXPECT_NEAR(load_factor(16200, 24, l, 1.0), 0.3629, 1e-4);
  EXPECT_EQ(load_factor(0, 24, l, 1.0), 0.0);
  EXPECT_THROW(load_factor(10, 0, l, 1.0), std::domain_error);
  for (double f = 6; f < 40; f += 2.5) {
    EXPECT_DOUBLE_EQ(load_factor(9000, 2 * f, l, 1.0),
                     load_factor(9000, f, l, 1.0) / 2);
  }
}

TEST(feasibility, examples) {
  economic_params p;
  p.min_load_factor = 0.5;
  frequency_bounds const b{6, 40};
  EXPECT_TRUE(check_feasibility(0.65, 24, p, b).feasible());
  auto const low = check_feasibility(0.3, 24, p, b);
  ASSERT_EQ(low.violations.size(), 1U);
  EXPECT_EQ(low.violations[0], "load factor below minimum");
  auto const fast = check_feasibility(0.65, 45, p, b);
  ASSERT_EQ(fast.violations.size(), 1U);
  EXPECT_EQ(fast.violations[0], "frequency above maximum");
  EXPECT_EQ(check_feasibility(1.2, 5, p, b).violations.size(), 2U);
}

namespace {

nlohmann::json flat_config() {
  return {{"m", 16},        {"l", 6},        {"p", 310},    {"T_p", 1},
          {"h_min", 90},    {"h_max", 600},  {"Omega", 3000}, {"R", 1500},
          {"T", 1},         {"e_c", 0.01},   {"e_f", 0.01}, {"theta_0", 0.3},
          {"alpha", 0.171428}};
}

std::string config_message(nlohmann::json const& j) {
  try {
    parse_model_config(j);
  } catch (config_error const& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(model_config, defaults_and_symbols) {
  auto const c = parse_model_config(flat_config());
  EXPECT_EQ(c.line.stations, 16);
  EXPECT_DOUBLE_EQ(c.line.train_capacity(), 1860.0);
  EXPECT_DOUBLE_EQ(c.line.operating_time, 18.0);
  EXPECT_DOUBLE_EQ(c.params.depreciation, 0.0);
  EXPECT_DOUBLE_EQ(c.params.maintenance_per_day, 0.0);
  EXPECT_DOUBLE_EQ(c.params.max_fare, 100.0);
  EXPECT_DOUBLE_EQ(c.params.fare_conversion, 0.05);
  EXPECT_FALSE(c.params.cost_coefficient.has_value());
}

TEST(model_config, per_key_errors) {
  auto j = flat_config();
  j.erase("alpha");
  EXPECT_EQ(config_message(j), "key 'alpha': missing");

  j = flat_config();
  j["theta_0"] = 1.5;
  EXPECT_EQ(config_message(j), "key 'theta_0': must be in (0, 1)");

  j = flat_config();
  j["h_max"] = 60;
  EXPECT_EQ(config_message(j), "key 'h_max': must be > h_min");

  j = flat_config();
  j["alpah"] = 1;
  EXPECT_EQ(config_message(j), "key 'alpah': unknown parameter");

  j = flat_config();
  j["m"] = 2.5;
  EXPECT_EQ(config_message(j), "key 'm': expected an integer");

  j = flat_config();
  j["R"] = "lots";
  EXPECT_EQ(config_message(j), "key 'R': expected a number");

  j = flat_config();
  j["_note"] = "ignored";
  EXPECT_EQ(config_message(j), "");
}

TEST(model_config, overrides) {
  auto j = flat_config();
  apply_overrides(j, {{"alpha", "0.5"}, {"B", "7004"}});
  auto const c = parse_model_config(j);
  EXPECT_DOUBLE_EQ(c.params.fare_curvature, 0.5);
  EXPECT_DOUBLE_EQ(*c.params.cost_coefficient, 7004.0);
  EXPECT_THROW(apply_overrides(j, {{"alpha", "x"}}), config_error);
}
