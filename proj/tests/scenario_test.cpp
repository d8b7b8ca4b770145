#include <sstream>

#include "gtest/gtest.h"

#include "urt/error.hpp"
#include "urt/scenario.hpp"

using namespace urt;

namespace {

std::string const data_dir = URT_DATA_DIR;

nlohmann::json small_doc() {
  return nlohmann::json::parse(R"({
    "parameters": {
      "m": 16, "l": 6, "p": 310, "T_p": 1, "h_min": 90, "h_max": 600,
      "Omega": 3000, "S_0": 4500, "R": 1500, "T": 1, "phi": 252,
      "e_c": 0.01, "e_f": 0.01, "theta_0": 0.3, "alpha": 0.17142857142857143
    },
    "demand": "nanjing_line1_traffic.csv",
    "periods": ["07:00-08:00", "17:00-19:00"],
    "baseline": {"fixed": 12}
  })");
}

template <typename E>
std::string message_of(nlohmann::json const& doc,
                       std::map<std::string, std::string> const& ov = {}) {
  try {
    parse_scenario(doc, data_dir, ov);
  } catch (E const& e) {
    return e.what();
  }
  return "<no throw>";
}

}  // namespace

TEST(scenario, loads_shipped_line) {
  auto const s = load_scenario(data_dir + "/nanjing_line1.json");
  EXPECT_EQ(s.line.stations, 16);
  EXPECT_DOUBLE_EQ(s.line.train_capacity(), 1860.0);
  EXPECT_NEAR(cost_coefficient(s.line, s.params), 7004.0, 1e-9);
  ASSERT_EQ(s.periods.size(), 18U);
  EXPECT_EQ(to_string(s.periods.front()), "05:00-06:00");
  EXPECT_EQ(to_string(s.periods.back()), "22:00-23:00");
  ASSERT_EQ(s.baseline.size(), 18U);
  EXPECT_EQ(baseline_frequency(s, s.periods[3]), 12.0);
}

TEST(scenario, explicit_periods_and_fixed_baseline) {
  auto const s = parse_scenario(small_doc(), data_dir);
  ASSERT_EQ(s.periods.size(), 2U);
  EXPECT_DOUBLE_EQ(s.periods[1].start, 17.0);
  EXPECT_DOUBLE_EQ(s.periods[1].end, 19.0);
  EXPECT_EQ(baseline_frequency(s, s.periods[1]), 12.0);
  EXPECT_NEAR(total_traffic(s.demand, 17.0, 19.0), 32113.0 + 25217.0, 1e-6);
}

TEST(scenario, overrides_apply_before_validation) {
  auto const s = parse_scenario(small_doc(), data_dir,
                                {{"theta_0", "0.5"}, {"m", "12"}});
  EXPECT_DOUBLE_EQ(s.params.min_load_factor, 0.5);
  EXPECT_EQ(s.line.stations, 12);
  EXPECT_NE(message_of<config_error>(small_doc(), {{"nope", "1"}}).find("nope"),
            std::string::npos);
  EXPECT_NE(message_of<config_error>(small_doc(), {{"alpha", "x"}}).find("alpha"),
            std::string::npos);
}

TEST(scenario, parameter_errors_name_the_key) {
  auto doc = small_doc();
  doc["parameters"]["p"] = -3;
  EXPECT_NE(message_of<urt::error>(doc).find("'p'"), std::string::npos);

  doc = small_doc();
  doc["parameters"]["h_min"] = 700;
  EXPECT_NE(message_of<urt::error>(doc).find("h_min"), std::string::npos);

  doc = small_doc();
  doc["parameters"].erase("alpha");
  EXPECT_NE(message_of<config_error>(doc).find("alpha"), std::string::npos);

  doc = small_doc();
  doc["parameters"]["speed"] = 3;
  EXPECT_NE(message_of<config_error>(doc).find("speed"), std::string::npos);

  doc = small_doc();
  doc["parameters"]["_note"] = "ignored";
  doc["_about"] = "ignored";
  EXPECT_NO_THROW(parse_scenario(doc, data_dir));

  doc = small_doc();
  doc["colour"] = "red";
  EXPECT_NE(message_of<config_error>(doc).find("colour"), std::string::npos);
}

TEST(scenario, periods_must_be_covered) {
  auto doc = small_doc();
  doc["periods"] = {"03:00-04:00"};
  EXPECT_THROW(parse_scenario(doc, data_dir), validation_error);
  doc["periods"] = {"08:00-07:00"};
  EXPECT_ANY_THROW(parse_scenario(doc, data_dir));
  doc["periods"] = {"7-8"};
  EXPECT_ANY_THROW(parse_scenario(doc, data_dir));
}

TEST(scenario, baseline_frequency_must_be_in_bounds) {
  auto doc = small_doc();
  doc["baseline"] = {{"fixed", 100}};
  EXPECT_THROW(parse_scenario(doc, data_dir), validation_error);
  doc["baseline"] = {{"fixed", 5}};
  EXPECT_THROW(parse_scenario(doc, data_dir), validation_error);
  doc.erase("baseline");
  auto const s = parse_scenario(doc, data_dir);
  EXPECT_TRUE(s.baseline.empty());
  EXPECT_FALSE(baseline_frequency(s, s.periods[0]).has_value());
}

TEST(scenario, baseline_csv) {
  std::istringstream in{
      "interval_start,interval_end,f\n07:00,08:00,20\n08:00,09:00,15.5\n"};
  auto const b = parse_baseline_csv(in);
  ASSERT_EQ(b.size(), 2U);
  EXPECT_DOUBLE_EQ(b[1].when.start, 8.0);
  EXPECT_DOUBLE_EQ(b[1].frequency, 15.5);

  std::istringstream bad{"start,end,f\n07:00,08:00,20\n"};
  EXPECT_THROW(parse_baseline_csv(bad), schema_error);
}

TEST(scenario, missing_demand_file) {
  auto doc = small_doc();
  doc["demand"] = "does_not_exist.csv";
  EXPECT_ANY_THROW(parse_scenario(doc, data_dir));
  EXPECT_ANY_THROW(load_scenario(data_dir + "/missing.json"));
}
