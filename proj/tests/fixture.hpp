#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace urt::oracle {

// Parameters that put the interior optimum at f = 24, c = 70 for Q = 3e4.
inline nlohmann::json operating_point_parameters(int stations = 16) {
  return {{"m", stations},     {"l", 6},         {"p", 310},
          {"T_p", 1},          {"h_min", 90},    {"h_max", 600},
          {"Omega", 3000},     {"R", 1500},      {"T", 1},
          {"e_c", 0.01},       {"e_f", 0.01},    {"theta_0", 0.3},
          {"alpha", 0.171428}, {"B", 7004}};
}

struct hourly_count {
  std::string start;
  std::string end;
  double n_in;
};

// Writes an aggregate demand CSV and a scenario JSON into a fresh directory
// under the system temp dir; returns the scenario path.
inline std::string write_scenario(std::string const& name,
                                  std::vector<hourly_count> const& counts,
                                  nlohmann::json parameters,
                                  nlohmann::json baseline = nullptr) {
  auto const dir = std::filesystem::temp_directory_path() / ("urt_" + name);
  std::filesystem::create_directories(dir);
  {
    std::ofstream csv{dir / "demand.csv"};
    csv << "interval_start,interval_end,n_in,n_out\n";
    for (auto const& c : counts) {
      csv << c.start << ',' << c.end << ',' << c.n_in << ",0\n";
    }
  }
  nlohmann::json doc;
  doc["parameters"] = std::move(parameters);
  doc["demand"] = "demand.csv";
  doc["periods"] = "hourly";
  if (!baseline.is_null()) {
    doc["baseline"] = std::move(baseline);
  }
  auto const path = dir / "scenario.json";
  std::ofstream{path} << doc.dump(2) << '\n';
  return path.string();
}

inline std::string read_file(std::string const& path) {
  std::ifstream in{path, std::ios::binary};
  return {std::istreambuf_iterator<char>{in}, std::istreambuf_iterator<char>{}};
}

}  // namespace urt::oracle
