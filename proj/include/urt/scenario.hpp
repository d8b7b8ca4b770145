#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "urt/demand.hpp"
#include "urt/model.hpp"

namespace urt {

struct period {
  double start;
  double end;
};

std::string to_string(period const& p);  // "HH:MM-HH:MM"
period parse_period(std::string const& text);

struct baseline_entry {
  period when;
  double frequency;
};

struct scenario {
  line_config line;
  economic_params params;
  demand_profile demand;
  std::vector<period> periods;
  std::vector<baseline_entry> baseline;  // empty when none given
};

// Loads a scenario file (JSON). Demand and baseline CSV paths inside the file
// are resolved relative to the file. `overrides` are "key=value" pairs applied
// to the flat parameter keys before validation.
scenario load_scenario(std::string const& path,
                       std::map<std::string, std::string> const& overrides = {});

scenario parse_scenario(nlohmann::json const& doc, std::string const& base_dir,
                        std::map<std::string, std::string> const& overrides = {});

// Baseline CSV: header `interval_start,interval_end,f` (HH:MM times).
std::vector<baseline_entry> parse_baseline_csv(std::istream& in);

// Throws validation_error when a period is outside demand coverage or a
// baseline frequency is outside bounds.
void validate(scenario const& s);

std::optional<double> baseline_frequency(scenario const& s, period const& p);

}  // namespace urt
