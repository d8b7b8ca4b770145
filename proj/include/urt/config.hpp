#pragma once

#include <map>
#include <string>

#include "json.hpp"

#include "urt/model.hpp"

namespace urt {

// Flat key/value parameters named after the model symbols:
//   m l p T_p T_S h_min h_max               (line)
//   Omega S_0 R T phi e_c e_f theta_0 alpha c_max fare_conversion B
// Keys starting with '_' are free-form notes. Anything else unknown, missing
// or out of range is reported as config_error("key '<k>': ...").
struct model_config {
  line_config line;
  economic_params params;
};

model_config parse_model_config(nlohmann::json const& flat);

// Applies "key=value" overrides in place before parsing.
void apply_overrides(nlohmann::json& flat,
                     std::map<std::string, std::string> const& overrides);

nlohmann::json to_json(line_config const& line);
nlohmann::json to_json(economic_params const& params);

}  // namespace urt
