#include "urt/config.hpp"

#include <charconv>
#include <optional>
#include <set>

#include "urt/error.hpp"

namespace urt {

namespace {

using nlohmann::json;

struct reader {
  json const& doc;
  std::set<std::string> used;

  std::optional<double> get(std::string const& key) {
    used.insert(key);
    auto const it = doc.find(key);
    if (it == doc.end() || it->is_null()) {
      return std::nullopt;
    }
    if (!it->is_number()) {
      throw config_error("key '" + key + "': expected a number");
    }
    return it->get<double>();
  }

  double required(std::string const& key) {
    auto const v = get(key);
    if (!v) {
      throw config_error("key '" + key + "': missing");
    }
    return *v;
  }

  double or_default(std::string const& key, double fallback) {
    return get(key).value_or(fallback);
  }

  int integer(std::string const& key) {
    auto const v = required(key);
    if (v != static_cast<double>(static_cast<int>(v))) {
      throw config_error("key '" + key + "': expected an integer");
    }
    return static_cast<int>(v);
  }
};

}  // namespace

model_config parse_model_config(json const& flat) {
  if (!flat.is_object()) {
    throw config_error("parameters must be a JSON object");
  }
  reader r{flat, {}};
  model_config c;

  c.line.stations = r.integer("m");
  c.line.carriages = r.integer("l");
  c.line.carriage_capacity = r.required("p");
  c.line.travel_time = r.required("T_p");
  c.line.operating_time = r.or_default("T_S", 18.0);
  c.line.min_headway = r.required("h_min");
  c.line.max_headway = r.required("h_max");

  auto& p = c.params;
  p.energy_per_trip = r.required("Omega");
  p.maintenance_per_day = r.or_default("S_0", 0.0);
  p.wage_per_hour = r.required("R");
  p.period = r.required("T");
  p.depreciation = r.or_default("phi", 0.0);
  p.fare_elasticity = r.required("e_c");
  p.frequency_attraction = r.required("e_f");
  p.min_load_factor = r.required("theta_0");
  p.fare_curvature = r.required("alpha");
  p.max_fare = r.or_default("c_max", 100.0);
  p.fare_conversion = r.or_default("fare_conversion", 0.05);
  p.cost_coefficient = r.get("B");

  for (auto const& [key, value] : flat.items()) {
    if (!key.empty() && key.front() == '_') {
      continue;
    }
    if (!r.used.contains(key)) {
      throw config_error("key '" + key + "': unknown parameter");
    }
  }

  validate(c.line);
  validate(c.params);
  return c;
}

void apply_overrides(json& flat,
                     std::map<std::string, std::string> const& overrides) {
  for (auto const& [key, text] : overrides) {
    double v = 0.0;
    auto const [ptr, ec] =
        std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
      throw config_error("key '" + key + "': override '" + text +
                         "' is not a number");
    }
    flat[key] = v;
  }
}

json to_json(line_config const& line) {
  return {{"m", line.stations},           {"l", line.carriages},
          {"p", line.carriage_capacity},  {"T_p", line.travel_time},
          {"T_S", line.operating_time},   {"h_min", line.min_headway},
          {"h_max", line.max_headway}};
}

json to_json(economic_params const& p) {
  json j = {{"Omega", p.energy_per_trip},
            {"S_0", p.maintenance_per_day},
            {"R", p.wage_per_hour},
            {"T", p.period},
            {"phi", p.depreciation},
            {"e_c", p.fare_elasticity},
            {"e_f", p.frequency_attraction},
            {"theta_0", p.min_load_factor},
            {"alpha", p.fare_curvature},
            {"c_max", p.max_fare},
            {"fare_conversion", p.fare_conversion}};
  if (p.cost_coefficient) {
    j["B"] = *p.cost_coefficient;
  }
  return j;
}

}  // namespace urt
