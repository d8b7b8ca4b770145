#include "urt/scenario.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "urt/config.hpp"
#include "urt/error.hpp"
#include "urt/format.hpp"

namespace urt {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double period_eps = 1e-9;

std::string resolve(std::string const& base_dir, std::string const& path) {
  fs::path p{path};
  if (p.is_relative() && !base_dir.empty()) {
    p = fs::path{base_dir} / p;
  }
  return p.string();
}

std::vector<period> hourly_periods(demand_profile const& d) {
  std::vector<period> out;
  auto const first = std::ceil(d.coverage_start() - period_eps);
  auto const last = std::floor(d.coverage_end() + period_eps);
  for (auto h = first; h + 1.0 <= last + period_eps; h += 1.0) {
    out.push_back({h, h + 1.0});
  }
  return out;
}

}  // namespace

std::string to_string(period const& p) {
  return format_clock(p.start) + "-" + format_clock(p.end);
}

period parse_period(std::string const& text) {
  auto const dash = text.find('-');
  if (dash == std::string::npos) {
    throw validation_error("bad period '" + text + "', expected HH:MM-HH:MM");
  }
  period p{parse_clock(text.substr(0, dash)), parse_clock(text.substr(dash + 1))};
  if (p.end <= p.start) {
    throw validation_error("period '" + text + "': end must be after start");
  }
  return p;
}

std::vector<baseline_entry> parse_baseline_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw schema_error("baseline CSV has no header row");
  }
  if (!line.empty() && line.back() == '\r') {
    line.pop_back();
  }
  if (line != "interval_start,interval_end,f") {
    throw schema_error("baseline CSV header must be interval_start,interval_end,f");
  }
  std::vector<baseline_entry> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    auto const where = "baseline line " + std::to_string(line_no) + ": ";
    std::stringstream ss{line};
    std::string a, b, f;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') ||
        !std::getline(ss, f)) {
      throw validation_error(where + "expected 3 fields");
    }
    baseline_entry e{};
    try {
      e.when = {parse_clock(a), parse_clock(b)};
    } catch (validation_error const& err) {
      throw validation_error(where + err.what());
    }
    auto const [ptr, ec] =
        std::from_chars(f.data(), f.data() + f.size(), e.frequency);
    if (ec != std::errc{} || ptr != f.data() + f.size()) {
      throw validation_error(where + "frequency must be a number");
    }
    if (e.when.end <= e.when.start) {
      throw validation_error(where + "interval end must be after start");
    }
    out.push_back(e);
  }
  return out;
}

scenario parse_scenario(json const& doc, std::string const& base_dir,
                        std::map<std::string, std::string> const& overrides) {
  if (!doc.is_object()) {
    throw config_error("scenario must be a JSON object");
  }
  for (auto const& [key, value] : doc.items()) {
    if (key != "parameters" && key != "demand" && key != "periods" &&
        key != "baseline" && (key.empty() || key.front() != '_')) {
      throw config_error("key '" + key + "': unknown scenario key");
    }
  }
  if (!doc.contains("parameters")) {
    throw config_error("key 'parameters': missing");
  }
  if (!doc.contains("demand") || !doc["demand"].is_string()) {
    throw config_error("key 'demand': expected a CSV path");
  }

  scenario s;
  auto flat = doc["parameters"];
  apply_overrides(flat, overrides);
  auto const model = parse_model_config(flat);
  s.line = model.line;
  s.params = model.params;

  auto const parsed = parse_traffic_csv_file(
      resolve(base_dir, doc["demand"].get<std::string>()));
  s.demand = build_profile(parsed.records, !parsed.has_station_column);

  auto const periods = doc.value("periods", json{"hourly"});
  if (periods.is_string() && periods.get<std::string>() == "hourly") {
    s.periods = hourly_periods(s.demand);
  } else if (periods.is_array()) {
    for (auto const& p : periods) {
      if (!p.is_string()) {
        throw config_error("key 'periods': entries must be \"HH:MM-HH:MM\"");
      }
      s.periods.push_back(parse_period(p.get<std::string>()));
    }
  } else {
    throw config_error("key 'periods': expected \"hourly\" or a list");
  }

  if (doc.contains("baseline")) {
    auto const& b = doc["baseline"];
    if (b.is_string()) {
      auto const path = resolve(base_dir, b.get<std::string>());
      std::ifstream in{path};
      if (!in) {
        throw config_error("cannot open baseline CSV '" + path + "'");
      }
      s.baseline = parse_baseline_csv(in);
    } else if (b.is_object() && b.contains("fixed") && b["fixed"].is_number()) {
      for (auto const& p : s.periods) {
        s.baseline.push_back({p, b["fixed"].get<double>()});
      }
    } else {
      throw config_error(
          "key 'baseline': expected a CSV path or {\"fixed\": f}");
    }
  }

  validate(s);
  return s;
}

scenario load_scenario(std::string const& path,
                       std::map<std::string, std::string> const& overrides) {
  std::ifstream in{path};
  if (!in) {
    throw config_error("cannot open scenario '" + path + "'");
  }
  json doc;
  try {
    doc = json::parse(in);
  } catch (json::parse_error const& e) {
    throw config_error("scenario '" + path + "': " + e.what());
  }
  return parse_scenario(doc, fs::path{path}.parent_path().string(), overrides);
}

void validate(scenario const& s) {
  if (s.periods.empty()) {
    throw validation_error("scenario has no analysis periods");
  }
  for (auto const& p : s.periods) {
    if (p.end <= p.start) {
      throw validation_error("period " + to_string(p) + ": empty window");
    }
    auto const gaps = s.demand.gaps(p.start, p.end);
    if (!gaps.empty()) {
      throw validation_error("period " + to_string(p) +
                             " is outside demand coverage: " + gaps.front());
    }
  }
  auto const bounds = make_frequency_bounds(s.line);
  for (auto const& b : s.baseline) {
    if (b.frequency < bounds.min - constraint_tolerance ||
        b.frequency > bounds.max + constraint_tolerance) {
      throw validation_error("baseline " + to_string(b.when) + ": frequency " +
                             format_number(b.frequency) + " outside [" +
                             format_number(bounds.min) + ", " +
                             format_number(bounds.max) + "]");
    }
  }
}

std::optional<double> baseline_frequency(scenario const& s, period const& p) {
  for (auto const& b : s.baseline) {
    if (std::abs(b.when.start - p.start) < period_eps &&
        std::abs(b.when.end - p.end) < period_eps) {
      return b.frequency;
    }
  }
  return std::nullopt;
}

}  // namespace urt
