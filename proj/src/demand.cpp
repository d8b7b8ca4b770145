#include "urt/demand.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "urt/error.hpp"

namespace urt {

namespace {

constexpr double time_eps = 1e-12;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    auto const next = line.find(sep, pos);
    out.push_back(trim(line.substr(pos, next - pos)));
    if (next == std::string_view::npos) {
      break;
    }
    pos = next + 1;
  }
  return out;
}

template <typename T>
bool parse_number(std::string_view text, T& out) {
  auto const* first = text.data();
  auto const* last = text.data() + text.size();
  if (first != last && *first == '+') {
    ++first;
  }
  auto const [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last && first != last;
}

}  // namespace

double parse_clock(std::string_view text) {
  text = trim(text);
  auto const parts = split(text, ':');
  if (parts.size() < 2 || parts.size() > 3) {
    throw validation_error("bad clock time '" + std::string{text} +
                           "', expected HH:MM");
  }
  int h = 0;
  int m = 0;
  int s = 0;
  if (!parse_number(parts[0], h) || !parse_number(parts[1], m) ||
      (parts.size() == 3 && !parse_number(parts[2], s)) || h < 0 || m < 0 ||
      m > 59 || s < 0 || s > 59) {
    throw validation_error("bad clock time '" + std::string{text} +
                           "', expected HH:MM");
  }
  return h + m / 60.0 + s / 3600.0;
}

std::string format_clock(double hours) {
  auto const total = static_cast<long>(std::lround(hours * 60.0));
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%02ld:%02ld", total / 60, total % 60);
  return buf;
}

parse_result parse_traffic_csv(std::istream& in, csv_schema const& schema) {
  std::string line;
  std::size_t line_no = 0;
  std::string header;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) {
      line.erase(0, 3);
    }
    if (!trim(line).empty()) {
      header = line;
      break;
    }
  }
  if (header.empty()) {
    throw schema_error("traffic CSV has no header row");
  }

  auto const columns = split(header, ',');
  auto const find = [&](std::string const& name) -> std::optional<std::size_t> {
    auto const it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) {
      return std::nullopt;
    }
    return static_cast<std::size_t>(it - columns.begin());
  };

  auto const combined = find(schema.interval);
  auto const start_col = find(schema.interval_start);
  auto const end_col = find(schema.interval_end);
  auto const in_col = find(schema.n_in);
  auto const out_col = find(schema.n_out);
  auto const station_col = find(schema.station);

  std::vector<std::string> missing;
  if (!combined && !(start_col && end_col)) {
    if (!start_col) {
      missing.push_back(schema.interval_start);
    }
    if (!end_col) {
      missing.push_back(schema.interval_end);
    }
  }
  if (!in_col) {
    missing.push_back(schema.n_in);
  }
  if (!out_col) {
    missing.push_back(schema.n_out);
  }
  if (!missing.empty()) {
    std::string msg = "traffic CSV is missing required column(s):";
    for (auto const& m : missing) {
      msg += " " + m;
    }
    throw schema_error(msg);
  }

  parse_result result;
  result.has_station_column = station_col.has_value();
  std::vector<std::string> problems;

  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) {
      continue;
    }
    auto const fields = split(line, ',');
    auto const where = "line " + std::to_string(line_no) + ": ";
    if (fields.size() != columns.size()) {
      problems.push_back(where + "expected " + std::to_string(columns.size()) +
                         " fields, got " + std::to_string(fields.size()));
      continue;
    }
    try {
      traffic_record r;
      if (combined) {
        auto const range = fields[*combined];
        auto const dash = range.find('-');
        if (dash == std::string_view::npos) {
          throw validation_error("bad interval '" + std::string{range} + "'");
        }
        r.interval_start = parse_clock(range.substr(0, dash));
        r.interval_end = parse_clock(range.substr(dash + 1));
      } else {
        r.interval_start = parse_clock(fields[*start_col]);
        r.interval_end = parse_clock(fields[*end_col]);
      }
      if (!parse_number(fields[*in_col], r.n_in) ||
          !parse_number(fields[*out_col], r.n_out)) {
        throw validation_error("counts must be numbers");
      }
      if (station_col && !parse_number(fields[*station_col], r.station_id)) {
        throw validation_error("station must be an integer");
      }
      if (r.station_id < 1) {
        throw validation_error("station must be >= 1");
      }
      if (r.interval_end <= r.interval_start) {
        throw validation_error("interval end must be after start");
      }
      if (r.n_in < 0 || r.n_out < 0) {
        throw validation_error("negative passenger count");
      }
      result.records.push_back(r);
    } catch (validation_error const& e) {
      problems.push_back(where + e.what());
    }
  }

  if (!problems.empty()) {
    std::string msg = "invalid traffic rows:";
    for (auto const& p : problems) {
      msg += "\n  " + p;
    }
    throw validation_error(msg);
  }
  return result;
}

parse_result parse_traffic_csv_file(std::string const& path,
                                    csv_schema const& schema) {
  std::ifstream in{path, std::ios::binary};
  if (!in) {
    throw config_error("cannot open traffic CSV '" + path + "'");
  }
  return parse_traffic_csv(in, schema);
}

demand_profile::demand_profile(std::vector<std::vector<segment>> by_station,
                               std::vector<double> exits, bool aggregate)
    : by_station_(std::move(by_station)),
      exits_(std::move(exits)),
      aggregate_(aggregate) {
  exits_.resize(by_station_.size(), 0.0);

  std::vector<double> cuts;
  for (auto const& segs : by_station_) {
    for (auto const& s : segs) {
      cuts.push_back(s.start);
      cuts.push_back(s.end);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    auto const mid = 0.5 * (cuts[k] + cuts[k + 1]);
    interval iv{cuts[k], cuts[k + 1], {}};
    bool any = false;
    for (std::size_t s = 0; s < by_station_.size(); ++s) {
      auto const r = rate(s, mid);
      any = any || !std::isnan(r);
      iv.rates.push_back(r);
    }
    if (any) {
      intervals_.push_back(std::move(iv));
    }
  }
}

double demand_profile::coverage_start() const {
  return intervals_.empty() ? 0.0 : intervals_.front().start;
}

double demand_profile::coverage_end() const {
  return intervals_.empty() ? 0.0 : intervals_.back().end;
}

double demand_profile::rate(std::size_t station, double t) const {
  auto const& segs = by_station_.at(station);
  auto const it = std::upper_bound(
      segs.begin(), segs.end(), t,
      [](double x, segment const& s) { return x < s.end; });
  if (it == segs.end() || t < it->start) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return it->rate();
}

std::vector<std::string> demand_profile::gaps(double t1, double t2) const {
  std::vector<std::string> out;
  if (by_station_.empty()) {
    out.push_back("profile has no stations");
    return out;
  }
  auto const report = [&](std::size_t s, double a, double b) {
    auto const who = aggregate_ ? std::string{"line"}
                                : "station " + std::to_string(s + 1);
    out.push_back(who + ": no data for " + format_clock(a) + "-" +
                  format_clock(b));
  };
  for (std::size_t s = 0; s < by_station_.size(); ++s) {
    auto cursor = t1;
    for (auto const& seg : by_station_[s]) {
      if (seg.end <= cursor + time_eps) {
        continue;
      }
      if (seg.start >= t2 - time_eps) {
        break;
      }
      if (seg.start > cursor + time_eps) {
        report(s, cursor, seg.start);
      }
      cursor = std::max(cursor, seg.end);
    }
    if (cursor < t2 - time_eps) {
      report(s, cursor, t2);
    }
  }
  return out;
}

demand_profile build_profile(std::vector<traffic_record> const& records,
                             bool aggregate) {
  int stations = 0;
  for (auto const& r : records) {
    if (r.interval_end <= r.interval_start || r.n_in < 0 || r.n_out < 0 ||
        r.station_id < 1) {
      throw validation_error("invalid traffic record");
    }
    stations = std::max(stations, r.station_id);
  }
  if (aggregate) {
    stations = records.empty() ? 0 : 1;
  }

  std::vector<std::vector<demand_profile::segment>> by_station(
      static_cast<std::size_t>(stations));
  std::vector<double> exits(static_cast<std::size_t>(stations), 0.0);
  for (auto const& r : records) {
    auto const s = aggregate ? 0U : static_cast<std::size_t>(r.station_id - 1);
    by_station[s].push_back({r.interval_start, r.interval_end, r.n_in});
    exits[s] += r.n_out;
  }

  for (std::size_t s = 0; s < by_station.size(); ++s) {
    auto& segs = by_station[s];
    std::sort(segs.begin(), segs.end(), [](auto const& a, auto const& b) {
      return a.start < b.start;
    });
    for (std::size_t k = 1; k < segs.size(); ++k) {
      if (segs[k].start < segs[k - 1].end - time_eps) {
        throw conflict_error(
            "station " + std::to_string(s + 1) + ": interval " +
            format_clock(segs[k].start) + "-" + format_clock(segs[k].end) +
            " overlaps " + format_clock(segs[k - 1].start) + "-" +
            format_clock(segs[k - 1].end));
      }
    }
  }
  return demand_profile{std::move(by_station), std::move(exits), aggregate};
}

double total_traffic(demand_profile const& profile, double t1, double t2) {
  if (t2 < t1) {
    throw validation_error("total_traffic: window end before start");
  }
  if (t1 == t2) {
    return 0.0;
  }
  auto const gaps = profile.gaps(t1, t2);
  if (!gaps.empty()) {
    std::string msg = "demand does not cover " + format_clock(t1) + "-" +
                      format_clock(t2) + ":";
    for (auto const& g : gaps) {
      msg += "\n  " + g;
    }
    throw coverage_error(msg);
  }
  double q = 0.0;
  for (std::size_t s = 0; s < profile.stations(); ++s) {
    for (auto const& seg : profile.segments(s)) {
      auto const overlap = std::min(seg.end, t2) - std::max(seg.start, t1);
      if (overlap > 0.0) {
        q += seg.passengers * (overlap / (seg.end - seg.start));
      }
    }
  }
  return q;
}

}  // namespace urt
