#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace urt {

// Clock time in hours since midnight, parsed from "HH:MM".
double parse_clock(std::string_view text);
std::string format_clock(double hours);

struct traffic_record {
  int station_id{1};  // 1..m; 1 for aggregate (station-less) data
  double interval_start{0.0};
  double interval_end{0.0};
  double n_in{0.0};
  double n_out{0.0};
};

// Column names to look up in the header row. Either `interval` (combined
// "HH:MM-HH:MM") or the start/end pair must be present.
struct csv_schema {
  std::string interval_start{"interval_start"};
  std::string interval_end{"interval_end"};
  std::string interval{"interval"};
  std::string n_in{"n_in"};
  std::string n_out{"n_out"};
  std::string station{"station"};
};

struct parse_result {
  std::vector<traffic_record> records;
  bool has_station_column{false};
};

// Throws schema_error on a missing column and validation_error naming the
// offending line for malformed rows.
parse_result parse_traffic_csv(std::istream& in, csv_schema const& schema = {});
parse_result parse_traffic_csv_file(std::string const& path,
                                    csv_schema const& schema = {});

// Piecewise-constant arrival rates per station. Each station keeps its own
// sorted, non-overlapping segments; `intervals()` is the derived view over the
// elementary intervals formed by every segment boundary, where a rate of NaN
// marks a station without data on that interval. Immutable once built.
class demand_profile {
public:
  struct segment {
    double start;
    double end;
    double passengers;  // n_in over the segment
    double rate() const { return passengers / (end - start); }
  };

  struct interval {
    double start;
    double end;
    std::vector<double> rates;  // passengers/hour, one per station
  };

  demand_profile() = default;
  demand_profile(std::vector<std::vector<segment>> by_station,
                 std::vector<double> exits, bool aggregate);

  std::size_t stations() const { return by_station_.size(); }
  std::vector<segment> const& segments(std::size_t station) const {
    return by_station_.at(station);
  }
  std::vector<interval> const& intervals() const { return intervals_; }

  // Sum of n_out per station, used as destination weights.
  std::vector<double> const& exit_counts() const { return exits_; }

  // True when the source data had no station column (one pseudo-station).
  bool aggregate() const { return aggregate_; }

  double coverage_start() const;
  double coverage_end() const;

  // Rate of one station (0-based) at time t, or NaN outside its coverage.
  double rate(std::size_t station, double t) const;

  // Describes every uncovered stretch of [t1, t2], per station; empty when
  // fully covered.
  std::vector<std::string> gaps(double t1, double t2) const;

private:
  std::vector<std::vector<segment>> by_station_;
  std::vector<interval> intervals_;
  std::vector<double> exits_;
  bool aggregate_{false};
};

// Throws conflict_error when two records of one station overlap.
demand_profile build_profile(std::vector<traffic_record> const& records,
                             bool aggregate = false);

// Q = sum_i integral_{t1}^{t2} lambda_i(t) dt, exact for piecewise-constant
// rates. Throws coverage_error listing the gaps.
double total_traffic(demand_profile const& profile, double t1, double t2);

}  // namespace urt
