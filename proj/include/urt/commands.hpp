#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "urt/equilibrium.hpp"
#include "urt/scenario.hpp"
#include "urt/simulate.hpp"

namespace urt {

enum class row_status { ok, infeasible, no_demand };
std::string to_string(row_status s);

// Process exit codes.
inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 1;
inline constexpr int exit_partial = 2;

struct optimize_row {
  period when;
  double demand{0.0};  // Q
  row_status status{row_status::ok};
  equilibrium_result result;  // meaningful when status == ok
  std::vector<std::string> violations;
};

// Periods are solved in parallel; rows come back in period order.
std::vector<optimize_row> cmd_optimize(scenario const& s);

struct compare_row {
  period when;
  double demand{0.0};
  row_status status{row_status::ok};
  double f_baseline{0.0};
  double f_star{0.0};
  double leader_utility_baseline{0.0};
  double leader_utility_star{0.0};
  std::optional<double> improvement_percent;  // unset when baseline U_l == 0
  double c_star{0.0};
  double fare_currency{0.0};
  double theta{0.0};
  bool baseline_feasible{false};  // baseline satisfies the load-factor band
  std::vector<std::string> violations;
};

// Throws validation_error if the scenario has no baseline or a baseline
// frequency is out of bounds.
std::vector<compare_row> cmd_compare(scenario const& s);

struct simulate_report {
  period when;
  double frequency{0.0};
  double demand{0.0};
  double actual_passengers{0.0};
  double rate_scale{1.0};
  std::uint64_t seed{0};
  replication_summary summary;
};

// Runs `reps` replications of the period at frequency f (default: the
// period's equilibrium f*) with rates scaled by Q'/Q.
simulate_report cmd_simulate(scenario const& s, period const& when,
                             std::optional<double> frequency, std::size_t reps,
                             std::uint64_t seed, bool record_trace = false);

struct sweep_row {
  double value{0.0};
  double frequency{0.0};
  double fare{0.0};
  double c_star{0.0};
  double leader_utility{0.0};
  double follower_utility{0.0};
  double theta{0.0};
  row_status status{row_status::ok};
};

// param in {f, c, alpha, e_c, e_f, B, Q}. For `c` the frequency is held at
// `fixed_frequency` (default: f* of the period). Throws std::invalid_argument
// for an unknown parameter or steps < 2.
std::vector<sweep_row> cmd_sweep(scenario const& s, std::string const& param,
                                 double from, double to, std::size_t steps,
                                 period const& when,
                                 std::optional<double> fixed_frequency = {},
                                 std::optional<double> demand_override = {});

void write_csv(std::ostream& out, std::vector<optimize_row> const& rows,
               economic_params const& params);
void write_csv(std::ostream& out, std::vector<compare_row> const& rows);
void write_csv(std::ostream& out, simulate_report const& report);
void write_csv(std::ostream& out, std::vector<sweep_row> const& rows,
               std::string const& param);

nlohmann::json to_json(std::vector<optimize_row> const& rows,
                       economic_params const& params);
nlohmann::json to_json(std::vector<compare_row> const& rows);
nlohmann::json to_json(simulate_report const& report);
nlohmann::json to_json(std::vector<sweep_row> const& rows,
                       std::string const& param);
nlohmann::json to_json(sim_metrics const& m);

int exit_code(std::vector<optimize_row> const& rows);
int exit_code(std::vector<compare_row> const& rows);

}  // namespace urt
