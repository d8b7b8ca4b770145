#include "urt/commands.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "urt/config.hpp"
#include "urt/error.hpp"
#include "urt/format.hpp"
#include "urt/parallel.hpp"

namespace urt {

using nlohmann::json;

namespace {

std::string csv_field(std::string const& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) {
    return text;
  }
  std::string out = "\"";
  for (auto const ch : text) {
    if (ch == '"') {
      out += '"';
    }
    out += ch;
  }
  return out + "\"";
}

std::string join(std::vector<std::string> const& items) {
  std::string out;
  for (auto const& s : items) {
    out += (out.empty() ? "" : "; ") + s;
  }
  return out;
}

char const* yes_no(bool b) { return b ? "true" : "false"; }

optimize_row optimize_period(scenario const& s, period const& p) {
  optimize_row row;
  row.when = p;
  row.demand = total_traffic(s.demand, p.start, p.end);
  if (!(row.demand > 0.0)) {
    row.status = row_status::no_demand;
    row.violations = {"no demand in period"};
    return row;
  }
  try {
    row.result = solve_stackelberg(row.demand, s.line, s.params);
  } catch (infeasible_error const& e) {
    row.status = row_status::infeasible;
    row.violations = e.violations();
  }
  return row;
}

}  // namespace

std::string to_string(row_status s) {
  switch (s) {
    case row_status::ok: return "ok";
    case row_status::infeasible: return "infeasible";
    case row_status::no_demand: return "no_demand";
  }
  return "ok";
}

std::vector<optimize_row> cmd_optimize(scenario const& s) {
  return parallel_map<optimize_row>(
      s.periods.size(), [&](std::size_t i) { return optimize_period(s, s.periods[i]); });
}

std::vector<compare_row> cmd_compare(scenario const& s) {
  if (s.baseline.empty()) {
    throw validation_error("compare needs a baseline schedule");
  }
  auto const bounds = make_frequency_bounds(s.line);
  auto const cost_coeff = cost_coefficient(s.line, s.params);
  std::vector<double> baseline;
  for (auto const& p : s.periods) {
    auto const f = baseline_frequency(s, p);
    if (!f) {
      throw validation_error("no baseline frequency for period " + to_string(p));
    }
    if (*f < bounds.min - constraint_tolerance ||
        *f > bounds.max + constraint_tolerance) {
      throw validation_error("baseline " + to_string(p) + ": frequency " +
                             format_number(*f) + " outside bounds");
    }
    baseline.push_back(*f);
  }

  return parallel_map<compare_row>(s.periods.size(), [&](std::size_t i) {
    auto const opt = optimize_period(s, s.periods[i]);
    compare_row row;
    row.when = opt.when;
    row.demand = opt.demand;
    row.status = opt.status;
    row.violations = opt.violations;
    row.f_baseline = baseline[i];
    row.leader_utility_baseline =
        leader_objective(row.f_baseline, row.demand, cost_coeff, s.params);
    auto const theta_b =
        load_factor_at(row.f_baseline, row.demand, s.line, s.params);
    row.baseline_feasible =
        check_feasibility(theta_b, row.f_baseline, s.params, bounds).feasible();
    if (opt.status == row_status::ok) {
      row.f_star = opt.result.f_star;
      row.leader_utility_star = opt.result.leader_utility;
      row.c_star = opt.result.c_star;
      row.fare_currency = opt.result.c_star * s.params.fare_conversion;
      row.theta = opt.result.theta;
      if (row.leader_utility_baseline != 0.0) {
        row.improvement_percent =
            (row.leader_utility_star - row.leader_utility_baseline) /
            std::abs(row.leader_utility_baseline) * 100.0;
      }
    }
    return row;
  });
}

simulate_report cmd_simulate(scenario const& s, period const& when,
                             std::optional<double> frequency, std::size_t reps,
                             std::uint64_t seed, bool record_trace) {
  simulate_report rep;
  rep.when = when;
  rep.seed = seed;
  rep.demand = total_traffic(s.demand, when.start, when.end);
  if (frequency) {
    rep.frequency = *frequency;
  } else {
    rep.frequency = solve_stackelberg(rep.demand, s.line, s.params).f_star;
  }
  auto const bounds = make_frequency_bounds(s.line);
  if (rep.frequency < bounds.min - constraint_tolerance ||
      rep.frequency > bounds.max + constraint_tolerance) {
    throw validation_error("simulate: frequency " +
                           format_number(rep.frequency) + " outside bounds");
  }
  auto const fare = best_response_fare(rep.frequency, s.params.fare_curvature,
                                       s.params.max_fare);
  rep.actual_passengers =
      actual_traffic(rep.demand, fare, rep.frequency, s.params).passengers;
  rep.rate_scale =
      rep.demand > 0.0 ? rep.actual_passengers / rep.demand : 1.0;

  sim_config cfg;
  cfg.line = s.line;
  cfg.profile = s.demand;
  cfg.frequency = rep.frequency;
  cfg.start = when.start;
  cfg.horizon = when.end - when.start;
  cfg.rate_scale = rep.rate_scale;
  cfg.seed = seed;
  cfg.record_trace = record_trace;
  if (s.demand.stations() == static_cast<std::size_t>(s.line.stations)) {
    double total = 0.0;
    for (auto const w : s.demand.exit_counts()) {
      total += w;
    }
    if (total > 0.0) {
      cfg.destination_weights = s.demand.exit_counts();
    }
  }
  rep.summary = replicate(cfg, reps);
  return rep;
}

std::vector<sweep_row> cmd_sweep(scenario const& s, std::string const& param,
                                 double from, double to, std::size_t steps,
                                 period const& when,
                                 std::optional<double> fixed_frequency,
                                 std::optional<double> demand_override) {
  static std::vector<std::string> const known{"f", "c", "alpha", "e_c",
                                              "e_f", "B", "Q"};
  if (std::find(known.begin(), known.end(), param) == known.end()) {
    throw std::invalid_argument("unknown sweep parameter '" + param +
                                "' (expected f, c, alpha, e_c, e_f, B or Q)");
  }
  if (steps < 2) {
    throw std::invalid_argument("sweep needs at least 2 steps");
  }
  auto const demand =
      demand_override.value_or(total_traffic(s.demand, when.start, when.end));
  auto const cost_coeff = cost_coefficient(s.line, s.params);
  auto const alpha = s.params.fare_curvature;

  double held_f = 0.0;
  if (param == "c") {
    held_f = fixed_frequency ? *fixed_frequency
                             : solve_stackelberg(demand, s.line, s.params).f_star;
  }

  return parallel_map<sweep_row>(steps, [&](std::size_t i) {
    sweep_row row;
    row.value = grid_x(from, to, steps, i);
    if (param == "f") {
      row.frequency = row.value;
      row.fare = best_response_fare(row.value, alpha, s.params.max_fare);
      row.c_star = row.fare;
      row.leader_utility =
          leader_objective(row.value, demand, cost_coeff, s.params);
      row.follower_utility = passenger_utility(row.fare, row.value, alpha);
      row.theta = load_factor_at(row.value, demand, s.line, s.params);
      return row;
    }
    if (param == "c") {
      row.frequency = held_f;
      row.fare = row.value;
      row.c_star = best_response_fare(held_f, alpha, s.params.max_fare);
      row.leader_utility =
          operator_utility(demand, row.value, held_f, cost_coeff, s.params);
      row.follower_utility = passenger_utility(row.value, held_f, alpha);
      row.theta = load_factor(
          actual_traffic(demand, row.value, held_f, s.params).passengers,
          held_f, s.line, s.params.period);
      return row;
    }
    auto params = s.params;
    auto q = demand;
    if (param == "alpha") {
      params.fare_curvature = row.value;
    } else if (param == "e_c") {
      params.fare_elasticity = row.value;
    } else if (param == "e_f") {
      params.frequency_attraction = row.value;
    } else if (param == "B") {
      params.cost_coefficient = row.value;
    } else {
      q = row.value;
    }
    try {
      auto const r = solve_stackelberg(q, s.line, params);
      row.frequency = r.f_star;
      row.fare = r.c_star;
      row.c_star = r.c_star;
      row.leader_utility = r.leader_utility;
      row.follower_utility = r.follower_utility;
      row.theta = r.theta;
    } catch (infeasible_error const&) {
      row.status = row_status::infeasible;
    } catch (config_error const&) {
      row.status = row_status::infeasible;
    }
    return row;
  });
}

void write_csv(std::ostream& out, std::vector<optimize_row> const& rows,
               economic_params const& params) {
  out << "period,Q,status,f_star,c_star,fare_currency,U_l,U_f,Q_prime,theta,"
         "regime,leader_concave,load_factor_repaired,demand_clamped,B,"
         "violations\n";
  for (auto const& row : rows) {
    auto const& r = row.result;
    bool const ok = row.status == row_status::ok;
    auto const num = [&](double v) { return ok ? format_number(v) : ""; };
    out << to_string(row.when) << ',' << format_number(row.demand) << ','
        << to_string(row.status) << ',' << num(r.f_star) << ','
        << num(r.c_star) << ',' << num(r.c_star * params.fare_conversion)
        << ',' << num(r.leader_utility) << ',' << num(r.follower_utility)
        << ',' << num(r.actual_passengers) << ',' << num(r.theta) << ','
        << (ok ? to_string(r.where) : "") << ','
        << (ok ? yes_no(r.leader_concave) : "") << ','
        << (ok ? yes_no(r.load_factor_repaired) : "") << ','
        << (ok ? yes_no(r.demand_clamped) : "") << ',' << num(r.cost_coeff)
        << ',' << csv_field(join(row.violations)) << '\n';
  }
}

void write_csv(std::ostream& out, std::vector<compare_row> const& rows) {
  out << "period,Q,status,f_baseline,f_star,U_l_baseline,U_l_star,"
         "improvement_percent,c_star,fare_currency,theta,baseline_feasible,"
         "violations\n";
  for (auto const& r : rows) {
    bool const ok = r.status == row_status::ok;
    auto const num = [&](double v) { return ok ? format_number(v) : ""; };
    out << to_string(r.when) << ',' << format_number(r.demand) << ','
        << to_string(r.status) << ',' << format_number(r.f_baseline) << ','
        << num(r.f_star) << ',' << format_number(r.leader_utility_baseline)
        << ',' << num(r.leader_utility_star) << ','
        << (r.improvement_percent ? format_number(*r.improvement_percent) : "")
        << ',' << num(r.c_star) << ',' << num(r.fare_currency) << ','
        << num(r.theta) << ',' << yes_no(r.baseline_feasible) << ','
        << csv_field(join(r.violations)) << '\n';
  }
}

void write_csv(std::ostream& out, simulate_report const& report) {
  out << "replication,seed,mean_wait_hours,wait_empty,mean_segment_load,"
         "max_observed_load,arrivals,boarded,alighted,left_behind,"
         "onboard_at_horizon,waiting_at_horizon,trains_dispatched\n";
  for (std::size_t i = 0; i < report.summary.runs.size(); ++i) {
    auto const& m = report.summary.runs[i];
    out << i << ',' << replication_seed(report.seed, i) << ','
        << format_number(m.mean_wait) << ',' << yes_no(m.wait_empty) << ','
        << format_number(m.mean_segment_load) << ','
        << format_number(m.max_observed_load) << ',' << m.arrivals << ','
        << m.boarded << ',' << m.alighted << ',' << m.left_behind << ','
        << m.onboard_at_horizon << ',' << m.waiting_at_horizon << ','
        << m.trains_dispatched << '\n';
  }
}

void write_csv(std::ostream& out, std::vector<sweep_row> const& rows,
               std::string const& param) {
  out << csv_field("sweep_" + param) << ",f,c,c_star,U_l,U_f,theta,status\n";
  for (auto const& r : rows) {
    out << format_number(r.value) << ',' << format_number(r.frequency) << ','
        << format_number(r.fare) << ',' << format_number(r.c_star) << ','
        << format_number(r.leader_utility) << ','
        << format_number(r.follower_utility) << ',' << format_number(r.theta)
        << ',' << to_string(r.status) << '\n';
  }
}

json to_json(std::vector<optimize_row> const& rows,
             economic_params const& params) {
  json out = json::array();
  for (auto const& row : rows) {
    json j = {{"period", to_string(row.when)},
              {"Q", row.demand},
              {"status", to_string(row.status)},
              {"violations", row.violations}};
    if (row.status == row_status::ok) {
      auto const& r = row.result;
      j["f_star"] = r.f_star;
      j["c_star"] = r.c_star;
      j["fare_currency"] = r.c_star * params.fare_conversion;
      j["U_l"] = r.leader_utility;
      j["U_f"] = r.follower_utility;
      j["Q_prime"] = r.actual_passengers;
      j["theta"] = r.theta;
      j["B"] = r.cost_coeff;
      j["regime"] = to_string(r.where);
      j["leader_concave"] = r.leader_concave;
      j["load_factor_repaired"] = r.load_factor_repaired;
      j["demand_clamped"] = r.demand_clamped;
      j["iterations"] = r.iterations;
    }
    out.push_back(std::move(j));
  }
  return {{"parameters", to_json(params)}, {"periods", std::move(out)}};
}

json to_json(std::vector<compare_row> const& rows) {
  json out = json::array();
  for (auto const& r : rows) {
    json j = {{"period", to_string(r.when)},
              {"Q", r.demand},
              {"status", to_string(r.status)},
              {"f_baseline", r.f_baseline},
              {"U_l_baseline", r.leader_utility_baseline},
              {"baseline_feasible", r.baseline_feasible},
              {"violations", r.violations}};
    if (r.status == row_status::ok) {
      j["f_star"] = r.f_star;
      j["U_l_star"] = r.leader_utility_star;
      j["improvement_percent"] =
          r.improvement_percent ? json(*r.improvement_percent) : json(nullptr);
      j["c_star"] = r.c_star;
      j["fare_currency"] = r.fare_currency;
      j["theta"] = r.theta;
    }
    out.push_back(std::move(j));
  }
  return {{"periods", std::move(out)}};
}

json to_json(sim_metrics const& m) {
  return {{"mean_wait_hours", m.mean_wait},
          {"wait_empty", m.wait_empty},
          {"per_segment_load", m.per_segment_load},
          {"mean_segment_load", m.mean_segment_load},
          {"max_observed_load", m.max_observed_load},
          {"arrivals", m.arrivals},
          {"boarded", m.boarded},
          {"alighted", m.alighted},
          {"left_behind", m.left_behind},
          {"onboard_at_horizon", m.onboard_at_horizon},
          {"waiting_at_horizon", m.waiting_at_horizon},
          {"trains_dispatched", m.trains_dispatched},
          {"station_arrivals", m.station_arrivals},
          {"spread_aggregate", m.spread_aggregate}};
}

json to_json(simulate_report const& report) {
  auto const summary = [](metric_summary const& s) {
    return json{{"mean", s.mean}, {"ci95_half_width", s.half_width}};
  };
  json runs = json::array();
  for (auto const& r : report.summary.runs) {
    runs.push_back(to_json(r));
  }
  return {{"period", to_string(report.when)},
          {"frequency", report.frequency},
          {"Q", report.demand},
          {"Q_prime", report.actual_passengers},
          {"rate_scale", report.rate_scale},
          {"seed", report.seed},
          {"replications", report.summary.runs.size()},
          {"summary",
           {{"mean_wait_hours", summary(report.summary.mean_wait)},
            {"mean_segment_load", summary(report.summary.mean_segment_load)},
            {"boarded", summary(report.summary.boarded)},
            {"left_behind", summary(report.summary.left_behind)},
            {"trains_dispatched", summary(report.summary.trains_dispatched)}}},
          {"runs", std::move(runs)}};
}

json to_json(std::vector<sweep_row> const& rows, std::string const& param) {
  json out = json::array();
  for (auto const& r : rows) {
    out.push_back({{"value", r.value},
                   {"f", r.frequency},
                   {"c", r.fare},
                   {"c_star", r.c_star},
                   {"U_l", r.leader_utility},
                   {"U_f", r.follower_utility},
                   {"theta", r.theta},
                   {"status", to_string(r.status)}});
  }
  return {{"parameter", param}, {"rows", std::move(out)}};
}

int exit_code(std::vector<optimize_row> const& rows) {
  for (auto const& r : rows) {
    if (r.status != row_status::ok) {
      return exit_partial;
    }
  }
  return exit_ok;
}

int exit_code(std::vector<compare_row> const& rows) {
  for (auto const& r : rows) {
    if (r.status != row_status::ok) {
      return exit_partial;
    }
  }
  return exit_ok;
}

}  // namespace urt
