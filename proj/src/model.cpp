#include "urt/model.hpp"

#include <stdexcept>

#include "urt/error.hpp"

namespace urt {

namespace {

void require(bool ok, char const* field, char const* rule) {
  if (!ok) {
    throw config_error("key '" + std::string{field} + "': " + rule);
  }
}

}  // namespace

void validate(line_config const& line) {
  require(line.stations >= 2, "m", "must be >= 2");
  require(line.carriages >= 1, "l", "must be >= 1");
  require(line.carriage_capacity >= 1, "p", "must be >= 1");
  require(line.travel_time > 0, "T_p", "must be > 0");
  require(line.operating_time > 0, "T_S", "must be > 0");
  require(line.min_headway > 0, "h_min", "must be > 0");
  require(line.min_headway < line.max_headway, "h_max", "must be > h_min");
}

void validate(economic_params const& p) {
  require(p.energy_per_trip >= 0, "Omega", "must be >= 0");
  require(p.maintenance_per_day >= 0, "S_0", "must be >= 0");
  require(p.wage_per_hour >= 0, "R", "must be >= 0");
  require(p.period > 0, "T", "must be > 0");
  require(p.depreciation >= 0, "phi", "must be >= 0");
  require(p.fare_elasticity >= 0, "e_c", "must be >= 0");
  require(p.frequency_attraction >= 0, "e_f", "must be >= 0");
  require(p.min_load_factor > 0 && p.min_load_factor < 1, "theta_0",
          "must be in (0, 1)");
  require(p.fare_curvature > 0, "alpha", "must be > 0");
  require(p.max_fare > 0, "c_max", "must be > 0");
  require(p.fare_conversion > 0, "fare_conversion", "must be > 0");
  require(!p.cost_coefficient || *p.cost_coefficient >= 0, "B",
          "must be >= 0");
}

frequency_bounds make_frequency_bounds(line_config const& line) {
  validate(line);
  return {3600.0 / line.max_headway, 3600.0 / line.min_headway};
}

traffic_response actual_traffic(double demand, double fare, double frequency,
                                economic_params const& params) {
  auto const q = demand * (1.0 - params.fare_elasticity * fare +
                           params.frequency_attraction * frequency);
  if (q < 0.0) {
    return {0.0, true};
  }
  return {q, false};
}

double income(double demand, double fare, double frequency,
              economic_params const& params) {
  return fare * actual_traffic(demand, fare, frequency, params).passengers;
}

double cost_coefficient(line_config const& line, economic_params const& p) {
  if (p.cost_coefficient) {
    return *p.cost_coefficient;
  }
  return p.energy_per_trip * p.period +
         2.0 * line.travel_time *
             (p.depreciation + p.wage_per_hour * p.period +
              p.maintenance_per_day * p.period / line.operating_time);
}

double operator_utility(double demand, double fare, double frequency,
                        double cost_coeff, economic_params const& params) {
  return income(demand, fare, frequency, params) -
         operation_cost(frequency, cost_coeff);
}

double load_factor(double actual_passengers, double frequency,
                   line_config const& line, double period) {
  if (frequency <= 0.0) {
    throw std::domain_error("load_factor: frequency must be positive");
  }
  return actual_passengers / (frequency * period * line.train_capacity());
}

feasibility_report check_feasibility(double theta, double frequency,
                                     economic_params const& params,
                                     frequency_bounds const& bounds) {
  feasibility_report r;
  if (theta < params.min_load_factor - constraint_tolerance) {
    r.violations.emplace_back("load factor below minimum");
  }
  if (theta > 1.0 + constraint_tolerance) {
    r.violations.emplace_back("load factor above capacity");
  }
  if (frequency < bounds.min - constraint_tolerance) {
    r.violations.emplace_back("frequency below minimum");
  }
  if (frequency > bounds.max + constraint_tolerance) {
    r.violations.emplace_back("frequency above maximum");
  }
  return r;
}

}  // namespace urt
