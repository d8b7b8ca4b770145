#pragma once

#include <optional>
#include <string>
#include <vector>

namespace urt {

// Physical line. Times in hours except the headway bounds, which are seconds.
struct line_config {
  int stations{2};               // m
  int carriages{6};              // l
  double carriage_capacity{310}; // p, passengers per carriage
  double travel_time{1.0};       // T_p, one-way
  double operating_time{18.0};   // T_S, daily
  double min_headway{90.0};      // h_min [s]
  double max_headway{600.0};     // h_max [s]

  double train_capacity() const { return carriages * carriage_capacity; }
};

struct economic_params {
  double energy_per_trip{0.0};      // Omega
  double maintenance_per_day{0.0};  // S_0, per train
  double wage_per_hour{0.0};        // R
  double period{1.0};               // T [h]
  double depreciation{0.0};         // phi
  double fare_elasticity{0.0};      // e_c [1/fare unit]
  double frequency_attraction{0.0}; // e_f [h]
  double min_load_factor{0.3};      // theta_0
  double fare_curvature{1.0};       // alpha
  double max_fare{100.0};           // c_max [fare units]
  double fare_conversion{0.05};     // currency per fare unit, reporting only
  std::optional<double> cost_coefficient;  // explicit B, bypasses the formula
};

struct frequency_bounds {
  double min;  // trains/hour
  double max;
};

// Throw config_error naming the first offending field.
void validate(line_config const& line);
void validate(economic_params const& params);

frequency_bounds make_frequency_bounds(line_config const& line);

struct traffic_response {
  double passengers;  // Q'
  bool clamped;       // Q(1 - e_c c + e_f f) was negative
};

// Q' = Q (1 - e_c c + e_f f), clamped at zero.
traffic_response actual_traffic(double demand, double fare, double frequency,
                                economic_params const& params);

double income(double demand, double fare, double frequency,
              economic_params const& params);

// B = Omega T + 2 T_p (phi + R T + S_0 T / T_S), unless B is set explicitly.
double cost_coefficient(line_config const& line, economic_params const& params);

inline double operation_cost(double frequency, double cost_coeff) {
  return cost_coeff * frequency;
}

double operator_utility(double demand, double fare, double frequency,
                        double cost_coeff, economic_params const& params);

// U_f = c f - alpha c^2
inline double passenger_utility(double fare, double frequency, double alpha) {
  return fare * frequency - alpha * fare * fare;
}

// theta = Q' / (f T l p). Throws std::domain_error for f <= 0.
double load_factor(double actual_passengers, double frequency,
                   line_config const& line, double period);

// Absolute slack used when comparing against constraint boundaries.
inline constexpr double constraint_tolerance = 1e-8;

struct feasibility_report {
  std::vector<std::string> violations;
  bool feasible() const { return violations.empty(); }
};

feasibility_report check_feasibility(double theta, double frequency,
                                     economic_params const& params,
                                     frequency_bounds const& bounds);

}  // namespace urt
