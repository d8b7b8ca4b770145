#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "urt/model.hpp"

namespace urt {

enum class regime { interior, boundary_low, boundary_high, breakpoint };

std::string to_string(regime r);

struct equilibrium_result {
  double f_star{0.0};
  double c_star{0.0};
  double leader_utility{0.0};    // U_l
  double follower_utility{0.0};  // U_f
  double actual_passengers{0.0}; // Q'
  double theta{0.0};
  double cost_coeff{0.0};        // B used by the solve
  regime where{regime::interior};
  bool leader_concave{false};    // a2 < 0 on the unclamped-fare branch
  bool load_factor_repaired{false};
  bool demand_clamped{false};    // Q' hit zero at the optimum
  std::size_t iterations{0};     // 0 for the closed form
  std::vector<double> trajectory;  // leader frequencies, iterative play only
  feasibility_report feasibility;
};

// c* = min(f / 2 alpha, c_max)
double best_response_fare(double frequency, double alpha, double max_fare);

// U_l(f) with the follower's best response substituted.
double leader_objective(double frequency, double demand, double cost_coeff,
                        economic_params const& params);

// Coefficients of U_l(f) = a0 + a1 f + a2 f^2 on the branch where the fare
// is unclamped and Q' > 0: a1 = Q/2a - B, a2 = Q (e_f/2a - e_c/4a^2), a0 = 0.
struct leader_polynomial {
  double a0, a1, a2;
};
leader_polynomial unclamped_leader_polynomial(double demand, double cost_coeff,
                                              economic_params const& params);

struct frequency_choice {
  double f;
  regime where;
  bool leader_concave;
};

// Exact maximizer of U_l over [lo, hi]. U_l is piecewise quadratic in f
// (kinks at the fare clamp f = 2 alpha c_max and where Q' reaches zero); the
// candidates are piece endpoints and stationary points of concave pieces.
// Ties within 1e-9 relative resolve to the smaller f. Throws
// degenerate_demand_error when demand is zero.
frequency_choice closed_form_frequency(double demand, double cost_coeff,
                                       economic_params const& params,
                                       frequency_bounds const& bounds);

// theta(f) along the follower's best response.
double load_factor_at(double frequency, double demand, line_config const& line,
                      economic_params const& params);

// Closed intervals of [f_min, f_max] on which theta_0 <= theta(f) <= 1.
std::vector<frequency_bounds> load_feasible_intervals(
    double demand, line_config const& line, economic_params const& params,
    frequency_bounds const& bounds);

// Fills utilities, Q', theta and the feasibility report at a given f.
equilibrium_result evaluate_strategy(double frequency, double demand,
                                     line_config const& line,
                                     economic_params const& params);

// Backward induction. If theta is out of band at the unconstrained optimum,
// U_l is re-maximized over the load-feasible intervals. Throws
// infeasible_error when no frequency satisfies the constraints.
equilibrium_result solve_stackelberg(double demand, line_config const& line,
                                     economic_params const& params);

// Alternating play: the follower answers f_k with c*(f_k), the leader
// re-optimizes against that response map. Stops when |f_{k+1} - f_k| < tol.
// Throws convergence_error (with the trajectory) after max_iters.
equilibrium_result iterative_play(double demand, line_config const& line,
                                  economic_params const& params, double f_init,
                                  std::size_t max_iters = 100,
                                  double tol = 1e-9);

struct verification_report {
  double leader_gain{0.0};    // best U_l over deviations minus U_l at result
  double follower_gain{0.0};  // best U_f over fare deviations minus U_f
  double leader_best_f{0.0};
  double follower_best_c{0.0};
  double leader_tolerance{0.0};
  double follower_tolerance{0.0};
  bool leader_ok{false};
  bool follower_ok{false};
  bool passed() const { return leader_ok && follower_ok; }
};

// Relative gain below which a deviation counts as no improvement.
inline constexpr double equilibrium_tolerance = 1e-6;

// Grid deviation check of the equilibrium conditions. Leader deviations
// range over grid_n load-feasible frequencies with the follower re-responding;
// follower deviations range over grid_n fares in [0, c_max] at fixed f*.
verification_report verify_equilibrium(equilibrium_result const& result,
                                       double demand, line_config const& line,
                                       economic_params const& params,
                                       std::size_t grid_n = 10000);

}  // namespace urt
