#include "urt/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/tools/roots.hpp>

#include "urt/error.hpp"
#include "urt/parallel.hpp"

namespace urt {

namespace {

constexpr double tie_tolerance = 1e-9;
constexpr double root_tolerance = 1e-8;

// The leader objective is a polynomial of degree <= 2 between consecutive
// kinks; these are the candidate kinks (some may fall outside [lo, hi]).
std::vector<double> objective_kinks(economic_params const& p, double lo,
                                    double hi) {
  auto const alpha = p.fare_curvature;
  std::vector<double> kinks{lo, hi};
  auto const add = [&](double x) {
    if (std::isfinite(x) && x > lo && x < hi) {
      kinks.push_back(x);
    }
  };
  // fare clamp
  add(2.0 * alpha * p.max_fare);
  // Q' = 0 on the unclamped branch: 1 + (e_f - e_c / 2 alpha) f = 0
  auto const slope = p.frequency_attraction - p.fare_elasticity / (2.0 * alpha);
  if (slope < 0.0) {
    add(-1.0 / slope);
  }
  // Q' = 0 on the clamped branch: 1 - e_c c_max + e_f f = 0
  if (p.frequency_attraction > 0.0) {
    add((p.fare_elasticity * p.max_fare - 1.0) / p.frequency_attraction);
  }
  std::sort(kinks.begin(), kinks.end());
  kinks.erase(std::unique(kinks.begin(), kinks.end()), kinks.end());
  return kinks;
}

struct candidate {
  double f;
  regime where;
};

// Strictly better by more than the tie tolerance.
bool improves(double value, double best) {
  auto const scale = std::max(std::abs(value), std::abs(best));
  return value > best + tie_tolerance * scale;
}

struct interval_optimum {
  double f;
  double value;
  regime where;
};

interval_optimum maximize_on(double demand, double cost_coeff,
                             economic_params const& p, double lo, double hi) {
  auto const kinks = objective_kinks(p, lo, hi);
  std::vector<candidate> candidates;
  for (std::size_t k = 0; k < kinks.size(); ++k) {
    auto const where = k == 0                      ? regime::boundary_low
                       : k + 1 == kinks.size()     ? regime::boundary_high
                                                   : regime::breakpoint;
    candidates.push_back({kinks[k], where});
  }

  auto const poly = unclamped_leader_polynomial(demand, cost_coeff, p);
  for (std::size_t k = 0; k + 1 < kinks.size(); ++k) {
    auto const a = kinks[k];
    auto const b = kinks[k + 1];
    auto const mid = 0.5 * (a + b);
    auto const fare = best_response_fare(mid, p.fare_curvature, p.max_fare);
    bool const unclamped = fare < p.max_fare;
    bool const positive = !actual_traffic(demand, fare, mid, p).clamped;
    // Only the unclamped, positive-demand piece is quadratic.
    if (unclamped && positive && poly.a2 < 0.0) {
      auto const s = -poly.a1 / (2.0 * poly.a2);
      if (s > a && s < b) {
        candidates.push_back({s, regime::interior});
      }
    }
  }

  std::sort(candidates.begin(), candidates.end(),
            [](auto const& x, auto const& y) { return x.f < y.f; });
  interval_optimum best{candidates.front().f,
                        leader_objective(candidates.front().f, demand,
                                         cost_coeff, p),
                        candidates.front().where};
  for (std::size_t k = 1; k < candidates.size(); ++k) {
    auto const v = leader_objective(candidates[k].f, demand, cost_coeff, p);
    if (improves(v, best.value)) {
      best = {candidates[k].f, v, candidates[k].where};
    }
  }
  return best;
}

struct frequency_pick {
  frequency_choice choice;
  bool repaired{false};
};

bool load_ok(double theta, economic_params const& p) {
  return theta >= p.min_load_factor - constraint_tolerance &&
         theta <= 1.0 + constraint_tolerance;
}

// Leader's optimal frequency given the follower's best-response map,
// honoring the load-factor band.
frequency_pick optimal_frequency(double demand, line_config const& line,
                                 economic_params const& p,
                                 frequency_bounds const& bounds,
                                 double cost_coeff) {
  auto const choice = closed_form_frequency(demand, cost_coeff, p, bounds);
  if (load_ok(load_factor_at(choice.f, demand, line, p), p)) {
    return {choice, false};
  }

  auto const pieces = load_feasible_intervals(demand, line, p, bounds);
  if (pieces.empty()) {
    auto const report = check_feasibility(
        load_factor_at(choice.f, demand, line, p), choice.f, p, bounds);
    auto violations = report.violations;
    violations.insert(violations.begin(),
                      "no frequency in bounds keeps the load factor within "
                      "[theta_0, 1]");
    throw infeasible_error("infeasible scenario: load-factor band is empty",
                           std::move(violations));
  }

  std::optional<interval_optimum> best;
  for (auto const& piece : pieces) {
    auto const opt = maximize_on(demand, cost_coeff, p, piece.min, piece.max);
    if (!best || improves(opt.value, best->value)) {
      best = opt;
    }
  }
  return {{best->f, best->where, choice.leader_concave}, true};
}

}  // namespace

std::string to_string(regime r) {
  switch (r) {
    case regime::interior: return "interior";
    case regime::boundary_low: return "boundary-low";
    case regime::boundary_high: return "boundary-high";
    case regime::breakpoint: return "breakpoint";
  }
  return "interior";
}

double best_response_fare(double frequency, double alpha, double max_fare) {
  return std::clamp(frequency / (2.0 * alpha), 0.0, max_fare);
}

double leader_objective(double frequency, double demand, double cost_coeff,
                        economic_params const& params) {
  auto const fare =
      best_response_fare(frequency, params.fare_curvature, params.max_fare);
  return operator_utility(demand, fare, frequency, cost_coeff, params);
}

leader_polynomial unclamped_leader_polynomial(double demand, double cost_coeff,
                                              economic_params const& p) {
  auto const alpha = p.fare_curvature;
  return {0.0, demand / (2.0 * alpha) - cost_coeff,
          demand * (p.frequency_attraction / (2.0 * alpha) -
                    p.fare_elasticity / (4.0 * alpha * alpha))};
}

frequency_choice closed_form_frequency(double demand, double cost_coeff,
                                       economic_params const& params,
                                       frequency_bounds const& bounds) {
  if (!(demand > 0.0)) {
    throw degenerate_demand_error("closed_form_frequency: demand must be > 0");
  }
  auto const poly = unclamped_leader_polynomial(demand, cost_coeff, params);
  auto const opt = maximize_on(demand, cost_coeff, params, bounds.min,
                               bounds.max);
  return {opt.f, opt.where, poly.a2 < 0.0};
}

double load_factor_at(double frequency, double demand, line_config const& line,
                      economic_params const& params) {
  auto const fare =
      best_response_fare(frequency, params.fare_curvature, params.max_fare);
  auto const q = actual_traffic(demand, fare, frequency, params).passengers;
  return load_factor(q, frequency, line, params.period);
}

std::vector<frequency_bounds> load_feasible_intervals(
    double demand, line_config const& line, economic_params const& params,
    frequency_bounds const& bounds) {
  auto const theta = [&](double f) {
    return load_factor_at(f, demand, line, params);
  };
  auto const feasible = [&](double f) { return load_ok(theta(f), params); };

  // theta = A/f + C on each piece, hence monotone between kinks.
  auto points = objective_kinks(params, bounds.min, bounds.max);
  auto const kinks = points;
  for (std::size_t k = 0; k + 1 < kinks.size(); ++k) {
    for (auto const target : {params.min_load_factor, 1.0}) {
      auto const g = [&](double f) { return theta(f) - target; };
      auto const ga = g(kinks[k]);
      auto const gb = g(kinks[k + 1]);
      if (ga == 0.0 || gb == 0.0 || (ga < 0.0) == (gb < 0.0)) {
        continue;
      }
      auto const [a, b] = boost::math::tools::bisect(
          g, kinks[k], kinks[k + 1], [](double x, double y) {
            return std::abs(y - x) < root_tolerance;
          });
      points.push_back(0.5 * (a + b));
    }
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  std::vector<frequency_bounds> out;
  auto const extend = [&](double a, double b) {
    if (!out.empty() && out.back().max >= a) {
      out.back().max = std::max(out.back().max, b);
    } else {
      out.push_back({a, b});
    }
  };
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (feasible(points[k])) {
      extend(points[k], points[k]);
    }
    if (k + 1 < points.size() &&
        feasible(0.5 * (points[k] + points[k + 1]))) {
      extend(points[k], points[k + 1]);
    }
  }
  return out;
}

equilibrium_result evaluate_strategy(double frequency, double demand,
                                     line_config const& line,
                                     economic_params const& params) {
  auto const bounds = make_frequency_bounds(line);
  equilibrium_result r;
  r.cost_coeff = cost_coefficient(line, params);
  r.f_star = frequency;
  r.c_star =
      best_response_fare(frequency, params.fare_curvature, params.max_fare);
  auto const traffic = actual_traffic(demand, r.c_star, frequency, params);
  r.actual_passengers = traffic.passengers;
  r.demand_clamped = traffic.clamped;
  r.leader_utility =
      operator_utility(demand, r.c_star, frequency, r.cost_coeff, params);
  r.follower_utility =
      passenger_utility(r.c_star, frequency, params.fare_curvature);
  r.theta = load_factor(r.actual_passengers, frequency, line, params.period);
  r.leader_concave =
      unclamped_leader_polynomial(demand, r.cost_coeff, params).a2 < 0.0;
  r.feasibility = check_feasibility(r.theta, frequency, params, bounds);
  return r;
}

equilibrium_result solve_stackelberg(double demand, line_config const& line,
                                     economic_params const& params) {
  validate(line);
  validate(params);
  auto const bounds = make_frequency_bounds(line);
  if (!(demand > 0.0)) {
    throw infeasible_error(
        "infeasible scenario: no demand",
        {"no demand: load factor below minimum at every frequency"});
  }
  auto const cost_coeff = cost_coefficient(line, params);
  auto const pick = optimal_frequency(demand, line, params, bounds, cost_coeff);
  auto r = evaluate_strategy(pick.choice.f, demand, line, params);
  r.where = pick.choice.where;
  r.leader_concave = pick.choice.leader_concave;
  r.load_factor_repaired = pick.repaired;
  return r;
}

equilibrium_result iterative_play(double demand, line_config const& line,
                                  economic_params const& params, double f_init,
                                  std::size_t max_iters, double tol) {
  validate(line);
  validate(params);
  auto const bounds = make_frequency_bounds(line);
  if (f_init < bounds.min - constraint_tolerance ||
      f_init > bounds.max + constraint_tolerance) {
    throw validation_error("iterative_play: f_init outside frequency bounds");
  }
  if (max_iters < 1 || !(tol > 0.0)) {
    throw validation_error("iterative_play: need max_iters >= 1 and tol > 0");
  }
  if (!(demand > 0.0)) {
    throw infeasible_error(
        "infeasible scenario: no demand",
        {"no demand: load factor below minimum at every frequency"});
  }
  auto const cost_coeff = cost_coefficient(line, params);

  std::vector<double> trajectory{f_init};
  auto f = f_init;
  for (std::size_t k = 1; k <= max_iters; ++k) {
    // The follower answers f with c*(f); the leader, having observed that
    // response, re-optimizes against the response map c*(.).
    auto const pick =
        optimal_frequency(demand, line, params, bounds, cost_coeff);
    auto const next = pick.choice.f;
    trajectory.push_back(next);
    if (std::abs(next - f) < tol) {
      auto r = evaluate_strategy(next, demand, line, params);
      r.where = pick.choice.where;
      r.leader_concave = pick.choice.leader_concave;
      r.load_factor_repaired = pick.repaired;
      r.iterations = k;
      r.trajectory = std::move(trajectory);
      return r;
    }
    f = next;
  }
  throw convergence_error("iterative_play: no convergence within " +
                              std::to_string(max_iters) + " iterations",
                          std::move(trajectory));
}

verification_report verify_equilibrium(equilibrium_result const& result,
                                       double demand, line_config const& line,
                                       economic_params const& params,
                                       std::size_t grid_n) {
  if (grid_n < 100) {
    throw validation_error("verify_equilibrium: grid_n must be >= 100");
  }
  auto const bounds = make_frequency_bounds(line);
  auto const cost_coeff = result.cost_coeff;
  constexpr double floor = 1e-12;
  verification_report rep;

  // The follower re-responds to every leader deviation, including f* itself.
  auto const leader_here =
      leader_objective(result.f_star, demand, cost_coeff, params);
  auto const leader_best =
      grid_argmax(bounds.min, bounds.max, grid_n, [&](double f) {
        if (!load_ok(load_factor_at(f, demand, line, params), params)) {
          return -std::numeric_limits<double>::infinity();
        }
        return leader_objective(f, demand, cost_coeff, params);
      });
  rep.leader_best_f = leader_best.x;
  rep.leader_gain = leader_best.value - leader_here;
  rep.leader_tolerance =
      std::max(floor, equilibrium_tolerance *
                          std::max(std::abs(leader_here),
                                   std::isfinite(leader_best.value)
                                       ? std::abs(leader_best.value)
                                       : 0.0));
  rep.leader_ok = rep.leader_gain <= rep.leader_tolerance;

  auto const alpha = params.fare_curvature;
  auto const follower_here =
      passenger_utility(result.c_star, result.f_star, alpha);
  auto const follower_best =
      grid_argmax(0.0, params.max_fare, grid_n, [&](double c) {
        return passenger_utility(c, result.f_star, alpha);
      });
  rep.follower_best_c = follower_best.x;
  rep.follower_gain = follower_best.value - follower_here;
  rep.follower_tolerance =
      std::max(floor, equilibrium_tolerance *
                          std::max(std::abs(follower_here),
                                   std::abs(follower_best.value)));
  rep.follower_ok = rep.follower_gain <= rep.follower_tolerance;
  return rep;
}

}  // namespace urt
