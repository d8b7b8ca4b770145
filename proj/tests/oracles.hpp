#pragma once

// Brute-force oracles and random scenario generators shared by the unit and
// acceptance suites. Nothing here calls the solver code paths it checks.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>

#include "urt/model.hpp"

namespace urt::oracle {

struct argmax_result {
  double x;
  double value;
  double step;
};

// Plain loop over n evenly spaced points; first maximum wins.
template <typename Fn>
argmax_result brute_argmax(double lo, double hi, std::size_t n, Fn&& fn) {
  auto const step = (hi - lo) / static_cast<double>(n - 1);
  argmax_result best{lo, -std::numeric_limits<double>::infinity(), step};
  for (std::size_t i = 0; i < n; ++i) {
    auto const x = i + 1 == n ? hi : lo + step * static_cast<double>(i);
    auto const v = fn(x);
    if (v > best.value) {
      best.x = x;
      best.value = v;
    }
  }
  return best;
}

// U_l(f) written out directly from the definitions, independent of the model
// and equilibrium code.
inline double direct_leader_utility(double f, double q, double b,
                                    economic_params const& p) {
  auto c = f / (2.0 * p.fare_curvature);
  if (c > p.max_fare) {
    c = p.max_fare;
  }
  auto qp = q * (1.0 - p.fare_elasticity * c + p.frequency_attraction * f);
  if (qp < 0.0) {
    qp = 0.0;
  }
  return c * qp - b * f;
}

inline double direct_theta(double f, double q, line_config const& line,
                           economic_params const& p) {
  auto c = f / (2.0 * p.fare_curvature);
  if (c > p.max_fare) {
    c = p.max_fare;
  }
  auto qp = q * (1.0 - p.fare_elasticity * c + p.frequency_attraction * f);
  if (qp < 0.0) {
    qp = 0.0;
  }
  return qp / (f * p.period * line.carriages * line.carriage_capacity);
}

struct random_case {
  line_config line;
  economic_params params;
  double demand;
};

inline double draw(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>{lo, hi}(rng);
}

// Random line + parameters + demand; B is drawn around Q/(2 alpha) so that
// interior, boundary and breakpoint optima all occur.
inline random_case random_scenario(std::mt19937_64& rng) {
  random_case c;
  c.line.stations = static_cast<int>(draw(rng, 2, 20));
  c.line.carriages = static_cast<int>(draw(rng, 4, 9));
  c.line.carriage_capacity = draw(rng, 200, 320);
  c.line.travel_time = draw(rng, 0.3, 1.5);
  c.line.operating_time = 18;
  c.line.min_headway = draw(rng, 60, 150);
  c.line.max_headway = draw(rng, 300, 900);

  auto& p = c.params;
  p.fare_curvature = draw(rng, 0.05, 1.0);
  p.fare_elasticity = draw(rng, 0.0, 0.02);
  p.frequency_attraction = draw(rng, 0.0, 0.02);
  p.max_fare = draw(rng, 20, 200);
  p.min_load_factor = draw(rng, 0.05, 0.6);
  p.period = 1.0;
  c.demand = draw(rng, 1e3, 5e4);
  p.cost_coefficient = draw(rng, 0.0, 1.2) * c.demand / (2.0 * p.fare_curvature);
  return c;
}

}  // namespace urt::oracle
