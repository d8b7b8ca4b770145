#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace urt {

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Input data problems.
struct schema_error : error {
  using error::error;
};
struct validation_error : error {
  using error::error;
};
struct conflict_error : error {
  using error::error;
};
struct coverage_error : error {
  using error::error;
};

// Bad or missing configuration keys, zero capacity, etc.
struct config_error : error {
  using error::error;
};

struct degenerate_demand_error : error {
  using error::error;
};

struct infeasible_error : error {
  infeasible_error(std::string const& what, std::vector<std::string> violations)
      : error(what), violations_(std::move(violations)) {}
  std::vector<std::string> const& violations() const { return violations_; }

private:
  std::vector<std::string> violations_;
};

struct convergence_error : error {
  convergence_error(std::string const& what, std::vector<double> trajectory)
      : error(what), trajectory_(std::move(trajectory)) {}
  std::vector<double> const& trajectory() const { return trajectory_; }

private:
  std::vector<double> trajectory_;
};

}  // namespace urt
