#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "urt/demand.hpp"
#include "urt/model.hpp"

namespace urt {

// Uniform/exponential/categorical draws on top of std::mt19937_64, using
// explicit inverse-CDF transforms so the sample stream only depends on the
// engine (whose algorithm is fixed by the standard).
class sim_rng {
public:
  explicit sim_rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  double exponential(double rate);
  // Index drawn proportionally to weights[first..last).
  std::size_t categorical(std::vector<double> const& weights,
                          std::size_t first, std::size_t last);

private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

struct sim_config {
  line_config line;
  demand_profile profile;
  double frequency{12.0};  // trains/hour
  double start{0.0};       // clock time of t = 0 (hours)
  double horizon{1.0};     // hours
  double rate_scale{1.0};  // Q'/Q when driven from the equilibrium pipeline
  std::uint64_t seed{1};
  // Exit weights per station (size m); empty means uniform downstream.
  std::vector<double> destination_weights;
  bool record_trace{false};
};

struct trace_event {
  double time;      // clock hours
  std::string type; // dispatch | stop | terminate
  int station;      // 1-based
  long train;
};

struct sim_metrics {
  double mean_wait{0.0};  // hours, over boarded passengers
  bool wait_empty{true};  // nobody boarded
  std::vector<double> per_segment_load;  // m-1 mean load factors
  double mean_segment_load{0.0};
  double max_observed_load{0.0};  // largest on-board / capacity seen
  std::uint64_t arrivals{0};
  std::uint64_t boarded{0};
  std::uint64_t alighted{0};
  std::uint64_t left_behind{0};  // boarding denials by full trains
  std::uint64_t onboard_at_horizon{0};
  std::uint64_t waiting_at_horizon{0};
  std::uint64_t trains_dispatched{0};
  std::vector<std::uint64_t> station_arrivals;
  bool spread_aggregate{false};  // one-station profile spread over the line
  std::vector<trace_event> trace;
};

// Throws config_error for zero capacity, f <= 0, non-positive horizon,
// negative weights, or a demand profile that does not fit the line.
void validate(sim_config const& config);

sim_metrics simulate_line(sim_config const& config);

struct metric_summary {
  double mean{0.0};
  double half_width{0.0};  // 95% normal-approximation CI half width
};

struct replication_summary {
  std::vector<sim_metrics> runs;
  metric_summary mean_wait;
  metric_summary mean_segment_load;
  metric_summary boarded;
  metric_summary left_behind;
  metric_summary trains_dispatched;
};

// Seed of replication i is splitmix64(base_seed + i).
std::uint64_t replication_seed(std::uint64_t base_seed, std::size_t index);

// Replications run in parallel (OpenMP); the serial twin is the reference.
replication_summary replicate(sim_config const& config, std::size_t n_reps);
replication_summary replicate_serial(sim_config const& config,
                                     std::size_t n_reps);

metric_summary summarize(std::vector<double> const& values);

void write_trace_csv(std::ostream& out, std::vector<trace_event> const& trace);

}  // namespace urt
