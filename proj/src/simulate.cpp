#include "urt/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <tuple>

#include "urt/error.hpp"
#include "urt/format.hpp"
#include "urt/parallel.hpp"

namespace urt {

double sim_rng::exponential(double rate) {
  // 1 - u lies in (0, 1], so the log is finite.
  return -std::log(1.0 - uniform()) / rate;
}

std::size_t sim_rng::categorical(std::vector<double> const& weights,
                                 std::size_t first, std::size_t last) {
  double total = 0.0;
  for (auto i = first; i < last; ++i) {
    total += weights[i];
  }
  auto const target = uniform() * total;
  double acc = 0.0;
  for (auto i = first; i < last; ++i) {
    acc += weights[i];
    if (target < acc) {
      return i;
    }
  }
  // Rounding at the top end: last index with positive weight.
  for (auto i = last; i > first; --i) {
    if (weights[i - 1] > 0.0) {
      return i - 1;
    }
  }
  return last - 1;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t replication_seed(std::uint64_t base_seed, std::size_t index) {
  return splitmix64(base_seed + index);
}

void validate(sim_config const& c) {
  if (!(c.line.train_capacity() > 0.0)) {
    throw config_error("simulation: train capacity must be positive");
  }
  validate(c.line);
  if (!(c.frequency > 0.0)) {
    throw config_error("simulation: frequency must be positive");
  }
  if (!(c.horizon > 0.0)) {
    throw config_error("simulation: horizon must be positive");
  }
  if (!(c.rate_scale >= 0.0)) {
    throw config_error("simulation: rate scale must be >= 0");
  }
  auto const m = static_cast<std::size_t>(c.line.stations);
  if (c.profile.stations() != 1 && c.profile.stations() != m) {
    throw config_error("simulation: demand has " +
                       std::to_string(c.profile.stations()) +
                       " stations, line has " + std::to_string(m));
  }
  auto const gaps = c.profile.gaps(c.start, c.start + c.horizon);
  if (!gaps.empty()) {
    std::string msg = "simulation: demand does not cover the horizon:";
    for (auto const& g : gaps) {
      msg += "\n  " + g;
    }
    throw config_error(msg);
  }
  if (!c.destination_weights.empty()) {
    if (c.destination_weights.size() != m) {
      throw config_error("simulation: need one destination weight per station");
    }
    double total = 0.0;
    for (auto const w : c.destination_weights) {
      if (!(w >= 0.0)) {
        throw config_error("simulation: destination weights must be >= 0");
      }
      total += w;
    }
    if (!(total > 0.0)) {
      throw config_error("simulation: destination weights are all zero");
    }
  }
}

namespace {

struct passenger_stream {
  std::vector<double> arrival;     // sim time, sorted
  std::vector<std::uint32_t> dest; // 0-based station
};

struct visit {
  double time;
  std::size_t station;
  long train;
};

struct train_state {
  std::vector<std::uint64_t> by_dest;
  std::uint64_t onboard{0};
};

}  // namespace

sim_metrics simulate_line(sim_config const& c) {
  validate(c);
  auto const m = static_cast<std::size_t>(c.line.stations);
  auto const capacity = c.line.train_capacity();
  auto const cap_count = static_cast<std::uint64_t>(std::floor(capacity));
  auto const horizon = c.horizon;
  bool const spread = c.profile.stations() == 1;

  sim_metrics out;
  out.spread_aggregate = spread;
  out.station_arrivals.assign(m, 0);

  std::vector<double> weights = c.destination_weights;
  if (weights.empty()) {
    weights.assign(m, 1.0);
  }

  // Arrivals: piecewise Poisson per boarding station (none at the terminus).
  sim_rng rng{c.seed};
  std::vector<passenger_stream> streams(m);
  for (std::size_t s = 0; s + 1 < m; ++s) {
    auto const src = spread ? 0 : s;
    auto const share = spread ? 1.0 / static_cast<double>(m - 1) : 1.0;
    auto& stream = streams[s];
    for (auto const& seg : c.profile.segments(src)) {
      auto const a = std::max(seg.start, c.start) - c.start;
      auto const b = std::min(seg.end, c.start + horizon) - c.start;
      auto const rate = seg.rate() * share * c.rate_scale;
      if (b <= a || !(rate > 0.0)) {
        continue;
      }
      for (auto t = a + rng.exponential(rate); t < b;
           t += rng.exponential(rate)) {
        stream.arrival.push_back(t);
      }
    }
    double downstream = 0.0;
    for (auto d = s + 1; d < m; ++d) {
      downstream += weights[d];
    }
    stream.dest.reserve(stream.arrival.size());
    for (std::size_t i = 0; i < stream.arrival.size(); ++i) {
      auto const d = downstream > 0.0
                         ? rng.categorical(weights, s + 1, m)
                         : s + 1 + static_cast<std::size_t>(
                                       rng.uniform() *
                                       static_cast<double>(m - 1 - s));
      stream.dest.push_back(static_cast<std::uint32_t>(std::min(d, m - 1)));
    }
    out.station_arrivals[s] = stream.arrival.size();
    out.arrivals += stream.arrival.size();
  }

  // Trains leave station 1 at k/f. Trains already on the line at t = 0
  // (k < 0) run empty until they meet the first passengers.
  auto const f = c.frequency;
  auto const seg_time = c.line.travel_time / static_cast<double>(m - 1);
  auto const k_min = static_cast<long>(std::ceil(-c.line.travel_time * f));
  auto const k_max = static_cast<long>(std::floor(horizon * f + 1e-9));

  std::vector<visit> visits;
  for (auto k = k_min; k <= k_max; ++k) {
    auto const dispatch = static_cast<double>(k) / f;
    if (k >= 0) {
      ++out.trains_dispatched;
    }
    for (std::size_t j = 0; j < m; ++j) {
      auto const t = dispatch + static_cast<double>(j) * seg_time;
      if (t >= 0.0 && t <= horizon) {
        visits.push_back({t, j, k});
      }
    }
  }
  std::sort(visits.begin(), visits.end(), [](auto const& x, auto const& y) {
    return std::tie(x.time, x.station, x.train) <
           std::tie(y.time, y.station, y.train);
  });

  std::vector<train_state> trains(static_cast<std::size_t>(k_max - k_min + 1));
  for (auto& tr : trains) {
    tr.by_dest.assign(m, 0);
  }
  std::vector<std::size_t> head(m, 0);     // next passenger to board
  std::vector<std::size_t> arrived(m, 0);  // passengers on the platform so far
  std::vector<double> seg_sum(m - 1, 0.0);
  std::vector<std::uint64_t> seg_n(m - 1, 0);
  double wait_sum = 0.0;

  for (auto const& v : visits) {
    auto& tr = trains[static_cast<std::size_t>(v.train - k_min)];
    auto const j = v.station;

    auto const off = tr.by_dest[j];
    tr.by_dest[j] = 0;
    tr.onboard -= off;
    out.alighted += off;

    if (j + 1 < m) {
      auto& stream = streams[j];
      while (arrived[j] < stream.arrival.size() &&
             stream.arrival[arrived[j]] <= v.time) {
        ++arrived[j];
      }
      auto const queued = arrived[j] - head[j];
      auto const room = cap_count - tr.onboard;
      auto const n = std::min<std::uint64_t>(queued, room);
      for (std::size_t i = head[j]; i < head[j] + n; ++i) {
        wait_sum += v.time - stream.arrival[i];
        ++tr.by_dest[stream.dest[i]];
      }
      head[j] += n;
      tr.onboard += n;
      out.boarded += n;
      out.left_behind += queued - n;

      auto const load = static_cast<double>(tr.onboard) / capacity;
      out.max_observed_load = std::max(out.max_observed_load, load);
      if (v.train > 0) {
        seg_sum[j] += load;
        ++seg_n[j];
      }
    }

    if (c.record_trace) {
      auto const type = j == 0 ? "dispatch" : (j + 1 == m ? "terminate" : "stop");
      out.trace.push_back({c.start + v.time, type, static_cast<int>(j + 1),
                           v.train});
    }
  }

  for (auto const& tr : trains) {
    out.onboard_at_horizon += tr.onboard;
  }
  for (std::size_t s = 0; s < m; ++s) {
    out.waiting_at_horizon += streams[s].arrival.size() - head[s];
  }

  out.wait_empty = out.boarded == 0;
  out.mean_wait =
      out.wait_empty ? 0.0 : wait_sum / static_cast<double>(out.boarded);
  out.per_segment_load.resize(m - 1, 0.0);
  for (std::size_t j = 0; j + 1 < m; ++j) {
    if (seg_n[j] > 0) {
      out.per_segment_load[j] = seg_sum[j] / static_cast<double>(seg_n[j]);
    }
    out.mean_segment_load += out.per_segment_load[j];
  }
  out.mean_segment_load /= static_cast<double>(m - 1);
  return out;
}

metric_summary summarize(std::vector<double> const& values) {
  metric_summary s;
  if (values.empty()) {
    return s;
  }
  auto const n = static_cast<double>(values.size());
  for (auto const v : values) {
    s.mean += v;
  }
  s.mean /= n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (auto const v : values) {
      ss += (v - s.mean) * (v - s.mean);
    }
    s.half_width = 1.96 * std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  }
  return s;
}

namespace {

replication_summary summarize_runs(std::vector<sim_metrics> runs) {
  replication_summary out;
  auto const collect = [&](auto field) {
    std::vector<double> v;
    v.reserve(runs.size());
    for (auto const& r : runs) {
      v.push_back(static_cast<double>(field(r)));
    }
    return summarize(v);
  };
  out.mean_wait = collect([](auto const& r) { return r.mean_wait; });
  out.mean_segment_load =
      collect([](auto const& r) { return r.mean_segment_load; });
  out.boarded = collect([](auto const& r) { return r.boarded; });
  out.left_behind = collect([](auto const& r) { return r.left_behind; });
  out.trains_dispatched =
      collect([](auto const& r) { return r.trains_dispatched; });
  out.runs = std::move(runs);
  return out;
}

sim_config with_seed(sim_config c, std::uint64_t base, std::size_t i) {
  c.seed = replication_seed(base, i);
  return c;
}

}  // namespace

replication_summary replicate(sim_config const& config, std::size_t n_reps) {
  if (n_reps < 1) {
    throw config_error("replicate: need at least one replication");
  }
  validate(config);
  return summarize_runs(parallel_map<sim_metrics>(n_reps, [&](std::size_t i) {
    return simulate_line(with_seed(config, config.seed, i));
  }));
}

replication_summary replicate_serial(sim_config const& config,
                                     std::size_t n_reps) {
  if (n_reps < 1) {
    throw config_error("replicate: need at least one replication");
  }
  validate(config);
  return summarize_runs(
      parallel_map_serial<sim_metrics>(n_reps, [&](std::size_t i) {
        return simulate_line(with_seed(config, config.seed, i));
      }));
}

void write_trace_csv(std::ostream& out, std::vector<trace_event> const& trace) {
  out << "time,type,station,train_id\n";
  for (auto const& e : trace) {
    out << format_number(e.time) << ',' << e.type << ',' << e.station << ','
        << e.train << '\n';
  }
}

}  // namespace urt
