#include <cmath>

#include "benchmark/benchmark.h"

#include "urt/equilibrium.hpp"
#include "urt/parallel.hpp"
#include "urt/simulate.hpp"

namespace {

urt::economic_params bench_params() {
  urt::economic_params p;
  p.fare_elasticity = 0.01;
  p.frequency_attraction = 0.01;
  p.fare_curvature = 0.171428;
  p.cost_coefficient = 7004;
  return p;
}

void leader_grid(benchmark::State& state, bool parallel) {
  auto const p = bench_params();
  auto const n = static_cast<std::size_t>(state.range(0));
  auto const fn = [&](double f) {
    return urt::leader_objective(f, 30000, 7004, p);
  };
  for (auto _ : state) {
    auto const best = parallel ? urt::grid_argmax(6.0, 40.0, n, fn)
                               : urt::grid_argmax_serial(6.0, 40.0, n, fn);
    benchmark::DoNotOptimize(best);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}

void BM_grid_argmax(benchmark::State& state) { leader_grid(state, true); }
void BM_grid_argmax_serial(benchmark::State& state) { leader_grid(state, false); }

urt::sim_config bench_sim() {
  urt::sim_config c;
  c.line.stations = 16;
  c.line.carriages = 6;
  c.line.carriage_capacity = 310;
  c.line.travel_time = 1.0;
  c.profile = urt::build_profile({{1, 0.0, 1.0, 30000, 0}}, true);
  c.frequency = 24;
  c.horizon = 1.0;
  return c;
}

void BM_replicate(benchmark::State& state) {
  auto const c = bench_sim();
  for (auto _ : state) {
    benchmark::DoNotOptimize(urt::replicate(c, static_cast<std::size_t>(state.range(0))));
  }
}

void BM_replicate_serial(benchmark::State& state) {
  auto const c = bench_sim();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        urt::replicate_serial(c, static_cast<std::size_t>(state.range(0))));
  }
}

}  // namespace

BENCHMARK(BM_grid_argmax)->Arg(10000)->Arg(100000)->Arg(1000000);
BENCHMARK(BM_grid_argmax_serial)->Arg(10000)->Arg(100000)->Arg(1000000);
BENCHMARK(BM_replicate)->Arg(8)->Arg(32);
BENCHMARK(BM_replicate_serial)->Arg(8)->Arg(32);

BENCHMARK_MAIN();
