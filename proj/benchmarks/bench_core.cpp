#include <benchmark/benchmark.h>

#include <cmath>

#include "ratelab/deviation.hpp"
#include "ratelab/gibbs.hpp"
#include "ratelab/numeric.hpp"
#include "ratelab/orbitsets.hpp"
#include "ratelab/pressure.hpp"
#include "ratelab/rng.hpp"

using namespace ratelab;

static void BM_LogSumExp(benchmark::State& state) {
  SplitMix64 rng(1);
  std::vector<double> xs(state.range(0));
  for (double& x : xs) x = 40.0 * (rng.next_unit() - 0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(log_sum_exp(xs));
  }
}
BENCHMARK(BM_LogSumExp)->Arg(1 << 10)->Arg(1 << 16)->Arg(1 << 20);

static void BM_PeriodicPointsPower(benchmark::State& state) {
  MapSpec map = MapSpec::power(2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(periodic_points(map, state.range(0)));
  }
}
BENCHMARK(BM_PeriodicPointsPower)->Arg(12)->Arg(16);

static void BM_PeriodicPointsQuadratic(benchmark::State& state) {
  MapSpec map = MapSpec::quadratic(Cx{0.1, 0.0});
  for (auto _ : state) {
    benchmark::DoNotOptimize(periodic_points(map, state.range(0)));
  }
}
BENCHMARK(BM_PeriodicPointsQuadratic)->Arg(8)->Arg(10)->Arg(12)->Unit(benchmark::kMillisecond);

static void BM_PressureCurveQuadratic(benchmark::State& state) {
  OrbitSet orbit = periodic_points(MapSpec::quadratic(Cx{0.1, 0.0}), state.range(0));
  OrbitDerivCache cache = cache_log_derivs(orbit, 2);
  auto grid = default_t_grid();
  for (auto _ : state) {
    benchmark::DoNotOptimize(pressure_curve(cache, grid, 1));
  }
}
BENCHMARK(BM_PressureCurveQuadratic)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

static void BM_ShiftPressure(benchmark::State& state) {
  ShiftSpec spec = ShiftSpec::make(2, 1);
  ShiftPotential pot = ShiftPotential::nearest_neighbor(2, 1.0);
  Box box = Box::line(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        shift_pressure_estimate(spec, box, pot, Extension::Periodic, 0, 1));
  }
}
BENCHMARK(BM_ShiftPressure)->Arg(12)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);

static void BM_TransferMatrix(benchmark::State& state) {
  ShiftSpec spec = ShiftSpec::make(2, 1);
  // Range-r potential: agreement across the window span.
  int r = static_cast<int>(state.range(0));
  std::vector<std::array<int, 2>> window;
  for (int i = 0; i < r; ++i) window.push_back({i, 0});
  std::size_t size = 1;
  for (int i = 0; i < r; ++i) size *= 2;
  std::vector<double> table(size, 0.0);
  table[0] = table[size - 1] = 0.5;
  ShiftPotential pot{2, window, table, "span"};
  for (auto _ : state) {
    benchmark::DoNotOptimize(transfer_matrix_pressure(spec, pot));
  }
}
BENCHMARK(BM_TransferMatrix)->Arg(2)->Arg(6)->Arg(8);

static void BM_SeparatedSet(benchmark::State& state) {
  MapSpec map = MapSpec::power(2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(separated_set(map, 8, 0.1, state.range(0), 1));
  }
}
BENCHMARK(BM_SeparatedSet)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

static void BM_McBirkhoff(benchmark::State& state) {
  MapSpec map = MapSpec::power(2);
  MapPotential g = MapPotential::re_power(1).scaled(0.3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        mc_birkhoff_reference(map, 14, state.range(0), 2024, g, 2));
  }
}
BENCHMARK(BM_McBirkhoff)->Arg(100000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
