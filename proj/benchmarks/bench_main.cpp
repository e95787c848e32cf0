#include <benchmark/benchmark.h>

#include <numbers>

#include "zladder/gsets.hpp"
#include "zladder/ladder.hpp"
#include "zladder/primes.hpp"
#include "zladder/quad.hpp"
#include "zladder/rs_core.hpp"

namespace {

using namespace zladder;

void BM_Theta(benchmark::State& state) {
  double t = 1e6;
  for (auto _ : state) {
    benchmark::DoNotOptimize(theta(t));
    t += 0.001;
  }
}
BENCHMARK(BM_Theta);

void BM_HardyZ(benchmark::State& state) {
  const double base = static_cast<double>(state.range(0));
  const RSConfig cfg{static_cast<int>(state.range(1))};
  double t = base;
  for (auto _ : state) {
    benchmark::DoNotOptimize(hardy_z(t, cfg));
    t += 0.01;
  }
}
BENCHMARK(BM_HardyZ)->Args({10'000, 2})->Args({1'000'000, 2})->Args({1'000'000, 5})->Args({10'000'000, 2});

void BM_GK21Collection(benchmark::State& state) {
  const WindowSpec w{1e6, 0.05, static_cast<double>(state.range(0))};
  const IntervalCollection g1 = build_g1(w, std::numbers::pi / 2);
  const QuadSpec q = with_grid_breakpoints({});
  for (auto _ : state) {
    benchmark::DoNotOptimize(integrate_collection([](double t) { return hardy_z(t); }, g1, q).value);
  }
}
BENCHMARK(BM_GK21Collection)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_Sieve(benchmark::State& state) {
  for (auto _ : state) {
    PrimeCounter pc(static_cast<std::uint64_t>(state.range(0)));
    benchmark::DoNotOptimize(pc.count(static_cast<double>(state.range(0))));
  }
}
BENCHMARK(BM_Sieve)->Arg(1'000'000)->Arg(10'000'000)->Unit(benchmark::kMillisecond);

void BM_OdeLadder(benchmark::State& state) {
  const LadderModel asym = ladder_asymptotic({10.0, kValidatedMax});
  const double anchor = mirror_point(asym, 1e6);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ladder_ode(anchor, static_cast<double>(state.range(0)), asym).eval(anchor + 1.0));
  }
}
BENCHMARK(BM_OdeLadder)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
