#include "horolab/experiments.hpp"

#include <benchmark/benchmark.h>

using namespace horolab;

namespace {

Exec exec_of(const benchmark::State& state) { return state.range(0) ? Exec::parallel : Exec::serial; }

void BM_CountPrimitive(benchmark::State& state) {
  const LatticeRegion region = translated_farey_region(RealMatrix::Identity(2, 2), 2e4, Box::unit(1));
  for (auto _ : state) benchmark::DoNotOptimize(count_primitive(region, exec_of(state)));
}

void BM_ExactStable(benchmark::State& state) {
  const auto target = StableSection::epsilon_box(2.0, 0.2, RealVector::Zero(1));
  for (auto _ : state)
    benchmark::DoNotOptimize(sthe_exact_stable(target, RealMatrix::Identity(2, 2), Box::unit(1), 9.0, exec_of(state)));
}

void BM_WindowSumD3(benchmark::State& state) {
  const auto target = StableSection::epsilon_box(1.0, 0.2, RealVector::Zero(2));
  for (auto _ : state)
    benchmark::DoNotOptimize(sthe_exact_stable(target, RealMatrix::Identity(3, 3), Box::unit(2), 2.0, exec_of(state)));
}

}  // namespace

// arg 0: serial reference, arg 1: OpenMP
BENCHMARK(BM_CountPrimitive)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExactStable)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WindowSumD3)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
