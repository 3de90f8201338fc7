// Serial reference vs OpenMP kernels.  Arg 0 selects the serial path, 1 the parallel one.

#include <benchmark/benchmark.h>

#include <cmath>

#include "levyshrink/kernels.hpp"

namespace ks = levyshrink::kernels;
using levyshrink::MeixnerZParams;
using levyshrink::SubordinatorSpec;

namespace {

ks::Exec exec_of(const benchmark::State& state) {
  return state.range(0) == 0 ? ks::Exec::serial : ks::Exec::parallel;
}

void BM_SubordinatorIncrements(benchmark::State& state) {
  const auto spec = SubordinatorSpec::gamma(1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ks::subordinator_increments(spec, 1 << 18, 7, exec_of(state)));
  }
}

void BM_TwoGroupsIncrements(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(ks::two_groups_increments(1.0, 0.01, 2.0, 1 << 18, 7, exec_of(state)));
  }
}

void BM_GaussianNoise(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(ks::gaussian_noise(1 << 20, 7, exec_of(state)));
  }
}

void BM_MeixnerIncrements(benchmark::State& state) {
  const auto piece = MeixnerZParams{}.piece(64);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ks::meixner_increments(piece, 1 << 14, 7, 200, false, exec_of(state)));
  }
}

void BM_SubordinatorSums(benchmark::State& state) {
  const auto spec = SubordinatorSpec::inverse_gaussian(1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ks::subordinator_sums(spec, 64, 1 << 12, 7, exec_of(state)));
  }
}

void BM_MeixnerSums(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(ks::meixner_sums(MeixnerZParams{}, 16, 1 << 10, 100, 7, exec_of(state)));
  }
}

void BM_LaplaceTransformMc(benchmark::State& state) {
  const auto spec = SubordinatorSpec::stable(0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ks::laplace_transform_mc(spec, 1.0, 1 << 18, 7, exec_of(state)));
  }
}

void BM_ExceedanceFraction(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(ks::exceedance_fraction(1.0, 0.01, 2.0, 1.0, 1 << 20, 7, exec_of(state)));
  }
}

void BM_ParallelMap(benchmark::State& state) {
  auto f = [](std::size_t i) {
    double acc = 0.0;
    for (int k = 1; k <= 200; ++k) acc += std::log1p(static_cast<double>(i + k));
    return acc;
  };
  for (auto _ : state) {
    benchmark::DoNotOptimize(ks::parallel_map<double>(1 << 14, f, exec_of(state)));
  }
}

}  // namespace

BENCHMARK(BM_SubordinatorIncrements)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TwoGroupsIncrements)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GaussianNoise)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MeixnerIncrements)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SubordinatorSums)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MeixnerSums)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LaplaceTransformMc)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExceedanceFraction)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ParallelMap)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
