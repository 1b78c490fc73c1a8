#include <benchmark/benchmark.h>

#include <vector>

#include "sigshape/analysis.hpp"
#include "sigshape/mocap.hpp"

using namespace sigshape;

namespace {

const std::vector<PiecewiseGeodesicCurve>& dataset(int joints) {
  static std::vector<std::vector<PiecewiseGeodesicCurve>> cache(32);
  auto& curves = cache[static_cast<std::size_t>(joints)];
  if (curves.empty()) {
    SynthSpec spec;
    spec.joints = joints;
    spec.noise = 0.02;
    for (const auto& clip : synth_classes(spec).clips) curves.push_back(clip.curve());
  }
  return curves;
}

DistanceParams params(Method m, int grid = 64) {
  DistanceParams p;
  p.method = m;
  p.grid = DPGrid::square(grid, 4);
  return p;
}

void BM_Parallel(benchmark::State& state, Method m) {
  const auto& curves = dataset(static_cast<int>(state.range(0)));
  const auto p = params(m, 32);
  for (auto _ : state) benchmark::DoNotOptimize(distance_matrix(curves, p, {}, true));
}

void BM_SingleThread(benchmark::State& state, Method m) {
  const auto& curves = dataset(static_cast<int>(state.range(0)));
  const auto p = params(m, 32);
  for (auto _ : state) benchmark::DoNotOptimize(distance_matrix(curves, p, {}, false));
}

// Pairwise reference without per-curve caching.
void BM_SerialReference(benchmark::State& state, Method m) {
  const auto& curves = dataset(static_cast<int>(state.range(0)));
  const auto p = params(m, 32);
  for (auto _ : state) benchmark::DoNotOptimize(distance_matrix_serial(curves, p));
}

void BM_PairSignature(benchmark::State& state) {
  const auto& curves = dataset(static_cast<int>(state.range(0)));
  const auto p = params(Method::Signature);
  for (auto _ : state) benchmark::DoNotOptimize(pair_distance(curves[0], curves[15], p));
}

void BM_PairSrvtDp(benchmark::State& state) {
  const auto& curves = dataset(static_cast<int>(state.range(0)));
  const auto p = params(Method::SrvtDp, static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(pair_distance(curves[0], curves[15], p));
}

}  // namespace

BENCHMARK_CAPTURE(BM_Parallel, signature, Method::Signature)->Arg(5)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_SingleThread, signature, Method::Signature)->Arg(5)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_SerialReference, signature, Method::Signature)->Arg(5)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Parallel, srvt_dp, Method::SrvtDp)->Arg(5)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_SingleThread, srvt_dp, Method::SrvtDp)->Arg(5)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_SerialReference, srvt_dp, Method::SrvtDp)->Arg(5)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PairSignature)->Arg(5)->Arg(10)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_PairSrvtDp)->Args({5, 32})->Args({5, 64})->Args({10, 64})->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
