// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "subdep/kernels.hpp"
#include "subdep/representation.hpp"

using namespace subdep;

namespace {

std::vector<double> decaying(std::size_t size) {
  std::vector<double> v(size);
  for (std::size_t i = 0; i < size; ++i) v[i] = std::exp(-1e-4 * static_cast<double>(i));
  return v;
}

template <kernels::Policy P>
void BM_TailRhs(benchmark::State& state) {
  const auto tail = decaying(static_cast<std::size_t>(state.range(0)));
  std::vector<double> out(tail.size());
  for (auto _ : state) {
    kernels::tail_rhs(P, 0.3, 0.7, tail, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <kernels::Policy P>
void BM_ChunkedSum(benchmark::State& state) {
  const auto v = decaying(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::chunked_sum(P, v));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <kernels::Policy P>
void BM_ScaledBatch(benchmark::State& state) {
  const ModelParams params(1.0, 2);
  const InitialData init = InitialData::power_law(1.0, 1.5);
  static const auto traj = history_trajectory(params, init, 2000.0);
  const TrajectoryHistory history(traj);
  std::vector<ScaledQuery> queries;
  for (int i = 0; i < state.range(0); ++i) {
    const double tau = 100.0 + 1900.0 * i / static_cast<double>(state.range(0));
    queries.push_back({0.5 * tau + 2.0, tau});
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(scaled_cluster_batch(P, queries, init, history, params));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_TailRhs<kernels::Policy::Serial>)->Range(1 << 12, 1 << 20);
BENCHMARK(BM_TailRhs<kernels::Policy::Parallel>)->Range(1 << 12, 1 << 20);
BENCHMARK(BM_ChunkedSum<kernels::Policy::Serial>)->Range(1 << 12, 1 << 20);
BENCHMARK(BM_ChunkedSum<kernels::Policy::Parallel>)->Range(1 << 12, 1 << 20);
BENCHMARK(BM_ScaledBatch<kernels::Policy::Serial>)->Arg(64)->Arg(256);
BENCHMARK(BM_ScaledBatch<kernels::Policy::Parallel>)->Arg(64)->Arg(256);

BENCHMARK_MAIN();
