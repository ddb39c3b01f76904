#include <benchmark/benchmark.h>

#include <vector>

#include "memchan/gaussian.hpp"
#include "memchan/markov.hpp"
#include "memchan/mps.hpp"
#include "memchan/spin_ed.hpp"

namespace {

using namespace memchan;

void BM_MarkovCapacity(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  std::vector<std::vector<double>> cols(d, std::vector<double>(d));
  for (int j = 0; j < d; ++j) {
    double sum = 0.0;
    for (int i = 0; i < d; ++i) sum += cols[j][i] = 1.0 + (i * 7 + j * 3) % 5;
    for (int i = 0; i < d; ++i) cols[j][i] /= sum;
  }
  const auto m = markov::StochasticMatrix::from_columns(cols);
  for (auto _ : state) benchmark::DoNotOptimize(markov::capacity(m));
}
BENCHMARK(BM_MarkovCapacity)->Arg(2)->Arg(8)->Arg(32);

void BM_WolfCapacity(benchmark::State& state) {
  double g = -2.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mps::wolf_capacity(g));
    g = g > 2.0 ? -2.0 : g + 0.01;
  }
}
BENCHMARK(BM_WolfCapacity);

void BM_DiagDistribution(benchmark::State& state) {
  const auto spec = mps::wolf_mps(0.5);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mps::diag_distribution(spec, n));
}
BENCHMARK(BM_DiagDistribution)->DenseRange(8, 14, 2)->Unit(benchmark::kMillisecond);

void BM_ReducedDensity(benchmark::State& state) {
  const auto spec = mps::wolf_mps(0.5);
  const std::vector<int> sites{0, 1, 2, 3};
  for (auto _ : state) benchmark::DoNotOptimize(mps::reduced_density(spec, 40, sites));
}
BENCHMARK(BM_ReducedDensity)->Unit(benchmark::kMillisecond);

void BM_LanczosGroundState(benchmark::State& state) {
  const spin::SpinChainSpec spec{static_cast<int>(state.range(0)), true, spin::TransverseIsing{1.0}};
  for (auto _ : state) benchmark::DoNotOptimize(spin::ground_state(spec));
}
BENCHMARK(BM_LanczosGroundState)->DenseRange(8, 14, 2)->Unit(benchmark::kMillisecond);

void BM_GaussianDecay(benchmark::State& state) {
  const std::vector<int> seps{2, 4, 6, 8, 10, 12};
  for (auto _ : state) benchmark::DoNotOptimize(gaussian::theorem1_decay_experiment(0.5, 4, seps, 60));
}
BENCHMARK(BM_GaussianDecay)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
