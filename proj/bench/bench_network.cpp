// Serial reference vs OpenMP kernels on synthetic Gaussian data.
//
//   ./perception_bench --benchmark_filter=Predict
//
// Thread counts above the machine's core count still run, they just
// oversubscribe.

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "perception/network.hpp"

namespace {

using perception::Matrix;
using perception::NetworkConfig;

Matrix gaussian(std::size_t rows, std::size_t cols) {
  std::mt19937_64 gen(42);
  std::normal_distribution<double> dist(0.0, 1.0);
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      m(i, j) = std::round(dist(gen) * 1000.0) / 1000.0;
    }
  }
  return m;
}

const Matrix& data() {
  static const Matrix m = gaussian(20000, 4);
  return m;
}

NetworkConfig config() {
  NetworkConfig c;
  c.n_neurons = 128;
  c.seed = 7;
  return c;
}

void BM_FitReference(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(perception::reference::fit_network(data(), config()));
  }
}

void BM_FitParallel(benchmark::State& state) {
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(perception::fit_network(data(), config(), threads));
  }
}

void BM_PredictReference(benchmark::State& state) {
  const auto model = perception::reference::fit_network(data(), config());
  for (auto _ : state) {
    benchmark::DoNotOptimize(perception::reference::predict(model, data()));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(data().rows()));
}

void BM_PredictParallel(benchmark::State& state) {
  const int threads = static_cast<int>(state.range(0));
  const auto model = perception::fit_network(data(), config(), threads);
  for (auto _ : state) {
    benchmark::DoNotOptimize(perception::predict(model, data(), threads));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(data().rows()));
}

}  // namespace

BENCHMARK(BM_FitReference)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FitParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PredictReference)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PredictParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->UseRealTime()->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
