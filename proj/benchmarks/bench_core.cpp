#include <benchmark/benchmark.h>

#include <cmath>

#include "celgc/algorithms.hpp"
#include "celgc/noise.hpp"
#include "celgc/objectives.hpp"
#include "celgc/theory.hpp"

namespace {

celgc::ParamVector random_vector(std::size_t dim, std::uint64_t seed) {
  celgc::CounterRng rng(seed, 0, 0);
  celgc::ParamVector v(dim);
  for (double& x : v) x = (rng.next_unit() - 0.5) * 4.0;
  return v;
}

void BM_euclidean_norm(benchmark::State& state) {
  const auto v = random_vector(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(celgc::euclidean_norm(v));
  }
}
BENCHMARK(BM_euclidean_norm)->Arg(8)->Arg(128)->Arg(1024);

void BM_clipped_step(benchmark::State& state) {
  const std::size_t dim = static_cast<std::size_t>(state.range(0));
  const auto x = random_vector(dim, 1);
  const auto g = random_vector(dim, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(celgc::clipped_step(x, g, 0.01, 0.5));
  }
}
BENCHMARK(BM_clipped_step)->Arg(8)->Arg(128)->Arg(1024);

void BM_sample_noise(benchmark::State& state) {
  const std::size_t dim = static_cast<std::size_t>(state.range(0));
  // Keep the Gaussian mass inside the ball as the dimension grows.
  const auto model = celgc::NoiseModel::truncated_gaussian(
      1.0, 1.0 / (3.0 * std::sqrt(static_cast<double>(dim))));
  std::uint64_t t = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(celgc::sample_noise(model, dim, {7, 0, t++}));
  }
}
BENCHMARK(BM_sample_noise)->Arg(8)->Arg(128);

void BM_stochastic_gradient(benchmark::State& state) {
  const auto obj = celgc::make_quartic(8);
  const auto model = celgc::NoiseModel::truncated_gaussian(1.0);
  const auto x = random_vector(8, 3);
  std::uint64_t t = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(celgc::stochastic_gradient(obj, model, x, {7, 0, t++}));
  }
}
BENCHMARK(BM_stochastic_gradient);

void BM_run_celgc(benchmark::State& state) {
  const auto obj = celgc::make_quartic(8);
  const auto model = celgc::NoiseModel::truncated_gaussian(1.0);
  celgc::HyperParams hp;
  hp.eta = 0.002;
  hp.gamma = 0.01;
  hp.sync_interval = 4;
  hp.total_iters = 200;
  hp.workers = static_cast<int>(state.range(0));
  hp.participation = hp.workers;
  const celgc::ParamVector x0{5, 0, 0, 0, 0, 0, 0, 0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(celgc::run_celgc(obj, model, hp, x0, 11, 10));
  }
  state.SetItemsProcessed(state.iterations() * hp.total_iters * hp.workers);
}
BENCHMARK(BM_run_celgc)->Arg(1)->Arg(4)->Arg(8);

void BM_theorem1_plan(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        celgc::theorem1_plan(0.1, 4, 1.0, 12.0, 3.0, 1.0, 1.0));
  }
}
BENCHMARK(BM_theorem1_plan);

}  // namespace

BENCHMARK_MAIN();
