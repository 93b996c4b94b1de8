#include <benchmark/benchmark.h>

#include "sqg/sqg.hpp"

namespace {

sqg::SquareGraphon make_graphon(Eigen::Index n, std::uint64_t seed) {
  sqg::rng::Engine engine(seed);
  sqg::Vector pi = sqg::rng::dirichlet_row(engine, n);
  sqg::Matrix mu(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) mu(i, j) = engine.uniform();
  mu /= mu.sum();
  return sqg::new_square_graphon(std::move(pi), std::move(mu));
}

void BM_Compose(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  sqg::rng::Engine engine(1);
  const sqg::MarkovKernel a(sqg::rng::random_stochastic(engine, n, n));
  const sqg::MarkovKernel b(sqg::rng::random_stochastic(engine, n, n));
  for (auto _ : state) benchmark::DoNotOptimize(sqg::compose(a, b));
  state.SetComplexityN(n);
}
BENCHMARK(BM_Compose)->RangeMultiplier(2)->Range(4, 64)->Complexity();

void BM_PushforwardSquare(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  sqg::rng::Engine engine(2);
  const sqg::SquareGraphon g = make_graphon(n, 3);
  const sqg::MarkovKernel kappa(sqg::rng::random_stochastic(engine, n, 4));
  for (auto _ : state) benchmark::DoNotOptimize(sqg::pushforward_square(kappa, g.mu()));
  state.SetComplexityN(n);
}
BENCHMARK(BM_PushforwardSquare)->RangeMultiplier(2)->Range(4, 64)->Complexity();

void BM_TensorSquare(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  sqg::rng::Engine engine(4);
  const sqg::MarkovKernel kappa(sqg::rng::random_stochastic(engine, n, n));
  for (auto _ : state) benchmark::DoNotOptimize(sqg::tensor_square(kappa));
}
BENCHMARK(BM_TensorSquare)->RangeMultiplier(2)->Range(2, 16);

void BM_SampleKShape(benchmark::State& state) {
  const sqg::SquareGraphon g = make_graphon(6, 5);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        sqg::sample_kshape(g, 2, sqg::SampleStrategy::Mixed, state.range(0), 7));
}
BENCHMARK(BM_SampleKShape)->RangeMultiplier(4)->Range(64, 4096);

void BM_Hausdorff(benchmark::State& state) {
  const sqg::SquareGraphon g = make_graphon(5, 6);
  const sqg::SquareGraphon h = make_graphon(5, 7);
  const sqg::ShapeCloud a =
      sqg::sample_kshape(g, 2, sqg::SampleStrategy::Mixed, state.range(0), 8);
  const sqg::ShapeCloud b =
      sqg::sample_kshape(h, 2, sqg::SampleStrategy::Mixed, state.range(0), 9);
  for (auto _ : state) benchmark::DoNotOptimize(sqg::hausdorff(a, b));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Hausdorff)->RangeMultiplier(4)->Range(256, 4096)->Complexity();

void BM_Rebalance(benchmark::State& state) {
  const Eigen::Index k = state.range(0);
  sqg::rng::Engine engine(10);
  const sqg::SquareGraphon g = make_graphon(6, 11);
  const sqg::Matrix uniform_rows =
      sqg::Matrix::Constant(6, k, 1.0 / static_cast<double>(k));
  const sqg::Matrix raw = sqg::rng::random_stochastic(engine, 6, k);
  // blend close enough to uniform that the precondition holds
  const sqg::MarkovKernel kappa(0.02 * raw + 0.98 * uniform_rows);
  for (auto _ : state) benchmark::DoNotOptimize(sqg::rebalance_kernel(kappa, g));
}
BENCHMARK(BM_Rebalance)->DenseRange(2, 8, 2);

}  // namespace

BENCHMARK_MAIN();
