#include <benchmark/benchmark.h>

#include <random>

#include "seg/hungarian.hpp"

namespace {

seg::CostMatrix random_matrix(std::size_t rows, std::size_t cols, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  seg::CostMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = d(rng);
  }
  return m;
}

void BM_HungarianSquare(benchmark::State& state) {
  auto n = static_cast<std::size_t>(state.range(0));
  auto m = random_matrix(n, n, 1);
  for (auto _ : state) benchmark::DoNotOptimize(seg::hungarian_min_cost(m).total_cost);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_HungarianSquare)->RangeMultiplier(2)->Range(8, 512)->Complexity(benchmark::oNCubed);

void BM_HungarianRectangular(benchmark::State& state) {
  auto n = static_cast<std::size_t>(state.range(0));
  auto m = random_matrix(n, n / 2, 2);
  for (auto _ : state) benchmark::DoNotOptimize(seg::rectangular_min_cost(m).total_cost);
}
BENCHMARK(BM_HungarianRectangular)->RangeMultiplier(4)->Range(16, 256);

}  // namespace
