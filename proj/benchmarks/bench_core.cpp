#include <benchmark/benchmark.h>

#include "ppt/ensembles.hpp"
#include "ppt/spectra.hpp"
#include "ppt/sweep.hpp"

using namespace ppt;

namespace {

void BM_PartialTranspose(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const BipartiteShape shape(n, n);
  const DensityMatrix rho = hilbert_schmidt_random(shape, {1, 0});
  for (auto _ : state) benchmark::DoNotOptimize(partial_transpose(rho.matrix(), shape));
}
BENCHMARK(BM_PartialTranspose)->DenseRange(2, 6);

void BM_Eigenvalues(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const DensityMatrix rho = hilbert_schmidt_random(BipartiteShape(n, n), {2, 0});
  for (auto _ : state) benchmark::DoNotOptimize(hermitian_eigenvalues(rho.matrix()));
}
BENCHMARK(BM_Eigenvalues)->DenseRange(2, 6);

void BM_CountNegative(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const DensityMatrix rho = hilbert_schmidt_random(BipartiteShape(n, n), {3, 0});
  for (auto _ : state) benchmark::DoNotOptimize(count_negative(rho));
}
BENCHMARK(BM_CountNegative)->DenseRange(2, 6);

void BM_SampleHilbertSchmidt(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const BipartiteShape shape(n, n);
  std::uint64_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(hilbert_schmidt_random(shape, {4, i++}));
}
BENCHMARK(BM_SampleHilbertSchmidt)->DenseRange(2, 6);

void BM_SweepSample(benchmark::State& state) {
  SweepConfig c;
  const int n = static_cast<int>(state.range(0));
  c.dims = {BipartiteShape(n, n)};
  std::uint64_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sweep_sample(c, c.dims.front(), i++));
}
BENCHMARK(BM_SweepSample)->DenseRange(2, 4);

}  // namespace
BENCHMARK_MAIN();
