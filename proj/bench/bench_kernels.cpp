// OpenMP kernels against their serial twins.

#include "blockacs/coding.hpp"
#include "blockacs/generate.hpp"
#include "blockacs/learn.hpp"
#include "blockacs/rip.hpp"

#include <benchmark/benchmark.h>

using namespace blockacs;

namespace {

BlockDict dictionary(int K, int alpha, int s) {
  return gen_dictionary(64, {K, alpha, 1, s}, 1, DictionaryMode::per_block_orthonormal);
}

Vector measurement(const BlockDict& A, int s) {
  const BlockStructure st = A.structure().with_sparsity(s);
  Rng rng(2);
  return A.matrix() * draw_code_on_support(st, draw_support(st.K, s, rng), rng);
}

void BM_RipExactParallel(benchmark::State& state) {
  const BlockDict A = dictionary(static_cast<int>(state.range(0)), 2, 1);
  for (auto _ : state) benchmark::DoNotOptimize(rip_constant_exact(A, 4).delta);
}

void BM_RipExactSerial(benchmark::State& state) {
  const BlockDict A = dictionary(static_cast<int>(state.range(0)), 2, 1);
  for (auto _ : state) benchmark::DoNotOptimize(reference::rip_constant_exact_serial(A, 4).delta);
}

void BM_ExhaustiveParallel(benchmark::State& state) {
  const BlockDict A = dictionary(static_cast<int>(state.range(0)), 2, 3);
  const Vector y = measurement(A, 3);
  for (auto _ : state) benchmark::DoNotOptimize(exhaustive_code(A, y, 3).residual_norm);
}

void BM_ExhaustiveSerial(benchmark::State& state) {
  const BlockDict A = dictionary(static_cast<int>(state.range(0)), 2, 3);
  const Vector y = measurement(A, 3);
  for (auto _ : state) benchmark::DoNotOptimize(reference::exhaustive_code_serial(A, y, 3).residual_norm);
}

Matrix samples(const BlockDict& A, int n) {
  return A.matrix() * stack_codes(gen_codes(A.structure(), n, 3));
}

void BM_CodeSamplesParallel(benchmark::State& state) {
  const BlockDict A = dictionary(6, 2, 2);
  const Matrix Y = samples(A, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(code_samples(A, Y, 2, kCodingTolerance, 5000).data());
}

void BM_CodeSamplesSerial(benchmark::State& state) {
  const BlockDict A = dictionary(6, 2, 2);
  const Matrix Y = samples(A, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(reference::code_samples_serial(A, Y, 2, kCodingTolerance, 5000).data());
}

}  // namespace

BENCHMARK(BM_RipExactParallel)->Arg(8)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RipExactSerial)->Arg(8)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExhaustiveParallel)->Arg(8)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExhaustiveSerial)->Arg(8)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CodeSamplesParallel)->Arg(300)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CodeSamplesSerial)->Arg(300)->Arg(1000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
