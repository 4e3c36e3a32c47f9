// OpenMP kernels against their serial reference implementations.

#include "synthetic.hpp"

#include "sshl/eval.hpp"
#include "sshl/hasher.hpp"
#include "sshl/kernels.hpp"
#include "sshl/reference.hpp"
#include "sshl/trainer.hpp"

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

using namespace sshl;

namespace {

const KernelDescriptor kGauss = Gaussian{1.0};

void BM_GramParallel(benchmark::State& state) {
  const Matrix x = testing::random_matrix(state.range(0), 32, 1);
  for (auto _ : state) benchmark::DoNotOptimize(gram_matrix(kGauss, x, x));
}

void BM_GramReference(benchmark::State& state) {
  const Matrix x = testing::random_matrix(state.range(0), 32, 1);
  for (auto _ : state) benchmark::DoNotOptimize(reference::gram_matrix(kGauss, x, x));
}

std::vector<HashCode> random_codes(std::size_t n, int bits, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<HashCode> codes;
  codes.reserve(n);
  std::vector<int> signs(static_cast<std::size_t>(bits));
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& s : signs) s = (rng() & 1u) ? 1 : -1;
    codes.push_back(HashCode::from_signs(signs));
  }
  return codes;
}

void BM_RankParallel(benchmark::State& state) {
  const auto db = random_codes(static_cast<std::size_t>(state.range(0)), 64, 2);
  const auto q = random_codes(1, 64, 3);
  for (auto _ : state) benchmark::DoNotOptimize(rank_by_hamming(q[0], db, db.size()));
}

void BM_RankReference(benchmark::State& state) {
  const auto db = random_codes(static_cast<std::size_t>(state.range(0)), 64, 2);
  const auto q = random_codes(1, 64, 3);
  for (auto _ : state) benchmark::DoNotOptimize(reference::rank_by_hamming(q[0], db));
}

const Model& bench_model() {
  static const Model model = [] {
    const Dataset d = testing::gaussian_blobs(400, 16, 4, 2.0, 1.0, 4);
    TrainConfig c;
    c.bits = 16;
    c.seed = 4;
    c.max_outer_iterations = 3;
    c.kernels = {NormalizedLinear{}, Gaussian{1.0}};
    return train(d, c).model;
  }();
  return model;
}

void BM_DecisionParallel(benchmark::State& state) {
  const Model& m = bench_model();
  const Matrix q = testing::random_matrix(state.range(0), 16, 5);
  for (auto _ : state) benchmark::DoNotOptimize(decision_matrix(m, q));
}

void BM_DecisionReference(benchmark::State& state) {
  const Model& m = bench_model();
  const Matrix q = m.standardization.apply(testing::random_matrix(state.range(0), 16, 5));
  for (auto _ : state) benchmark::DoNotOptimize(reference::decision_matrix(m, q));
}

}  // namespace

BENCHMARK(BM_GramParallel)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GramReference)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RankParallel)->Arg(10000)->Arg(100000)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_RankReference)->Arg(10000)->Arg(100000)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_DecisionParallel)->Arg(200)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DecisionReference)->Arg(200)->Arg(2000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
