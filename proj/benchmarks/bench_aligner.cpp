#include <benchmark/benchmark.h>

#include <vector>

#include "parmine/aligner.hpp"
#include "parmine/random.hpp"

namespace {

// Comparable-article shape: a strong diagonal with noise elsewhere.
std::vector<double> article_matrix(std::size_t n, std::uint64_t seed) {
  parmine::Rng rng(seed);
  std::vector<double> s(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      s[i * n + j] = i == j ? 0.7 + 0.3 * rng.uniform() : 0.3 * rng.uniform();
    }
  }
  return s;
}

void BM_AlignAStar(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto s = article_matrix(n, 1);
  std::size_t calls = 0;
  for (auto _ : state) {
    auto r = parmine::align(n, n, [&](std::size_t i, std::size_t j) { return s[i * n + j]; });
    calls = r.similarity_calls;
    benchmark::DoNotOptimize(r.total_cost);
  }
  state.counters["sim_calls"] = static_cast<double>(calls);
}
BENCHMARK(BM_AlignAStar)->Arg(10)->Arg(50)->Arg(100)->Arg(400);

void BM_AlignFullDP(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto s = article_matrix(n, 1);
  for (auto _ : state) {
    auto r = parmine::align_bruteforce(n, n,
                                       [&](std::size_t i, std::size_t j) { return s[i * n + j]; });
    benchmark::DoNotOptimize(r.total_cost);
  }
  state.counters["sim_calls"] = static_cast<double>(n * n);
}
BENCHMARK(BM_AlignFullDP)->Arg(10)->Arg(50)->Arg(100);

}  // namespace
