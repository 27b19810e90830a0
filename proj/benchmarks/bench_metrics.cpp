#include <benchmark/benchmark.h>

#include "parmine/metrics.hpp"
#include "parmine/random.hpp"

namespace {

std::vector<parmine::EvalPair> corpus(std::size_t n) {
  parmine::Rng rng(5);
  std::vector<parmine::EvalPair> out(n);
  for (auto& p : out) {
    p.references.emplace_back();
    const std::size_t len = 8 + rng.below(20);
    for (std::size_t k = 0; k < len; ++k) p.references[0].push_back("w" + std::to_string(rng.below(200)));
    p.hypothesis = p.references[0];
    for (auto& w : p.hypothesis) {
      if (rng.uniform() < 0.2) w = "w" + std::to_string(rng.below(200));
    }
    if (len > 4) std::swap(p.hypothesis[0], p.hypothesis[len / 2]);
  }
  return out;
}

void BM_Metric(benchmark::State& state) {
  const auto metric = static_cast<parmine::Metric>(state.range(0));
  const auto c = corpus(1000);
  for (auto _ : state) benchmark::DoNotOptimize(parmine::corpus_score(c, metric));
  state.SetLabel(std::string(parmine::metric_name(metric)));
}
BENCHMARK(BM_Metric)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

void BM_Bootstrap(benchmark::State& state) {
  const auto a = corpus(200);
  auto b = a;
  for (auto& p : b) p.hypothesis.pop_back();
  for (auto _ : state) {
    benchmark::DoNotOptimize(parmine::bootstrap_diff(a, b, parmine::Metric::bleu, 1000, 1));
  }
}
BENCHMARK(BM_Bootstrap)->Unit(benchmark::kMillisecond);

}  // namespace
