#include <benchmark/benchmark.h>

#include "parmine/lexicon.hpp"
#include "parmine/synthetic.hpp"

namespace {

void BM_TrainLexicon(benchmark::State& state) {
  parmine::synthetic::LanguagePair language;
  parmine::Rng rng(3);
  const auto seed =
      parmine::synthetic::parallel_corpus(language, static_cast<std::size_t>(state.range(0)), rng);
  for (auto _ : state) {
    auto r = parmine::train_lexicon(seed);
    benchmark::DoNotOptimize(r.lexicon.size());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TrainLexicon)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);

}  // namespace
