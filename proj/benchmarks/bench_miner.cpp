#include <benchmark/benchmark.h>

#include "parmine/classifier.hpp"
#include "parmine/lexicon.hpp"
#include "parmine/miner.hpp"
#include "parmine/synthetic.hpp"

namespace {

struct MiningInputs {
  parmine::TranslationLexicon lex;
  parmine::SimilarityModel model;
  std::vector<parmine::ArticlePair> store;
};

const MiningInputs& inputs() {
  static const MiningInputs in = [] {
    MiningInputs out;
    parmine::synthetic::LanguagePair language;
    parmine::Rng rng(6);
    auto seed = parmine::synthetic::parallel_corpus(language, 2000, rng);
    out.lex = parmine::train_lexicon(seed).lexicon;
    out.model = parmine::train_model(seed, out.lex).model;
    auto bitext = parmine::synthetic::parallel_corpus(language, 100 * 25, rng);
    parmine::synthetic::ComparableOptions options;
    options.articles = 100;
    out.store = parmine::synthetic::comparable_corpus(language, bitext, options, rng).articles;
    return out;
  }();
  return in;
}

void BM_MineCorpus(benchmark::State& state) {
  const auto& in = inputs();
  const auto workers = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    auto r = parmine::mine_corpus(in.store, in.model, in.lex, parmine::MiningConfig{}, workers);
    benchmark::DoNotOptimize(r.corpus.size());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(in.store.size()));
}
BENCHMARK(BM_MineCorpus)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace
