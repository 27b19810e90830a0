#include <benchmark/benchmark.h>

#include <set>

#include "parmine/analogy.hpp"
#include "parmine/synthetic.hpp"
#include "parmine/text.hpp"

namespace {

void BM_FindAnalogies(benchmark::State& state) {
  parmine::synthetic::LanguagePair language;
  parmine::Rng rng(4);
  std::vector<parmine::Tokens> sentences;
  std::set<std::string> seen;
  while (sentences.size() < static_cast<std::size_t>(state.range(0))) {
    auto p = language.sample_pair(rng);
    if (seen.insert(p.src).second) sentences.push_back(parmine::tokenize(p.src, false));
  }
  std::size_t found = 0;
  for (auto _ : state) {
    found = parmine::find_analogies(sentences).size();
    benchmark::DoNotOptimize(found);
  }
  state.counters["quadruples"] = static_cast<double>(found);
}
BENCHMARK(BM_FindAnalogies)->Arg(250)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace
