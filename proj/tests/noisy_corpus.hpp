#pragma once

// A 1,000-pair bitext with 182 planted noisy pairs, for the filter tests.

#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "parmine/corpus.hpp"
#include "parmine/lexicon.hpp"
#include "parmine/synthetic.hpp"

namespace parmine::testing {

enum class Noise { none, duplicate, short_line, no_letters, misaligned, mistranslated };

struct NoisyCorpus {
  BitextCorpus corpus;
  std::vector<Noise> labels;  // parallel to corpus.pairs
  TranslationLexicon lexicon;

  std::size_t count(Noise kind) const {
    std::size_t n = 0;
    for (auto l : labels) n += l == kind;
    return n;
  }
};

inline NoisyCorpus noisy_corpus(const synthetic::LanguagePair& language, std::uint64_t seed) {
  Rng rng(seed);
  NoisyCorpus out;
  out.lexicon = train_lexicon(synthetic::parallel_corpus(language, 3000, rng)).lexicon;

  // Distinct pairs, so that the planted duplicates are the only repeats.
  std::unordered_set<std::string> used;
  auto distinct = [&](std::size_t n) {
    BitextCorpus c;
    while (c.size() < n) {
      auto p = language.sample_pair(rng);
      if (used.insert(p.src).second && used.insert("\t" + p.tgt).second) c.pairs.push_back(p);
    }
    return c;
  };
  const auto good = distinct(818);
  const auto spare = distinct(200);
  std::vector<std::pair<BiSentence, Noise>> rows;
  for (const auto& p : good.pairs) rows.emplace_back(p, Noise::none);
  for (std::size_t k = 0; k < 20; ++k) rows.emplace_back(good.pairs[rng.below(good.size())], Noise::duplicate);
  const char* short_src[] = {"Tak.", "Nie.", "Dobrze!", "Hm?", "Ok."};
  const char* short_tgt[] = {"Yes.", "No.", "Fine!", "Hm?", "Ok."};
  for (std::size_t k = 0; k < 20; ++k) {
    rows.push_back({{short_src[k % 5], k % 2 ? short_tgt[k % 5] : good.pairs[k].tgt, 0.5, {}},
                    Noise::short_line});
  }
  for (std::size_t k = 0; k < 20; ++k) {
    std::string numbers = std::to_string(1000 + rng.below(9000)) + " - " +
                          std::to_string(rng.below(100)) + " / " + std::to_string(rng.below(1000));
    rows.push_back({{numbers, k % 2 ? numbers : numbers + " (12)", 0.5, {}}, Noise::no_letters});
  }
  for (std::size_t k = 0; k < 80; ++k) {
    rows.push_back({{spare.pairs[k].src, spare.pairs[(k + 1 + rng.below(99)) % 100].tgt, 0.5, {}},
                    Noise::misaligned});
  }
  for (std::size_t k = 0; k < 42; ++k) {
    const auto& p = spare.pairs[100 + k];
    rows.push_back({{p.src, language.perturb_target(p.tgt, 0.7, rng), 0.5, {}}, Noise::mistranslated});
  }
  rng.shuffle(std::span<std::pair<BiSentence, Noise>>(rows));
  // Duplicates only count as noise when they come after their original.
  std::unordered_set<std::string> seen;
  out.corpus.src_lang = language.src_lang();
  out.corpus.tgt_lang = language.tgt_lang();
  for (auto& [pair, kind] : rows) {
    const bool repeat = !seen.insert(pair.src + '\t' + pair.tgt).second;
    if (kind == Noise::duplicate || (kind == Noise::none && repeat)) {
      kind = repeat ? Noise::duplicate : Noise::none;
    }
    out.corpus.pairs.push_back(pair);
    out.labels.push_back(kind);
  }
  return out;
}

}  // namespace parmine::testing
