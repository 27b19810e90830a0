#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "parmine/corpus.hpp"
#include "parmine/filter.hpp"
#include "parmine/random.hpp"

namespace parmine::synthetic {

// A toy language pair with a known word mapping, used for fixtures,
// benchmarks and end-to-end tests. Source words look Polish (with
// diacritics), target words look English.
struct LanguageOptions {
  std::uint64_t seed = 7;
  std::size_t vocabulary = 1200;
  std::size_t min_words = 4;
  std::size_t max_words = 12;
  double function_word_rate = 0.25;  // target-only words ("the", "of", ...)
  double swap_rate = 0.1;            // adjacent reordering in the target
  double number_rate = 0.15;         // a shared number token
  double synonym_rate = 0.1;         // source words with two target renderings
  double template_rate = 0.06;       // phrasebook sentences that form analogies
};

class LanguagePair {
 public:
  explicit LanguagePair(const LanguageOptions& options = {});

  const std::string& src_lang() const { return src_lang_; }
  const std::string& tgt_lang() const { return tgt_lang_; }

  // A source sentence and its translation.
  BiSentence sample_pair(Rng& rng) const;
  // Stand-alone sentences with no counterpart.
  std::string sample_source(Rng& rng) const;
  std::string sample_target(Rng& rng) const;

  // Replaces about `rate` of the target's content words with random ones.
  std::string perturb_target(const std::string& tgt, double rate, Rng& rng) const;

  StopWords target_stop_words() const;
  SynonymTable target_synonyms() const;

 private:
  std::string sample_content(Rng& rng, std::size_t* index) const;
  std::string capitalize(const std::string& sentence) const;
  std::size_t sample_rank(Rng& rng) const;

  LanguageOptions options_;
  std::string src_lang_ = "pl";
  std::string tgt_lang_ = "en";
  std::vector<std::string> src_words_;
  std::vector<std::string> tgt_words_;
  std::vector<std::string> tgt_alternates_;  // empty when the word has one rendering
  std::vector<double> cdf_;
  std::vector<std::size_t> nouns_;  // word indices used in templates
};

BitextCorpus parallel_corpus(const LanguagePair& language, std::size_t size, Rng& rng);

struct ComparableOptions {
  std::size_t articles = 200;
  std::size_t pairs_per_article = 25;
  double deletion_rate = 0.1;   // one side of a pair dropped
  double insertion_rate = 0.1;  // unrelated sentence inserted on one side
  double noise_rate = 0.1;      // target lightly perturbed (pair stays parallel)
  bool markup = true;           // wrap the bodies in tags, references and tables
};

struct ComparableCorpus {
  std::vector<Document> src_dump;
  std::vector<Document> tgt_dump;
  TitleLinks links;
  std::vector<ArticlePair> articles;  // cleaned, as ingest would store them
  // True parallel pairs; origin.article_id and indices point into `articles`.
  std::vector<BiSentence> truth;
};

/// Splits `parallel` into consecutive chunks, one per article, and applies
/// the deletions, insertions and noise.
ComparableCorpus comparable_corpus(const LanguagePair& language, const BitextCorpus& parallel,
                                   const ComparableOptions& options, Rng& rng);

struct FixtureOptions {
  std::uint64_t seed = 2015;
  std::size_t seed_pairs = 3000;
  std::size_t parallel_pairs = 5000;
  ComparableOptions comparable;
  std::size_t eval_segments = 20;
  std::size_t eval_per_segment = 5;
};

// Writes dumps, links, seed corpus, filter resources, cascade config and a
// pipeline.json into dir. Deterministic for given options.
void write_fixture(const std::filesystem::path& dir, const FixtureOptions& options = {});

}  // namespace parmine::synthetic
