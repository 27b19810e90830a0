#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "parmine/corpus.hpp"
#include "parmine/text.hpp"

namespace parmine {

struct FilterReport {
  std::size_t input_count = 0;
  std::size_t kept_count = 0;
  std::size_t rejected_count = 0;
  std::map<std::string, std::size_t> rejections;  // rule -> count
  std::map<std::string, std::size_t> acceptances; // stage -> count (cascade only)

  std::string to_json() const;
};

struct FilterOutcome {
  BitextCorpus kept;
  BitextCorpus rejected;
  std::vector<std::string> rejected_rules;  // parallel to rejected.pairs
  FilterReport report;
};

inline constexpr std::string_view kRuleShort = "short";
inline constexpr std::string_view kRuleNoLetters = "no-letters";
inline constexpr std::string_view kRuleDuplicate = "duplicate";
inline constexpr std::string_view kRuleTranslatorError = "translator-error";
inline constexpr std::string_view kRuleExhausted = "exhausted";

/// Rules are checked in order: a side shorter than min_chars characters,
/// a side without letters, then an exact repeat of an earlier kept pair.
FilterOutcome remove_trivial(const BitextCorpus& corpus, std::size_t min_chars = 10);

struct StemRule {
  std::string suffix;
  std::string replacement;
};

/// Suffix stripper: the longest matching rule fires once, provided the stem
/// left in front of the suffix keeps at least min_stem characters.
class Stemmer {
 public:
  Stemmer() = default;
  Stemmer(std::vector<StemRule> rules, std::size_t min_stem);

  // English plural and third-person rules (sses->ss, ies->y, ss, us, is, s).
  static const Stemmer& english();
  // TSV: suffix <TAB> replacement (replacement may be empty).
  static Stemmer load(const std::string& path, std::size_t min_stem = 2);

  std::string stem(std::string_view word) const;

 private:
  std::vector<StemRule> rules_;  // longest suffix first
  std::size_t min_stem_ = 2;
};

using StopWords = std::unordered_set<std::string>;
using SynonymTable = std::unordered_map<std::string, std::vector<std::string>>;

StopWords load_stop_words(const std::string& path);
// TSV word <TAB> synonym; every entry is added in both directions.
SynonymTable load_synonyms(const std::string& path);

inline constexpr std::size_t kMaxSynonymVariants = 64;

// Dice coefficient over lowercased content-token sets (stop words and tokens
// without letters or digits removed). Two empty sets compare as 1.
double similarity_fast(const Tokens& a, const Tokens& b, const StopWords& stop_words);
double similarity_stem(const Tokens& a, const Tokens& b, const StopWords& stop_words,
                       const Stemmer& stemmer);
// Maximum of similarity_stem over synonym-substituted variants of both sides.
double similarity_synonym(const Tokens& a, const Tokens& b, const StopWords& stop_words,
                          const Stemmer& stemmer, const SynonymTable& synonyms);

enum class Comparison { fast, stem, synonym };

std::string_view comparison_name(Comparison c);
Comparison parse_comparison(std::string_view name);

struct CascadeStage {
  Comparison function = Comparison::fast;
  double accept = 1.0;  // score >= accept: keep now
  double reject = 0.0;  // score < reject: drop now
};

struct CascadeConfig {
  std::vector<CascadeStage> stages;
  std::map<std::string, StopWords> stop_words;  // by language; "" applies to any
  SynonymTable synonyms;
  Stemmer stemmer = Stemmer::english();

  // fast .9/.2, stem .8/.3, synonym .7/none.
  static CascadeConfig defaults();
  /// JSON file with "stages" ([{"function", "accept", "reject"}]) and
  /// optional "stop_words" ({lang: path}), "synonyms" and "stem_rules" paths,
  /// resolved relative to the config file.
  static CascadeConfig load(const std::string& path);

  const StopWords& stop_words_for(const std::string& lang) const;
  void validate() const;
};

using Translator = std::function<Tokens(const Tokens&)>;

/// Translates each source sentence and compares the translation with the
/// target through the stages in order. A pair leaves the cascade at the
/// first stage that accepts or rejects it; pairs no stage accepts are
/// rejected as exhausted.
FilterOutcome filter_corpus(const BitextCorpus& corpus, const Translator& translator,
                            const CascadeConfig& cascade);

}  // namespace parmine
