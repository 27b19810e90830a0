#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "parmine/corpus.hpp"
#include "parmine/text.hpp"

namespace parmine {

struct Translation {
  std::string target;
  double prob = 0.0;

  bool operator==(const Translation&) const = default;
};

/// Word translation table t(target | source). Each source row is sorted by
/// descending probability (ties by target) and sums to one.
class TranslationLexicon {
 public:
  TranslationLexicon() = default;
  TranslationLexicon(std::string src_lang, std::string tgt_lang);

  const std::string& src_lang() const { return src_lang_; }
  const std::string& tgt_lang() const { return tgt_lang_; }

  // Sorts and validates the row; replaces an existing one.
  void set(std::string source, std::vector<Translation> row);

  std::span<const Translation> translations(std::string_view source) const;
  std::optional<std::string_view> best(std::string_view source) const;
  bool contains(std::string_view source) const;

  std::size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }

  // Source words in byte order.
  std::vector<std::string_view> sources() const;

  void write_tsv(std::ostream& out) const;
  void save(const std::string& path) const;
  static TranslationLexicon read_tsv(std::istream& in, std::string_view name = "<stream>");
  static TranslationLexicon load(const std::string& path);

  // Fingerprint of the serialized table.
  std::string checksum() const;

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
  };
  std::string src_lang_;
  std::string tgt_lang_;
  std::unordered_map<std::string, std::vector<Translation>, Hash, std::equal_to<>> rows_;
};

struct LexiconOptions {
  std::size_t iterations = 10;
  double prune_below = 1e-4;
};

struct LexiconTraining {
  TranslationLexicon lexicon;
  // Corpus log-likelihood before the first EM round and after each round,
  // so the vector holds iterations + 1 values.
  std::vector<double> log_likelihood;
};

using TokenPair = std::pair<Tokens, Tokens>;

/// IBM Model 1 EM (no NULL word) from a uniform start, then pruning and
/// renormalization.
LexiconTraining train_lexicon(std::span<const TokenPair> pairs, const LexiconOptions& options,
                              std::string src_lang = {}, std::string tgt_lang = {});

// Tokenizes both sides in lowercase first. A side without tokens is an error.
LexiconTraining train_lexicon(const BitextCorpus& seed, const LexiconOptions& options = {});

std::vector<Translation> lookup(const TranslationLexicon& lex, std::string_view word,
                                std::size_t k);

/// Word-by-word translation with the argmax entry. Tokens without letters
/// (punctuation, numbers) pass through; other unknown words become
/// unknown_marker. The lookup key is the lowercased token.
Tokens gloss_translate(const TranslationLexicon& lex, const Tokens& tokens,
                       std::string_view unknown_marker = "unknown",
                       std::size_t* unknown_count = nullptr);

}  // namespace parmine
