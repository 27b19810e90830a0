#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "parmine/corpus.hpp"
#include "parmine/lexicon.hpp"
#include "parmine/text.hpp"

namespace parmine {

std::size_t word_levenshtein(std::span<const std::string> a, std::span<const std::string> b);

// For every character ch: count_a(ch) - count_b(ch) == count_c(ch) - count_d(ch).
bool char_profile_check(std::string_view a, std::string_view b, std::string_view c,
                        std::string_view d);

/// A:B::C:D over sentence indices, stored in canonical form: a is the
/// smallest index of the four, d sits opposite a, and b < c.
struct AnalogyQuadruple {
  std::size_t a = 0, b = 0, c = 0, d = 0;
  std::size_t d_ab = 0, d_cd = 0, d_ac = 0, d_bd = 0;

  auto operator<=>(const AnalogyQuadruple&) const = default;
};

struct AnalogySearchOptions {
  std::size_t max_distance = 4;
  // Skip distance computations for pairs whose lengths differ by more than
  // max_distance. Never changes the result.
  bool length_bucketing = true;
};

/// Every analogy whose four sentences are distinct, whose four distances are
/// between 1 and max_distance with d(A,B) = d(C,D) and d(A,C) = d(B,D), and
/// that passes char_profile_check on the space-joined texts. Sorted.
std::vector<AnalogyQuadruple> find_analogies(std::span<const Tokens> sentences,
                                             const AnalogySearchOptions& options = {});

struct AnalogyCluster {
  std::vector<std::size_t> quads;                           // indices into the input
  std::vector<std::pair<std::size_t, std::size_t>> pairs;   // sentence pairs, low index first
};

/// order 2: one cluster per quadruple. order >= 3: sentence pairs linked by
/// quadruples are chained transitively and components with at least order
/// pairs are returned. Higher orders are expensive and rarely non-empty.
std::vector<AnalogyCluster> find_analogy_clusters(std::span<const AnalogyQuadruple> quads,
                                                  std::size_t order = 2);

struct RewritingModel {
  Tokens src_prefix;
  Tokens src_suffix;
  Tokens tgt_prefix;
  Tokens tgt_suffix;
  std::pair<std::size_t, std::size_t> support{0, 0};

  bool same_template(const RewritingModel& other) const;
};

struct SeedPair {
  Tokens src;
  Tokens tgt;
};

/// Longest common token prefix of the two sources, then the longest common
/// suffix of what remains; same for the targets. No model when either side
/// has neither prefix nor suffix, when a slot comes out empty in a support
/// sentence, or when a support's source and target slots differ in length
/// (the model must be able to reproduce its own support).
std::optional<RewritingModel> extract_rewriting_model(const SeedPair& first,
                                                      const SeedPair& second);

/// Candidate supports for each quadruple are its four sides (A,B), (C,D),
/// (A,C) and (B,D). Duplicated templates are kept once, first support wins.
/// With require_target_analogy the target sentences must form the same
/// analogy as the sources.
std::vector<RewritingModel> extract_models(std::span<const AnalogyCluster> clusters,
                                           std::span<const AnalogyQuadruple> quads,
                                           std::span<const SeedPair> seed,
                                           bool require_target_analogy = false,
                                           std::size_t max_distance = 4);

/// sentence = src_prefix + middle + src_suffix with a non-empty middle ->
/// tgt_prefix + gloss(middle) + tgt_suffix. Without allow_unknown a middle
/// word missing from the lexicon rejects the match.
std::optional<BiSentence> apply_model(const RewritingModel& model, const Tokens& sentence,
                                      const TranslationLexicon& lex, bool allow_unknown,
                                      std::string_view unknown_marker = "unknown");

struct GenerationConfig {
  bool allow_unknown = false;
  std::string unknown_marker = "unknown";
};

struct QuasiParallelPair {
  BiSentence pair;
  std::size_t model_id = 0;
  bool confirmed = false;  // the article's target side contains the generated sentence
};

struct QuasiParallelCorpus {
  std::vector<QuasiParallelPair> pairs;
  std::size_t models = 0;
  std::size_t confirmed = 0;

  BitextCorpus bitext(std::string src_lang = {}, std::string tgt_lang = {}) const;
};

QuasiParallelCorpus generate_corpus(std::span<const RewritingModel> models,
                                    std::span<const ArticlePair> articles,
                                    const TranslationLexicon& lex,
                                    const GenerationConfig& config = {});

// JSON lines: one model per line with token arrays and the support ids.
void write_models(std::ostream& out, std::span<const RewritingModel> models);
std::vector<RewritingModel> read_models(std::istream& in, std::string_view name = "<stream>");

void write_quads(std::ostream& out, std::span<const AnalogyQuadruple> quads);
std::vector<AnalogyQuadruple> read_quads(std::istream& in, std::string_view name = "<stream>");

}  // namespace parmine
