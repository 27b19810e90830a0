#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "parmine/aligner.hpp"
#include "parmine/classifier.hpp"
#include "parmine/corpus.hpp"
#include "parmine/lexicon.hpp"

namespace parmine {

struct MiningConfig {
  double gap_cost = kDefaultGapCost;
  double threshold = 0.5;
  std::string direction = "fwd";
};

struct ArticleLog {
  std::uint64_t article_id = 0;
  std::size_t src_sentences = 0;
  std::size_t tgt_sentences = 0;
  std::size_t links = 0;
  std::size_t accepted = 0;
  std::size_t similarity_calls = 0;

  std::string to_line() const;
};

/// segment -> align -> threshold_filter for one article pair. The model (and
/// lexicon) direction must match the pair's languages.
std::vector<BiSentence> mine_pair(const ArticlePair& pair, const SimilarityModel& model,
                                  const TranslationLexicon& lex, const MiningConfig& config,
                                  ArticleLog* log = nullptr);

struct MiningResult {
  BitextCorpus corpus;
  std::vector<ArticleLog> log;
};

/// Mines every article with a pool of workers sharing the model and lexicon
/// read-only. Output is ordered by article id and does not depend on the
/// number of workers.
MiningResult mine_corpus(std::span<const ArticlePair> store, const SimilarityModel& model,
                         const TranslationLexicon& lex, const MiningConfig& config,
                         std::size_t workers = 1);

struct OverlapStats {
  std::size_t recognized = 0;
  std::size_t overlapping = 0;
  std::size_t newly_obtained = 0;

  // newly_obtained = recognized - overlapping; overlapping > recognized is an error.
  static OverlapStats from_counts(std::size_t recognized, std::size_t overlapping);
  bool operator==(const OverlapStats&) const = default;
};

struct MergeResult {
  BitextCorpus merged;
  OverlapStats stats;
};

/// fwd and rev must already share orientation (flip reverse-direction output
/// first). Pairs are duplicates when both sides are equal after whitespace
/// normalization; the merged copy keeps the higher score.
MergeResult merge_bidirectional(const BitextCorpus& fwd, const BitextCorpus& rev);

// "Value <TAB> Data Mined" table with the recognized / overlapping / newly
// obtained rows.
std::string format_overlap_stats(const OverlapStats& stats);

}  // namespace parmine
