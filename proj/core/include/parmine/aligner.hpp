#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "parmine/corpus.hpp"
#include "parmine/text.hpp"

namespace parmine {

struct AlignmentLink {
  std::size_t src = 0;
  std::size_t tgt = 0;
  double score = 0.0;

  bool operator==(const AlignmentLink&) const = default;
};

struct AlignmentResult {
  std::vector<AlignmentLink> links;
  std::vector<std::size_t> gaps_src;
  std::vector<std::size_t> gaps_tgt;
  double total_cost = 0.0;
  std::size_t similarity_calls = 0;
  std::size_t expanded_nodes = 0;
};

// Similarity of source sentence i and target sentence j, in [0, 1].
using PairScorer = std::function<double(std::size_t, std::size_t)>;

inline constexpr double kDefaultGapCost = 0.4;
inline constexpr std::size_t kBruteForceCellLimit = 10000;

// Lower bound on the cost left from lattice node (i, j): the length
// difference still to be covered by gaps.
double alignment_heuristic(std::size_t i, std::size_t j, std::size_t n, std::size_t m,
                           double gap_cost);

/// Optimal monotone 1-1 alignment with gaps. Matching (i, j) costs
/// 1 - sim(i, j) and skipping a sentence costs gap_cost. The lattice is
/// searched with A*; sim is evaluated lazily and at most once per cell.
/// Ties prefer a match, then a source gap, then a target gap, which makes
/// the result identical to align_bruteforce.
AlignmentResult align(std::size_t n, std::size_t m, const PairScorer& sim,
                      double gap_cost = kDefaultGapCost);

// Full dynamic program over the lattice; n * m must not exceed kBruteForceCellLimit.
AlignmentResult align_bruteforce(std::size_t n, std::size_t m, const PairScorer& sim,
                                 double gap_cost = kDefaultGapCost);

using SentenceScorer = std::function<double(const Sentence&, const Sentence&)>;
AlignmentResult align(std::span<const Sentence> src, std::span<const Sentence> tgt,
                      const SentenceScorer& sim, double gap_cost = kDefaultGapCost);

// Keeps links scoring at least threshold, in order.
std::vector<BiSentence> threshold_filter(const AlignmentResult& result, double threshold,
                                         std::span<const Sentence> src,
                                         std::span<const Sentence> tgt,
                                         std::uint64_t article_id = 0,
                                         const std::string& direction = "fwd");

}  // namespace parmine
