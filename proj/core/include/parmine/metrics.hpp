#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "parmine/filter.hpp"
#include "parmine/text.hpp"

namespace parmine {

struct EvalPair {
  Tokens hypothesis;
  std::vector<Tokens> references;
};

/// Corpus BLEU: geometric mean of clipped n-gram precisions (uniform
/// weights) times exp(min(0, 1 - r/c)), r summing the closest reference
/// lengths.
double bleu(std::span<const EvalPair> corpus, std::size_t max_n = 4);

/// NIST: information-weighted co-occurrence, averaged per order and summed,
/// with a brevity factor that is 0.5 at a 2/3 length ratio. The information
/// weights come from the references of the corpus.
double nist(std::span<const EvalPair> corpus, std::size_t max_n = 5);

struct TerResult {
  double edits = 0.0;
  double ref_length = 0.0;
  std::size_t shifts = 0;

  double rate() const;
};

// Segments up to this many tokens get an exact shift search; longer ones the
// greedy search (best-gain shift until none helps).
inline constexpr std::size_t kExactShiftSearchTokens = 6;
inline constexpr std::size_t kMaxShiftLength = 10;

TerResult ter_detail(const Tokens& hypothesis, std::span<const Tokens> references,
                     bool allow_shifts = true);
double ter(const Tokens& hypothesis, std::span<const Tokens> references);
// Sum of edits over sum of reference lengths.
double corpus_ter(std::span<const EvalPair> corpus);

struct MeteorResources {
  const Stemmer* stemmer = &Stemmer::english();
  const SynonymTable* synonyms = nullptr;
  bool stem_stage = true;
  bool synonym_stage = true;
};

struct MeteorResult {
  std::size_t matches = 0;
  std::size_t chunks = 0;
  std::size_t hyp_length = 0;
  std::size_t ref_length = 0;

  double score() const;
};

MeteorResult meteor_detail(const Tokens& hypothesis, std::span<const Tokens> references,
                           const MeteorResources& resources = {});
/// Exact, stem and synonym matching stages; F-mean 10PR/(R+9P) with the
/// fragmentation penalty 0.5 (chunks/matches)^3. Best reference wins.
double meteor_lite(const Tokens& hypothesis, std::span<const Tokens> references,
                   const MeteorResources& resources = {});
double corpus_meteor(std::span<const EvalPair> corpus, const MeteorResources& resources = {});

enum class Metric { bleu, nist, ter, meteor };

std::string_view metric_name(Metric metric);
Metric parse_metric(std::string_view name);

/// Per-sentence sufficient statistics so that any resample of the sentences
/// can be scored without recomputing matches.
class CorpusScorer {
 public:
  CorpusScorer(std::span<const EvalPair> corpus, Metric metric,
               const MeteorResources& resources = {});

  std::size_t size() const { return count_; }
  double score_all() const;
  double score(std::span<const std::size_t> indices) const;

 private:
  Metric metric_;
  std::size_t count_ = 0;
  std::size_t width_ = 0;
  std::vector<double> stats_;  // count_ rows of width_ values
};

struct BootstrapResult {
  double observed_diff = 0.0;  // metric(a) - metric(b) on the full test set
  double mean_diff = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double p_value = 1.0;  // share of resamples whose difference lacks the observed sign
  std::size_t resamples = 0;
};

BootstrapResult bootstrap_diff(std::span<const EvalPair> sys_a, std::span<const EvalPair> sys_b,
                               Metric metric, std::size_t n_resamples = 1000,
                               std::uint64_t seed = 0, const MeteorResources& resources = {});

double corpus_score(std::span<const EvalPair> corpus, Metric metric,
                    const MeteorResources& resources = {});

}  // namespace parmine
