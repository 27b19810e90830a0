#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "parmine/corpus.hpp"
#include "parmine/lexicon.hpp"
#include "parmine/text.hpp"

namespace parmine {

inline constexpr std::size_t kFeatureCount = 5;
inline constexpr std::array<std::string_view, kFeatureCount> kFeatureNames = {
    "len_ratio", "char_ratio", "cov_st", "cov_ts", "num_overlap"};

struct FeatureVector {
  double len_ratio = 0.0;    // min/max token count
  double char_ratio = 0.0;   // min/max character count
  double cov_st = 0.0;       // translation mass of source words found in the target
  double cov_ts = 0.0;       // best lexicon support of each target word
  double num_overlap = 0.0;  // Jaccard over number tokens, 1 when neither side has any

  std::array<double, kFeatureCount> values() const {
    return {len_ratio, char_ratio, cov_st, cov_ts, num_overlap};
  }
};

/// A tokenized sentence with the lookups feature extraction needs, built once
/// and reused across every pairing the aligner tries.
class PreparedSentence {
 public:
  PreparedSentence(const Tokens& tokens, const TranslationLexicon& lex);

  std::size_t token_count() const { return token_count_; }
  std::size_t char_count() const { return char_count_; }

 private:
  friend FeatureVector extract_features(const PreparedSentence&, const PreparedSentence&);

  struct Word {
    std::string text;
    std::size_t count = 0;
    std::span<const Translation> row;
  };
  std::vector<Word> words_;  // unique tokens, sorted
  std::vector<std::string> numbers_;  // unique number tokens, sorted
  std::size_t token_count_ = 0;
  std::size_t char_count_ = 0;
};

// Tokens are expected lowercased, as produced by tokenize(..., true).
FeatureVector extract_features(const PreparedSentence& src, const PreparedSentence& tgt);
FeatureVector extract_features(const Tokens& src, const Tokens& tgt, const TranslationLexicon& lex);

struct SimilarityModel {
  std::array<double, kFeatureCount> weights{};
  double bias = 0.0;
  double platt_a = -1.0;
  double platt_b = 0.0;
  std::string src_lang;
  std::string tgt_lang;
  double threshold = 0.5;
  std::string lexicon_checksum;

  double margin(const FeatureVector& features) const;
  double probability(double margin) const;
  double score(const FeatureVector& features) const { return probability(margin(features)); }

  void write_json(std::ostream& out) const;
  void save(const std::string& path) const;
  static SimilarityModel read_json(std::istream& in);
  static SimilarityModel load(const std::string& path);
};

double similarity(const SimilarityModel& model, const Tokens& src, const Tokens& tgt,
                  const TranslationLexicon& lex);
double similarity(const SimilarityModel& model, const PreparedSentence& src,
                  const PreparedSentence& tgt);

struct LabeledMargin {
  double margin = 0.0;
  bool positive = false;
};

struct PlattParameters {
  double a = -1.0;
  double b = 0.0;
};

/// Platt's sigmoid fit p(y=1|m) = 1 / (1 + exp(a*m + b)) with regularized
/// targets, solved by Newton's method with backtracking. The slope is
/// constrained to a < 0 so the mapping always increases with the margin.
PlattParameters calibrate(std::span<const LabeledMargin> margins);

struct ClassifierOptions {
  std::size_t neg_per_pos = 3;
  std::size_t epochs = 20;
  double learning_rate = 0.1;
  double margin_reg = 1e-4;
  std::uint64_t seed = 1;
  double heldout_fraction = 0.1;
  double threshold = 0.5;
};

struct LabeledFeatures {
  FeatureVector features;
  bool positive = false;
};

struct ClassifierTraining {
  SimilarityModel model;
  std::size_t positives = 0;
  std::size_t negatives = 0;
  double train_accuracy = 0.0;    // sign of the margin on the training split
  double heldout_accuracy = 0.0;  // calibrated score vs. threshold on the held-out split
};

inline constexpr std::size_t kMinClassifierSeed = 100;

/// Positives are the seed pairs; each gets neg_per_pos negatives that keep
/// its source and borrow another target, the first one from the adjacent
/// pair. A linear hinge-loss classifier is fit by stochastic subgradient
/// descent with L2 regularization, then calibrated on a held-out split.
ClassifierTraining train_model(const BitextCorpus& seed, const TranslationLexicon& lex,
                               const ClassifierOptions& options = {});

// The SGD solver alone, for callers that build their own examples.
std::pair<std::array<double, kFeatureCount>, double> fit_hinge(
    std::span<const LabeledFeatures> examples, const ClassifierOptions& options);

}  // namespace parmine
