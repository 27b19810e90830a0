#include "parmine/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

#include "json.hpp"
#include "parmine/error.hpp"
#include "parmine/random.hpp"

namespace parmine {

using nlohmann::json;

PreparedSentence::PreparedSentence(const Tokens& tokens, const TranslationLexicon& lex) {
  token_count_ = tokens.size();
  std::vector<std::string_view> sorted(tokens.begin(), tokens.end());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    Word w;
    w.text = std::string(sorted[i]);
    w.count = j - i;
    w.row = lex.translations(w.text);
    if (has_digit(w.text)) numbers_.push_back(w.text);
    words_.push_back(std::move(w));
    i = j;
  }
  for (const auto& t : tokens) char_count_ += utf8::length(t);
}

namespace {

double ratio(std::size_t a, std::size_t b) {
  if (a == 0 && b == 0) return 1.0;
  return static_cast<double>(std::min(a, b)) / static_cast<double>(std::max(a, b));
}

double jaccard(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  if (a.empty() && b.empty()) return 1.0;
  std::size_t common = 0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) {
      ++common;
      ++i;
      ++j;
    } else if (a[i] < b[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  return static_cast<double>(common) / static_cast<double>(a.size() + b.size() - common);
}

}  // namespace

FeatureVector extract_features(const PreparedSentence& src, const PreparedSentence& tgt) {
  if (src.token_count_ == 0 || tgt.token_count_ == 0) {
    throw Error("extract_features: empty token list");
  }
  FeatureVector f;
  f.len_ratio = ratio(src.token_count_, tgt.token_count_);
  f.char_ratio = ratio(src.char_count_, tgt.char_count_);

  std::vector<double> support(tgt.words_.size(), 0.0);
  double covered = 0.0;
  for (const auto& w : src.words_) {
    double mass = 0.0;
    for (const auto& t : w.row) {
      auto it = std::lower_bound(tgt.words_.begin(), tgt.words_.end(), t.target,
                                 [](const auto& word, const std::string& key) {
                                   return word.text < key;
                                 });
      if (it == tgt.words_.end() || it->text != t.target) continue;
      mass += t.prob;
      auto& s = support[static_cast<std::size_t>(it - tgt.words_.begin())];
      s = std::max(s, t.prob);
    }
    covered += static_cast<double>(w.count) * std::min(1.0, mass);
  }
  f.cov_st = covered / static_cast<double>(src.token_count_);

  double supported = 0.0;
  for (std::size_t i = 0; i < tgt.words_.size(); ++i) {
    supported += static_cast<double>(tgt.words_[i].count) * support[i];
  }
  f.cov_ts = supported / static_cast<double>(tgt.token_count_);
  f.num_overlap = jaccard(src.numbers_, tgt.numbers_);
  return f;
}

FeatureVector extract_features(const Tokens& src, const Tokens& tgt,
                               const TranslationLexicon& lex) {
  if (src.empty() || tgt.empty()) throw Error("extract_features: empty token list");
  return extract_features(PreparedSentence(src, lex), PreparedSentence(tgt, lex));
}

// ---- model ----

double SimilarityModel::margin(const FeatureVector& features) const {
  auto x = features.values();
  double m = bias;
  for (std::size_t i = 0; i < kFeatureCount; ++i) m += weights[i] * x[i];
  return m;
}

double SimilarityModel::probability(double m) const {
  constexpr double kEdge = 1e-12;
  double p = 1.0 / (1.0 + std::exp(platt_a * m + platt_b));
  return std::clamp(p, kEdge, 1.0 - kEdge);
}

namespace {
constexpr const char* kModelFormat = "parmine-similarity-model";
constexpr int kModelVersion = 1;
}  // namespace

void SimilarityModel::write_json(std::ostream& out) const {
  json names = json::array();
  for (auto n : kFeatureNames) names.push_back(std::string(n));
  json j = {{"format", kModelFormat},
            {"version", kModelVersion},
            {"features", names},
            {"weights", std::vector<double>(weights.begin(), weights.end())},
            {"bias", bias},
            {"platt_a", platt_a},
            {"platt_b", platt_b},
            {"threshold", threshold},
            {"direction", {{"src", src_lang}, {"tgt", tgt_lang}}},
            {"lexicon_checksum", lexicon_checksum}};
  out << j.dump(2) << '\n';
}

void SimilarityModel::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open model for writing: " + path);
  write_json(out);
  if (!out) throw Error("failed writing model: " + path);
}

SimilarityModel SimilarityModel::read_json(std::istream& in) {
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(std::string("invalid model file: ") + e.what());
  }
  try {
    if (j.at("format").get<std::string>() != kModelFormat) throw Error("not a similarity model");
    if (j.at("version").get<int>() != kModelVersion) {
      throw Error("unsupported model version " + j.at("version").dump());
    }
    auto names = j.at("features").get<std::vector<std::string>>();
    auto weights = j.at("weights").get<std::vector<double>>();
    if (names.size() != kFeatureCount || weights.size() != kFeatureCount) {
      throw Error("model feature count mismatch");
    }
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
      if (names[i] != kFeatureNames[i]) throw Error("unknown model feature " + names[i]);
    }
    SimilarityModel m;
    std::copy(weights.begin(), weights.end(), m.weights.begin());
    m.bias = j.at("bias").get<double>();
    m.platt_a = j.at("platt_a").get<double>();
    m.platt_b = j.at("platt_b").get<double>();
    m.threshold = j.at("threshold").get<double>();
    m.src_lang = j.at("direction").at("src").get<std::string>();
    m.tgt_lang = j.at("direction").at("tgt").get<std::string>();
    m.lexicon_checksum = j.at("lexicon_checksum").get<std::string>();
    return m;
  } catch (const json::exception& e) {
    throw Error(std::string("invalid model file: ") + e.what());
  }
}

SimilarityModel SimilarityModel::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open model: " + path);
  return read_json(in);
}

double similarity(const SimilarityModel& model, const Tokens& src, const Tokens& tgt,
                  const TranslationLexicon& lex) {
  return model.score(extract_features(src, tgt, lex));
}

double similarity(const SimilarityModel& model, const PreparedSentence& src,
                  const PreparedSentence& tgt) {
  return model.score(extract_features(src, tgt));
}

// ---- calibration ----

namespace {

struct Targets {
  std::vector<double> m;
  std::vector<double> t;
};

// Negative log-likelihood of the sigmoid 1/(1+exp(a*m+b)) under soft targets.
double platt_objective(const Targets& d, double a, double b) {
  double f = 0.0;
  for (std::size_t i = 0; i < d.m.size(); ++i) {
    double z = a * d.m[i] + b;
    f += z >= 0 ? d.t[i] * z + std::log1p(std::exp(-z)) : (d.t[i] - 1) * z + std::log1p(std::exp(z));
  }
  return f;
}

// p = P(y=1), q = 1 - p, computed without overflow.
std::pair<double, double> sigmoid_pq(double z) {
  if (z >= 0) {
    double e = std::exp(-z);
    return {e / (1 + e), 1 / (1 + e)};
  }
  double e = std::exp(z);
  return {1 / (1 + e), e / (1 + e)};
}

double refit_intercept(const Targets& d, double a, double b) {
  double f = platt_objective(d, a, b);
  for (int it = 0; it < 100; ++it) {
    double g = 0.0;
    double h = 1e-12;
    for (std::size_t i = 0; i < d.m.size(); ++i) {
      auto [p, q] = sigmoid_pq(a * d.m[i] + b);
      g += d.t[i] - p;
      h += p * q;
    }
    if (std::abs(g) < 1e-9) break;
    double step = 1.0;
    double delta = -g / h;
    while (step >= 1e-10) {
      double nb = b + step * delta;
      double nf = platt_objective(d, a, nb);
      if (nf < f + 1e-4 * step * g * delta) {
        b = nb;
        f = nf;
        break;
      }
      step /= 2;
    }
    if (step < 1e-10) break;
  }
  return b;
}

}  // namespace

PlattParameters calibrate(std::span<const LabeledMargin> margins) {
  std::size_t n_pos = 0;
  for (const auto& lm : margins) {
    if (!std::isfinite(lm.margin)) throw Error("calibrate: non-finite margin");
    n_pos += lm.positive ? 1 : 0;
  }
  const std::size_t n_neg = margins.size() - n_pos;
  if (n_pos == 0 || n_neg == 0) throw Error("calibrate: both labels are required");

  const double hi = (static_cast<double>(n_pos) + 1.0) / (static_cast<double>(n_pos) + 2.0);
  const double lo = 1.0 / (static_cast<double>(n_neg) + 2.0);
  Targets d;
  d.m.reserve(margins.size());
  d.t.reserve(margins.size());
  for (const auto& lm : margins) {
    d.m.push_back(lm.margin);
    d.t.push_back(lm.positive ? hi : lo);
  }

  double a = 0.0;
  double b = std::log((static_cast<double>(n_neg) + 1.0) / (static_cast<double>(n_pos) + 1.0));
  double f = platt_objective(d, a, b);
  constexpr double kSigma = 1e-12;
  for (int it = 0; it < 100; ++it) {
    double h11 = kSigma, h22 = kSigma, h21 = 0.0, g1 = 0.0, g2 = 0.0;
    for (std::size_t i = 0; i < d.m.size(); ++i) {
      auto [p, q] = sigmoid_pq(a * d.m[i] + b);
      double d2 = p * q;
      h11 += d.m[i] * d.m[i] * d2;
      h22 += d2;
      h21 += d.m[i] * d2;
      double d1 = d.t[i] - p;
      g1 += d.m[i] * d1;
      g2 += d1;
    }
    if (std::abs(g1) < 1e-5 && std::abs(g2) < 1e-5) break;
    double det = h11 * h22 - h21 * h21;
    double da = -(h22 * g1 - h21 * g2) / det;
    double db = -(-h21 * g1 + h11 * g2) / det;
    double gd = g1 * da + g2 * db;
    double step = 1.0;
    while (step >= 1e-10) {
      double na = a + step * da;
      double nb = b + step * db;
      double nf = platt_objective(d, na, nb);
      if (nf < f + 1e-4 * step * gd) {
        a = na;
        b = nb;
        f = nf;
        break;
      }
      step /= 2;
    }
    if (step < 1e-10) break;
  }

  if (!(a < 0.0)) {
    // The likelihood is concave, so the constrained optimum lies on the
    // boundary; keep a tiny negative slope and refit the intercept.
    a = -1e-6;
    b = refit_intercept(d, a, b);
  }
  return {a, b};
}

// ---- training ----

std::pair<std::array<double, kFeatureCount>, double> fit_hinge(
    std::span<const LabeledFeatures> examples, const ClassifierOptions& options) {
  if (examples.empty()) throw Error("fit_hinge: no training examples");
  if (options.epochs == 0) throw Error("fit_hinge: epochs must be positive");
  if (!(options.learning_rate > 0.0)) throw Error("fit_hinge: learning rate must be positive");
  if (!(options.margin_reg >= 0.0)) throw Error("fit_hinge: regularization must be non-negative");

  std::array<double, kFeatureCount> w{};
  double b = 0.0;
  Rng rng(options.seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<std::size_t> order(examples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::uint64_t t = 0;
  for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    for (std::size_t idx : order) {
      const auto& ex = examples[idx];
      const double y = ex.positive ? 1.0 : -1.0;
      const double eta =
          options.learning_rate / (1.0 + options.learning_rate * options.margin_reg *
                                             static_cast<double>(t));
      auto x = ex.features.values();
      double m = b;
      for (std::size_t i = 0; i < kFeatureCount; ++i) m += w[i] * x[i];
      const double shrink = 1.0 - eta * options.margin_reg;
      for (auto& wi : w) wi *= shrink;
      if (y * m < 1.0) {
        for (std::size_t i = 0; i < kFeatureCount; ++i) w[i] += eta * y * x[i];
        b += eta * y;
      }
      ++t;
    }
  }
  return {w, b};
}

ClassifierTraining train_model(const BitextCorpus& seed, const TranslationLexicon& lex,
                               const ClassifierOptions& options) {
  if (options.neg_per_pos == 0) {
    throw Error("train_model: neg_per_pos must be at least 1 (single-class training is undefined)");
  }
  if (!(options.heldout_fraction > 0.0 && options.heldout_fraction < 1.0)) {
    throw Error("train_model: heldout_fraction must be in (0,1)");
  }
  if (!(options.threshold >= 0.0 && options.threshold <= 1.0)) {
    throw Error("train_model: threshold must be in [0,1]");
  }

  std::vector<PreparedSentence> src;
  std::vector<PreparedSentence> tgt;
  std::vector<const std::string*> tgt_text;
  for (const auto& p : seed.pairs) {
    auto s = tokenize(p.src, true);
    auto t = tokenize(p.tgt, true);
    if (s.empty() || t.empty()) continue;
    src.emplace_back(s, lex);
    tgt.emplace_back(t, lex);
    tgt_text.push_back(&p.tgt);
  }
  const std::size_t n = src.size();
  if (n < kMinClassifierSeed) {
    throw Error("train_model: seed corpus has " + std::to_string(n) +
                " usable pairs, at least " + std::to_string(kMinClassifierSeed) + " required");
  }
  if (options.neg_per_pos >= n) throw Error("train_model: neg_per_pos exceeds the seed size");

  Rng rng(options.seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  rng.shuffle(std::span<std::size_t>(order));
  const auto n_heldout = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(options.heldout_fraction * static_cast<double>(n))));
  std::vector<char> heldout(n, 0);
  for (std::size_t k = 0; k < n_heldout; ++k) heldout[order[k]] = 1;

  std::vector<LabeledFeatures> train;
  std::vector<LabeledFeatures> held;
  ClassifierTraining result;
  for (std::size_t i = 0; i < n; ++i) {
    auto& bucket = heldout[i] ? held : train;
    bucket.push_back({extract_features(src[i], tgt[i]), true});
    ++result.positives;
    std::vector<std::size_t> used{i};
    for (std::size_t k = 0; k < options.neg_per_pos; ++k) {
      std::size_t j = (i + 1) % n;
      for (int attempt = 0; k > 0 && attempt < 16; ++attempt) {
        j = static_cast<std::size_t>(rng.below(n));
        if (std::find(used.begin(), used.end(), j) == used.end() && *tgt_text[j] != *tgt_text[i]) {
          break;
        }
      }
      used.push_back(j);
      bucket.push_back({extract_features(src[i], tgt[j]), false});
      ++result.negatives;
    }
  }

  auto [w, b] = fit_hinge(train, options);
  SimilarityModel& model = result.model;
  model.weights = w;
  model.bias = b;
  model.src_lang = seed.src_lang.empty() ? lex.src_lang() : seed.src_lang;
  model.tgt_lang = seed.tgt_lang.empty() ? lex.tgt_lang() : seed.tgt_lang;
  model.threshold = options.threshold;
  model.lexicon_checksum = lex.checksum();

  std::vector<LabeledMargin> margins;
  margins.reserve(held.size());
  for (const auto& ex : held) margins.push_back({model.margin(ex.features), ex.positive});
  auto platt = calibrate(margins);
  model.platt_a = platt.a;
  model.platt_b = platt.b;

  std::size_t correct = 0;
  for (const auto& ex : train) correct += (model.margin(ex.features) > 0.0) == ex.positive;
  result.train_accuracy = static_cast<double>(correct) / static_cast<double>(train.size());
  correct = 0;
  for (const auto& ex : held) correct += (model.score(ex.features) >= model.threshold) == ex.positive;
  result.heldout_accuracy = static_cast<double>(correct) / static_cast<double>(held.size());
  return result;
}

}  // namespace parmine
