#include "parmine/metrics.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "parmine/error.hpp"

namespace parmine {
namespace {

Tokens words(const std::string& s) {
  Tokens out;
  std::istringstream in(s);
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

EvalPair pair(const std::string& hyp, std::initializer_list<const char*> refs) {
  EvalPair p;
  p.hypothesis = words(hyp);
  for (const char* r : refs) p.references.push_back(words(r));
  return p;
}

std::vector<EvalPair> random_corpus(Rng& rng, std::size_t n) {
  const char* vocab[] = {"a", "b", "c", "d", "e", "the", "cat"};
  std::vector<EvalPair> out;
  for (std::size_t i = 0; i < n; ++i) {
    EvalPair p;
    for (std::size_t k = 1 + rng.below(8); k > 0; --k) p.hypothesis.push_back(vocab[rng.below(7)]);
    for (std::size_t r = 1 + rng.below(2); r > 0; --r) {
      Tokens ref;
      for (std::size_t k = 1 + rng.below(8); k > 0; --k) ref.push_back(vocab[rng.below(7)]);
      p.references.push_back(ref);
    }
    out.push_back(p);
  }
  return out;
}

// ---- BLEU ----

TEST(Bleu, IdentityIsOne) {
  std::vector<EvalPair> c = {pair("the cat sat on the mat", {"the cat sat on the mat"}),
                             pair("a b c d", {"a b c d"})};
  EXPECT_DOUBLE_EQ(bleu(c), 1.0);
}

TEST(Bleu, ClippedUnigramPrecision) {
  std::vector<EvalPair> c = {pair("the the the the", {"the cat"})};
  EXPECT_DOUBLE_EQ(bleu(c, 1), 0.25);
}

TEST(Bleu, HandComputedCorpus) {
  // p1 = 3/4, p2 = 1/3; c = 4, r = 5 -> BP = exp(1 - 5/4).
  std::vector<EvalPair> c = {pair("a b c x", {"a b y c d"})};
  const double expected = std::exp(1.0 - 5.0 / 4.0) * std::sqrt(0.75 * (1.0 / 3.0));
  EXPECT_NEAR(bleu(c, 2), expected, 1e-12);
}

TEST(Bleu, ClosestReferenceLength) {
  // Reference lengths 2 and 5 for a 4-token hypothesis: 5 is closer.
  std::vector<EvalPair> c = {pair("a b c d", {"a b", "a b c d e"})};
  EXPECT_NEAR(bleu(c, 1), std::exp(1.0 - 5.0 / 4.0), 1e-12);
}

TEST(Bleu, ZeroAndErrors) {
  std::vector<EvalPair> c = {pair("x y z", {"a b c"})};
  EXPECT_EQ(bleu(c), 0.0);
  EXPECT_THROW(bleu({}), Error);
  std::vector<EvalPair> no_ref = {pair("a", {})};
  EXPECT_THROW(bleu(no_ref), Error);
}

// ---- NIST ----

TEST(Nist, HandValues) {
  // info(a) = info(b) = log2(2/1) = 1; info(a b) = log2(1/1) = 0.
  std::vector<EvalPair> same = {pair("a b", {"a b"})};
  EXPECT_NEAR(nist(same), 1.0, 1e-12);
  // info(a) = log2(3/2); hypothesis covers 2/3 of the reference, BP = 0.5.
  std::vector<EvalPair> short_hyp = {pair("a a", {"a b a"})};
  EXPECT_NEAR(nist(short_hyp), 0.5 * std::log2(1.5), 1e-12);
  std::vector<EvalPair> empty = {pair("", {"a b"})};
  EXPECT_EQ(nist(empty), 0.0);
  EXPECT_THROW(nist({}), Error);
}

TEST(Nist, NonNegative) {
  Rng rng(4);
  for (int k = 0; k < 100; ++k) {
    auto c = random_corpus(rng, 1 + rng.below(10));
    EXPECT_GE(nist(c), 0.0);
  }
}

// ---- TER ----

double ter_of(const std::string& hyp, const std::string& ref) {
  std::vector<Tokens> refs = {words(ref)};
  return ter(words(hyp), refs);
}

TEST(Ter, Examples) {
  EXPECT_EQ(ter_of("a b c d", "a b c d"), 0.0);
  EXPECT_DOUBLE_EQ(ter_of("a b x d", "a b c d"), 0.25);
  EXPECT_DOUBLE_EQ(ter_of("c a b", "a b c"), 1.0 / 3.0);
  std::vector<Tokens> refs = {words("a b c")};
  EXPECT_EQ(ter_detail(words("c a b"), refs).shifts, 1u);
  EXPECT_GT(ter_of("x y z w v", "a b"), 1.0);
  std::vector<Tokens> none = {Tokens{}};
  EXPECT_THROW(ter(words("a"), none), Error);
}

TEST(Ter, BestReferenceWins) {
  std::vector<Tokens> refs = {words("x y z w"), words("a b c e")};
  EXPECT_DOUBLE_EQ(ter(words("a b c d"), refs), 0.25);
}

TEST(Ter, MatchesExhaustiveShiftSearchOnEveryShortCase) {
  const char* alphabet[] = {"a", "b", "c"};
  auto all_sequences = [&](std::size_t max_len) {
    std::vector<Tokens> out;
    std::vector<Tokens> level{{}};
    for (std::size_t len = 1; len <= max_len; ++len) {
      std::vector<Tokens> next;
      for (const auto& s : level) {
        for (const char* w : alphabet) {
          Tokens t = s;
          t.push_back(w);
          next.push_back(t);
        }
      }
      out.insert(out.end(), next.begin(), next.end());
      level = std::move(next);
    }
    return out;
  };
  const auto hyps = all_sequences(5);
  const auto refs = all_sequences(4);
  std::size_t cases = 0;
  for (const auto& h : hyps) {
    for (const auto& r : refs) {
      std::vector<Tokens> one = {r};
      ASSERT_EQ(ter_detail(h, one).edits, static_cast<double>(oracle::ter_edits(h, r)))
          << join(h) << " | " << join(r);
      ++cases;
    }
  }
  EXPECT_EQ(cases, 363u * 120u);
}

TEST(Ter, MatchesExhaustiveShiftSearchOnSixTokens) {
  Rng rng(6);
  const char* alphabet[] = {"a", "b", "c", "d"};
  for (int k = 0; k < 400; ++k) {
    Tokens h, r;
    for (int i = 0; i < 6; ++i) h.push_back(alphabet[rng.below(4)]);
    for (std::size_t i = 1 + rng.below(6); i > 0; --i) r.push_back(alphabet[rng.below(4)]);
    std::vector<Tokens> one = {r};
    ASSERT_EQ(ter_detail(h, one).edits, static_cast<double>(oracle::ter_edits(h, r)))
        << join(h) << " | " << join(r);
  }
}

TEST(Ter, ShiftsNeverHurt) {
  Rng rng(7);
  const char* alphabet[] = {"a", "b", "c", "d", "e"};
  for (int k = 0; k < 300; ++k) {
    Tokens h, r;
    for (std::size_t i = 1 + rng.below(14); i > 0; --i) h.push_back(alphabet[rng.below(5)]);
    for (std::size_t i = 1 + rng.below(14); i > 0; --i) r.push_back(alphabet[rng.below(5)]);
    std::vector<Tokens> one = {r};
    const auto with = ter_detail(h, one, true);
    const auto without = ter_detail(h, one, false);
    EXPECT_LE(with.edits, without.edits);
    EXPECT_EQ(without.edits, static_cast<double>(oracle::edit_distance(h, r)));
    EXPECT_EQ(without.shifts, 0u);
  }
}

TEST(Ter, LongSegmentsUseTheGreedySearch) {
  // Moving a block of three to the front is one shift.
  std::vector<Tokens> refs = {words("x y z a b c d e f g")};
  const auto r = ter_detail(words("a b c d e f g x y z"), refs);
  EXPECT_EQ(r.edits, 1.0);
  EXPECT_EQ(r.shifts, 1u);
}

TEST(Ter, CorpusRateIsPooled) {
  std::vector<EvalPair> c = {pair("a b x d", {"a b c d"}), pair("a b", {"a b"})};
  EXPECT_DOUBLE_EQ(corpus_ter(c), 1.0 / 6.0);
}

// ---- METEOR ----

TEST(Meteor, IdentityPenaltyIsOneChunk) {
  for (std::size_t m = 1; m <= 8; ++m) {
    Tokens t;
    for (std::size_t k = 0; k < m; ++k) t.push_back("w" + std::to_string(k));
    std::vector<Tokens> refs = {t};
    const double md = static_cast<double>(m);
    EXPECT_NEAR(meteor_lite(t, refs), 1.0 - 0.5 / (md * md * md), 1e-12);
  }
}

TEST(Meteor, StemStage) {
  std::vector<Tokens> refs = {words("boy runs")};
  auto d = meteor_detail(words("boys run"), refs);
  EXPECT_EQ(d.matches, 2u);
  EXPECT_EQ(d.chunks, 1u);
  MeteorResources exact_only;
  exact_only.stem_stage = false;
  EXPECT_EQ(meteor_detail(words("boys run"), refs, exact_only).matches, 0u);
  EXPECT_EQ(meteor_lite(words("boys run"), refs, exact_only), 0.0);
}

TEST(Meteor, SynonymStage) {
  SynonymTable syn = {{"big", {"large"}}, {"large", {"big"}}};
  MeteorResources res;
  res.synonyms = &syn;
  std::vector<Tokens> refs = {words("a large dog")};
  EXPECT_EQ(meteor_detail(words("a big dog"), refs, res).matches, 3u);
  EXPECT_EQ(meteor_detail(words("a big dog"), refs).matches, 2u);
}

TEST(Meteor, HandComputedFragmentation) {
  // Matches a, b, c in two chunks ("a b" and "c"): P = 3/4, R = 3/3.
  std::vector<Tokens> refs = {words("c x a b")};
  auto d = meteor_detail(words("a b c"), refs);
  EXPECT_EQ(d.matches, 3u);
  EXPECT_EQ(d.chunks, 2u);
  const double f = 10.0 * 3.0 / (3.0 + 9.0 * 4.0);
  EXPECT_NEAR(d.score(), f * (1.0 - 0.5 * std::pow(2.0 / 3.0, 3)), 1e-12);
}

TEST(Meteor, StagesOnlyAddMatches) {
  Rng rng(8);
  SynonymTable syn = {{"cat", {"the"}}, {"the", {"cat"}}};
  for (int k = 0; k < 300; ++k) {
    auto c = random_corpus(rng, 1);
    for (auto& t : c[0].hypothesis) {
      if (rng.bernoulli(0.3)) t += "s";
    }
    MeteorResources exact, stems, all;
    exact.stem_stage = exact.synonym_stage = false;
    all.synonyms = &syn;
    const double e = meteor_lite(c[0].hypothesis, c[0].references, exact);
    const double s = meteor_lite(c[0].hypothesis, c[0].references, stems);
    const double a = meteor_lite(c[0].hypothesis, c[0].references, all);
    EXPECT_GE(a, s);
    EXPECT_GE(s, e);
    for (const auto& ref : c[0].references) {
      std::vector<Tokens> one = {ref};
      EXPECT_GE(meteor_detail(c[0].hypothesis, one, all).matches,
                meteor_detail(c[0].hypothesis, one, stems).matches);
      EXPECT_GE(meteor_detail(c[0].hypothesis, one, stems).matches,
                meteor_detail(c[0].hypothesis, one, exact).matches);
    }
    for (double v : {e, s, a}) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
  }
  std::vector<Tokens> none = {Tokens{}};
  EXPECT_THROW(meteor_lite(words("a"), none), Error);
  std::vector<Tokens> refs = {words("x y")};
  EXPECT_EQ(meteor_lite(words("a b"), refs), 0.0);
}

// ---- corpus-level properties ----

TEST(CorpusMetrics, OrderInvariantAndBounded) {
  Rng rng(9);
  for (int k = 0; k < 30; ++k) {
    auto c = random_corpus(rng, 2 + rng.below(15));
    auto shuffled = c;
    rng.shuffle(std::span<EvalPair>(shuffled));
    for (Metric m : {Metric::bleu, Metric::nist, Metric::ter, Metric::meteor}) {
      EXPECT_NEAR(corpus_score(c, m), corpus_score(shuffled, m), 1e-12) << metric_name(m);
      EXPECT_NEAR(CorpusScorer(c, m).score_all(), corpus_score(c, m), 1e-12) << metric_name(m);
    }
    const double b = bleu(c);
    EXPECT_GE(b, 0.0);
    EXPECT_LE(b, 1.0);
    EXPECT_GE(corpus_ter(c), 0.0);
  }
}

TEST(CorpusMetrics, Names) {
  for (Metric m : {Metric::bleu, Metric::nist, Metric::ter, Metric::meteor}) {
    EXPECT_EQ(parse_metric(metric_name(m)), m);
  }
  EXPECT_THROW(parse_metric("rouge"), Error);
}

// ---- bootstrap ----

std::vector<EvalPair> sentences(std::size_t n, bool perfect) {
  std::vector<EvalPair> out;
  for (std::size_t i = 0; i < n; ++i) {
    EvalPair p;
    for (std::size_t k = 0; k < 10; ++k) p.references.emplace_back();
    p.references.resize(1);
    for (std::size_t k = 0; k < 10; ++k) p.references[0].push_back("w" + std::to_string((i + k) % 17));
    p.hypothesis = p.references[0];
    if (!perfect) p.hypothesis[i % 10] = "oops";
    out.push_back(p);
  }
  return out;
}

TEST(Bootstrap, IdenticalSystems) {
  Rng rng(10);
  auto c = random_corpus(rng, 50);
  for (Metric m : {Metric::bleu, Metric::ter}) {
    auto r = bootstrap_diff(c, c, m, 200, 3);
    EXPECT_EQ(r.observed_diff, 0.0);
    EXPECT_EQ(r.mean_diff, 0.0);
    EXPECT_LE(r.ci_low, 0.0);
    EXPECT_GE(r.ci_high, 0.0);
    EXPECT_EQ(r.p_value, 1.0);
  }
}

TEST(Bootstrap, PlantedAdvantage) {
  auto a = sentences(100, true);
  auto b = sentences(100, false);
  for (Metric m : {Metric::bleu, Metric::meteor, Metric::nist}) {
    auto r = bootstrap_diff(a, b, m, 500, 1);
    EXPECT_GT(r.ci_low, 0.0) << metric_name(m);
    EXPECT_EQ(r.p_value, 0.0) << metric_name(m);
  }
  auto t = bootstrap_diff(a, b, Metric::ter, 500, 1);
  EXPECT_NEAR(t.observed_diff, -0.1, 1e-12);
  EXPECT_NEAR(t.ci_high, -0.1, 1e-12);
  EXPECT_NEAR(t.ci_low, -0.1, 1e-12);
}

TEST(Bootstrap, DeterministicAndValidated) {
  Rng rng(11);
  auto a = random_corpus(rng, 40);
  auto b = random_corpus(rng, 40);
  auto r1 = bootstrap_diff(a, b, Metric::bleu, 300, 42);
  auto r2 = bootstrap_diff(a, b, Metric::bleu, 300, 42);
  EXPECT_EQ(r1.ci_low, r2.ci_low);
  EXPECT_EQ(r1.ci_high, r2.ci_high);
  EXPECT_EQ(r1.p_value, r2.p_value);
  EXPECT_LE(r1.ci_low, r1.ci_high);
  b.pop_back();
  EXPECT_THROW(bootstrap_diff(a, b, Metric::bleu), Error);
  b.push_back(a[0]);
  EXPECT_THROW(bootstrap_diff(a, b, Metric::bleu, 0), Error);
}

}  // namespace
}  // namespace parmine
