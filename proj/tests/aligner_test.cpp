#include "parmine/aligner.hpp"

#include <gtest/gtest.h>

#include <functional>
#include <limits>

#include "parmine/error.hpp"
#include "parmine/random.hpp"

namespace parmine {
namespace {

using Matrix = std::vector<std::vector<double>>;

Matrix random_matrix(std::size_t n, std::size_t m, Rng& rng, bool coarse = false) {
  Matrix s(n, std::vector<double>(m));
  for (auto& row : s) {
    for (auto& v : row) v = coarse ? static_cast<double>(rng.below(11)) / 10.0 : rng.uniform();
  }
  return s;
}

PairScorer scorer(const Matrix& s) {
  return [&s](std::size_t i, std::size_t j) { return s[i][j]; };
}

struct Path {
  double cost = std::numeric_limits<double>::infinity();
  std::vector<std::pair<std::size_t, std::size_t>> links;
};

// Enumerates every monotone path through the lattice.
void enumerate(const Matrix& s, std::size_t i, std::size_t j, double g, double gap,
               std::vector<std::pair<std::size_t, std::size_t>>& links,
               std::vector<Path>& out) {
  const std::size_t n = s.size();
  const std::size_t m = n ? s[0].size() : 0;
  if (i == n && j == m) {
    out.push_back({g, links});
    return;
  }
  if (i < n && j < m) {
    links.emplace_back(i, j);
    enumerate(s, i + 1, j + 1, g + (1.0 - s[i][j]), gap, links, out);
    links.pop_back();
  }
  if (i < n) enumerate(s, i + 1, j, g + gap, gap, links, out);
  if (j < m) enumerate(s, i, j + 1, g + gap, gap, links, out);
}

std::vector<std::pair<std::size_t, std::size_t>> link_pairs(const AlignmentResult& r) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (const auto& l : r.links) out.emplace_back(l.src, l.tgt);
  return out;
}

void expect_well_formed(const AlignmentResult& r, std::size_t n, std::size_t m) {
  std::vector<int> src(n, 0), tgt(m, 0);
  for (std::size_t k = 0; k < r.links.size(); ++k) {
    if (k > 0) {
      EXPECT_LT(r.links[k - 1].src, r.links[k].src);
      EXPECT_LT(r.links[k - 1].tgt, r.links[k].tgt);
    }
    ++src[r.links[k].src];
    ++tgt[r.links[k].tgt];
  }
  for (auto i : r.gaps_src) ++src[i];
  for (auto j : r.gaps_tgt) ++tgt[j];
  for (int c : src) EXPECT_EQ(c, 1);
  for (int c : tgt) EXPECT_EQ(c, 1);
}

TEST(Align, MatchesExhaustiveEnumeration) {
  Rng rng(1);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng.below(5);
    const std::size_t m = 1 + rng.below(5);
    const double gap = (trial % 3 == 0) ? 0.2 : (trial % 3 == 1 ? 0.4 : 0.5);
    const Matrix s = random_matrix(n, m, rng);
    std::vector<Path> paths;
    std::vector<std::pair<std::size_t, std::size_t>> links;
    enumerate(s, 0, 0, 0.0, gap, links, paths);
    std::sort(paths.begin(), paths.end(),
              [](const Path& a, const Path& b) { return a.cost < b.cost; });
    const auto r = align(n, m, scorer(s), gap);
    EXPECT_NEAR(r.total_cost, paths[0].cost, 1e-12);
    if (paths.size() == 1 || paths[1].cost - paths[0].cost > 1e-9) {
      EXPECT_EQ(link_pairs(r), paths[0].links);
    }
    expect_well_formed(r, n, m);
  }
}

TEST(Align, AgreesWithDynamicProgramIncludingTies) {
  Rng rng(2);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t n = 1 + rng.below(12);
    const std::size_t m = 1 + rng.below(12);
    const double gaps[] = {0.2, 0.4, 0.5};
    const double gap = gaps[trial % 3];
    const Matrix s = random_matrix(n, m, rng, trial % 2 == 0);
    const auto a = align(n, m, scorer(s), gap);
    const auto b = align_bruteforce(n, m, scorer(s), gap);
    ASSERT_EQ(a.total_cost, b.total_cost) << "trial " << trial;
    ASSERT_EQ(a.links, b.links) << "trial " << trial;
    ASSERT_EQ(a.gaps_src, b.gaps_src);
    ASSERT_EQ(a.gaps_tgt, b.gaps_tgt);
  }
}

TEST(Align, SingleCellChoices) {
  Matrix high = {{0.9}};
  auto r = align(1, 1, scorer(high), 0.4);
  ASSERT_EQ(r.links.size(), 1u);
  EXPECT_NEAR(r.total_cost, 0.1, 1e-12);

  Matrix low = {{0.1}};
  r = align(1, 1, scorer(low), 0.4);
  EXPECT_TRUE(r.links.empty());
  EXPECT_EQ(r.gaps_src, std::vector<std::size_t>{0});
  EXPECT_EQ(r.gaps_tgt, std::vector<std::size_t>{0});
  EXPECT_NEAR(r.total_cost, 0.8, 1e-12);
}

TEST(Align, TieBetweenMatchAndGapsPrefersMatch) {
  Matrix s = {{0.25}};
  auto r = align(1, 1, scorer(s), 0.375);
  EXPECT_EQ(r.links.size(), 1u);
}

TEST(Align, InsertedTargetSentenceBecomesAGap) {
  const std::size_t n = 6;
  // tgt is src with an extra sentence at position 2.
  auto sim = [](std::size_t i, std::size_t j) {
    const std::size_t original = j < 2 ? j : (j == 2 ? 99 : j - 1);
    return original == i ? 0.95 : 0.05;
  };
  auto r = align(n, n + 1, sim, 0.4);
  EXPECT_EQ(r.gaps_tgt, std::vector<std::size_t>{2});
  EXPECT_TRUE(r.gaps_src.empty());
  ASSERT_EQ(r.links.size(), n);
  for (std::size_t i = 0; i < n; ++i) {
    EXPECT_EQ(r.links[i].src, i);
    EXPECT_EQ(r.links[i].tgt, i < 2 ? i : i + 1);
  }
}

TEST(Align, EmptySides) {
  auto never = [](std::size_t, std::size_t) -> double {
    ADD_FAILURE() << "similarity called";
    return 0.0;
  };
  auto r = align(0, 3, never, 0.4);
  EXPECT_TRUE(r.links.empty());
  EXPECT_EQ(r.gaps_tgt, (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_NEAR(r.total_cost, 1.2, 1e-12);
  r = align(2, 0, never, 0.5);
  EXPECT_EQ(r.gaps_src, (std::vector<std::size_t>{0, 1}));
  EXPECT_NEAR(r.total_cost, 1.0, 1e-12);
  r = align(0, 0, never, 0.5);
  EXPECT_EQ(r.total_cost, 0.0);
}

TEST(Align, CostIsWithinTheTrivialBounds) {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.below(10);
    const std::size_t m = 1 + rng.below(10);
    const Matrix s = random_matrix(n, m, rng);
    const auto r = align(n, m, scorer(s), 0.4);
    EXPECT_LE(r.total_cost, (n + m) * 0.4 + 1e-12);
    EXPECT_GE(r.total_cost, (n > m ? n - m : m - n) * 0.4 - 1e-12);
    double recomputed = 0.4 * static_cast<double>(r.gaps_src.size() + r.gaps_tgt.size());
    for (const auto& l : r.links) {
      EXPECT_EQ(l.score, s[l.src][l.tgt]);
      recomputed += 1.0 - l.score;
    }
    EXPECT_NEAR(recomputed, r.total_cost, 1e-9);
  }
}

TEST(Align, HeuristicNeverOverestimates) {
  Rng rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.below(8);
    const std::size_t m = 1 + rng.below(8);
    const Matrix s = random_matrix(n, m, rng);
    for (std::size_t i = 0; i <= n; ++i) {
      for (std::size_t j = 0; j <= m; ++j) {
        Matrix rest(n - i, std::vector<double>(m - j));
        for (std::size_t a = i; a < n; ++a) {
          for (std::size_t b = j; b < m; ++b) rest[a - i][b - j] = s[a][b];
        }
        const double exact =
            (n - i == 0 || m - j == 0)
                ? 0.4 * static_cast<double>((n - i) + (m - j))
                : align_bruteforce(n - i, m - j, scorer(rest), 0.4).total_cost;
        EXPECT_LE(alignment_heuristic(i, j, n, m, 0.4), exact + 1e-12);
      }
    }
  }
  EXPECT_DOUBLE_EQ(alignment_heuristic(0, 0, 5, 2, 0.4), 1.2);
  EXPECT_DOUBLE_EQ(alignment_heuristic(5, 2, 5, 2, 0.4), 0.0);
}

TEST(Align, EvaluatesEachCellAtMostOnce) {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.below(15);
    const std::size_t m = 1 + rng.below(15);
    const Matrix s = random_matrix(n, m, rng);
    std::vector<int> calls(n * m, 0);
    auto counting = [&](std::size_t i, std::size_t j) {
      ++calls[i * m + j];
      return s[i][j];
    };
    const auto r = align(n, m, counting, 0.4);
    std::size_t total = 0;
    for (int c : calls) {
      EXPECT_LE(c, 1);
      total += static_cast<std::size_t>(c);
    }
    EXPECT_EQ(r.similarity_calls, total);
    EXPECT_LE(total, n * m);
  }
}

TEST(Align, DiagonalInstancesStayNearTheDiagonal) {
  const std::size_t n = 400;
  auto exact = [](std::size_t i, std::size_t j) { return i == j ? 1.0 : 0.1; };
  auto r = align(n, n, exact, 0.4);
  EXPECT_EQ(r.links.size(), n);
  EXPECT_LE(r.similarity_calls, n);

  auto close = [](std::size_t i, std::size_t j) { return i == j ? 0.9 : 0.1; };
  r = align(n, n, close, 0.4);
  EXPECT_EQ(r.links.size(), n);
  EXPECT_LT(r.similarity_calls, n * n / 2 + n);
}

TEST(Align, RejectsBadInputs) {
  Matrix s = {{0.5}};
  EXPECT_THROW(align(1, 1, scorer(s), 0.0), Error);
  EXPECT_THROW(align(1, 1, scorer(s), 0.6), Error);
  Matrix bad = {{1.5}};
  EXPECT_THROW(align(1, 1, scorer(bad), 0.4), Error);
  EXPECT_THROW(align_bruteforce(101, 101, scorer(s), 0.4), Error);
}

TEST(Align, SentenceOverloadUsesTheSentenceScorer) {
  std::vector<Sentence> src(3), tgt(3);
  for (std::size_t k = 0; k < 3; ++k) {
    src[k].text = "s" + std::to_string(k);
    tgt[k].text = "t" + std::to_string(k);
  }
  auto r = align(std::span<const Sentence>(src), std::span<const Sentence>(tgt),
                 [](const Sentence& a, const Sentence& b) {
                   return a.text.substr(1) == b.text.substr(1) ? 1.0 : 0.0;
                 });
  EXPECT_EQ(r.links.size(), 3u);
  EXPECT_EQ(r.total_cost, 0.0);
}

TEST(ThresholdFilter, KeepsLinksAtOrAboveTheThreshold) {
  std::vector<Sentence> src(3), tgt(3);
  for (std::size_t k = 0; k < 3; ++k) {
    src[k].text = "s" + std::to_string(k);
    tgt[k].text = "t" + std::to_string(k);
  }
  AlignmentResult r;
  r.links = {{0, 0, 0.9}, {1, 1, 0.5}, {2, 2, 0.3}};
  auto kept = threshold_filter(r, 0.5, src, tgt, 7, "rev");
  ASSERT_EQ(kept.size(), 2u);
  EXPECT_EQ(kept[1].src, "s1");
  EXPECT_EQ(kept[1].tgt, "t1");
  EXPECT_EQ(kept[1].score, 0.5);
  EXPECT_EQ(kept[1].origin.article_id, 7u);
  EXPECT_EQ(kept[1].origin.direction, "rev");
  EXPECT_EQ(threshold_filter(r, 0.0, src, tgt).size(), 3u);
  EXPECT_TRUE(threshold_filter(r, 1.0, src, tgt).empty());
  EXPECT_THROW(threshold_filter(r, 1.1, src, tgt), Error);
  EXPECT_THROW(threshold_filter(r, -0.1, src, tgt), Error);
}

TEST(ThresholdFilter, OutputShrinksAsThresholdGrows) {
  Rng rng(6);
  std::vector<Sentence> src(10), tgt(10);
  const Matrix s = random_matrix(10, 10, rng);
  const auto r = align(10, 10, scorer(s), 0.5);
  std::size_t previous = std::numeric_limits<std::size_t>::max();
  for (int k = 0; k <= 20; ++k) {
    auto kept = threshold_filter(r, k / 20.0, src, tgt);
    EXPECT_LE(kept.size(), previous);
    previous = kept.size();
  }
}

}  // namespace
}  // namespace parmine
