#include "parmine/random.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "parmine/checksum.hpp"
#include "support.hpp"

namespace parmine {
namespace {

TEST(Rng, SameSeedSameStream) {
  Rng a(123), b(123), c(124);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next(), b.next());
  EXPECT_NE(Rng(123).next(), c.next());
}

TEST(Rng, BelowStaysInRangeAndCoversIt) {
  Rng rng(1);
  std::vector<int> hist(7, 0);
  for (int i = 0; i < 7000; ++i) {
    auto v = rng.below(7);
    ASSERT_LT(v, 7u);
    ++hist[v];
  }
  for (int h : hist) {
    EXPECT_GT(h, 850);
    EXPECT_LT(h, 1150);
  }
  EXPECT_EQ(rng.below(1), 0u);
}

TEST(Rng, UniformIsInUnitInterval) {
  Rng rng(2);
  double sum = 0.0;
  for (int i = 0; i < 10000; ++i) {
    double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / 10000, 0.5, 0.02);
}

TEST(Rng, SampleIndicesAreDistinctSortedAndInRange) {
  Rng rng(3);
  for (std::size_t n : {1u, 5u, 10u, 100u, 1000u}) {
    for (std::size_t k : {std::size_t{0}, std::size_t{1}, n / 3, n / 2 + 1, n}) {
      if (k > n) continue;
      auto idx = rng.sample_indices(n, k);
      ASSERT_EQ(idx.size(), k);
      EXPECT_TRUE(std::is_sorted(idx.begin(), idx.end()));
      EXPECT_EQ(std::set<std::size_t>(idx.begin(), idx.end()).size(), k);
      if (k > 0) {
        EXPECT_LT(idx.back(), n);
      }
    }
  }
  EXPECT_THROW(rng.sample_indices(3, 4), Error);
}

TEST(Rng, SampleIndicesIsRoughlyUniform) {
  Rng rng(4);
  std::vector<int> hits(10, 0);
  for (int t = 0; t < 5000; ++t) {
    for (auto i : rng.sample_indices(10, 3)) ++hits[i];
  }
  for (int h : hits) EXPECT_NEAR(h, 1500, 150);
}

TEST(Rng, ShuffleIsAPermutation) {
  Rng rng(5);
  std::vector<int> v(50);
  for (int i = 0; i < 50; ++i) v[i] = i;
  rng.shuffle(std::span<int>(v));
  std::vector<int> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 50; ++i) EXPECT_EQ(sorted[i], i);
}

// Published FNV-1a 64-bit test vectors.
TEST(Fnv1a, KnownVectors) {
  EXPECT_EQ(fnv1a_hex(""), "cbf29ce484222325");
  EXPECT_EQ(fnv1a_hex("a"), "af63dc4c8601ec8c");
  EXPECT_EQ(fnv1a_hex("foobar"), "85944171f73967e8");
  Fnv1a h;
  h.update("foo");
  h.update("bar");
  EXPECT_EQ(h.hex(), "85944171f73967e8");
}

TEST(Fnv1a, FileChecksumMatchesContent) {
  testing::TempDir dir("fnv");
  testing::spit(dir.path() / "f.txt", "foobar");
  EXPECT_EQ(file_checksum(dir.file("f.txt")), "85944171f73967e8");
  EXPECT_THROW(file_checksum(dir.file("missing")), Error);
}

}  // namespace
}  // namespace parmine
