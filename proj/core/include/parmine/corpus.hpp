#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "parmine/text.hpp"

namespace parmine {

struct Document {
  std::string lang;
  std::string title;
  std::string body;
};

struct ArticlePair {
  std::uint64_t id = 0;
  Document src;
  Document tgt;
};

// Where a bi-sentence came from. direction is "fwd", "rev", "analogy" or
// "seed"; indices refer to sentence positions inside the article.
struct Origin {
  std::uint64_t article_id = 0;
  std::size_t src_index = 0;
  std::size_t tgt_index = 0;
  std::string direction;

  bool operator==(const Origin&) const = default;
};

struct BiSentence {
  std::string src;
  std::string tgt;
  double score = 1.0;
  Origin origin;
};

struct BitextCorpus {
  std::vector<BiSentence> pairs;
  std::string src_lang;
  std::string tgt_lang;

  std::size_t size() const { return pairs.size(); }
  bool empty() const { return pairs.empty(); }
};

// Swaps the source and target side of every pair and the corpus languages.
BitextCorpus flipped(const BitextCorpus& corpus);
ArticlePair flipped(const ArticlePair& pair);

// ---- article-pair store (JSON lines) ----

void write_store_record(std::ostream& out, const ArticlePair& pair);
void write_store(std::ostream& out, const std::vector<ArticlePair>& pairs);
void write_store(const std::string& path, const std::vector<ArticlePair>& pairs);

// Parse failures name the offending line.
std::vector<ArticlePair> read_store(std::istream& in, std::string_view name = "<stream>");
std::vector<ArticlePair> read_store(const std::string& path);

// ---- article dumps ----

// One JSON object per line with "title", "text" and optionally "lang";
// default_lang is used when the field is absent.
std::vector<Document> read_dump(const std::string& path, const std::string& default_lang);
void write_dump(const std::string& path, const std::vector<Document>& docs);

using TitleLinks = std::vector<std::pair<std::string, std::string>>;

// TSV: source title <TAB> target title.
TitleLinks read_links(const std::string& path);
void write_links(const std::string& path, const TitleLinks& links);

/// Keeps the linked articles present in both dumps, in link order, and
/// assigns ids 0, 1, 2, ... A source title linked twice is an error.
std::vector<ArticlePair> pair_articles(const std::vector<Document>& src_dump,
                                       const std::vector<Document>& tgt_dump,
                                       const TitleLinks& links);

// ---- bitext TSV ----

// src <TAB> tgt [<TAB> score]. Tabs and newlines inside sentences become
// spaces on write.
void write_bitext(std::ostream& out, const BitextCorpus& corpus, bool with_score = true);
void write_bitext(const std::string& path, const BitextCorpus& corpus, bool with_score = true);
BitextCorpus read_bitext(std::istream& in, std::string src_lang = {}, std::string tgt_lang = {},
                         std::string_view name = "<stream>");
BitextCorpus read_bitext(const std::string& path, std::string src_lang = {},
                         std::string tgt_lang = {});

// Plain one-sentence-per-line files (eval hypotheses and references).
std::vector<std::string> read_lines(const std::string& path);
void write_lines(const std::string& path, const std::vector<std::string>& lines);

// ---- test-set sampling ----

struct CorpusSplit {
  BitextCorpus test;
  BitextCorpus train;
};

/// Splits the corpus into n_segments contiguous segments (the first
/// size % n_segments get one extra pair) and draws per_segment pairs from
/// each without replacement. Both outputs keep corpus order.
CorpusSplit sample_test_set(const BitextCorpus& corpus, std::size_t n_segments = 200,
                            std::size_t per_segment = 10, std::uint64_t seed = 0);

// ---- statistics ----

struct SideStats {
  std::size_t bytes = 0;  // UTF-8 bytes of a one-sentence-per-line file
  std::size_t tokens = 0;
  std::size_t unique_tokens = 0;

  bool operator==(const SideStats&) const = default;
};

struct CorpusStats {
  std::size_t sentences = 0;
  SideStats src;
  SideStats tgt;

  bool operator==(const CorpusStats&) const = default;
};

// Counts use lowercased tokens.
CorpusStats corpus_stats(const BitextCorpus& corpus);

// Tab-separated table with the rows "Size in MB", "No. of sentences",
// "No. of words", "No. of unique words".
std::string format_stats_table(const CorpusStats& stats, std::string_view src_label,
                               std::string_view tgt_label);
std::string stats_json(const CorpusStats& stats);

}  // namespace parmine
