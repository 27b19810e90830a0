#include "parmine/miner.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "parmine/error.hpp"

namespace parmine {

std::string ArticleLog::to_line() const {
  std::ostringstream out;
  out << article_id << '\t' << src_sentences << '\t' << tgt_sentences << '\t' << links << '\t'
      << accepted << '\t' << similarity_calls;
  return out.str();
}

namespace {

std::vector<PreparedSentence> prepare(const std::vector<Sentence>& sentences,
                                      const TranslationLexicon& lex) {
  std::vector<PreparedSentence> out;
  out.reserve(sentences.size());
  for (const auto& s : sentences) {
    Tokens lowered;
    lowered.reserve(s.tokens.size());
    for (const auto& t : s.tokens) lowered.push_back(to_lower(t));
    out.emplace_back(lowered, lex);
  }
  return out;
}

}  // namespace

std::vector<BiSentence> mine_pair(const ArticlePair& pair, const SimilarityModel& model,
                                  const TranslationLexicon& lex, const MiningConfig& config,
                                  ArticleLog* log) {
  if (pair.src.lang != model.src_lang || pair.tgt.lang != model.tgt_lang) {
    throw Error("article " + std::to_string(pair.id) + " is " + pair.src.lang + "-" +
                pair.tgt.lang + " but the model scores " + model.src_lang + "-" +
                model.tgt_lang);
  }
  if ((!lex.src_lang().empty() && lex.src_lang() != model.src_lang) ||
      (!lex.tgt_lang().empty() && lex.tgt_lang() != model.tgt_lang)) {
    throw Error("lexicon direction " + lex.src_lang() + "-" + lex.tgt_lang() +
                " does not match the model");
  }
  const auto src = segment_sentences(pair.src.body);
  const auto tgt = segment_sentences(pair.tgt.body);
  const auto src_prepared = prepare(src, lex);
  const auto tgt_prepared = prepare(tgt, lex);

  auto result = align(
      src.size(), tgt.size(),
      [&](std::size_t i, std::size_t j) {
        return similarity(model, src_prepared[i], tgt_prepared[j]);
      },
      config.gap_cost);
  auto accepted = threshold_filter(result, config.threshold, src, tgt, pair.id, config.direction);
  if (log) {
    log->article_id = pair.id;
    log->src_sentences = src.size();
    log->tgt_sentences = tgt.size();
    log->links = result.links.size();
    log->accepted = accepted.size();
    log->similarity_calls = result.similarity_calls;
  }
  return accepted;
}

MiningResult mine_corpus(std::span<const ArticlePair> store, const SimilarityModel& model,
                         const TranslationLexicon& lex, const MiningConfig& config,
                         std::size_t workers) {
  if (workers == 0) throw Error("mine_corpus: workers must be at least 1");
  std::vector<std::size_t> order(store.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return store[a].id < store[b].id; });

  std::vector<std::vector<BiSentence>> mined(store.size());
  std::vector<ArticleLog> logs(store.size());
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  std::size_t error_at = store.size();

  auto work = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= order.size()) return;
      try {
        mined[k] = mine_pair(store[order[k]], model, lex, config, &logs[k]);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (k < error_at) {
          error_at = k;
          error = std::current_exception();
        }
      }
    }
  };

  const std::size_t n_threads = std::min(workers, std::max<std::size_t>(1, store.size()));
  if (n_threads == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);

  MiningResult result;
  result.corpus.src_lang = model.src_lang;
  result.corpus.tgt_lang = model.tgt_lang;
  for (std::size_t k = 0; k < order.size(); ++k) {
    for (auto& p : mined[k]) result.corpus.pairs.push_back(std::move(p));
  }
  result.log = std::move(logs);
  return result;
}

OverlapStats OverlapStats::from_counts(std::size_t recognized, std::size_t overlapping) {
  if (overlapping > recognized) {
    throw Error("overlap count " + std::to_string(overlapping) + " exceeds recognized count " +
                std::to_string(recognized));
  }
  return {recognized, overlapping, recognized - overlapping};
}

namespace {

std::string pair_key(const BiSentence& p) {
  return collapse_whitespace(p.src) + '\t' + collapse_whitespace(p.tgt);
}

}  // namespace

MergeResult merge_bidirectional(const BitextCorpus& fwd, const BitextCorpus& rev) {
  auto differ = [](const std::string& a, const std::string& b) {
    return !a.empty() && !b.empty() && a != b;
  };
  if (differ(fwd.src_lang, rev.src_lang) || differ(fwd.tgt_lang, rev.tgt_lang)) {
    throw Error("merge_bidirectional: forward corpus is " + fwd.src_lang + "-" + fwd.tgt_lang +
                " but reverse corpus is " + rev.src_lang + "-" + rev.tgt_lang);
  }
  MergeResult result;
  result.merged.src_lang = fwd.src_lang.empty() ? rev.src_lang : fwd.src_lang;
  result.merged.tgt_lang = fwd.tgt_lang.empty() ? rev.tgt_lang : fwd.tgt_lang;

  std::unordered_map<std::string, std::size_t> index;
  auto add = [&](const BiSentence& p) {
    auto [it, inserted] = index.emplace(pair_key(p), result.merged.pairs.size());
    if (inserted) {
      result.merged.pairs.push_back(p);
    } else {
      auto& kept = result.merged.pairs[it->second];
      kept.score = std::max(kept.score, p.score);
    }
  };
  for (const auto& p : fwd.pairs) add(p);
  const std::size_t fwd_unique = index.size();

  std::size_t overlapping = 0;
  for (const auto& p : rev.pairs) {
    auto it = index.find(pair_key(p));
    if (it != index.end() && it->second < fwd_unique) ++overlapping;
    add(p);
  }
  result.stats = OverlapStats::from_counts(rev.size(), overlapping);
  return result;
}

std::string format_overlap_stats(const OverlapStats& stats) {
  std::ostringstream out;
  out << "Value\tData Mined\n"
      << "Recognized\t" << stats.recognized << '\n'
      << "Overlapping\t" << stats.overlapping << '\n'
      << "Newly obtained\t" << stats.newly_obtained << '\n';
  return out.str();
}

}  // namespace parmine
