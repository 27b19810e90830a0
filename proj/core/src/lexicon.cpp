#include "parmine/lexicon.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "parmine/checksum.hpp"
#include "parmine/error.hpp"

namespace parmine {

namespace {

bool row_order(const Translation& a, const Translation& b) {
  if (a.prob != b.prob) return a.prob > b.prob;
  return a.target < b.target;
}

}  // namespace

TranslationLexicon::TranslationLexicon(std::string src_lang, std::string tgt_lang)
    : src_lang_(std::move(src_lang)), tgt_lang_(std::move(tgt_lang)) {}

void TranslationLexicon::set(std::string source, std::vector<Translation> row) {
  if (row.empty()) throw Error("lexicon row for \"" + source + "\" is empty");
  double sum = 0.0;
  for (const auto& t : row) {
    if (!(t.prob > 0.0 && t.prob <= 1.0)) {
      throw Error("lexicon probability out of (0,1] for \"" + source + "\" -> \"" + t.target +
                  "\"");
    }
    sum += t.prob;
  }
  if (std::abs(sum - 1.0) > 1e-6) {
    throw Error("lexicon row for \"" + source + "\" does not sum to 1");
  }
  std::sort(row.begin(), row.end(), row_order);
  for (std::size_t i = 1; i < row.size(); ++i) {
    if (row[i].target == row[i - 1].target) {
      throw Error("duplicate target \"" + row[i].target + "\" for \"" + source + "\"");
    }
  }
  rows_.insert_or_assign(std::move(source), std::move(row));
}

std::span<const Translation> TranslationLexicon::translations(std::string_view source) const {
  auto it = rows_.find(source);
  if (it == rows_.end()) return {};
  return it->second;
}

std::optional<std::string_view> TranslationLexicon::best(std::string_view source) const {
  auto it = rows_.find(source);
  if (it == rows_.end()) return std::nullopt;
  return std::string_view(it->second.front().target);
}

bool TranslationLexicon::contains(std::string_view source) const {
  return rows_.find(source) != rows_.end();
}

std::vector<std::string_view> TranslationLexicon::sources() const {
  std::vector<std::string_view> out;
  out.reserve(rows_.size());
  for (const auto& [source, row] : rows_) out.push_back(source);
  std::sort(out.begin(), out.end());
  return out;
}

void TranslationLexicon::write_tsv(std::ostream& out) const {
  out << "# " << src_lang_ << '\t' << tgt_lang_ << '\n';
  char buf[40];
  for (auto source : sources()) {
    for (const auto& t : rows_.find(source)->second) {
      std::snprintf(buf, sizeof buf, "%.17g", t.prob);
      out << source << '\t' << t.target << '\t' << buf << '\n';
    }
  }
}

void TranslationLexicon::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open lexicon for writing: " + path);
  write_tsv(out);
  if (!out) throw Error("failed writing lexicon: " + path);
}

TranslationLexicon TranslationLexicon::read_tsv(std::istream& in, std::string_view name) {
  TranslationLexicon lex;
  std::map<std::string, std::vector<Translation>> rows;
  std::string line;
  std::size_t line_no = 0;
  auto where = [&] { return std::string(name) + ":" + std::to_string(line_no); };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line_no == 1 && line.size() > 2) {
        auto tab = line.find('\t', 2);
        if (tab != std::string::npos) {
          lex.src_lang_ = line.substr(2, tab - 2);
          lex.tgt_lang_ = line.substr(tab + 1);
        }
      }
      continue;
    }
    auto t1 = line.find('\t');
    auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos || line.find('\t', t2 + 1) != std::string::npos) {
      throw Error(where() + ": expected source<TAB>target<TAB>prob");
    }
    double prob = 0.0;
    try {
      std::size_t used = 0;
      std::string field = line.substr(t2 + 1);
      prob = std::stod(field, &used);
      if (used != field.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw Error(where() + ": invalid probability");
    }
    rows[line.substr(0, t1)].push_back({line.substr(t1 + 1, t2 - t1 - 1), prob});
  }
  for (auto& [source, row] : rows) lex.set(source, std::move(row));
  return lex;
}

TranslationLexicon TranslationLexicon::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open lexicon: " + path);
  return read_tsv(in, path);
}

std::string TranslationLexicon::checksum() const {
  std::ostringstream out;
  write_tsv(out);
  return fnv1a_hex(out.str());
}

// ---- training ----

namespace {

struct Interner {
  std::unordered_map<std::string, std::uint32_t> ids;
  std::vector<std::string> words;

  std::uint32_t intern(const std::string& w) {
    auto [it, inserted] = ids.emplace(w, static_cast<std::uint32_t>(words.size()));
    if (inserted) words.push_back(w);
    return it->second;
  }
};

// A pair as distinct word ids with multiplicities, plus the global cell index
// of every (source word, target word) combination.
struct CompactPair {
  std::vector<std::uint32_t> src_ids;
  std::vector<double> src_counts;
  std::vector<double> tgt_counts;
  std::vector<std::size_t> cells;  // src-major: cells[s * |tgt| + t]
  double src_length = 0.0;
};

std::vector<std::pair<std::uint32_t, double>> bag(const Tokens& tokens, Interner& interner) {
  std::map<std::uint32_t, double> counts;
  for (const auto& t : tokens) counts[interner.intern(t)] += 1.0;
  return {counts.begin(), counts.end()};
}

}  // namespace

LexiconTraining train_lexicon(std::span<const TokenPair> pairs, const LexiconOptions& options,
                              std::string src_lang, std::string tgt_lang) {
  if (options.iterations < 1) throw Error("train_lexicon: iterations must be at least 1");
  if (!(options.prune_below >= 0.0 && options.prune_below < 1.0)) {
    throw Error("train_lexicon: prune_below must be in [0,1)");
  }
  if (pairs.empty()) throw Error("train_lexicon: seed corpus is empty");

  Interner src_words;
  Interner tgt_words;
  std::vector<std::pair<std::vector<std::pair<std::uint32_t, double>>,
                        std::vector<std::pair<std::uint32_t, double>>>>
      bags;
  bags.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& [src, tgt] = pairs[i];
    if (src.empty() || tgt.empty()) {
      throw Error("train_lexicon: seed pair " + std::to_string(i) + " has no " +
                  (src.empty() ? "source" : "target") + " tokens");
    }
    bags.emplace_back(bag(src, src_words), bag(tgt, tgt_words));
  }

  // Cell ids for the sparse table, ordered by (source id, target id).
  std::vector<std::pair<std::uint32_t, std::uint32_t>> keys;
  for (const auto& [s, t] : bags) {
    for (const auto& [e, ce] : s) {
      for (const auto& [f, cf] : t) keys.emplace_back(e, f);
    }
  }
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  auto cell_of = [&](std::uint32_t e, std::uint32_t f) {
    return static_cast<std::size_t>(
        std::lower_bound(keys.begin(), keys.end(), std::make_pair(e, f)) - keys.begin());
  };

  std::vector<CompactPair> compact;
  compact.reserve(bags.size());
  for (const auto& [s, t] : bags) {
    CompactPair p;
    for (const auto& [e, ce] : s) {
      p.src_ids.push_back(e);
      p.src_counts.push_back(ce);
      p.src_length += ce;
    }
    for (const auto& [f, cf] : t) p.tgt_counts.push_back(cf);
    p.cells.reserve(s.size() * t.size());
    for (const auto& [e, ce] : s) {
      for (const auto& [f, cf] : t) p.cells.push_back(cell_of(e, f));
    }
    compact.push_back(std::move(p));
  }

  const std::size_t n_cells = keys.size();
  std::vector<double> prob(n_cells, 1.0 / static_cast<double>(tgt_words.words.size()));
  std::vector<double> counts(n_cells);
  std::vector<double> totals(src_words.words.size());
  std::vector<double> denom;

  LexiconTraining result;
  result.log_likelihood.reserve(options.iterations + 1);

  // One pass computes the log-likelihood under the current table and
  // collects expected counts for the next one.
  auto e_step = [&]() {
    std::fill(counts.begin(), counts.end(), 0.0);
    double ll = 0.0;
    for (const auto& p : compact) {
      const std::size_t ns = p.src_counts.size();
      const std::size_t nt = p.tgt_counts.size();
      denom.assign(nt, 0.0);
      for (std::size_t s = 0; s < ns; ++s) {
        for (std::size_t t = 0; t < nt; ++t) {
          denom[t] += p.src_counts[s] * prob[p.cells[s * nt + t]];
        }
      }
      for (std::size_t t = 0; t < nt; ++t) {
        ll += p.tgt_counts[t] * std::log(denom[t] / p.src_length);
      }
      for (std::size_t s = 0; s < ns; ++s) {
        for (std::size_t t = 0; t < nt; ++t) {
          std::size_t c = p.cells[s * nt + t];
          counts[c] += p.tgt_counts[t] * p.src_counts[s] * prob[c] / denom[t];
        }
      }
    }
    return ll;
  };

  for (std::size_t it = 0; it < options.iterations; ++it) {
    result.log_likelihood.push_back(e_step());
    std::fill(totals.begin(), totals.end(), 0.0);
    for (std::size_t c = 0; c < n_cells; ++c) totals[keys[c].first] += counts[c];
    for (std::size_t c = 0; c < n_cells; ++c) prob[c] = counts[c] / totals[keys[c].first];
  }
  result.log_likelihood.push_back(e_step());

  TranslationLexicon lex(std::move(src_lang), std::move(tgt_lang));
  std::size_t c = 0;
  while (c < n_cells) {
    const std::uint32_t e = keys[c].first;
    std::size_t end = c;
    while (end < n_cells && keys[end].first == e) ++end;
    std::vector<Translation> row;
    std::size_t argmax = c;
    for (std::size_t k = c; k < end; ++k) {
      if (prob[k] > prob[argmax]) argmax = k;
    }
    for (std::size_t k = c; k < end; ++k) {
      if (prob[k] > 0.0 && (prob[k] >= options.prune_below || k == argmax)) {
        row.push_back({tgt_words.words[keys[k].second], prob[k]});
      }
    }
    double sum = 0.0;
    for (const auto& t : row) sum += t.prob;
    for (auto& t : row) t.prob /= sum;
    lex.set(src_words.words[e], std::move(row));
    c = end;
  }
  result.lexicon = std::move(lex);
  return result;
}

LexiconTraining train_lexicon(const BitextCorpus& seed, const LexiconOptions& options) {
  if (seed.empty()) throw Error("train_lexicon: seed corpus is empty");
  std::vector<TokenPair> pairs;
  pairs.reserve(seed.size());
  for (const auto& p : seed.pairs) {
    pairs.emplace_back(tokenize(p.src, true), tokenize(p.tgt, true));
  }
  return train_lexicon(pairs, options, seed.src_lang, seed.tgt_lang);
}

std::vector<Translation> lookup(const TranslationLexicon& lex, std::string_view word,
                                std::size_t k) {
  auto row = lex.translations(word);
  return {row.begin(), row.begin() + static_cast<std::ptrdiff_t>(std::min(k, row.size()))};
}

Tokens gloss_translate(const TranslationLexicon& lex, const Tokens& tokens,
                       std::string_view unknown_marker, std::size_t* unknown_count) {
  Tokens out;
  out.reserve(tokens.size());
  std::size_t unknown = 0;
  for (const auto& token : tokens) {
    if (!has_letter(token)) {
      out.push_back(token);
      continue;
    }
    if (auto best = lex.best(to_lower(token))) {
      out.emplace_back(*best);
    } else {
      out.emplace_back(unknown_marker);
      ++unknown;
    }
  }
  if (unknown_count) *unknown_count = unknown;
  return out;
}

}  // namespace parmine
