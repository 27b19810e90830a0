#include "parmine/corpus.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"

#include "parmine/error.hpp"
#include "parmine/random.hpp"

namespace parmine {

using nlohmann::json;

BitextCorpus flipped(const BitextCorpus& corpus) {
  BitextCorpus out;
  out.src_lang = corpus.tgt_lang;
  out.tgt_lang = corpus.src_lang;
  out.pairs.reserve(corpus.pairs.size());
  for (const auto& p : corpus.pairs) {
    BiSentence q = p;
    std::swap(q.src, q.tgt);
    std::swap(q.origin.src_index, q.origin.tgt_index);
    out.pairs.push_back(std::move(q));
  }
  return out;
}

ArticlePair flipped(const ArticlePair& pair) { return ArticlePair{pair.id, pair.tgt, pair.src}; }

// ---- store ----

namespace {

std::string open_error(const std::string& what, const std::string& path) {
  return "cannot open " + what + ": " + path;
}

std::ifstream open_in(const std::string& path, const std::string& what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(open_error(what, path));
  return in;
}

std::ofstream open_out(const std::string& path, const std::string& what) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(open_error(what, path));
  return out;
}

std::string location(std::string_view name, std::size_t line) {
  return std::string(name) + ":" + std::to_string(line);
}

template <typename T>
T field(const json& j, const char* key, std::string_view name, std::size_t line) {
  auto it = j.find(key);
  if (it == j.end()) {
    throw Error(location(name, line) + ": missing field \"" + key + "\"");
  }
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw Error(location(name, line) + ": field \"" + key + "\" has the wrong type");
  }
}

std::string single_line(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c == '\t' || c == '\n' || c == '\r') c = ' ';
  }
  return out;
}

std::vector<std::string> split_tabs(std::string_view line) {
  std::vector<std::string> cols;
  std::size_t start = 0;
  for (;;) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      cols.emplace_back(line.substr(start));
      return cols;
    }
    cols.emplace_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace

void write_store_record(std::ostream& out, const ArticlePair& pair) {
  json j = {{"id", pair.id},
            {"src_lang", pair.src.lang},
            {"tgt_lang", pair.tgt.lang},
            {"src_title", pair.src.title},
            {"tgt_title", pair.tgt.title},
            {"src_text", pair.src.body},
            {"tgt_text", pair.tgt.body}};
  out << j.dump(-1, ' ', false, json::error_handler_t::replace) << '\n';
}

void write_store(std::ostream& out, const std::vector<ArticlePair>& pairs) {
  for (const auto& p : pairs) write_store_record(out, p);
}

void write_store(const std::string& path, const std::vector<ArticlePair>& pairs) {
  auto out = open_out(path, "store");
  write_store(out, pairs);
  if (!out) throw Error("failed writing store: " + path);
}

std::vector<ArticlePair> read_store(std::istream& in, std::string_view name) {
  std::vector<ArticlePair> pairs;
  std::unordered_set<std::uint64_t> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw Error(location(name, line_no) + ": invalid JSON record: " + e.what());
    }
    if (!j.is_object()) throw Error(location(name, line_no) + ": record is not an object");
    ArticlePair p;
    p.id = field<std::uint64_t>(j, "id", name, line_no);
    p.src.lang = field<std::string>(j, "src_lang", name, line_no);
    p.tgt.lang = field<std::string>(j, "tgt_lang", name, line_no);
    p.src.title = field<std::string>(j, "src_title", name, line_no);
    p.tgt.title = field<std::string>(j, "tgt_title", name, line_no);
    p.src.body = field<std::string>(j, "src_text", name, line_no);
    p.tgt.body = field<std::string>(j, "tgt_text", name, line_no);
    if (p.src.lang.empty() || p.src.lang == p.tgt.lang) {
      throw Error(location(name, line_no) + ": article " + std::to_string(p.id) +
                  " needs two different languages");
    }
    if (!ids.insert(p.id).second) {
      throw Error(location(name, line_no) + ": duplicate article id " + std::to_string(p.id));
    }
    pairs.push_back(std::move(p));
  }
  return pairs;
}

std::vector<ArticlePair> read_store(const std::string& path) {
  auto in = open_in(path, "store");
  return read_store(in, path);
}

// ---- dumps ----

std::vector<Document> read_dump(const std::string& path, const std::string& default_lang) {
  auto in = open_in(path, "dump");
  std::vector<Document> docs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw Error(location(path, line_no) + ": invalid JSON record: " + e.what());
    }
    Document d;
    d.title = field<std::string>(j, "title", path, line_no);
    d.body = field<std::string>(j, "text", path, line_no);
    d.lang = j.contains("lang") ? field<std::string>(j, "lang", path, line_no) : default_lang;
    if (d.lang.empty()) throw Error(location(path, line_no) + ": document has no language");
    docs.push_back(std::move(d));
  }
  return docs;
}

void write_dump(const std::string& path, const std::vector<Document>& docs) {
  auto out = open_out(path, "dump");
  for (const auto& d : docs) {
    json j = {{"title", d.title}, {"text", d.body}, {"lang", d.lang}};
    out << j.dump(-1, ' ', false, json::error_handler_t::replace) << '\n';
  }
}

TitleLinks read_links(const std::string& path) {
  auto in = open_in(path, "links");
  TitleLinks links;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    auto cols = split_tabs(line);
    if (cols.size() != 2) throw Error(location(path, line_no) + ": expected two columns");
    links.emplace_back(std::move(cols[0]), std::move(cols[1]));
  }
  return links;
}

void write_links(const std::string& path, const TitleLinks& links) {
  auto out = open_out(path, "links");
  for (const auto& [src, tgt] : links) out << single_line(src) << '\t' << single_line(tgt) << '\n';
}

std::vector<ArticlePair> pair_articles(const std::vector<Document>& src_dump,
                                       const std::vector<Document>& tgt_dump,
                                       const TitleLinks& links) {
  std::unordered_map<std::string_view, const Document*> src_by_title;
  std::unordered_map<std::string_view, const Document*> tgt_by_title;
  for (const auto& d : src_dump) src_by_title.emplace(d.title, &d);
  for (const auto& d : tgt_dump) tgt_by_title.emplace(d.title, &d);

  std::unordered_set<std::string_view> seen;
  std::vector<ArticlePair> pairs;
  for (const auto& [src_title, tgt_title] : links) {
    if (!seen.insert(src_title).second) {
      throw Error("duplicate link for source title \"" + src_title + "\"");
    }
    auto s = src_by_title.find(src_title);
    auto t = tgt_by_title.find(tgt_title);
    if (s == src_by_title.end() || t == tgt_by_title.end()) continue;
    if (s->second->lang == t->second->lang) {
      throw Error("linked articles \"" + src_title + "\" and \"" + tgt_title +
                  "\" share the language " + s->second->lang);
    }
    ArticlePair p;
    p.id = pairs.size();
    p.src = *s->second;
    p.tgt = *t->second;
    pairs.push_back(std::move(p));
  }
  return pairs;
}

// ---- bitext ----

void write_bitext(std::ostream& out, const BitextCorpus& corpus, bool with_score) {
  char buf[32];
  for (const auto& p : corpus.pairs) {
    out << single_line(p.src) << '\t' << single_line(p.tgt);
    if (with_score) {
      std::snprintf(buf, sizeof buf, "%.6f", p.score);
      out << '\t' << buf;
    }
    out << '\n';
  }
}

void write_bitext(const std::string& path, const BitextCorpus& corpus, bool with_score) {
  auto out = open_out(path, "bitext");
  write_bitext(out, corpus, with_score);
  if (!out) throw Error("failed writing bitext: " + path);
}

BitextCorpus read_bitext(std::istream& in, std::string src_lang, std::string tgt_lang,
                         std::string_view name) {
  BitextCorpus corpus;
  corpus.src_lang = std::move(src_lang);
  corpus.tgt_lang = std::move(tgt_lang);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    auto cols = split_tabs(line);
    if (cols.size() < 2 || cols.size() > 3) {
      throw Error(location(name, line_no) + ": expected 2 or 3 tab-separated columns");
    }
    BiSentence p;
    p.src = std::move(cols[0]);
    p.tgt = std::move(cols[1]);
    if (cols.size() == 3) {
      try {
        std::size_t used = 0;
        p.score = std::stod(cols[2], &used);
        if (used != cols[2].size()) throw std::invalid_argument("trailing characters");
      } catch (const std::exception&) {
        throw Error(location(name, line_no) + ": invalid score \"" + cols[2] + "\"");
      }
    }
    p.origin.src_index = p.origin.tgt_index = corpus.pairs.size();
    corpus.pairs.push_back(std::move(p));
  }
  return corpus;
}

BitextCorpus read_bitext(const std::string& path, std::string src_lang, std::string tgt_lang) {
  auto in = open_in(path, "bitext");
  return read_bitext(in, std::move(src_lang), std::move(tgt_lang), path);
}

std::vector<std::string> read_lines(const std::string& path) {
  auto in = open_in(path, "file");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    strip_cr(line);
    lines.push_back(std::move(line));
  }
  return lines;
}

void write_lines(const std::string& path, const std::vector<std::string>& lines) {
  auto out = open_out(path, "file");
  for (const auto& l : lines) out << single_line(l) << '\n';
}

// ---- sampling ----

CorpusSplit sample_test_set(const BitextCorpus& corpus, std::size_t n_segments,
                            std::size_t per_segment, std::uint64_t seed) {
  if (n_segments == 0) throw Error("sample_test_set: n_segments must be positive");
  const std::size_t required = n_segments * per_segment;
  if (corpus.size() < required) {
    throw Error("corpus too small for sampling: " + std::to_string(corpus.size()) +
                " pairs, at least " + std::to_string(required) + " required");
  }
  Rng rng(seed);
  std::vector<char> in_test(corpus.size(), 0);
  const std::size_t base = corpus.size() / n_segments;
  const std::size_t extra = corpus.size() % n_segments;
  std::size_t begin = 0;
  for (std::size_t s = 0; s < n_segments; ++s) {
    std::size_t len = base + (s < extra ? 1 : 0);
    for (std::size_t i : rng.sample_indices(len, per_segment)) in_test[begin + i] = 1;
    begin += len;
  }

  CorpusSplit split;
  split.test.src_lang = split.train.src_lang = corpus.src_lang;
  split.test.tgt_lang = split.train.tgt_lang = corpus.tgt_lang;
  split.test.pairs.reserve(required);
  split.train.pairs.reserve(corpus.size() - required);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    (in_test[i] ? split.test : split.train).pairs.push_back(corpus.pairs[i]);
  }
  return split;
}

// ---- statistics ----

CorpusStats corpus_stats(const BitextCorpus& corpus) {
  CorpusStats stats;
  stats.sentences = corpus.size();
  std::unordered_set<std::string> src_vocab;
  std::unordered_set<std::string> tgt_vocab;
  for (const auto& p : corpus.pairs) {
    stats.src.bytes += p.src.size() + 1;
    stats.tgt.bytes += p.tgt.size() + 1;
    for (auto& t : tokenize(p.src, true)) {
      ++stats.src.tokens;
      src_vocab.insert(std::move(t));
    }
    for (auto& t : tokenize(p.tgt, true)) {
      ++stats.tgt.tokens;
      tgt_vocab.insert(std::move(t));
    }
  }
  stats.src.unique_tokens = src_vocab.size();
  stats.tgt.unique_tokens = tgt_vocab.size();
  return stats;
}

std::string format_stats_table(const CorpusStats& stats, std::string_view src_label,
                               std::string_view tgt_label) {
  std::ostringstream out;
  char buf[64];
  out << "Value\t" << src_label << '\t' << tgt_label << '\n';
  out << "Size in MB";
  for (auto bytes : {stats.src.bytes, stats.tgt.bytes}) {
    std::snprintf(buf, sizeof buf, "\t%.2f", static_cast<double>(bytes) / 1e6);
    out << buf;
  }
  out << '\n';
  out << "No. of sentences\t" << stats.sentences << '\t' << stats.sentences << '\n';
  out << "No. of words\t" << stats.src.tokens << '\t' << stats.tgt.tokens << '\n';
  out << "No. of unique words\t" << stats.src.unique_tokens << '\t' << stats.tgt.unique_tokens
      << '\n';
  return out.str();
}

std::string stats_json(const CorpusStats& stats) {
  auto side = [](const SideStats& s) {
    return json{{"bytes", s.bytes}, {"tokens", s.tokens}, {"unique_tokens", s.unique_tokens}};
  };
  json j = {{"sentences", stats.sentences}, {"src", side(stats.src)}, {"tgt", side(stats.tgt)}};
  return j.dump(2);
}

}  // namespace parmine
