#include "parmine/analogy.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <ostream>
#include <istream>
#include <unordered_map>

#include "json.hpp"
#include "parmine/error.hpp"

namespace parmine {

using nlohmann::json;

namespace {

template <typename T>
std::size_t levenshtein(std::span<const T> a, std::span<const T> b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> row(b.size() + 1);
  std::iota(row.begin(), row.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

std::map<char32_t, long> char_counts(std::string_view text) {
  std::map<char32_t, long> counts;
  for (char32_t c : utf8::decode(text)) ++counts[c];
  return counts;
}

}  // namespace

std::size_t word_levenshtein(std::span<const std::string> a, std::span<const std::string> b) {
  return levenshtein<std::string>(a, b);
}

bool char_profile_check(std::string_view a, std::string_view b, std::string_view c,
                        std::string_view d) {
  auto ca = char_counts(a), cb = char_counts(b), cc = char_counts(c), cd = char_counts(d);
  std::map<char32_t, long> delta;
  for (auto& [ch, n] : ca) delta[ch] += n;
  for (auto& [ch, n] : cb) delta[ch] -= n;
  for (auto& [ch, n] : cc) delta[ch] -= n;
  for (auto& [ch, n] : cd) delta[ch] += n;
  return std::all_of(delta.begin(), delta.end(), [](const auto& kv) { return kv.second == 0; });
}

// ---- detection ----

namespace {

AnalogyQuadruple canonical(std::size_t a, std::size_t b, std::size_t c, std::size_t d,
                           std::size_t d_ab, std::size_t d_ac) {
  // The analogy is a square a-b-d-c with equal opposite sides; rotate and
  // reflect it so the smallest index comes first and b < c.
  std::size_t corners[4] = {a, b, d, c};  // cyclic order
  std::size_t start = 0;
  for (std::size_t k = 1; k < 4; ++k) {
    if (corners[k] < corners[start]) start = k;
  }
  std::size_t first = corners[start];
  std::size_t next = corners[(start + 1) % 4];
  std::size_t prev = corners[(start + 3) % 4];
  std::size_t opposite = corners[(start + 2) % 4];
  // Side (first,next) has the length of a-b when start is even.
  std::size_t len_next = (start % 2 == 0) ? d_ab : d_ac;
  std::size_t len_prev = (start % 2 == 0) ? d_ac : d_ab;
  AnalogyQuadruple q;
  q.a = first;
  q.d = opposite;
  if (next < prev) {
    q.b = next;
    q.c = prev;
    q.d_ab = q.d_cd = len_next;
    q.d_ac = q.d_bd = len_prev;
  } else {
    q.b = prev;
    q.c = next;
    q.d_ab = q.d_cd = len_prev;
    q.d_ac = q.d_bd = len_next;
  }
  return q;
}

struct PairDistances {
  std::unordered_map<std::uint64_t, std::size_t> table;

  static std::uint64_t key(std::size_t i, std::size_t j) {
    if (i > j) std::swap(i, j);
    return (static_cast<std::uint64_t>(i) << 32) | static_cast<std::uint64_t>(j);
  }
  std::size_t get(std::size_t i, std::size_t j) const {
    auto it = table.find(key(i, j));
    return it == table.end() ? 0 : it->second;
  }
};

std::string signature(const std::map<char32_t, long>& x, const std::map<char32_t, long>& y) {
  std::map<char32_t, long> delta = x;
  for (const auto& [ch, n] : y) delta[ch] -= n;
  std::string sig;
  for (const auto& [ch, n] : delta) {
    if (n == 0) continue;
    utf8::append(sig, ch);
    sig += ':' + std::to_string(n) + ';';
  }
  return sig;
}

}  // namespace

std::vector<AnalogyQuadruple> find_analogies(std::span<const Tokens> sentences,
                                             const AnalogySearchOptions& options) {
  const std::size_t n = sentences.size();
  if (n < 4 || options.max_distance == 0) return {};
  if (n > 0xffffffffULL) throw Error("find_analogies: too many sentences");

  // Tokens become integer ids so distance computations compare integers.
  std::unordered_map<std::string, int> ids;
  std::vector<std::vector<int>> coded(n);
  std::vector<std::map<char32_t, long>> profiles(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& t : sentences[i]) {
      coded[i].push_back(ids.emplace(t, static_cast<int>(ids.size())).first->second);
    }
    profiles[i] = char_counts(join(sentences[i]));
  }

  std::vector<std::size_t> by_length(n);
  std::iota(by_length.begin(), by_length.end(), std::size_t{0});
  std::stable_sort(by_length.begin(), by_length.end(), [&](std::size_t x, std::size_t y) {
    return coded[x].size() < coded[y].size();
  });

  PairDistances dist;
  // Ordered pairs grouped by (distance, character-count difference).
  std::map<std::pair<std::size_t, std::string>, std::vector<std::pair<std::size_t, std::size_t>>>
      groups;
  auto consider = [&](std::size_t i, std::size_t j) {
    std::size_t dij = levenshtein<int>(coded[i], coded[j]);
    if (dij == 0 || dij > options.max_distance) return;
    dist.table.emplace(PairDistances::key(i, j), dij);
    groups[{dij, signature(profiles[i], profiles[j])}].emplace_back(i, j);
    groups[{dij, signature(profiles[j], profiles[i])}].emplace_back(j, i);
  };
  for (std::size_t x = 0; x < n; ++x) {
    const std::size_t i = by_length[x];
    for (std::size_t y = x + 1; y < n; ++y) {
      const std::size_t j = by_length[y];
      if (options.length_bucketing &&
          coded[j].size() - coded[i].size() > options.max_distance) {
        break;
      }
      consider(std::min(i, j), std::max(i, j));
    }
  }

  std::vector<AnalogyQuadruple> found;
  for (const auto& [key, members] : groups) {
    for (std::size_t u = 0; u < members.size(); ++u) {
      const auto [a, b] = members[u];
      for (std::size_t v = u + 1; v < members.size(); ++v) {
        const auto [c, d] = members[v];
        if (c == a || c == b || d == a || d == b) continue;
        const std::size_t d_ac = dist.get(a, c);
        if (d_ac == 0 || d_ac != dist.get(b, d)) continue;
        found.push_back(canonical(a, b, c, d, key.first, d_ac));
      }
    }
  }
  std::sort(found.begin(), found.end());
  found.erase(std::unique(found.begin(), found.end()), found.end());
  return found;
}

// ---- clusters ----

namespace {

class DisjointSets {
 public:
  std::size_t add() {
    parent_.push_back(parent_.size());
    return parent_.size() - 1;
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::size_t x, std::size_t y) {
    x = find(x);
    y = find(y);
    if (x != y) parent_[std::max(x, y)] = std::min(x, y);
  }

 private:
  std::vector<std::size_t> parent_;
};

std::pair<std::size_t, std::size_t> unordered(std::size_t x, std::size_t y) {
  return {std::min(x, y), std::max(x, y)};
}

}  // namespace

std::vector<AnalogyCluster> find_analogy_clusters(std::span<const AnalogyQuadruple> quads,
                                                  std::size_t order) {
  if (order < 2) throw Error("find_analogy_clusters: order must be at least 2");
  std::vector<AnalogyCluster> clusters;
  if (order == 2) {
    clusters.reserve(quads.size());
    for (std::size_t k = 0; k < quads.size(); ++k) {
      const auto& q = quads[k];
      clusters.push_back({{k}, {unordered(q.a, q.b), unordered(q.c, q.d)}});
    }
    return clusters;
  }

  std::map<std::pair<std::size_t, std::size_t>, std::size_t> node_of;
  DisjointSets sets;
  auto node = [&](std::pair<std::size_t, std::size_t> p) {
    auto [it, inserted] = node_of.emplace(p, 0);
    if (inserted) it->second = sets.add();
    return it->second;
  };
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // (node, quad)
  for (std::size_t k = 0; k < quads.size(); ++k) {
    const auto& q = quads[k];
    std::size_t ab = node(unordered(q.a, q.b)), cd = node(unordered(q.c, q.d));
    std::size_t ac = node(unordered(q.a, q.c)), bd = node(unordered(q.b, q.d));
    sets.unite(ab, cd);
    sets.unite(ac, bd);
    edges.emplace_back(ab, k);
    edges.emplace_back(ac, k);
  }
  std::map<std::size_t, AnalogyCluster> components;
  for (const auto& [p, id] : node_of) components[sets.find(id)].pairs.push_back(p);
  for (const auto& [id, k] : edges) {
    auto& qs = components[sets.find(id)].quads;
    if (qs.empty() || qs.back() != k) qs.push_back(k);
  }
  for (auto& [root, cluster] : components) {
    if (cluster.pairs.size() < order) continue;
    std::sort(cluster.quads.begin(), cluster.quads.end());
    cluster.quads.erase(std::unique(cluster.quads.begin(), cluster.quads.end()),
                        cluster.quads.end());
    clusters.push_back(std::move(cluster));
  }
  return clusters;
}

// ---- rewriting models ----

bool RewritingModel::same_template(const RewritingModel& other) const {
  return src_prefix == other.src_prefix && src_suffix == other.src_suffix &&
         tgt_prefix == other.tgt_prefix && tgt_suffix == other.tgt_suffix;
}

namespace {

struct Template {
  Tokens prefix;
  Tokens suffix;
};

std::optional<Template> common_template(const Tokens& x, const Tokens& y) {
  std::size_t p = 0;
  while (p < x.size() && p < y.size() && x[p] == y[p]) ++p;
  std::size_t s = 0;
  while (s < x.size() - p && s < y.size() - p && x[x.size() - 1 - s] == y[y.size() - 1 - s]) ++s;
  if (p == 0 && s == 0) return std::nullopt;
  if (x.size() - p - s == 0 || y.size() - p - s == 0) return std::nullopt;
  Template t;
  t.prefix.assign(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(p));
  t.suffix.assign(x.end() - static_cast<std::ptrdiff_t>(s), x.end());
  return t;
}

bool is_analogy(const Tokens& a, const Tokens& b, const Tokens& c, const Tokens& d,
                std::size_t max_distance) {
  std::size_t d_ab = word_levenshtein(a, b), d_cd = word_levenshtein(c, d);
  std::size_t d_ac = word_levenshtein(a, c), d_bd = word_levenshtein(b, d);
  return d_ab == d_cd && d_ac == d_bd && d_ab >= 1 && d_ac >= 1 && d_ab <= max_distance &&
         d_ac <= max_distance && char_profile_check(join(a), join(b), join(c), join(d));
}

}  // namespace

std::optional<RewritingModel> extract_rewriting_model(const SeedPair& first,
                                                      const SeedPair& second) {
  auto src = common_template(first.src, second.src);
  if (!src) return std::nullopt;
  auto tgt = common_template(first.tgt, second.tgt);
  if (!tgt) return std::nullopt;
  // Gloss translation is word for word, so each slot keeps its length.
  const std::size_t src_fixed = src->prefix.size() + src->suffix.size();
  const std::size_t tgt_fixed = tgt->prefix.size() + tgt->suffix.size();
  if (first.src.size() - src_fixed != first.tgt.size() - tgt_fixed ||
      second.src.size() - src_fixed != second.tgt.size() - tgt_fixed) {
    return std::nullopt;
  }
  RewritingModel m;
  m.src_prefix = std::move(src->prefix);
  m.src_suffix = std::move(src->suffix);
  m.tgt_prefix = std::move(tgt->prefix);
  m.tgt_suffix = std::move(tgt->suffix);
  return m;
}

std::vector<RewritingModel> extract_models(std::span<const AnalogyCluster> clusters,
                                           std::span<const AnalogyQuadruple> quads,
                                           std::span<const SeedPair> seed,
                                           bool require_target_analogy, std::size_t max_distance) {
  std::vector<RewritingModel> models;
  std::map<std::vector<Tokens>, std::size_t> seen;
  for (const auto& cluster : clusters) {
    for (std::size_t k : cluster.quads) {
      if (k >= quads.size()) throw Error("extract_models: cluster refers to a missing quadruple");
      const auto& q = quads[k];
      for (std::size_t idx : {q.a, q.b, q.c, q.d}) {
        if (idx >= seed.size()) throw Error("extract_models: quadruple refers to a missing seed pair");
      }
      if (require_target_analogy &&
          !is_analogy(seed[q.a].tgt, seed[q.b].tgt, seed[q.c].tgt, seed[q.d].tgt, max_distance)) {
        continue;
      }
      const std::pair<std::size_t, std::size_t> sides[4] = {
          {q.a, q.b}, {q.c, q.d}, {q.a, q.c}, {q.b, q.d}};
      for (auto [x, y] : sides) {
        auto m = extract_rewriting_model(seed[x], seed[y]);
        if (!m) continue;
        m->support = {x, y};
        std::vector<Tokens> key = {m->src_prefix, m->src_suffix, m->tgt_prefix, m->tgt_suffix};
        if (seen.emplace(std::move(key), models.size()).second) models.push_back(std::move(*m));
      }
    }
  }
  return models;
}

namespace {

bool matches_at(const Tokens& sentence, const Tokens& part, std::size_t offset) {
  return std::equal(part.begin(), part.end(),
                    sentence.begin() + static_cast<std::ptrdiff_t>(offset));
}

}  // namespace

std::optional<BiSentence> apply_model(const RewritingModel& model, const Tokens& sentence,
                                      const TranslationLexicon& lex, bool allow_unknown,
                                      std::string_view unknown_marker) {
  const std::size_t fixed = model.src_prefix.size() + model.src_suffix.size();
  if (sentence.size() <= fixed) return std::nullopt;
  if (!matches_at(sentence, model.src_prefix, 0) ||
      !matches_at(sentence, model.src_suffix, sentence.size() - model.src_suffix.size())) {
    return std::nullopt;
  }
  Tokens middle(sentence.begin() + static_cast<std::ptrdiff_t>(model.src_prefix.size()),
                sentence.end() - static_cast<std::ptrdiff_t>(model.src_suffix.size()));
  std::size_t unknown = 0;
  Tokens glossed = gloss_translate(lex, middle, unknown_marker, &unknown);
  if (unknown > 0 && !allow_unknown) return std::nullopt;

  Tokens target = model.tgt_prefix;
  target.insert(target.end(), glossed.begin(), glossed.end());
  target.insert(target.end(), model.tgt_suffix.begin(), model.tgt_suffix.end());
  BiSentence out;
  out.src = join(sentence);
  out.tgt = join(target);
  out.score = 1.0 - static_cast<double>(unknown) / static_cast<double>(middle.size());
  out.origin.direction = "analogy";
  return out;
}

BitextCorpus QuasiParallelCorpus::bitext(std::string src_lang, std::string tgt_lang) const {
  BitextCorpus corpus;
  corpus.src_lang = std::move(src_lang);
  corpus.tgt_lang = std::move(tgt_lang);
  corpus.pairs.reserve(pairs.size());
  for (const auto& p : pairs) corpus.pairs.push_back(p.pair);
  return corpus;
}

QuasiParallelCorpus generate_corpus(std::span<const RewritingModel> models,
                                    std::span<const ArticlePair> articles,
                                    const TranslationLexicon& lex,
                                    const GenerationConfig& config) {
  if (models.empty()) throw Error("generate_corpus: no rewriting models");
  std::unordered_map<std::string, std::vector<std::size_t>> by_first;
  std::unordered_map<std::string, std::vector<std::size_t>> by_last;
  for (std::size_t k = 0; k < models.size(); ++k) {
    const auto& m = models[k];
    if (!m.src_prefix.empty()) {
      by_first[m.src_prefix.front()].push_back(k);
    } else if (!m.src_suffix.empty()) {
      by_last[m.src_suffix.back()].push_back(k);
    }
  }

  QuasiParallelCorpus out;
  out.models = models.size();
  std::vector<std::size_t> candidates;
  for (const auto& article : articles) {
    const auto src = segment_sentences(article.src.body);
    std::unordered_map<std::string, std::size_t> targets;
    for (const auto& t : segment_sentences(article.tgt.body)) {
      targets.emplace(to_lower(join(t.tokens)), t.index);
    }
    for (const auto& sentence : src) {
      if (sentence.tokens.empty()) continue;
      candidates.clear();
      if (auto it = by_first.find(sentence.tokens.front()); it != by_first.end()) {
        candidates.insert(candidates.end(), it->second.begin(), it->second.end());
      }
      if (auto it = by_last.find(sentence.tokens.back()); it != by_last.end()) {
        candidates.insert(candidates.end(), it->second.begin(), it->second.end());
      }
      std::sort(candidates.begin(), candidates.end());
      for (std::size_t k : candidates) {
        auto generated = apply_model(models[k], sentence.tokens, lex, config.allow_unknown,
                                     config.unknown_marker);
        if (!generated) continue;
        QuasiParallelPair q;
        q.pair = std::move(*generated);
        q.pair.origin.article_id = article.id;
        q.pair.origin.src_index = sentence.index;
        auto hit = targets.find(to_lower(q.pair.tgt));
        q.confirmed = hit != targets.end();
        if (q.confirmed) {
          q.pair.origin.tgt_index = hit->second;
          ++out.confirmed;
        }
        q.model_id = k;
        out.pairs.push_back(std::move(q));
      }
    }
  }
  return out;
}

// ---- serialization ----

void write_models(std::ostream& out, std::span<const RewritingModel> models) {
  for (const auto& m : models) {
    json j = {{"src_prefix", m.src_prefix},
              {"src_suffix", m.src_suffix},
              {"tgt_prefix", m.tgt_prefix},
              {"tgt_suffix", m.tgt_suffix},
              {"support", {m.support.first, m.support.second}}};
    out << j.dump(-1, ' ', false, json::error_handler_t::replace) << '\n';
  }
}

std::vector<RewritingModel> read_models(std::istream& in, std::string_view name) {
  std::vector<RewritingModel> models;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      auto j = json::parse(line);
      RewritingModel m;
      m.src_prefix = j.at("src_prefix").get<Tokens>();
      m.src_suffix = j.at("src_suffix").get<Tokens>();
      m.tgt_prefix = j.at("tgt_prefix").get<Tokens>();
      m.tgt_suffix = j.at("tgt_suffix").get<Tokens>();
      auto support = j.at("support").get<std::vector<std::size_t>>();
      if (support.size() != 2) throw Error("support must hold two ids");
      m.support = {support[0], support[1]};
      models.push_back(std::move(m));
    } catch (const std::exception& e) {
      throw Error(std::string(name) + ":" + std::to_string(line_no) +
                  ": invalid rewriting model: " + e.what());
    }
  }
  return models;
}

void write_quads(std::ostream& out, std::span<const AnalogyQuadruple> quads) {
  for (const auto& q : quads) {
    json j = {{"a", q.a},       {"b", q.b},       {"c", q.c},       {"d", q.d},
              {"d_ab", q.d_ab}, {"d_cd", q.d_cd}, {"d_ac", q.d_ac}, {"d_bd", q.d_bd}};
    out << j.dump() << '\n';
  }
}

std::vector<AnalogyQuadruple> read_quads(std::istream& in, std::string_view name) {
  std::vector<AnalogyQuadruple> quads;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      auto j = json::parse(line);
      AnalogyQuadruple q;
      q.a = j.at("a").get<std::size_t>();
      q.b = j.at("b").get<std::size_t>();
      q.c = j.at("c").get<std::size_t>();
      q.d = j.at("d").get<std::size_t>();
      q.d_ab = j.at("d_ab").get<std::size_t>();
      q.d_cd = j.at("d_cd").get<std::size_t>();
      q.d_ac = j.at("d_ac").get<std::size_t>();
      q.d_bd = j.at("d_bd").get<std::size_t>();
      quads.push_back(q);
    } catch (const std::exception& e) {
      throw Error(std::string(name) + ":" + std::to_string(line_no) +
                  ": invalid quadruple: " + e.what());
    }
  }
  return quads;
}

}  // namespace parmine
