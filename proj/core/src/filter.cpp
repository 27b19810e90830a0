#include "parmine/filter.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>

#include "json.hpp"
#include "parmine/error.hpp"

namespace parmine {

using nlohmann::json;

std::string FilterReport::to_json() const {
  json j = {{"input", input_count},
            {"kept", kept_count},
            {"rejected", rejected_count},
            {"rejections", rejections},
            {"acceptances", acceptances}};
  return j.dump(2);
}

namespace {

void keep(FilterOutcome& out, const BiSentence& p) {
  out.kept.pairs.push_back(p);
  ++out.report.kept_count;
}

void drop(FilterOutcome& out, const BiSentence& p, std::string_view rule) {
  out.rejected.pairs.push_back(p);
  out.rejected_rules.emplace_back(rule);
  ++out.report.rejected_count;
  ++out.report.rejections[std::string(rule)];
}

FilterOutcome start_outcome(const BitextCorpus& corpus) {
  FilterOutcome out;
  out.kept.src_lang = out.rejected.src_lang = corpus.src_lang;
  out.kept.tgt_lang = out.rejected.tgt_lang = corpus.tgt_lang;
  out.report.input_count = corpus.size();
  return out;
}

}  // namespace

FilterOutcome remove_trivial(const BitextCorpus& corpus, std::size_t min_chars) {
  FilterOutcome out = start_outcome(corpus);
  std::unordered_set<std::string> seen;
  for (const auto& p : corpus.pairs) {
    const std::string src = collapse_whitespace(p.src);
    const std::string tgt = collapse_whitespace(p.tgt);
    if (utf8::length(src) < min_chars || utf8::length(tgt) < min_chars) {
      drop(out, p, kRuleShort);
    } else if (!has_letter(src) || !has_letter(tgt)) {
      drop(out, p, kRuleNoLetters);
    } else if (!seen.insert(src + '\t' + tgt).second) {
      drop(out, p, kRuleDuplicate);
    } else {
      keep(out, p);
    }
  }
  return out;
}

// ---- stemming ----

Stemmer::Stemmer(std::vector<StemRule> rules, std::size_t min_stem)
    : rules_(std::move(rules)), min_stem_(min_stem) {
  std::stable_sort(rules_.begin(), rules_.end(), [](const StemRule& a, const StemRule& b) {
    return a.suffix.size() > b.suffix.size();
  });
}

const Stemmer& Stemmer::english() {
  static const Stemmer stemmer(
      {{"sses", "ss"}, {"ies", "y"}, {"ss", "ss"}, {"us", "us"}, {"is", "is"}, {"s", ""}}, 2);
  return stemmer;
}

Stemmer Stemmer::load(const std::string& path, std::size_t min_stem) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open stem rules: " + path);
  std::vector<StemRule> rules;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    StemRule r;
    r.suffix = tab == std::string::npos ? line : line.substr(0, tab);
    r.replacement = tab == std::string::npos ? "" : line.substr(tab + 1);
    if (r.suffix.empty()) throw Error(path + ":" + std::to_string(line_no) + ": empty suffix");
    rules.push_back(std::move(r));
  }
  return Stemmer(std::move(rules), min_stem);
}

std::string Stemmer::stem(std::string_view word) const {
  for (const auto& r : rules_) {
    if (word.size() < r.suffix.size() || !word.ends_with(r.suffix)) continue;
    std::string_view base = word.substr(0, word.size() - r.suffix.size());
    if (utf8::length(base) < min_stem_) continue;
    std::string out(base);
    out += r.replacement;
    return out;
  }
  return std::string(word);
}

// ---- resources ----

StopWords load_stop_words(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open stop-word list: " + path);
  StopWords words;
  std::string line;
  while (std::getline(in, line)) {
    auto w = collapse_whitespace(line);
    if (!w.empty()) words.insert(to_lower(w));
  }
  return words;
}

SynonymTable load_synonyms(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open synonym table: " + path);
  std::map<std::string, std::set<std::string>> table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw Error(path + ":" + std::to_string(line_no) + ": expected word<TAB>synonym");
    }
    auto a = to_lower(collapse_whitespace(line.substr(0, tab)));
    auto b = to_lower(collapse_whitespace(line.substr(tab + 1)));
    if (a.empty() || b.empty() || a == b) continue;
    table[a].insert(b);
    table[b].insert(a);
  }
  SynonymTable out;
  for (auto& [w, syns] : table) out.emplace(w, std::vector<std::string>(syns.begin(), syns.end()));
  return out;
}

// ---- comparisons ----

namespace {

Tokens content_tokens(const Tokens& tokens, const StopWords& stop_words) {
  Tokens out;
  for (const auto& t : tokens) {
    if (!has_letter_or_digit(t)) continue;
    auto lower = to_lower(t);
    if (stop_words.contains(lower)) continue;
    out.push_back(std::move(lower));
  }
  return out;
}

double dice(std::vector<std::string> a, std::vector<std::string> b) {
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  if (a.empty() && b.empty()) return 1.0;
  std::vector<std::string> common;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
  return 2.0 * static_cast<double>(common.size()) / static_cast<double>(a.size() + b.size());
}

Tokens stemmed(Tokens tokens, const Stemmer& stemmer) {
  for (auto& t : tokens) t = stemmer.stem(t);
  return tokens;
}

// Cross product of per-position alternatives, expanded left to right and
// truncated at kMaxSynonymVariants.
std::vector<Tokens> variants(const Tokens& content, const Stemmer& stemmer,
                             const SynonymTable& synonyms) {
  std::vector<Tokens> out{{}};
  for (const auto& t : content) {
    std::vector<std::string> alternatives{t};
    for (const auto& key : {t, stemmer.stem(t)}) {
      if (auto it = synonyms.find(key); it != synonyms.end()) {
        for (const auto& s : it->second) {
          if (std::find(alternatives.begin(), alternatives.end(), s) == alternatives.end()) {
            alternatives.push_back(s);
          }
        }
      }
    }
    std::vector<Tokens> next;
    for (const auto& v : out) {
      for (const auto& alt : alternatives) {
        if (next.size() == kMaxSynonymVariants) break;
        Tokens extended = v;
        extended.push_back(alt);
        next.push_back(std::move(extended));
      }
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace

double similarity_fast(const Tokens& a, const Tokens& b, const StopWords& stop_words) {
  return dice(content_tokens(a, stop_words), content_tokens(b, stop_words));
}

double similarity_stem(const Tokens& a, const Tokens& b, const StopWords& stop_words,
                       const Stemmer& stemmer) {
  return dice(stemmed(content_tokens(a, stop_words), stemmer),
              stemmed(content_tokens(b, stop_words), stemmer));
}

double similarity_synonym(const Tokens& a, const Tokens& b, const StopWords& stop_words,
                          const Stemmer& stemmer, const SynonymTable& synonyms) {
  auto va = variants(content_tokens(a, stop_words), stemmer, synonyms);
  auto vb = variants(content_tokens(b, stop_words), stemmer, synonyms);
  std::vector<Tokens> sb;
  sb.reserve(vb.size());
  for (auto& v : vb) sb.push_back(stemmed(std::move(v), stemmer));
  double best = 0.0;
  for (auto& v : va) {
    auto sa = stemmed(std::move(v), stemmer);
    for (const auto& w : sb) {
      best = std::max(best, dice(sa, w));
      if (best == 1.0) return best;
    }
  }
  return best;
}

std::string_view comparison_name(Comparison c) {
  switch (c) {
    case Comparison::fast:
      return "fast";
    case Comparison::stem:
      return "stem";
    case Comparison::synonym:
      return "synonym";
  }
  return "unknown";
}

Comparison parse_comparison(std::string_view name) {
  if (name == "fast") return Comparison::fast;
  if (name == "stem") return Comparison::stem;
  if (name == "synonym") return Comparison::synonym;
  throw Error("unknown comparison function \"" + std::string(name) + "\"");
}

// ---- cascade ----

CascadeConfig CascadeConfig::defaults() {
  CascadeConfig c;
  c.stages = {{Comparison::fast, 0.9, 0.2}, {Comparison::stem, 0.8, 0.3},
              {Comparison::synonym, 0.7, 0.0}};
  return c;
}

CascadeConfig CascadeConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open cascade config: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error("invalid cascade config " + path + ": " + e.what());
  }
  const auto base = std::filesystem::path(path).parent_path();
  auto resolve = [&](const std::string& p) {
    std::filesystem::path fp(p);
    return (fp.is_absolute() ? fp : base / fp).string();
  };
  CascadeConfig c;
  try {
    for (const auto& s : j.at("stages")) {
      CascadeStage stage;
      stage.function = parse_comparison(s.at("function").get<std::string>());
      stage.accept = s.at("accept").get<double>();
      stage.reject = s.contains("reject") && !s.at("reject").is_null()
                         ? s.at("reject").get<double>()
                         : 0.0;
      c.stages.push_back(stage);
    }
    if (j.contains("stop_words")) {
      for (const auto& [lang, file] : j.at("stop_words").items()) {
        c.stop_words[lang] = load_stop_words(resolve(file.get<std::string>()));
      }
    }
    if (j.contains("synonyms")) c.synonyms = load_synonyms(resolve(j.at("synonyms").get<std::string>()));
    if (j.contains("stem_rules")) {
      std::size_t min_stem = j.value("min_stem", std::size_t{2});
      c.stemmer = Stemmer::load(resolve(j.at("stem_rules").get<std::string>()), min_stem);
    }
  } catch (const json::exception& e) {
    throw Error("invalid cascade config " + path + ": " + e.what());
  }
  c.validate();
  return c;
}

const StopWords& CascadeConfig::stop_words_for(const std::string& lang) const {
  static const StopWords none;
  if (auto it = stop_words.find(lang); it != stop_words.end()) return it->second;
  if (auto it = stop_words.find(""); it != stop_words.end()) return it->second;
  return none;
}

void CascadeConfig::validate() const {
  if (stages.empty()) throw Error("cascade has no stages");
  for (std::size_t k = 0; k < stages.size(); ++k) {
    const auto& s = stages[k];
    const std::string where = "cascade stage " + std::to_string(k + 1);
    if (!(s.accept >= 0.0 && s.accept <= 1.0) || !(s.reject >= 0.0 && s.reject <= 1.0)) {
      throw Error(where + ": thresholds must lie in [0, 1]");
    }
    if (s.reject > s.accept) throw Error(where + ": reject threshold exceeds accept threshold");
    if (k > 0 && s.function < stages[k - 1].function) {
      throw Error(where + ": stages must be ordered fastest first");
    }
  }
}

FilterOutcome filter_corpus(const BitextCorpus& corpus, const Translator& translator,
                            const CascadeConfig& cascade) {
  cascade.validate();
  FilterOutcome out = start_outcome(corpus);
  const StopWords& stop_words = cascade.stop_words_for(corpus.tgt_lang);
  for (const auto& p : corpus.pairs) {
    Tokens translation;
    try {
      translation = translator(tokenize(p.src, true));
    } catch (const std::exception&) {
      drop(out, p, kRuleTranslatorError);
      continue;
    }
    const Tokens target = tokenize(p.tgt, true);
    bool decided = false;
    for (const auto& stage : cascade.stages) {
      double score = 0.0;
      switch (stage.function) {
        case Comparison::fast:
          score = similarity_fast(translation, target, stop_words);
          break;
        case Comparison::stem:
          score = similarity_stem(translation, target, stop_words, cascade.stemmer);
          break;
        case Comparison::synonym:
          score = similarity_synonym(translation, target, stop_words, cascade.stemmer,
                                     cascade.synonyms);
          break;
      }
      if (score >= stage.accept) {
        keep(out, p);
        ++out.report.acceptances[std::string(comparison_name(stage.function))];
        decided = true;
        break;
      }
      if (score < stage.reject) {
        drop(out, p, comparison_name(stage.function));
        decided = true;
        break;
      }
    }
    if (!decided) drop(out, p, kRuleExhausted);
  }
  return out;
}

}  // namespace parmine
