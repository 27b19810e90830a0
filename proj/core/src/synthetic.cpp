#include "parmine/synthetic.hpp"

#include <unicode/uchar.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "json.hpp"
#include "parmine/error.hpp"
#include "parmine/text.hpp"

namespace parmine::synthetic {

namespace {

constexpr const char* kSrcOnsets[] = {"p",  "b",  "t",  "d",  "k",  "g",  "m",  "n",  "w",
                                      "r",  "l",  "s",  "z",  "sz", "cz", "dz", "rz", "ż",
                                      "ś",  "ć",  "ł",  "ch", "pr", "kr", "st", "tr", "gł"};
constexpr const char* kSrcVowels[] = {"a", "e", "i", "o", "u", "y", "ą", "ę", "ó", "a", "o", "e"};
constexpr const char* kSrcCodas[] = {"", "", "", "k", "n", "m", "ł", "ś", "j", "ć"};

constexpr const char* kTgtOnsets[] = {"b",  "c",  "d",  "f",  "g",  "h",  "j",  "l",
                                      "m",  "n",  "p",  "r",  "t",  "v",  "w",  "st",
                                      "br", "gr", "pl", "sh", "th", "ch", "cr", "fl"};
constexpr const char* kTgtVowels[] = {"a", "e", "i", "o", "u", "ee", "oo", "ai", "ea", "a", "o"};
constexpr const char* kTgtCodas[] = {"", "", "n", "r", "t", "ck", "ll", "nd", "m", "x", "p"};

constexpr const char* kFunctionWords[] = {"the", "of", "a", "to", "and", "is", "in", "it"};

struct PhraseTemplate {
  const char* src_prefix;
  const char* src_suffix;
  const char* tgt_prefix;
  const char* tgt_suffix;
};

// The slot holds one noun; both sides keep the same shape so that pairs of
// templates and nouns form analogies.
constexpr PhraseTemplate kTemplates[] = {
    {"Poproszę", ".", "A", ", please."},
    {"Lubię", ".", "I like", "."},
    {"Gdzie jest", "?", "Where is the", "?"},
    {"Mam nowy", ".", "I have a new", "."},
    {"To jest mój", ".", "This is my", "."},
};

constexpr std::size_t kNouns = 60;

template <typename T, std::size_t N>
const T& pick(const T (&items)[N], Rng& rng) {
  return items[rng.below(N)];
}

std::string make_word(Rng& rng, bool source) {
  const std::size_t syllables = 1 + static_cast<std::size_t>(rng.below(3));
  std::string w;
  for (std::size_t s = 0; s < syllables; ++s) {
    w += source ? pick(kSrcOnsets, rng) : pick(kTgtOnsets, rng);
    w += source ? pick(kSrcVowels, rng) : pick(kTgtVowels, rng);
  }
  w += source ? pick(kSrcCodas, rng) : pick(kTgtCodas, rng);
  return w;
}

void append_words(std::vector<std::string>& out, std::string_view phrase) {
  for (auto& t : tokenize(phrase, false)) out.push_back(std::move(t));
}

// Joins words with spaces, attaching punctuation to the preceding word.
std::string detokenize(const std::vector<std::string>& words) {
  std::string out;
  for (const auto& w : words) {
    const bool punct = !has_letter_or_digit(w);
    if (!out.empty() && !punct) out += ' ';
    out += w;
  }
  return out;
}

}  // namespace

LanguagePair::LanguagePair(const LanguageOptions& options) : options_(options) {
  if (options.vocabulary < kNouns * 2) throw Error("synthetic vocabulary is too small");
  if (options.min_words == 0 || options.max_words < options.min_words) {
    throw Error("synthetic sentence length range is invalid");
  }
  Rng rng(options.seed);
  const auto& abbreviations = AbbreviationList::standard();
  std::set<std::string> used;
  for (auto w : kFunctionWords) used.insert(w);
  for (const auto& t : kTemplates) {
    for (auto phrase : {t.src_prefix, t.tgt_prefix, t.tgt_suffix}) {
      for (auto& w : tokenize(phrase, true)) used.insert(w);
    }
  }
  auto fresh = [&](bool source) {
    for (;;) {
      std::string w = make_word(rng, source);
      if (utf8::length(w) < 3 || used.count(w)) continue;
      std::string cap = capitalize(w);
      if (abbreviations.contains(w + ".") || abbreviations.contains(cap + ".") ||
          abbreviations.contains(w) || abbreviations.contains(cap)) {
        continue;
      }
      // Target words avoid the plural-like endings the stemmer strips.
      if (!source && w.back() == 's') continue;
      used.insert(w);
      return w;
    }
  };
  for (std::size_t r = 0; r < options.vocabulary; ++r) {
    src_words_.push_back(fresh(true));
    tgt_words_.push_back(fresh(false));
  }
  tgt_alternates_.assign(options.vocabulary, "");
  for (std::size_t r = 0; r < options.vocabulary; ++r) {
    if (rng.bernoulli(options.synonym_rate)) tgt_alternates_[r] = fresh(false);
  }
  double total = 0.0;
  for (std::size_t r = 0; r < options.vocabulary; ++r) {
    total += 1.0 / std::pow(static_cast<double>(r + 1), 0.9);
    cdf_.push_back(total);
  }
  for (auto& c : cdf_) c /= total;
  // Nouns come from the middle of the frequency range.
  for (std::size_t k = 0; k < kNouns; ++k) nouns_.push_back(20 + 3 * k);
}

std::size_t LanguagePair::sample_rank(Rng& rng) const {
  const double u = rng.uniform();
  auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
  return std::min(static_cast<std::size_t>(it - cdf_.begin()), cdf_.size() - 1);
}

std::string LanguagePair::sample_content(Rng& rng, std::size_t* index) const {
  const std::size_t r = sample_rank(rng);
  if (index) *index = r;
  return src_words_[r];
}

std::string LanguagePair::capitalize(const std::string& sentence) const {
  auto cps = utf8::decode(sentence);
  if (cps.empty()) return sentence;
  cps[0] = static_cast<char32_t>(u_toupper(static_cast<UChar32>(cps[0])));
  return utf8::encode(cps);
}

BiSentence LanguagePair::sample_pair(Rng& rng) const {
  auto render = [&](std::size_t r) {
    const auto& alt = tgt_alternates_[r];
    return !alt.empty() && rng.bernoulli(0.5) ? alt : tgt_words_[r];
  };

  BiSentence pair;
  pair.score = 1.0;
  if (rng.bernoulli(options_.template_rate)) {
    const auto& t = pick(kTemplates, rng);
    const std::size_t noun = nouns_[rng.below(nouns_.size())];
    std::vector<std::string> src, tgt;
    append_words(src, t.src_prefix);
    src.push_back(src_words_[noun]);
    append_words(src, t.src_suffix);
    append_words(tgt, t.tgt_prefix);
    tgt.push_back(render(noun));
    append_words(tgt, t.tgt_suffix);
    pair.src = detokenize(src);
    pair.tgt = detokenize(tgt);
    return pair;
  }

  const std::size_t k =
      options_.min_words +
      static_cast<std::size_t>(rng.below(options_.max_words - options_.min_words + 1));
  std::vector<std::string> src, tgt;
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t r = 0;
    src.push_back(sample_content(rng, &r));
    tgt.push_back(render(r));
  }
  if (k > 1 && rng.bernoulli(options_.swap_rate)) {
    const std::size_t i = static_cast<std::size_t>(rng.below(k - 1));
    std::swap(tgt[i], tgt[i + 1]);
  }
  if (rng.bernoulli(options_.number_rate)) {
    const std::string number = std::to_string(1 + rng.below(2020));
    src.insert(src.begin() + static_cast<std::ptrdiff_t>(rng.below(src.size() + 1)), number);
    tgt.insert(tgt.begin() + static_cast<std::ptrdiff_t>(rng.below(tgt.size() + 1)), number);
  }
  std::vector<std::string> with_function;
  for (auto& w : tgt) {
    if (rng.bernoulli(options_.function_word_rate)) with_function.push_back(pick(kFunctionWords, rng));
    with_function.push_back(std::move(w));
  }
  src.push_back(".");
  with_function.push_back(".");
  pair.src = capitalize(detokenize(src));
  pair.tgt = capitalize(detokenize(with_function));
  return pair;
}

std::string LanguagePair::sample_source(Rng& rng) const {
  const std::size_t k =
      options_.min_words +
      static_cast<std::size_t>(rng.below(options_.max_words - options_.min_words + 1));
  std::vector<std::string> src;
  for (std::size_t i = 0; i < k; ++i) src.push_back(sample_content(rng, nullptr));
  src.push_back(".");
  return capitalize(detokenize(src));
}

std::string LanguagePair::sample_target(Rng& rng) const {
  const std::size_t k =
      options_.min_words +
      static_cast<std::size_t>(rng.below(options_.max_words - options_.min_words + 1));
  std::vector<std::string> tgt;
  for (std::size_t i = 0; i < k; ++i) {
    if (rng.bernoulli(options_.function_word_rate)) tgt.push_back(pick(kFunctionWords, rng));
    tgt.push_back(tgt_words_[sample_rank(rng)]);
  }
  tgt.push_back(".");
  return capitalize(detokenize(tgt));
}

std::string LanguagePair::perturb_target(const std::string& tgt, double rate, Rng& rng) const {
  auto words = tokenize(tgt, false);
  bool changed = false;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (!has_letter(words[i]) || !rng.bernoulli(rate)) continue;
    std::string replacement = tgt_words_[sample_rank(rng)];
    words[i] = i == 0 ? capitalize(replacement) : replacement;
    changed = true;
  }
  return changed ? detokenize(words) : tgt;
}

StopWords LanguagePair::target_stop_words() const {
  StopWords words;
  for (auto w : kFunctionWords) words.insert(w);
  return words;
}

SynonymTable LanguagePair::target_synonyms() const {
  SynonymTable table;
  for (std::size_t r = 0; r < tgt_words_.size(); ++r) {
    if (tgt_alternates_[r].empty()) continue;
    table[tgt_words_[r]].push_back(tgt_alternates_[r]);
    table[tgt_alternates_[r]].push_back(tgt_words_[r]);
  }
  return table;
}

BitextCorpus parallel_corpus(const LanguagePair& language, std::size_t size, Rng& rng) {
  BitextCorpus corpus;
  corpus.src_lang = language.src_lang();
  corpus.tgt_lang = language.tgt_lang();
  corpus.pairs.reserve(size);
  for (std::size_t i = 0; i < size; ++i) {
    BiSentence p = language.sample_pair(rng);
    p.origin = {0, i, i, "seed"};
    corpus.pairs.push_back(std::move(p));
  }
  return corpus;
}

// ---- comparable corpus ----

namespace {

std::string decorate(const std::vector<std::string>& sentences, Rng& rng, bool markup,
                     bool source) {
  if (!markup) {
    std::string body;
    for (const auto& s : sentences) body += (body.empty() ? "" : " ") + s;
    return body;
  }
  std::string body = "<p>";
  std::size_t note = 1;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    std::string s = sentences[i];
    if (rng.bernoulli(0.15)) {
      // Bold the first word after the initial one, if any.
      auto space = s.find(' ');
      auto next = space == std::string::npos ? space : s.find(' ', space + 1);
      if (next != std::string::npos) {
        s = s.substr(0, space + 1) + "<b>" + s.substr(space + 1, next - space - 1) + "</b>" +
            s.substr(next);
      }
    }
    body += s;
    const double roll = rng.uniform();
    if (roll < 0.1) {
      body += "<ref>" + std::string(source ? "Źródło " : "Source ") + std::to_string(note++) +
              ".</ref>";
    } else if (roll < 0.2) {
      body += "[" + std::to_string(note++) + "]";
    } else if (roll < 0.23) {
      body += "<ref name=\"n" + std::to_string(note++) + "\" />";
    }
    if (i + 1 < sentences.size()) {
      const double gap = rng.uniform();
      if (gap < 0.04) {
        body += "\n{| class=\"wikitable\"\n| 12 || 34\n|-\n| Ab || Cd\n|}\n";
      } else if (gap < 0.08) {
        body += "</p>\n<p>";
      } else if (gap < 0.1) {
        body += " {{cytuj|tytuł=Xyz}} ";
      } else {
        body += ' ';
      }
    }
  }
  body += "</p>";
  return body;
}

}  // namespace

ComparableCorpus comparable_corpus(const LanguagePair& language, const BitextCorpus& parallel,
                                   const ComparableOptions& options, Rng& rng) {
  if (options.articles == 0 || options.pairs_per_article == 0) {
    throw Error("comparable_corpus: empty article layout");
  }
  if (parallel.size() < options.articles * options.pairs_per_article) {
    throw Error("comparable_corpus: parallel corpus has " + std::to_string(parallel.size()) +
                " pairs, " + std::to_string(options.articles * options.pairs_per_article) +
                " needed");
  }
  ComparableCorpus out;
  for (std::size_t a = 0; a < options.articles; ++a) {
    std::vector<std::string> src, tgt;
    std::vector<BiSentence> truth;
    for (std::size_t k = 0; k < options.pairs_per_article; ++k) {
      const BiSentence& p = parallel.pairs[a * options.pairs_per_article + k];
      if (rng.bernoulli(options.insertion_rate)) {
        if (rng.bernoulli(0.5)) {
          src.push_back(language.sample_source(rng));
        } else {
          tgt.push_back(language.sample_target(rng));
        }
      }
      if (rng.bernoulli(options.deletion_rate)) {
        (rng.bernoulli(0.5) ? src : tgt).push_back(rng.bernoulli(0.5) ? p.src : p.tgt);
        if (std::find(src.begin(), src.end(), p.tgt) != src.end()) src.pop_back();
        if (std::find(tgt.begin(), tgt.end(), p.src) != tgt.end()) tgt.pop_back();
        continue;
      }
      BiSentence t;
      t.src = p.src;
      t.tgt = rng.bernoulli(options.noise_rate) ? language.perturb_target(p.tgt, 0.15, rng) : p.tgt;
      t.origin = {a, src.size(), tgt.size(), "truth"};
      src.push_back(t.src);
      tgt.push_back(t.tgt);
      truth.push_back(std::move(t));
    }

    char title[32];
    std::snprintf(title, sizeof title, "%04zu", a + 1);
    Document sd{language.src_lang(), std::string("Artykuł ") + title,
                decorate(src, rng, options.markup, true)};
    Document td{language.tgt_lang(), std::string("Article ") + title,
                decorate(tgt, rng, options.markup, false)};

    ArticlePair pair;
    pair.id = a;
    pair.src = {sd.lang, sd.title, clean_document(sd.body)};
    pair.tgt = {td.lang, td.title, clean_document(td.body)};
    // The generator relies on the cleaner and segmenter reproducing the
    // planned sentences exactly.
    auto check = [&](const std::string& body, const std::vector<std::string>& planned) {
      auto seg = segment_sentences(body);
      if (seg.size() != planned.size()) {
        throw Error("synthetic article " + std::to_string(a) + " segments into " +
                    std::to_string(seg.size()) + " sentences, planned " +
                    std::to_string(planned.size()));
      }
      for (std::size_t i = 0; i < seg.size(); ++i) {
        if (seg[i].text != planned[i]) {
          throw Error("synthetic article " + std::to_string(a) + " sentence " +
                      std::to_string(i) + " reads \"" + seg[i].text + "\", planned \"" +
                      planned[i] + "\"");
        }
      }
    };
    check(pair.src.body, src);
    check(pair.tgt.body, tgt);

    out.links.emplace_back(sd.title, td.title);
    out.src_dump.push_back(std::move(sd));
    out.tgt_dump.push_back(std::move(td));
    out.articles.push_back(std::move(pair));
    for (auto& t : truth) out.truth.push_back(std::move(t));
  }
  return out;
}

// ---- fixture files ----

namespace {

std::ofstream create(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot create " + path.string());
  return out;
}

}  // namespace

void write_fixture(const std::filesystem::path& dir, const FixtureOptions& options) {
  std::filesystem::create_directories(dir);
  LanguageOptions lang_options;
  lang_options.seed = options.seed;
  LanguagePair language(lang_options);

  Rng seed_rng(options.seed * 2 + 1);
  BitextCorpus seed = parallel_corpus(language, options.seed_pairs, seed_rng);
  write_bitext((dir / "seed.tsv").string(), seed, false);

  Rng corpus_rng(options.seed * 2 + 2);
  BitextCorpus parallel = parallel_corpus(language, options.parallel_pairs, corpus_rng);
  ComparableCorpus comparable = comparable_corpus(language, parallel, options.comparable, corpus_rng);

  // Unpaired articles exercise the pairing step: one link without a target
  // article and one article on each side without a link.
  comparable.src_dump.push_back({language.src_lang(), "Artykuł bez pary", "Samotny tekst."});
  comparable.links.emplace_back("Artykuł bez pary", "Missing article");
  comparable.src_dump.push_back({language.src_lang(), "Artykuł bez linku", "Inny tekst."});
  comparable.tgt_dump.push_back({language.tgt_lang(), "Unlinked article", "Other text."});

  write_dump((dir / "src.dump.jsonl").string(), comparable.src_dump);
  write_dump((dir / "tgt.dump.jsonl").string(), comparable.tgt_dump);
  write_links((dir / "links.tsv").string(), comparable.links);

  {
    auto out = create(dir / "truth.tsv");
    for (const auto& t : comparable.truth) {
      out << t.origin.article_id << '\t' << t.origin.src_index << '\t' << t.origin.tgt_index
          << '\t' << t.src << '\t' << t.tgt << '\n';
    }
  }
  {
    std::vector<std::string> words(language.target_stop_words().begin(),
                                   language.target_stop_words().end());
    std::sort(words.begin(), words.end());
    write_lines((dir / "stop_words.en.txt").string(), words);
  }
  {
    auto table = language.target_synonyms();
    std::vector<std::pair<std::string, std::string>> rows;
    for (const auto& [w, syns] : table) {
      for (const auto& s : syns) {
        if (w < s) rows.emplace_back(w, s);
      }
    }
    std::sort(rows.begin(), rows.end());
    auto out = create(dir / "synonyms.en.tsv");
    for (const auto& [w, s] : rows) out << w << '\t' << s << '\n';
  }
  {
    nlohmann::json cascade = {
        {"stages",
         {{{"function", "fast"}, {"accept", 0.9}, {"reject", 0.2}},
          {{"function", "stem"}, {"accept", 0.8}, {"reject", 0.3}},
          {{"function", "synonym"}, {"accept", 0.7}, {"reject", nullptr}}}},
        {"stop_words", {{"en", "stop_words.en.txt"}}},
        {"synonyms", "synonyms.en.tsv"}};
    create(dir / "cascade.json") << cascade.dump(2) << '\n';
  }
  {
    nlohmann::json pipeline = {
        {"work_dir", "work"},
        {"inputs",
         {{"src_dump", "src.dump.jsonl"},
          {"tgt_dump", "tgt.dump.jsonl"},
          {"links", "links.tsv"},
          {"seed", "seed.tsv"},
          {"cascade_config", "cascade.json"}}},
        {"langs", {{"src", language.src_lang()}, {"tgt", language.tgt_lang()}}},
        {"lexicon", {{"iterations", 10}, {"prune_below", 1e-4}}},
        {"classifier", {{"neg_per_pos", 3}, {"epochs", 20}, {"seed", 1}}},
        {"mining", {{"threshold", 0.5}, {"gap_cost", 0.4}, {"workers", 1}, {"bidirectional", true}}},
        {"analogy", {{"max_distance", 4}, {"guard", 50000}, {"order", 2}, {"allow_unknown", false}}},
        {"filter", {{"min_chars", 10}}},
        {"eval",
         {{"segments", options.eval_segments},
          {"per_segment", options.eval_per_segment},
          {"seed", 0}}}};
    create(dir / "pipeline.json") << pipeline.dump(2) << '\n';
  }
}

}  // namespace parmine::synthetic
