#include "parmine/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include "json.hpp"
#include "parmine/analogy.hpp"
#include "parmine/checksum.hpp"
#include "parmine/corpus.hpp"
#include "parmine/error.hpp"
#include "parmine/filter.hpp"
#include "parmine/metrics.hpp"
#include "parmine/text.hpp"

namespace parmine {

using nlohmann::json;
namespace fs = std::filesystem;

std::string_view stage_name(Stage stage) {
  switch (stage) {
    case Stage::ingest: return "ingest";
    case Stage::lexicon: return "lexicon";
    case Stage::classifier: return "classifier";
    case Stage::mine: return "mine";
    case Stage::merge: return "merge";
    case Stage::analogy: return "analogy";
    case Stage::filter: return "filter";
    case Stage::eval: return "eval";
  }
  throw Error("unknown stage");
}

Stage parse_stage(std::string_view name) {
  for (Stage s : kAllStages) {
    if (stage_name(s) == name) return s;
  }
  throw Error("unknown stage \"" + std::string(name) + "\"");
}

std::vector<Stage> parse_stages(std::string_view list) {
  if (list == "all") return {std::begin(kAllStages), std::end(kAllStages)};
  std::vector<bool> wanted(std::size(kAllStages), false);
  std::size_t start = 0;
  bool any = false;
  while (start <= list.size()) {
    std::size_t comma = list.find(',', start);
    if (comma == std::string_view::npos) comma = list.size();
    std::string name = collapse_whitespace(list.substr(start, comma - start));
    if (!name.empty()) {
      wanted[static_cast<std::size_t>(parse_stage(name))] = true;
      any = true;
    }
    start = comma + 1;
  }
  if (!any) throw Error("no stages given");
  std::vector<Stage> out;
  for (Stage s : kAllStages) {
    if (wanted[static_cast<std::size_t>(s)]) out.push_back(s);
  }
  return out;
}

// ---- configuration ----

namespace {

void check_keys(const json& section, std::string_view where,
                std::initializer_list<std::string_view> allowed) {
  if (!section.is_object()) throw Error("config: \"" + std::string(where) + "\" must be an object");
  for (const auto& [key, value] : section.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw Error("config: unknown key \"" + key + "\" in \"" + std::string(where) + "\"");
    }
  }
}

template <typename T>
void read(const json& section, const char* key, T& target) {
  if (!section.contains(key)) return;
  try {
    target = section.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(std::string("config: bad value for \"") + key + "\": " + e.what());
  }
}

void read_path(const json& section, const char* key, const fs::path& base, fs::path& target) {
  std::string value;
  if (!section.contains(key)) return;
  read(section, key, value);
  fs::path p(value);
  target = p.is_absolute() || value.empty() ? p : base / p;
}

}  // namespace

PipelineConfig PipelineConfig::load(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open config " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str(), path.parent_path());
}

PipelineConfig PipelineConfig::parse(std::string_view json_text, const fs::path& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(std::string("config: ") + e.what());
  }
  check_keys(doc, "config",
             {"work_dir", "inputs", "langs", "lexicon", "classifier", "mining", "analogy",
              "filter", "eval"});
  PipelineConfig c;
  c.work_dir = base_dir / c.work_dir;
  read_path(doc, "work_dir", base_dir, c.work_dir);
  if (doc.contains("inputs")) {
    const auto& s = doc["inputs"];
    check_keys(s, "inputs", {"src_dump", "tgt_dump", "links", "seed", "cascade_config"});
    read_path(s, "src_dump", base_dir, c.src_dump);
    read_path(s, "tgt_dump", base_dir, c.tgt_dump);
    read_path(s, "links", base_dir, c.links);
    read_path(s, "seed", base_dir, c.seed);
    read_path(s, "cascade_config", base_dir, c.cascade_config);
  }
  if (doc.contains("langs")) {
    const auto& s = doc["langs"];
    check_keys(s, "langs", {"src", "tgt"});
    read(s, "src", c.src_lang);
    read(s, "tgt", c.tgt_lang);
  }
  if (doc.contains("lexicon")) {
    const auto& s = doc["lexicon"];
    check_keys(s, "lexicon", {"iterations", "prune_below"});
    read(s, "iterations", c.lexicon.iterations);
    read(s, "prune_below", c.lexicon.prune_below);
  }
  if (doc.contains("classifier")) {
    const auto& s = doc["classifier"];
    check_keys(s, "classifier",
               {"neg_per_pos", "epochs", "learning_rate", "margin_reg", "seed",
                "heldout_fraction", "threshold"});
    read(s, "neg_per_pos", c.classifier.neg_per_pos);
    read(s, "epochs", c.classifier.epochs);
    read(s, "learning_rate", c.classifier.learning_rate);
    read(s, "margin_reg", c.classifier.margin_reg);
    read(s, "seed", c.classifier.seed);
    read(s, "heldout_fraction", c.classifier.heldout_fraction);
    read(s, "threshold", c.classifier.threshold);
  }
  if (doc.contains("mining")) {
    const auto& s = doc["mining"];
    check_keys(s, "mining", {"threshold", "gap_cost", "workers", "bidirectional"});
    read(s, "threshold", c.mining.threshold);
    read(s, "gap_cost", c.mining.gap_cost);
    read(s, "workers", c.workers);
    read(s, "bidirectional", c.bidirectional);
  }
  if (doc.contains("analogy")) {
    const auto& s = doc["analogy"];
    check_keys(s, "analogy",
               {"max_distance", "guard", "order", "allow_unknown", "require_target"});
    read(s, "max_distance", c.analogy_max_distance);
    read(s, "guard", c.analogy_guard);
    read(s, "order", c.analogy_order);
    read(s, "allow_unknown", c.analogy_allow_unknown);
    read(s, "require_target", c.analogy_require_target);
  }
  if (doc.contains("filter")) {
    const auto& s = doc["filter"];
    check_keys(s, "filter", {"min_chars", "cascade_config"});
    read(s, "min_chars", c.min_chars);
    read_path(s, "cascade_config", base_dir, c.cascade_config);
  }
  if (doc.contains("eval")) {
    const auto& s = doc["eval"];
    check_keys(s, "eval", {"segments", "per_segment", "seed"});
    read(s, "segments", c.eval_segments);
    read(s, "per_segment", c.eval_per_segment);
    read(s, "seed", c.eval_seed);
  }
  return c;
}

void PipelineConfig::validate(const std::vector<Stage>& stages) const {
  auto fail = [](const std::string& message) { throw Error("config: " + message); };
  if (src_lang.empty() || tgt_lang.empty()) fail("languages must be set");
  if (src_lang == tgt_lang) fail("source and target language are both \"" + src_lang + "\"");
  if (lexicon.iterations == 0) fail("lexicon.iterations must be positive");
  if (!(lexicon.prune_below >= 0.0 && lexicon.prune_below < 1.0)) {
    fail("lexicon.prune_below must be in [0, 1)");
  }
  if (classifier.neg_per_pos == 0) fail("classifier.neg_per_pos must be positive");
  if (classifier.epochs == 0) fail("classifier.epochs must be positive");
  if (!(classifier.learning_rate > 0.0)) fail("classifier.learning_rate must be positive");
  if (!(classifier.margin_reg >= 0.0)) fail("classifier.margin_reg must be non-negative");
  if (!(classifier.heldout_fraction > 0.0 && classifier.heldout_fraction < 1.0)) {
    fail("classifier.heldout_fraction must be in (0, 1)");
  }
  if (!(classifier.threshold >= 0.0 && classifier.threshold <= 1.0)) {
    fail("classifier.threshold must be in [0, 1]");
  }
  if (!(mining.threshold >= 0.0 && mining.threshold <= 1.0)) fail("mining.threshold must be in [0, 1]");
  if (!(mining.gap_cost > 0.0 && mining.gap_cost <= 0.5)) fail("mining.gap_cost must be in (0, 0.5]");
  if (workers == 0) fail("mining.workers must be positive");
  if (analogy_max_distance == 0) fail("analogy.max_distance must be positive");
  if (analogy_order < 2) fail("analogy.order must be at least 2");
  if (analogy_guard == 0) fail("analogy.guard must be positive");
  if (eval_segments == 0 || eval_per_segment == 0) fail("eval segments and per_segment must be positive");

  auto need = [&](const fs::path& p, const char* what, Stage stage) {
    if (p.empty()) fail(std::string(what) + " is required by stage " + std::string(stage_name(stage)));
    if (!fs::exists(p)) fail(std::string(what) + " " + p.string() + " does not exist");
  };
  for (Stage s : stages) {
    switch (s) {
      case Stage::ingest:
        need(src_dump, "inputs.src_dump", s);
        need(tgt_dump, "inputs.tgt_dump", s);
        need(links, "inputs.links", s);
        break;
      case Stage::lexicon:
      case Stage::classifier:
      case Stage::analogy:
        need(seed, "inputs.seed", s);
        break;
      case Stage::filter:
        if (!cascade_config.empty()) need(cascade_config, "inputs.cascade_config", s);
        break;
      default:
        break;
    }
  }
}

// ---- stages ----

namespace {

class Run {
 public:
  explicit Run(const PipelineConfig& config) : c_(config) {
    fs::create_directories(c_.work_dir / artifacts::kManifestDir);
  }

  void stage(Stage s) {
    switch (s) {
      case Stage::ingest: return ingest();
      case Stage::lexicon: return lexicon();
      case Stage::classifier: return classifier();
      case Stage::mine: return mine();
      case Stage::merge: return merge();
      case Stage::analogy: return analogy();
      case Stage::filter: return filter();
      case Stage::eval: return eval();
    }
  }

 private:
  std::string artifact(std::string_view name) const { return (c_.work_dir / name).string(); }

  // The path of an upstream artifact, which must already exist.
  std::string upstream(std::string_view name, Stage producer) const {
    std::string p = artifact(name);
    if (!fs::exists(p)) {
      throw Error("missing " + std::string(name) + " in " + c_.work_dir.string() +
                  "; run stage \"" + std::string(stage_name(producer)) + "\" first");
    }
    return p;
  }

  std::string relative(const std::string& p) const {
    return fs::path(p).lexically_proximate(c_.work_dir).generic_string();
  }

  void begin(Stage s) {
    manifest_ = json::object();
    manifest_["stage"] = stage_name(s);
    manifest_["inputs"] = json::array();
    manifest_["outputs"] = json::array();
    manifest_["parameters"] = json::object();
    manifest_["counts"] = json::object();
  }

  void input(const std::string& p) {
    manifest_["inputs"].push_back({{"path", relative(p)}, {"checksum", file_checksum(p)}});
  }

  void output(const std::string& p) {
    manifest_["outputs"].push_back({{"path", relative(p)}, {"checksum", file_checksum(p)}});
  }

  void finish(Stage s) {
    std::ofstream out(c_.work_dir / artifacts::kManifestDir / (std::string(stage_name(s)) + ".json"),
                      std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write manifest for stage " + std::string(stage_name(s)));
    out << manifest_.dump(2) << '\n';
  }

  BitextCorpus seed() {
    input(c_.seed.string());
    return read_bitext(c_.seed.string(), c_.src_lang, c_.tgt_lang);
  }

  void ingest() {
    begin(Stage::ingest);
    input(c_.src_dump.string());
    input(c_.tgt_dump.string());
    input(c_.links.string());
    auto src = read_dump(c_.src_dump.string(), c_.src_lang);
    auto tgt = read_dump(c_.tgt_dump.string(), c_.tgt_lang);
    auto links = read_links(c_.links.string());
    auto pairs = pair_articles(src, tgt, links);
    for (auto& p : pairs) {
      p.src.body = clean_document(p.src.body);
      p.tgt.body = clean_document(p.tgt.body);
    }
    const std::string out = artifact(artifacts::kStore);
    write_store(out, pairs);
    output(out);
    manifest_["counts"] = {{"src_documents", src.size()},
                           {"tgt_documents", tgt.size()},
                           {"links", links.size()},
                           {"article_pairs", pairs.size()}};
    finish(Stage::ingest);
  }

  void lexicon() {
    begin(Stage::lexicon);
    BitextCorpus s = seed();
    manifest_["parameters"] = {{"iterations", c_.lexicon.iterations},
                               {"prune_below", c_.lexicon.prune_below}};
    auto fwd = train_lexicon(s, c_.lexicon);
    auto rev = train_lexicon(flipped(s), c_.lexicon);
    fwd.lexicon.save(artifact(artifacts::kLexiconFwd));
    rev.lexicon.save(artifact(artifacts::kLexiconRev));
    output(artifact(artifacts::kLexiconFwd));
    output(artifact(artifacts::kLexiconRev));
    manifest_["counts"] = {{"seed_pairs", s.size()},
                           {"fwd_sources", fwd.lexicon.size()},
                           {"rev_sources", rev.lexicon.size()}};
    finish(Stage::lexicon);
  }

  void classifier() {
    begin(Stage::classifier);
    BitextCorpus s = seed();
    const std::string lex_fwd = upstream(artifacts::kLexiconFwd, Stage::lexicon);
    const std::string lex_rev = upstream(artifacts::kLexiconRev, Stage::lexicon);
    input(lex_fwd);
    input(lex_rev);
    const auto& o = c_.classifier;
    manifest_["parameters"] = {{"neg_per_pos", o.neg_per_pos},   {"epochs", o.epochs},
                               {"learning_rate", o.learning_rate}, {"margin_reg", o.margin_reg},
                               {"seed", o.seed},                   {"heldout_fraction", o.heldout_fraction},
                               {"threshold", o.threshold}};
    auto fwd = train_model(s, TranslationLexicon::load(lex_fwd), o);
    auto rev = train_model(flipped(s), TranslationLexicon::load(lex_rev), o);
    fwd.model.save(artifact(artifacts::kModelFwd));
    rev.model.save(artifact(artifacts::kModelRev));
    output(artifact(artifacts::kModelFwd));
    output(artifact(artifacts::kModelRev));
    manifest_["counts"] = {{"positives", fwd.positives},
                           {"negatives", fwd.negatives},
                           {"fwd_train_accuracy", fwd.train_accuracy},
                           {"fwd_heldout_accuracy", fwd.heldout_accuracy},
                           {"rev_train_accuracy", rev.train_accuracy},
                           {"rev_heldout_accuracy", rev.heldout_accuracy}};
    finish(Stage::classifier);
  }

  void write_log(const std::string& path, const std::vector<ArticleLog>& log) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path);
    for (const auto& entry : log) out << entry.to_line() << '\n';
  }

  void mine() {
    begin(Stage::mine);
    const std::string store_path = upstream(artifacts::kStore, Stage::ingest);
    const std::string model_fwd = upstream(artifacts::kModelFwd, Stage::classifier);
    const std::string lex_fwd = upstream(artifacts::kLexiconFwd, Stage::lexicon);
    input(store_path);
    input(model_fwd);
    input(lex_fwd);
    manifest_["parameters"] = {{"threshold", c_.mining.threshold},
                               {"gap_cost", c_.mining.gap_cost},
                               {"bidirectional", c_.bidirectional}};
    auto store = read_store(store_path);
    MiningConfig config = c_.mining;
    config.direction = "fwd";
    auto fwd = mine_corpus(store, SimilarityModel::load(model_fwd), TranslationLexicon::load(lex_fwd),
                           config, c_.workers);
    write_bitext(artifact(artifacts::kMinedFwd), fwd.corpus);
    write_log(artifact(artifacts::kMineLogFwd), fwd.log);
    output(artifact(artifacts::kMinedFwd));
    output(artifact(artifacts::kMineLogFwd));
    manifest_["counts"]["fwd_pairs"] = fwd.corpus.size();
    manifest_["counts"]["articles"] = store.size();

    if (c_.bidirectional) {
      const std::string model_rev = upstream(artifacts::kModelRev, Stage::classifier);
      const std::string lex_rev = upstream(artifacts::kLexiconRev, Stage::lexicon);
      input(model_rev);
      input(lex_rev);
      std::vector<ArticlePair> reversed;
      reversed.reserve(store.size());
      for (const auto& p : store) reversed.push_back(flipped(p));
      config.direction = "rev";
      auto rev = mine_corpus(reversed, SimilarityModel::load(model_rev),
                             TranslationLexicon::load(lex_rev), config, c_.workers);
      write_bitext(artifact(artifacts::kMinedRev), flipped(rev.corpus));
      write_log(artifact(artifacts::kMineLogRev), rev.log);
      output(artifact(artifacts::kMinedRev));
      output(artifact(artifacts::kMineLogRev));
      manifest_["counts"]["rev_pairs"] = rev.corpus.size();
    }
    finish(Stage::mine);
  }

  void merge() {
    begin(Stage::merge);
    const std::string fwd_path = upstream(artifacts::kMinedFwd, Stage::mine);
    input(fwd_path);
    BitextCorpus fwd = read_bitext(fwd_path, c_.src_lang, c_.tgt_lang);
    BitextCorpus rev;
    rev.src_lang = c_.src_lang;
    rev.tgt_lang = c_.tgt_lang;
    if (c_.bidirectional) {
      const std::string rev_path = upstream(artifacts::kMinedRev, Stage::mine);
      input(rev_path);
      rev = read_bitext(rev_path, c_.src_lang, c_.tgt_lang);
    }
    manifest_["parameters"] = {{"bidirectional", c_.bidirectional}};
    auto result = merge_bidirectional(fwd, rev);
    write_bitext(artifact(artifacts::kMerged), result.merged);
    {
      std::ofstream out(artifact(artifacts::kMergeStats), std::ios::binary | std::ios::trunc);
      if (!out) throw Error("cannot write " + artifact(artifacts::kMergeStats));
      out << format_overlap_stats(result.stats);
    }
    output(artifact(artifacts::kMerged));
    output(artifact(artifacts::kMergeStats));
    manifest_["counts"] = {{"fwd_pairs", fwd.size()},
                           {"rev_pairs", rev.size()},
                           {"recognized", result.stats.recognized},
                           {"overlapping", result.stats.overlapping},
                           {"newly_obtained", result.stats.newly_obtained},
                           {"merged_pairs", result.merged.size()}};
    finish(Stage::merge);
  }

  void analogy() {
    begin(Stage::analogy);
    BitextCorpus s = seed();
    const std::string store_path = upstream(artifacts::kStore, Stage::ingest);
    const std::string lex_fwd = upstream(artifacts::kLexiconFwd, Stage::lexicon);
    input(store_path);
    input(lex_fwd);
    manifest_["parameters"] = {{"max_distance", c_.analogy_max_distance},
                               {"guard", c_.analogy_guard},
                               {"order", c_.analogy_order},
                               {"allow_unknown", c_.analogy_allow_unknown},
                               {"require_target", c_.analogy_require_target}};

    // Repeated source sentences would only add copies of the same analogies.
    std::vector<SeedPair> unique;
    std::vector<std::size_t> original;
    std::unordered_map<std::string, std::size_t> seen;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (!seen.emplace(s.pairs[i].src, i).second) continue;
      unique.push_back({tokenize(s.pairs[i].src, false), tokenize(s.pairs[i].tgt, false)});
      original.push_back(i);
    }
    if (unique.size() > c_.analogy_guard) {
      throw Error("analogy: " + std::to_string(unique.size()) +
                  " distinct seed sentences exceed the guard of " +
                  std::to_string(c_.analogy_guard) + "; raise analogy.guard to proceed");
    }
    std::vector<Tokens> sources;
    sources.reserve(unique.size());
    for (const auto& p : unique) sources.push_back(p.src);
    AnalogySearchOptions search;
    search.max_distance = c_.analogy_max_distance;
    auto quads = find_analogies(sources, search);
    auto clusters = find_analogy_clusters(quads, c_.analogy_order);
    auto models = extract_models(clusters, quads, unique, c_.analogy_require_target,
                                 c_.analogy_max_distance);

    auto store = read_store(store_path);
    auto lex = TranslationLexicon::load(lex_fwd);
    GenerationConfig generation;
    generation.allow_unknown = c_.analogy_allow_unknown;
    auto quasi = generate_corpus(models, store, lex, generation);

    // Files refer to seed line numbers.
    std::vector<AnalogyQuadruple> seed_quads = quads;
    for (auto& q : seed_quads) {
      q.a = original[q.a];
      q.b = original[q.b];
      q.c = original[q.c];
      q.d = original[q.d];
    }
    std::vector<RewritingModel> seed_models = models;
    for (auto& m : seed_models) m.support = {original[m.support.first], original[m.support.second]};
    {
      std::ofstream out(artifact(artifacts::kQuads), std::ios::binary | std::ios::trunc);
      if (!out) throw Error("cannot write " + artifact(artifacts::kQuads));
      write_quads(out, seed_quads);
    }
    {
      std::ofstream out(artifact(artifacts::kRewritingModels), std::ios::binary | std::ios::trunc);
      if (!out) throw Error("cannot write " + artifact(artifacts::kRewritingModels));
      write_models(out, seed_models);
    }
    write_bitext(artifact(artifacts::kQuasi), quasi.bitext(c_.src_lang, c_.tgt_lang));
    output(artifact(artifacts::kQuads));
    output(artifact(artifacts::kRewritingModels));
    output(artifact(artifacts::kQuasi));
    manifest_["counts"] = {{"seed_sentences", unique.size()},
                           {"quadruples", quads.size()},
                           {"clusters", clusters.size()},
                           {"models", models.size()},
                           {"generated", quasi.pairs.size()},
                           {"confirmed", quasi.confirmed}};
    finish(Stage::analogy);
  }

  CascadeConfig cascade() {
    if (c_.cascade_config.empty()) return CascadeConfig::defaults();
    input(c_.cascade_config.string());
    return CascadeConfig::load(c_.cascade_config.string());
  }

  void filter() {
    begin(Stage::filter);
    const std::string merged_path = upstream(artifacts::kMerged, Stage::merge);
    const std::string quasi_path = upstream(artifacts::kQuasi, Stage::analogy);
    const std::string lex_fwd = upstream(artifacts::kLexiconFwd, Stage::lexicon);
    input(merged_path);
    input(quasi_path);
    input(lex_fwd);
    CascadeConfig config = cascade();
    manifest_["parameters"]["min_chars"] = c_.min_chars;
    manifest_["parameters"]["stages"] = json::array();
    for (const auto& st : config.stages) {
      manifest_["parameters"]["stages"].push_back(
          {{"function", comparison_name(st.function)}, {"accept", st.accept}, {"reject", st.reject}});
    }

    BitextCorpus combined = read_bitext(merged_path, c_.src_lang, c_.tgt_lang);
    BitextCorpus quasi = read_bitext(quasi_path, c_.src_lang, c_.tgt_lang);
    const std::size_t merged_count = combined.size();
    combined.pairs.insert(combined.pairs.end(), quasi.pairs.begin(), quasi.pairs.end());
    write_bitext(artifact(artifacts::kCombined), combined);
    output(artifact(artifacts::kCombined));

    auto trivial = remove_trivial(combined, c_.min_chars);
    write_bitext(artifact(artifacts::kTrivialKept), trivial.kept);
    output(artifact(artifacts::kTrivialKept));

    const auto lex = TranslationLexicon::load(lex_fwd);
    Translator translator = [&lex](const Tokens& tokens) { return gloss_translate(lex, tokens); };
    auto cascaded = filter_corpus(trivial.kept, translator, config);
    write_bitext(artifact(artifacts::kFinal), cascaded.kept);
    {
      std::ofstream out(artifact(artifacts::kRejected), std::ios::binary | std::ios::trunc);
      if (!out) throw Error("cannot write " + artifact(artifacts::kRejected));
      auto write_rejected = [&out](const FilterOutcome& o) {
        for (std::size_t i = 0; i < o.rejected.size(); ++i) {
          BitextCorpus one;
          one.pairs.push_back(o.rejected.pairs[i]);
          std::ostringstream line;
          write_bitext(line, one, false);
          std::string text = line.str();
          text.pop_back();
          out << text << '\t' << o.rejected_rules[i] << '\n';
        }
      };
      write_rejected(trivial);
      write_rejected(cascaded);
    }
    json report = {{"trivial", json::parse(trivial.report.to_json())},
                   {"cascade", json::parse(cascaded.report.to_json())}};
    {
      std::ofstream out(artifact(artifacts::kFilterReport), std::ios::binary | std::ios::trunc);
      if (!out) throw Error("cannot write " + artifact(artifacts::kFilterReport));
      out << report.dump(2) << '\n';
    }
    output(artifact(artifacts::kFinal));
    output(artifact(artifacts::kRejected));
    output(artifact(artifacts::kFilterReport));
    manifest_["counts"] = {{"mined_pairs", merged_count},
                           {"quasi_pairs", quasi.size()},
                           {"combined", combined.size()},
                           {"after_trivial", trivial.kept.size()},
                           {"final", cascaded.kept.size()}};
    finish(Stage::filter);
  }

  void eval() {
    begin(Stage::eval);
    const std::string final_path = upstream(artifacts::kFinal, Stage::filter);
    const std::string lex_fwd = upstream(artifacts::kLexiconFwd, Stage::lexicon);
    input(final_path);
    input(lex_fwd);
    manifest_["parameters"] = {{"segments", c_.eval_segments},
                               {"per_segment", c_.eval_per_segment},
                               {"seed", c_.eval_seed}};
    auto corpus = read_bitext(final_path, c_.src_lang, c_.tgt_lang);
    auto split = sample_test_set(corpus, c_.eval_segments, c_.eval_per_segment, c_.eval_seed);
    write_bitext(artifact(artifacts::kTest), split.test);
    write_bitext(artifact(artifacts::kTrain), split.train);

    // The test set is scored with the gloss translation of its sources as
    // the hypothesis, a baseline for the mined lexicon.
    const auto lex = TranslationLexicon::load(lex_fwd);
    std::vector<EvalPair> pairs;
    pairs.reserve(split.test.size());
    for (const auto& p : split.test.pairs) {
      pairs.push_back({gloss_translate(lex, tokenize(p.src, true)), {tokenize(p.tgt, true)}});
    }
    json scores = json::object();
    for (Metric m : {Metric::bleu, Metric::nist, Metric::ter, Metric::meteor}) {
      const double v = corpus_score(pairs, m);
      scores[std::string(metric_name(m))] = {{"score", v}, {"x100", v * 100.0}};
    }
    json result = {{"test_pairs", split.test.size()},
                   {"train_pairs", split.train.size()},
                   {"hypothesis", "gloss"},
                   {"scores", scores}};
    {
      std::ofstream out(artifact(artifacts::kEval), std::ios::binary | std::ios::trunc);
      if (!out) throw Error("cannot write " + artifact(artifacts::kEval));
      out << result.dump(2) << '\n';
    }
    output(artifact(artifacts::kTest));
    output(artifact(artifacts::kTrain));
    output(artifact(artifacts::kEval));
    manifest_["counts"] = {{"corpus", corpus.size()},
                           {"test", split.test.size()},
                           {"train", split.train.size()}};
    finish(Stage::eval);
  }

  const PipelineConfig& c_;
  json manifest_;
};

}  // namespace

void run_pipeline(const PipelineConfig& config, const std::vector<Stage>& stages) {
  config.validate(stages);
  std::vector<Stage> ordered = stages;
  std::sort(ordered.begin(), ordered.end());
  ordered.erase(std::unique(ordered.begin(), ordered.end()), ordered.end());
  Run run(config);
  for (Stage s : ordered) run.stage(s);
}

}  // namespace parmine
