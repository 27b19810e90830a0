// parmine: command-line front end for the mining pipeline. Logs go to
// standard error; results are written to the files named by the flags.

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <iostream>
#include <unordered_map>

#include "CLI11.hpp"
#include "json.hpp"
#include "parmine/analogy.hpp"
#include "parmine/classifier.hpp"
#include "parmine/corpus.hpp"
#include "parmine/error.hpp"
#include "parmine/filter.hpp"
#include "parmine/lexicon.hpp"
#include "parmine/metrics.hpp"
#include "parmine/miner.hpp"
#include "parmine/pipeline.hpp"
#include "parmine/text.hpp"

namespace {

using namespace parmine;
using nlohmann::json;

std::ofstream create(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot create " + path);
  return out;
}

std::ifstream open(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  return in;
}

// Writes to the file, or to standard output when the path is empty.
void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
  } else {
    create(path) << text;
  }
}

struct Langs {
  std::string src = "pl";
  std::string tgt = "en";
  void add(CLI::App* cmd) {
    cmd->add_option("--src-lang", src, "Source language code")->capture_default_str();
    cmd->add_option("--tgt-lang", tgt, "Target language code")->capture_default_str();
  }
};

// ---- ingest / sample / stats ----

void add_ingest(CLI::App& app, std::function<void()>& action) {
  auto* cmd = app.add_subcommand("ingest", "Pair linked articles from two dumps into a store");
  static std::string src_dump, tgt_dump, links, out;
  static Langs langs;
  cmd->add_option("--src-dump", src_dump, "Source dump (JSON lines)")->required();
  cmd->add_option("--tgt-dump", tgt_dump, "Target dump (JSON lines)")->required();
  cmd->add_option("--links", links, "Title links TSV")->required();
  cmd->add_option("--out", out, "Store to write")->required();
  langs.add(cmd);
  cmd->callback([&action] {
    action = [] {
      auto src = read_dump(src_dump, langs.src);
      auto tgt = read_dump(tgt_dump, langs.tgt);
      auto pairs = pair_articles(src, tgt, read_links(links));
      for (auto& p : pairs) {
        p.src.body = clean_document(p.src.body);
        p.tgt.body = clean_document(p.tgt.body);
      }
      write_store(out, pairs);
      spdlog::info("{} article pairs from {} + {} documents", pairs.size(), src.size(), tgt.size());
    };
  });
}

void add_sample(CLI::App& app, std::function<void()>& action) {
  auto* cmd = app.add_subcommand("sample", "Draw a segment-stratified test set");
  static std::string corpus, test, train;
  static std::size_t segments = 200, per_segment = 10;
  static std::uint64_t seed = 0;
  cmd->add_option("--corpus", corpus, "Bitext TSV")->required();
  cmd->add_option("--segments", segments, "Number of segments")->capture_default_str();
  cmd->add_option("--per-segment", per_segment, "Pairs drawn per segment")->capture_default_str();
  cmd->add_option("--seed", seed, "Sampling seed")->capture_default_str();
  cmd->add_option("--test", test, "Test set to write")->required();
  cmd->add_option("--train", train, "Remaining pairs to write")->required();
  cmd->callback([&action] {
    action = [] {
      auto split = sample_test_set(read_bitext(corpus), segments, per_segment, seed);
      write_bitext(test, split.test);
      write_bitext(train, split.train);
      spdlog::info("{} test and {} train pairs", split.test.size(), split.train.size());
    };
  });
}

void add_stats(CLI::App& app, std::function<void()>& action) {
  auto* cmd = app.add_subcommand("stats", "Corpus size, sentence and word counts");
  static std::string corpus, out, src_label = "src", tgt_label = "tgt";
  static bool as_json = false;
  cmd->add_option("--corpus", corpus, "Bitext TSV")->required();
  cmd->add_option("--out", out, "File to write (standard output if omitted)");
  cmd->add_option("--src-label", src_label, "Column label of the source side")->capture_default_str();
  cmd->add_option("--tgt-label", tgt_label, "Column label of the target side")->capture_default_str();
  cmd->add_flag("--json", as_json, "Write JSON instead of the table");
  cmd->callback([&action] {
    action = [] {
      auto stats = corpus_stats(read_bitext(corpus));
      emit(out, as_json ? stats_json(stats) + "\n" : format_stats_table(stats, src_label, tgt_label));
    };
  });
}

// ---- lexicon / classifier ----

void add_lexicon(CLI::App& app, std::function<void()>& action) {
  auto* group = app.add_subcommand("lexicon", "Translation lexicon");
  group->require_subcommand(1);
  auto* cmd = group->add_subcommand("train", "Train an IBM Model 1 lexicon on a seed bitext");
  static std::string seed, out;
  static LexiconOptions options;
  static bool reverse = false;
  static Langs langs;
  cmd->add_option("--seed", seed, "Seed bitext TSV")->required();
  cmd->add_option("--iters", options.iterations, "EM iterations")->capture_default_str();
  cmd->add_option("--prune", options.prune_below, "Drop entries below this probability")
      ->capture_default_str();
  cmd->add_flag("--reverse", reverse, "Train target-to-source");
  cmd->add_option("--out", out, "Lexicon TSV to write")->required();
  langs.add(cmd);
  cmd->callback([&action] {
    action = [] {
      auto corpus = read_bitext(seed, langs.src, langs.tgt);
      if (reverse) corpus = flipped(corpus);
      auto result = train_lexicon(corpus, options);
      result.lexicon.save(out);
      spdlog::info("{} source words, log-likelihood {:.4f} -> {:.4f}", result.lexicon.size(),
                   result.log_likelihood.front(), result.log_likelihood.back());
    };
  });
}

void add_classifier(CLI::App& app, std::function<void()>& action) {
  auto* group = app.add_subcommand("classifier", "Sentence-pair similarity model");
  group->require_subcommand(1);
  auto* cmd = group->add_subcommand("train", "Train and calibrate the similarity model");
  static std::string seed, lexicon, out;
  static ClassifierOptions options;
  static bool reverse = false;
  static Langs langs;
  cmd->add_option("--seed", seed, "Seed bitext TSV")->required();
  cmd->add_option("--lexicon", lexicon, "Lexicon of the same direction")->required();
  cmd->add_option("--out", out, "Model JSON to write")->required();
  cmd->add_option("--neg-per-pos", options.neg_per_pos, "Negatives per seed pair")->capture_default_str();
  cmd->add_option("--epochs", options.epochs, "SGD epochs")->capture_default_str();
  cmd->add_option("--learning-rate", options.learning_rate, "Initial step size")->capture_default_str();
  cmd->add_option("--reg", options.margin_reg, "L2 regularization")->capture_default_str();
  cmd->add_option("--rng-seed", options.seed, "Sampling and shuffling seed")->capture_default_str();
  cmd->add_option("--heldout", options.heldout_fraction, "Calibration split")->capture_default_str();
  cmd->add_option("--threshold", options.threshold, "Decision threshold stored in the model")
      ->capture_default_str();
  cmd->add_flag("--reverse", reverse, "Train target-to-source");
  langs.add(cmd);
  cmd->callback([&action] {
    action = [] {
      auto corpus = read_bitext(seed, langs.src, langs.tgt);
      if (reverse) corpus = flipped(corpus);
      auto result = train_model(corpus, TranslationLexicon::load(lexicon), options);
      result.model.save(out);
      spdlog::info("{} positives, {} negatives, train accuracy {:.3f}, held-out accuracy {:.3f}",
                   result.positives, result.negatives, result.train_accuracy,
                   result.heldout_accuracy);
    };
  });
}

// ---- mine / merge ----

void add_mine(CLI::App& app, std::function<void()>& action) {
  auto* cmd = app.add_subcommand("mine", "Align the sentences of every article pair");
  static std::string store, model, lexicon, out, log;
  static MiningConfig config;
  static std::size_t workers = 1;
  static bool reverse = false;
  cmd->add_option("--store", store, "Article store")->required();
  cmd->add_option("--model", model, "Similarity model JSON")->required();
  cmd->add_option("--lexicon", lexicon, "Lexicon the model was trained with")->required();
  cmd->add_option("--threshold", config.threshold, "Minimum link score")->capture_default_str();
  cmd->add_option("--gap-cost", config.gap_cost, "Cost of leaving a sentence unaligned")
      ->capture_default_str();
  cmd->add_option("--workers", workers, "Worker threads")->capture_default_str();
  cmd->add_flag("--reverse", reverse,
                "Mine target-to-source with a reverse model; output keeps the store orientation");
  cmd->add_option("--out", out, "Mined bitext TSV")->required();
  cmd->add_option("--log", log, "Per-article log to write");
  cmd->callback([&action] {
    action = [] {
      auto articles = read_store(store);
      if (reverse) {
        for (auto& a : articles) a = flipped(a);
        config.direction = "rev";
      }
      auto result = mine_corpus(articles, SimilarityModel::load(model), TranslationLexicon::load(lexicon),
                                config, workers);
      write_bitext(out, reverse ? flipped(result.corpus) : result.corpus);
      if (!log.empty()) {
        auto f = create(log);
        for (const auto& entry : result.log) f << entry.to_line() << '\n';
      }
      spdlog::info("{} pairs from {} articles", result.corpus.size(), articles.size());
    };
  });
}

void add_merge(CLI::App& app, std::function<void()>& action) {
  auto* cmd = app.add_subcommand("merge-bidi", "Merge forward and reverse mining output");
  static std::string fwd, rev, out, stats;
  cmd->add_option("--fwd", fwd, "Forward mined bitext")->required();
  cmd->add_option("--rev", rev, "Reverse mined bitext, in forward orientation")->required();
  cmd->add_option("--out", out, "Merged bitext")->required();
  cmd->add_option("--stats", stats, "Overlap table to write")->required();
  cmd->callback([&action] {
    action = [] {
      auto result = merge_bidirectional(read_bitext(fwd), read_bitext(rev));
      write_bitext(out, result.merged);
      create(stats) << format_overlap_stats(result.stats);
      spdlog::info("recognized {}, overlapping {}, newly obtained {}", result.stats.recognized,
                   result.stats.overlapping, result.stats.newly_obtained);
    };
  });
}

// ---- analogy ----

std::vector<SeedPair> seed_pairs(const BitextCorpus& corpus) {
  std::vector<SeedPair> out;
  out.reserve(corpus.size());
  for (const auto& p : corpus.pairs) out.push_back({tokenize(p.src, false), tokenize(p.tgt, false)});
  return out;
}

void add_analogy(CLI::App& app, std::function<void()>& action) {
  auto* group = app.add_subcommand("analogy", "Sequential analogies and rewriting models");
  group->require_subcommand(1);

  auto* find = group->add_subcommand("find", "Find analogy quadruples among seed sources");
  static std::string find_seed, find_out;
  static std::size_t max_dist = 4, guard = 50000;
  find->add_option("--seed", find_seed, "Seed bitext TSV")->required();
  find->add_option("--max-dist", max_dist, "Largest word edit distance")->capture_default_str();
  find->add_option("--guard", guard, "Refuse more distinct sentences than this")->capture_default_str();
  find->add_option("--out", find_out, "Quadruples (JSON lines)")->required();
  find->callback([&action] {
    action = [] {
      auto corpus = read_bitext(find_seed);
      std::vector<Tokens> sources;
      std::vector<std::size_t> line;
      std::unordered_map<std::string, std::size_t> seen;
      for (std::size_t i = 0; i < corpus.size(); ++i) {
        if (!seen.emplace(corpus.pairs[i].src, i).second) continue;
        sources.push_back(tokenize(corpus.pairs[i].src, false));
        line.push_back(i);
      }
      if (sources.size() > guard) {
        throw Error(std::to_string(sources.size()) + " distinct sentences exceed --guard " +
                    std::to_string(guard));
      }
      AnalogySearchOptions options;
      options.max_distance = max_dist;
      auto quads = find_analogies(sources, options);
      for (auto& q : quads) {
        q.a = line[q.a];
        q.b = line[q.b];
        q.c = line[q.c];
        q.d = line[q.d];
      }
      auto out = create(find_out);
      write_quads(out, quads);
      spdlog::info("{} quadruples among {} sentences", quads.size(), sources.size());
    };
  });

  auto* models = group->add_subcommand("models", "Extract rewriting models from quadruples");
  static std::string models_seed, quads_path, models_out;
  static std::size_t order = 2, models_max_dist = 4;
  static bool require_target = false;
  models->add_option("--seed", models_seed, "Seed bitext the quadruples refer to")->required();
  models->add_option("--quads", quads_path, "Quadruples (JSON lines)")->required();
  models->add_option("--order", order, "Cluster order")->capture_default_str();
  models->add_flag("--require-target", require_target, "Targets must form the same analogy");
  models->add_option("--max-dist", models_max_dist, "Distance bound for the target check")
      ->capture_default_str();
  models->add_option("--out", models_out, "Models (JSON lines)")->required();
  models->callback([&action] {
    action = [] {
      auto seed = seed_pairs(read_bitext(models_seed));
      auto in = open(quads_path);
      auto quads = read_quads(in, quads_path);
      auto clusters = find_analogy_clusters(quads, order);
      auto extracted = extract_models(clusters, quads, seed, require_target, models_max_dist);
      auto out = create(models_out);
      write_models(out, extracted);
      spdlog::info("{} models from {} clusters", extracted.size(), clusters.size());
    };
  });

  auto* generate = group->add_subcommand("generate", "Apply rewriting models to store sentences");
  static std::string gen_models, gen_store, gen_lexicon, gen_out;
  static GenerationConfig gen_config;
  generate->add_option("--models", gen_models, "Models (JSON lines)")->required();
  generate->add_option("--store", gen_store, "Article store")->required();
  generate->add_option("--lexicon", gen_lexicon, "Forward lexicon for the slot")->required();
  generate->add_flag("--allow-unknown", gen_config.allow_unknown, "Keep slots with unknown words");
  generate->add_option("--out", gen_out, "Quasi-parallel bitext")->required();
  generate->callback([&action] {
    action = [] {
      auto in = open(gen_models);
      auto loaded = read_models(in, gen_models);
      auto store = read_store(gen_store);
      auto quasi = generate_corpus(loaded, store, TranslationLexicon::load(gen_lexicon), gen_config);
      write_bitext(gen_out, quasi.bitext());
      spdlog::info("{} generated pairs, {} confirmed by the target article", quasi.pairs.size(),
                   quasi.confirmed);
    };
  });
}

// ---- filter ----

void write_rejected(const std::string& path, const FilterOutcome& outcome) {
  auto out = create(path);
  for (std::size_t i = 0; i < outcome.rejected.size(); ++i) {
    const auto& p = outcome.rejected.pairs[i];
    out << collapse_whitespace(p.src) << '\t' << collapse_whitespace(p.tgt) << '\t'
        << outcome.rejected_rules[i] << '\n';
  }
}

void add_filter(CLI::App& app, std::function<void()>& action) {
  auto* group = app.add_subcommand("filter", "Remove noisy pairs");
  group->require_subcommand(1);

  auto* trivial = group->add_subcommand("trivial", "Drop short, letter-free and duplicate pairs");
  static std::string t_in, t_out, t_rejected;
  static std::size_t min_chars = 10;
  trivial->add_option("--in", t_in, "Bitext TSV")->required();
  trivial->add_option("--out", t_out, "Kept pairs")->required();
  trivial->add_option("--min-chars", min_chars, "Shortest side kept, in characters")
      ->capture_default_str();
  trivial->add_option("--rejected", t_rejected, "Rejected pairs with their rule");
  trivial->callback([&action] {
    action = [] {
      auto outcome = remove_trivial(read_bitext(t_in), min_chars);
      write_bitext(t_out, outcome.kept);
      if (!t_rejected.empty()) write_rejected(t_rejected, outcome);
      spdlog::info("kept {} of {}", outcome.report.kept_count, outcome.report.input_count);
    };
  });

  auto* cascade = group->add_subcommand("cascade", "Compare gloss translations with the targets");
  static std::string c_in, c_lexicon, c_config, c_kept, c_rejected, c_report;
  static Langs langs;
  cascade->add_option("--in", c_in, "Bitext TSV")->required();
  cascade->add_option("--lexicon", c_lexicon, "Forward lexicon")->required();
  cascade->add_option("--config", c_config, "Cascade JSON (built-in stages if omitted)");
  cascade->add_option("--kept", c_kept, "Kept pairs")->required();
  cascade->add_option("--rejected", c_rejected, "Rejected pairs with their rule")->required();
  cascade->add_option("--report", c_report, "Report JSON")->required();
  langs.add(cascade);
  cascade->callback([&action] {
    action = [] {
      auto config = c_config.empty() ? CascadeConfig::defaults() : CascadeConfig::load(c_config);
      auto lex = TranslationLexicon::load(c_lexicon);
      Translator translator = [&lex](const Tokens& t) { return gloss_translate(lex, t); };
      auto outcome = filter_corpus(read_bitext(c_in, langs.src, langs.tgt), translator, config);
      write_bitext(c_kept, outcome.kept);
      write_rejected(c_rejected, outcome);
      create(c_report) << outcome.report.to_json() << '\n';
      spdlog::info("kept {} of {}", outcome.report.kept_count, outcome.report.input_count);
    };
  });
}

// ---- eval ----

std::vector<EvalPair> load_eval(const std::string& hyp, const std::vector<std::string>& refs) {
  auto hyps = read_lines(hyp);
  std::vector<EvalPair> pairs(hyps.size());
  for (std::size_t i = 0; i < hyps.size(); ++i) pairs[i].hypothesis = tokenize(hyps[i], true);
  for (const auto& path : refs) {
    auto lines = read_lines(path);
    if (lines.size() != hyps.size()) {
      throw Error(path + " has " + std::to_string(lines.size()) + " lines, " + hyp + " has " +
                  std::to_string(hyps.size()));
    }
    for (std::size_t i = 0; i < lines.size(); ++i) pairs[i].references.push_back(tokenize(lines[i], true));
  }
  return pairs;
}

MeteorResources meteor_resources(const std::string& synonyms_path) {
  static SynonymTable synonyms;
  MeteorResources resources;
  if (!synonyms_path.empty()) {
    synonyms = load_synonyms(synonyms_path);
    resources.synonyms = &synonyms;
  }
  return resources;
}

void add_eval(CLI::App& app, std::function<void()>& action) {
  auto* cmd = app.add_subcommand("eval", "Score hypotheses against references");
  static std::string hyp, out, metric = "bleu", synonyms;
  static std::vector<std::string> refs;
  static bool as_json = false;
  cmd->add_option("--hyp", hyp, "Hypotheses, one per line");
  cmd->add_option("--ref", refs, "Reference file (repeatable)");
  cmd->add_option("--metric", metric, "bleu, nist, ter or meteor")->capture_default_str();
  cmd->add_option("--synonyms", synonyms, "Synonym TSV for meteor");
  cmd->add_flag("--json", as_json, "Write JSON");
  cmd->add_option("--out", out, "File to write (standard output if omitted)");

  auto* compare = cmd->add_subcommand("compare", "Paired bootstrap test between two systems");
  static std::string hyp_a, hyp_b, c_metric = "bleu", c_out, c_synonyms;
  static std::vector<std::string> c_refs;
  static std::size_t resamples = 1000;
  static std::uint64_t seed = 0;
  compare->add_option("--hyp-a", hyp_a, "System A hypotheses")->required();
  compare->add_option("--hyp-b", hyp_b, "System B hypotheses")->required();
  compare->add_option("--ref", c_refs, "Reference file (repeatable)")->required();
  compare->add_option("--metric", c_metric, "bleu, nist, ter or meteor")->capture_default_str();
  compare->add_option("--resamples", resamples, "Bootstrap resamples")->capture_default_str();
  compare->add_option("--seed", seed, "Resampling seed")->capture_default_str();
  compare->add_option("--synonyms", c_synonyms, "Synonym TSV for meteor");
  compare->add_option("--out", c_out, "JSON to write (standard output if omitted)");

  compare->callback([&action] {
    action = [] {
      const Metric m = parse_metric(c_metric);
      auto a = load_eval(hyp_a, c_refs);
      auto b = load_eval(hyp_b, c_refs);
      auto r = bootstrap_diff(a, b, m, resamples, seed, meteor_resources(c_synonyms));
      json j = {{"metric", metric_name(m)},      {"observed_diff", r.observed_diff},
                {"mean_diff", r.mean_diff},      {"ci_low", r.ci_low},
                {"ci_high", r.ci_high},          {"p_value", r.p_value},
                {"resamples", r.resamples}};
      emit(c_out, j.dump(2) + "\n");
    };
  });
  cmd->callback([cmd, &action] {
    if (!cmd->get_subcommands().empty()) return;
    if (hyp.empty() || refs.empty()) throw CLI::RequiredError("--hyp and --ref");
    action = [] {
      const Metric m = parse_metric(metric);
      auto pairs = load_eval(hyp, refs);
      const double score = corpus_score(pairs, m, meteor_resources(synonyms));
      if (as_json) {
        json j = {{"metric", metric_name(m)}, {"score", score}, {"x100", score * 100.0},
                  {"sentences", pairs.size()}};
        emit(out, j.dump(2) + "\n");
      } else {
        char line[64];
        std::snprintf(line, sizeof line, "%.4f\n", score);
        emit(out, std::string(metric_name(m)) + "\t" + line);
      }
    };
  });
}

// ---- pipeline ----

void add_pipeline(CLI::App& app, std::function<void()>& action) {
  auto* cmd = app.add_subcommand("pipeline", "Run pipeline stages from a JSON config");
  static std::string config_path, stages = "all", work_dir;
  static std::optional<std::size_t> workers;
  static std::optional<double> threshold, gap_cost;
  static std::optional<std::size_t> guard;
  cmd->add_option("--config", config_path, "Pipeline JSON")->required();
  cmd->add_option("--stages", stages,
                  "Comma-separated stages (ingest, lexicon, classifier, mine, merge, analogy, "
                  "filter, eval) or all")
      ->capture_default_str();
  cmd->add_option("--work-dir", work_dir, "Override work_dir");
  cmd->add_option("--workers", workers, "Override mining.workers");
  cmd->add_option("--threshold", threshold, "Override mining.threshold");
  cmd->add_option("--gap-cost", gap_cost, "Override mining.gap_cost");
  cmd->add_option("--guard", guard, "Override analogy.guard");
  cmd->callback([&action] {
    action = [] {
      auto config = PipelineConfig::load(config_path);
      if (!work_dir.empty()) config.work_dir = work_dir;
      if (workers) config.workers = *workers;
      if (threshold) config.mining.threshold = *threshold;
      if (gap_cost) config.mining.gap_cost = *gap_cost;
      if (guard) config.analogy_guard = *guard;
      auto list = parse_stages(stages);
      for (Stage s : list) spdlog::info("stage {}", stage_name(s));
      run_pipeline(config, list);
      spdlog::info("artifacts in {}", config.work_dir.string());
    };
  });
}

}  // namespace

int main(int argc, char** argv) {
  spdlog::set_default_logger(spdlog::stderr_color_mt("parmine"));
  CLI::App app{"Parallel corpus mining from comparable corpora"};
  app.require_subcommand(1);
  std::function<void()> action;
  add_ingest(app, action);
  add_sample(app, action);
  add_stats(app, action);
  add_lexicon(app, action);
  add_classifier(app, action);
  add_mine(app, action);
  add_merge(app, action);
  add_analogy(app, action);
  add_filter(app, action);
  add_eval(app, action);
  add_pipeline(app, action);
  CLI11_PARSE(app, argc, argv);

  try {
    if (action) action();
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
  return 0;
}
