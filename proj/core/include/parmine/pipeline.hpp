#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "parmine/classifier.hpp"
#include "parmine/lexicon.hpp"
#include "parmine/miner.hpp"

namespace parmine {

enum class Stage { ingest, lexicon, classifier, mine, merge, analogy, filter, eval };

inline constexpr Stage kAllStages[] = {Stage::ingest,  Stage::lexicon, Stage::classifier,
                                       Stage::mine,    Stage::merge,   Stage::analogy,
                                       Stage::filter,  Stage::eval};

std::string_view stage_name(Stage stage);
Stage parse_stage(std::string_view name);
// Comma-separated names, or "all". Returned in dependency order.
std::vector<Stage> parse_stages(std::string_view list);

struct PipelineConfig {
  std::filesystem::path work_dir = "work";

  // inputs
  std::filesystem::path src_dump;
  std::filesystem::path tgt_dump;
  std::filesystem::path links;
  std::filesystem::path seed;
  std::filesystem::path cascade_config;  // empty: built-in defaults
  std::string src_lang = "pl";
  std::string tgt_lang = "en";

  LexiconOptions lexicon;
  ClassifierOptions classifier;

  MiningConfig mining;
  std::size_t workers = 1;
  bool bidirectional = true;

  std::size_t analogy_max_distance = 4;
  std::size_t analogy_guard = 50000;
  std::size_t analogy_order = 2;
  bool analogy_allow_unknown = false;
  bool analogy_require_target = false;

  std::size_t min_chars = 10;

  std::size_t eval_segments = 200;
  std::size_t eval_per_segment = 10;
  std::uint64_t eval_seed = 0;

  /// JSON with the sections "inputs", "langs", "lexicon", "classifier",
  /// "mining", "analogy", "filter" and "eval"; relative paths resolve
  /// against the config file's directory.
  static PipelineConfig load(const std::filesystem::path& path);
  static PipelineConfig parse(std::string_view json_text, const std::filesystem::path& base_dir);

  // Checks numeric ranges and that the inputs needed by the stages exist.
  void validate(const std::vector<Stage>& stages) const;
};

// Artifact file names inside work_dir.
namespace artifacts {
inline constexpr std::string_view kStore = "store.jsonl";
inline constexpr std::string_view kLexiconFwd = "lexicon.fwd.tsv";
inline constexpr std::string_view kLexiconRev = "lexicon.rev.tsv";
inline constexpr std::string_view kModelFwd = "model.fwd.json";
inline constexpr std::string_view kModelRev = "model.rev.json";
inline constexpr std::string_view kMinedFwd = "mined.fwd.tsv";
inline constexpr std::string_view kMinedRev = "mined.rev.tsv";
inline constexpr std::string_view kMineLogFwd = "mined.fwd.log";
inline constexpr std::string_view kMineLogRev = "mined.rev.log";
inline constexpr std::string_view kMerged = "merged.tsv";
inline constexpr std::string_view kMergeStats = "merge_stats.tsv";
inline constexpr std::string_view kQuads = "analogy.quads.jsonl";
inline constexpr std::string_view kRewritingModels = "analogy.models.jsonl";
inline constexpr std::string_view kQuasi = "analogy.quasi.tsv";
inline constexpr std::string_view kCombined = "combined.tsv";
inline constexpr std::string_view kTrivialKept = "filter.trivial.tsv";
inline constexpr std::string_view kFinal = "final.tsv";
inline constexpr std::string_view kRejected = "filter.rejected.tsv";
inline constexpr std::string_view kFilterReport = "filter.report.json";
inline constexpr std::string_view kTest = "test.tsv";
inline constexpr std::string_view kTrain = "train.tsv";
inline constexpr std::string_view kEval = "eval.json";
inline constexpr std::string_view kManifestDir = "manifests";
}  // namespace artifacts

/// Runs the requested stages in dependency order. Each stage writes its
/// artifacts and manifests/<stage>.json (inputs with checksums, parameters,
/// counts). A stage whose upstream artifact is missing fails with an error
/// naming the stage to run first.
void run_pipeline(const PipelineConfig& config, const std::vector<Stage>& stages);

}  // namespace parmine
