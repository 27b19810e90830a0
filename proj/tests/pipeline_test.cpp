#include "parmine/pipeline.hpp"

#include <gtest/gtest.h>

#include <filesystem>

#include "json.hpp"
#include "parmine/checksum.hpp"
#include "parmine/error.hpp"
#include "support.hpp"

namespace parmine {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

TEST(Stages, Parsing) {
  EXPECT_EQ(parse_stages("all").size(), 8u);
  EXPECT_EQ(parse_stages("eval, ingest,mine"),
            (std::vector<Stage>{Stage::ingest, Stage::mine, Stage::eval}));
  EXPECT_EQ(parse_stages("merge,merge"), std::vector<Stage>{Stage::merge});
  EXPECT_NE(error_of([] { parse_stages("ingest,train"); }).find("\"train\""), std::string::npos);
  EXPECT_THROW(parse_stages(" , "), Error);
  for (Stage s : kAllStages) EXPECT_EQ(parse_stage(stage_name(s)), s);
}

TEST(Config, ParsesAndResolvesPaths) {
  auto c = PipelineConfig::parse(R"({
    "inputs": {"seed": "seed.tsv", "src_dump": "/abs/src.jsonl"},
    "langs": {"src": "pl", "tgt": "en"},
    "mining": {"threshold": 0.6, "gap_cost": 0.3, "workers": 4, "bidirectional": false},
    "analogy": {"guard": 10},
    "filter": {"min_chars": 12, "cascade_config": "c.json"}
  })", "/base");
  EXPECT_EQ(c.work_dir, fs::path("/base/work"));
  EXPECT_EQ(c.seed, fs::path("/base/seed.tsv"));
  EXPECT_EQ(c.src_dump, fs::path("/abs/src.jsonl"));
  EXPECT_EQ(c.cascade_config, fs::path("/base/c.json"));
  EXPECT_EQ(c.mining.threshold, 0.6);
  EXPECT_EQ(c.mining.gap_cost, 0.3);
  EXPECT_EQ(c.workers, 4u);
  EXPECT_FALSE(c.bidirectional);
  EXPECT_EQ(c.analogy_guard, 10u);
  EXPECT_EQ(c.min_chars, 12u);
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
  EXPECT_NE(error_of([] { PipelineConfig::parse(R"({"minig": {}})", "."); }).find("\"minig\""),
            std::string::npos);
  EXPECT_NE(error_of([] {
              PipelineConfig::parse(R"({"mining": {"treshold": 0.5}})", ".");
            }).find("\"treshold\" in \"mining\""),
            std::string::npos);
  EXPECT_THROW(PipelineConfig::parse(R"({"mining": {"workers": "many"}})", "."), Error);
  EXPECT_THROW(PipelineConfig::parse("{", "."), Error);
  EXPECT_THROW(PipelineConfig::parse(R"({"langs": 3})", "."), Error);
}

TEST(Config, ValidatesRangesAndInputs) {
  auto c = PipelineConfig::parse("{}", ".");
  c.mining.gap_cost = 0.7;
  EXPECT_NE(error_of([&] { c.validate({Stage::merge}); }).find("gap_cost"), std::string::npos);
  c = PipelineConfig::parse("{}", ".");
  c.tgt_lang = "pl";
  EXPECT_THROW(c.validate({Stage::merge}), Error);
  c = PipelineConfig::parse("{}", ".");
  EXPECT_NE(error_of([&] { c.validate({Stage::ingest}); }).find("inputs.src_dump"),
            std::string::npos);
  c.seed = "/does/not/exist.tsv";
  EXPECT_NE(error_of([&] { c.validate({Stage::lexicon}); }).find("does not exist"),
            std::string::npos);
  EXPECT_NO_THROW(c.validate({Stage::merge, Stage::eval}));
}

class FixturePipeline : public ::testing::Test {
 protected:
  static PipelineConfig config_in(const fs::path& work) {
    auto c = PipelineConfig::load(fs::path(PARMINE_FIXTURE_DIR) / "pipeline.json");
    c.work_dir = work;
    return c;
  }
};

TEST_F(FixturePipeline, MissingUpstreamNamesTheStage) {
  testing::TempDir dir("pipeline_missing");
  auto c = config_in(dir.path() / "work");
  const auto message = error_of([&] { run_pipeline(c, {Stage::eval}); });
  EXPECT_NE(message.find("run stage \"filter\" first"), std::string::npos) << message;
  const auto mine = error_of([&] { run_pipeline(c, {Stage::mine}); });
  EXPECT_NE(mine.find("run stage \"ingest\" first"), std::string::npos) << mine;
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file()) {
      files[fs::relative(entry.path(), dir).generic_string()] = testing::slurp(entry.path());
    }
  }
  return files;
}

TEST_F(FixturePipeline, FullRunIsReproducible) {
  testing::TempDir dir("pipeline_full");
  auto first = config_in(dir.path() / "run1");
  auto second = config_in(dir.path() / "run2");
  second.workers = 8;
  run_pipeline(first, parse_stages("all"));
  run_pipeline(second, parse_stages("all"));

  const auto a = snapshot(first.work_dir);
  const auto b = snapshot(second.work_dir);
  ASSERT_EQ(a.size(), b.size());
  for (const auto& [name, bytes] : a) {
    ASSERT_TRUE(b.contains(name)) << name;
    if (name == "manifests/mine.json") continue;  // records the worker count
    EXPECT_EQ(bytes, b.at(name)) << name;
  }
  for (std::string_view artifact :
       {artifacts::kStore, artifacts::kLexiconFwd, artifacts::kModelFwd, artifacts::kMinedFwd,
        artifacts::kMinedRev, artifacts::kMerged, artifacts::kMergeStats, artifacts::kQuads,
        artifacts::kRewritingModels, artifacts::kQuasi, artifacts::kFinal, artifacts::kTest,
        artifacts::kEval}) {
    EXPECT_TRUE(a.contains(std::string(artifact))) << artifact;
  }

  // Every manifest checksum matches the file it names.
  for (Stage s : kAllStages) {
    const auto text = a.at("manifests/" + std::string(stage_name(s)) + ".json");
    auto m = json::parse(text);
    EXPECT_EQ(m.at("stage"), stage_name(s));
    for (const char* side : {"inputs", "outputs"}) {
      for (const auto& f : m.at(side)) {
        const auto path = (first.work_dir / f.at("path").get<std::string>()).lexically_normal();
        EXPECT_EQ(f.at("checksum"), file_checksum(path.string())) << path;
      }
    }
    EXPECT_FALSE(m.at("outputs").empty()) << stage_name(s);
  }

  auto merge = json::parse(a.at("manifests/merge.json")).at("counts");
  EXPECT_EQ(merge.at("newly_obtained").get<std::size_t>(),
            merge.at("recognized").get<std::size_t>() - merge.at("overlapping").get<std::size_t>());
  auto eval = json::parse(a.at(std::string(artifacts::kEval)));
  EXPECT_GT(eval.at("scores").at("bleu").at("score").get<double>(), 0.0);
}

TEST_F(FixturePipeline, RerunningOneStageReproducesIt) {
  testing::TempDir dir("pipeline_rerun");
  auto c = config_in(dir.path() / "work");
  run_pipeline(c, parse_stages("ingest,lexicon"));
  const auto before = testing::slurp(c.work_dir / artifacts::kLexiconFwd);
  run_pipeline(c, {Stage::lexicon});
  EXPECT_EQ(testing::slurp(c.work_dir / artifacts::kLexiconFwd), before);
}

}  // namespace
}  // namespace parmine
