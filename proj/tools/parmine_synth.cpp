// Writes the synthetic comparable-corpus fixture: dumps, links, seed
// bitext, ground truth, filter resources and a pipeline config.

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <exception>

#include "CLI11.hpp"
#include "parmine/synthetic.hpp"

int main(int argc, char** argv) {
  spdlog::set_default_logger(spdlog::stderr_color_mt("parmine_synth"));
  parmine::synthetic::FixtureOptions options;
  std::string out;

  CLI::App app{"Generate the synthetic parmine fixture"};
  app.add_option("--out", out, "Output directory")->required();
  app.add_option("--seed", options.seed, "Generator seed")->capture_default_str();
  app.add_option("--seed-pairs", options.seed_pairs, "Seed bitext size")->capture_default_str();
  app.add_option("--parallel-pairs", options.parallel_pairs,
                 "Parallel pairs the articles are built from")
      ->capture_default_str();
  app.add_option("--articles", options.comparable.articles, "Article pairs")->capture_default_str();
  app.add_option("--pairs-per-article", options.comparable.pairs_per_article,
                 "Parallel pairs per article")
      ->capture_default_str();
  app.add_option("--deletion", options.comparable.deletion_rate, "Share of pairs losing one side")
      ->capture_default_str();
  app.add_option("--insertion", options.comparable.insertion_rate,
                 "Share of positions with an unrelated sentence")
      ->capture_default_str();
  app.add_option("--noise", options.comparable.noise_rate, "Share of perturbed targets")
      ->capture_default_str();
  app.add_flag("!--no-markup", options.comparable.markup, "Plain article bodies");
  app.add_option("--eval-segments", options.eval_segments, "eval.segments in pipeline.json")
      ->capture_default_str();
  app.add_option("--eval-per-segment", options.eval_per_segment,
                 "eval.per_segment in pipeline.json")
      ->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  try {
    parmine::synthetic::write_fixture(out, options);
    spdlog::info("fixture written to {}", out);
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
  return 0;
}
