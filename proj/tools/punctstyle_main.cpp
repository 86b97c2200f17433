// punctstyle: punctuation-sequence stylometry toolkit.
//
// Subcommands form a pipeline rooted at one output directory:
//   ingest      clean a corpus, write manifest.csv + cleaning_report.csv
//   features    extract per-document features into features.csv
//   consistency per-class KL self-consistency tables
//   classify    train/evaluate the KL-profile or network classifier
//   temporal    year-binned feature means and publication-date series
//   render      SVG color strip of a document's mark sequence
//
// Every flag can also be supplied through the environment variable named
// after it (PUNCT_CORPUS for --corpus, and so on); flags win over the
// environment. Each run writes run_<command>.json with the full resolved
// configuration.

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "punct/cli.hpp"

int main(int argc, char** argv) {
  punct::cli::RunConfig cfg;
  std::uint64_t seed = 0;
  std::string activation = "relu";

  CLI::App app{"punctuation-sequence stylometry toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "punctstyle 1.0.0");

  const auto add_out = [&](CLI::App* cmd) {
    cmd->add_option("--out", cfg.out_dir, "output directory (pipeline workspace)")
        ->envname("PUNCT_OUT");
  };
  const auto add_corpus = [&](CLI::App* cmd, bool required) {
    auto* opt = cmd->add_option("--corpus", cfg.corpus_dir,
                                "directory holding <doc_id>.txt files")
                    ->envname("PUNCT_CORPUS");
    if (required) opt->required();
  };
  const auto add_seed = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed, "seed for every random draw in this command")
        ->envname("PUNCT_SEED");
  };
  const auto add_feature = [&](CLI::App* cmd) {
    cmd->add_option("--feature", cfg.feature_arg,
                    "feature selector: 1, 3, 4, 5, all, or a comma list")
        ->envname("PUNCT_FEATURE");
  };
  const auto add_class_by = [&](CLI::App* cmd) {
    cmd->add_option("--class-by", cfg.class_by, "class label source")
        ->check(CLI::IsMember({"author", "genre"}))
        ->envname("PUNCT_CLASS_BY");
    cmd->add_option("--genre-list", cfg.genre_list_path,
                    "genre label list file (one label per line)")
        ->envname("PUNCT_GENRE_LIST");
    cmd->add_option("--min-docs", cfg.min_docs, "minimum documents per genre")
        ->envname("PUNCT_MIN_DOCS");
  };

  auto* ingest = app.add_subcommand("ingest", "clean a corpus into a manifest");
  add_corpus(ingest, true);
  ingest->add_option("--metadata", cfg.metadata_path, "document metadata CSV")
      ->required()
      ->envname("PUNCT_METADATA");
  add_out(ingest);
  ingest->add_option("--author-min-docs", cfg.author_min_docs,
                     "minimum surviving documents per author")
      ->envname("PUNCT_AUTHOR_MIN_DOCS");

  auto* features = app.add_subcommand("features", "extract features for retained documents");
  add_corpus(features, true);
  add_out(features);
  features->add_option("--gap-cap", cfg.features.gap_cap, "top bin of the word-gap histogram")
      ->envname("PUNCT_GAP_CAP");
  features
      ->add_option("--sentence-cap", cfg.features.sentence_cap,
                   "top bin of the sentence-length histogram")
      ->envname("PUNCT_SENTENCE_CAP");
  features->add_option("--tokens-out", cfg.tokens_out, "also write token records to this path")
      ->envname("PUNCT_TOKENS_OUT");
  features->add_flag("--binary-store", cfg.binary_store, "also write features.bin")
      ->envname("PUNCT_BINARY_STORE");

  auto* consistency = app.add_subcommand("consistency", "per-class KL self-consistency");
  add_out(consistency);
  add_seed(consistency);
  add_feature(consistency);
  add_class_by(consistency);

  auto* classify = app.add_subcommand("classify", "train and evaluate a classifier");
  add_out(classify);
  add_seed(classify);
  add_feature(classify);
  add_class_by(classify);
  classify->add_option("--mode", cfg.mode, "classifier kind")
      ->check(CLI::IsMember({"kl", "net"}))
      ->envname("PUNCT_MODE");
  classify->add_option("--train-ratio", cfg.split.train_ratio, "training fraction per class")
      ->envname("PUNCT_TRAIN_RATIO");
  classify->add_option("--hidden", cfg.net.hidden_units, "network hidden units")
      ->envname("PUNCT_HIDDEN");
  classify->add_option("--epochs", cfg.net.epochs, "network training epochs")
      ->envname("PUNCT_EPOCHS");
  classify->add_option("--lr", cfg.net.learning_rate, "network learning rate")
      ->envname("PUNCT_LR");
  classify->add_option("--batch", cfg.net.batch_size, "network minibatch size")
      ->envname("PUNCT_BATCH");
  classify->add_option("--activation", activation, "network hidden activation")
      ->check(CLI::IsMember({"relu", "tanh"}))
      ->envname("PUNCT_ACTIVATION");

  auto* temporal = app.add_subcommand("temporal", "year-binned feature aggregation");
  add_out(temporal);
  temporal->add_option("--bins-start", cfg.bins_start, "anchor year of the bin grid")
      ->envname("PUNCT_BINS_START");
  temporal->add_option("--bin-width", cfg.bin_width, "years per bin")->envname("PUNCT_BIN_WIDTH");
  temporal->add_option("--range-lo", cfg.range_lo, "lowest middle year kept")
      ->envname("PUNCT_RANGE_LO");
  temporal->add_option("--range-hi", cfg.range_hi, "highest middle year kept")
      ->envname("PUNCT_RANGE_HI");

  auto* render = app.add_subcommand("render", "SVG color strip of a document");
  add_corpus(render, true);
  add_out(render);
  render->add_option("--doc", cfg.doc_id, "document id to render")
      ->required()
      ->envname("PUNCT_DOC");
  render->add_option("--length", cfg.render_length, "marks to draw from the midpoint")
      ->envname("PUNCT_LENGTH");
  render->add_option("--palette", cfg.palette_path, "palette JSON file (10 colors)")
      ->envname("PUNCT_PALETTE");

  CLI11_PARSE(app, argc, argv);

  cfg.seed = seed;
  cfg.split.seed = seed;
  cfg.net.seed = seed;
  cfg.net.activation =
      activation == "tanh" ? punct::Activation::Tanh : punct::Activation::Relu;

  try {
    if (*ingest) return punct::cli::cmd_ingest(cfg);
    if (*features) return punct::cli::cmd_features(cfg);
    if (*consistency) return punct::cli::cmd_consistency(cfg);
    if (*classify) return punct::cli::cmd_classify(cfg);
    if (*temporal) return punct::cli::cmd_temporal(cfg);
    if (*render) return punct::cli::cmd_render(cfg);
  } catch (const std::exception& err) {
    std::cerr << "punctstyle: error: " << err.what() << "\n";
    return 1;
  }
  return 1;
}
