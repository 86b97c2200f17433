#pragma once

#include <cstdint>
#include <string>

#include "punct/classify.hpp"
#include "punct/features.hpp"
#include "punct/net.hpp"

namespace punct::cli {

/// Resolved settings for one command run. Every command persists the
/// config it actually used (seeds included) as run_<command>.json in the
/// output directory; to_json/from_json round-trip losslessly.
struct RunConfig {
  std::string corpus_dir;
  std::string metadata_path;
  std::string out_dir = ".";
  std::string genre_list_path;
  std::string palette_path;

  FeatureConfig features;
  SplitSpec split;
  NetConfig net;
  std::uint64_t seed = 0;  // baseline pair sampling

  int min_docs = 10;         // genre_subset threshold
  int author_min_docs = 10;  // cleaning rule 6 threshold

  int bins_start = 1700;
  int bin_width = 10;
  int range_lo = 1500;
  int range_hi = 2012;

  std::string class_by = "author";  // author | genre
  std::string mode = "kl";          // kl | net
  std::string feature_arg = "all";  // 1|3|4|5|all or a comma list

  std::string doc_id;       // render target
  int render_length = 3000;

  std::string tokens_out;     // when set, cmd_features also emits tokens
  bool binary_store = false;  // when set, cmd_features also emits .bin
};

std::string to_json(const RunConfig& cfg);
RunConfig from_json(const std::string& text);

/// Commands return a process exit code; 0 means success. Data goes to
/// files under cfg.out_dir; diagnostics go to stderr.
int cmd_ingest(const RunConfig& cfg);       // manifest.csv, cleaning_report.csv
int cmd_features(const RunConfig& cfg);     // features.csv, skips.csv
int cmd_consistency(const RunConfig& cfg);  // consistency_<by>_<feature>.csv
int cmd_classify(const RunConfig& cfg);     // classify_<mode>_<by>.csv, model files
int cmd_temporal(const RunConfig& cfg);     // temporal_bins.csv, author_series.csv
int cmd_render(const RunConfig& cfg);       // strip_<doc_id>.svg

}  // namespace punct::cli
