#pragma once

#include <filesystem>
#include <string_view>
#include <utility>
#include <vector>

#include "punct/classify.hpp"
#include "punct/corpus.hpp"
#include "punct/features.hpp"
#include "punct/marks.hpp"
#include "punct/net.hpp"

namespace punct::io {

/// Reads the external metadata table: CSV with header row
/// doc_id,title,author,language,birth_year,death_year,bookshelf,pub_date
/// where empty year/date cells mean absent. Throws std::runtime_error on
/// malformed rows, duplicate doc_ids, or birth_year > death_year.
std::vector<DocumentMeta> read_metadata(const std::filesystem::path& path);

/// Manifest file: versioned header line, a column-header row, then one
/// CSV record per document (doc_id, title, author, language, birth_year,
/// death_year, bookshelf, pub_date, retained, removal_rule) in input
/// order. On read the cleaning report is recomputed from the removal_rule
/// column; the sentinel-flag count lives only in the report file.
void write_manifest(const CorpusManifest& manifest, const std::filesystem::path& path);
CorpusManifest read_manifest(const std::filesystem::path& path);

/// Cleaning report: CSV rule,count rows in rule order plus an
/// informational no_header_sentinels row.
void write_cleaning_report(const CorpusManifest& manifest, const std::filesystem::path& path);

/// Feature stores. Both forms carry the same records: doc_id, f1 (10),
/// f3 (100), f4 (sentence_cap+1), f5 (gap_cap+1), f6 (100), rate. The
/// header records the caps. On read, P, Pt, f2, W and row_defined are
/// reconstructed from f3, f1 and f6; mark/sentence counts are not stored.
void write_features_csv(const std::vector<FeatureSet>& sets, const FeatureConfig& cfg,
                        const std::filesystem::path& path);
std::pair<std::vector<FeatureSet>, FeatureConfig> read_features_csv(
    const std::filesystem::path& path);

void write_features_binary(const std::vector<FeatureSet>& sets, const FeatureConfig& cfg,
                           const std::filesystem::path& path);
std::pair<std::vector<FeatureSet>, FeatureConfig> read_features_binary(
    const std::filesystem::path& path);

/// Token records: one line per document,
/// doc_id <TAB> mark codes as a digit string <TAB> comma-separated gaps.
void write_tokens(const std::vector<TokenizedDoc>& docs, const std::filesystem::path& path);
std::vector<TokenizedDoc> read_tokens(const std::filesystem::path& path);

/// Versioned line-based model files; numeric round-trip is exact.
void save_class_model(const ClassModel& model, const std::filesystem::path& path);
ClassModel load_class_model(const std::filesystem::path& path);
void save_net(const TrainedNet& net, const std::filesystem::path& path);
TrainedNet load_net(const std::filesystem::path& path);

/// Shortest decimal form that parses back to the identical double; the
/// single number format used by every file this library writes.
std::string format_double(double v);
double parse_double(std::string_view s);

/// Writes content to a sibling temp file and renames it over the target,
/// so readers never observe a partial file.
void atomic_write(const std::filesystem::path& path, std::string_view content);

/// Reads a whole file; throws std::runtime_error when unreadable.
std::string read_file(const std::filesystem::path& path);

}  // namespace punct::io
