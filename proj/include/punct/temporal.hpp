#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "punct/corpus.hpp"
#include "punct/features.hpp"

namespace punct {

/// Author-activity proxy year: mean of birth and death (rounded half
/// down), else birth + 30, else death - 30, else nullopt.
std::optional<int> middle_year(const DocumentMeta& meta);

struct YearBinning {
  int start_year = 1700;  // anchor of the bin grid
  int width = 10;         // years per bin, half-open [start, start+width)
};

struct TemporalDoc {
  int year = 0;
  const FeatureSet* features = nullptr;
};

/// Keeps documents with lo <= year <= hi (inclusive bounds).
std::vector<TemporalDoc> filter_range(const std::vector<TemporalDoc>& docs,
                                      int lo = 1500, int hi = 2012);

struct BinRow {
  int bin_start = 0;
  int count = 0;
  std::array<double, 10> mean_f1{};  // meaningful only when count > 0
  double mean_rate = 0.0;            // meaningful only when count > 0
};

/// Unweighted per-bin means of f1 and rate. Emits a contiguous run of
/// bins aligned to the binning grid and covering every document; empty
/// bins appear with count 0. Every document lands in exactly one bin.
/// Throws std::invalid_argument on empty input.
std::vector<BinRow> aggregate(const std::vector<TemporalDoc>& docs,
                              const YearBinning& bins);

struct SeriesPoint {
  int year = 0;
  std::string doc_id;
  std::array<double, 10> f1{};
  double rate = 0.0;
};

/// One point per document that has a pub_date, sorted by (year, doc_id).
/// Throws std::invalid_argument when no document has a pub_date.
std::vector<SeriesPoint> author_series(
    const std::vector<std::pair<DocumentMeta, const FeatureSet*>>& docs);

}  // namespace punct
