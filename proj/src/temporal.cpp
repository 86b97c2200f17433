#include "punct/temporal.hpp"

#include <algorithm>
#include <stdexcept>

namespace punct {

namespace {

// Floor division, exact for negative years too.
int floor_div(int a, int b) {
  int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

std::optional<int> middle_year(const DocumentMeta& meta) {
  if (meta.birth_year && meta.death_year) {
    return floor_div(*meta.birth_year + *meta.death_year, 2);
  }
  if (meta.birth_year) return *meta.birth_year + 30;
  if (meta.death_year) return *meta.death_year - 30;
  return std::nullopt;
}

std::vector<TemporalDoc> filter_range(const std::vector<TemporalDoc>& docs,
                                      int lo, int hi) {
  std::vector<TemporalDoc> kept;
  kept.reserve(docs.size());
  for (const TemporalDoc& d : docs) {
    if (d.year >= lo && d.year <= hi) kept.push_back(d);
  }
  return kept;
}

std::vector<BinRow> aggregate(const std::vector<TemporalDoc>& docs,
                              const YearBinning& bins) {
  if (docs.empty()) throw std::invalid_argument("aggregate: empty document list");
  if (bins.width < 1) throw std::invalid_argument("aggregate: bin width must be >= 1");

  int lo_bin = 0;
  int hi_bin = 0;
  bool first = true;
  for (const TemporalDoc& d : docs) {
    const int b = floor_div(d.year - bins.start_year, bins.width);
    lo_bin = first ? b : std::min(lo_bin, b);
    hi_bin = first ? b : std::max(hi_bin, b);
    first = false;
  }

  std::vector<BinRow> rows(static_cast<std::size_t>(hi_bin - lo_bin + 1));
  for (std::size_t k = 0; k < rows.size(); ++k) {
    rows[k].bin_start = bins.start_year + (lo_bin + static_cast<int>(k)) * bins.width;
  }
  for (const TemporalDoc& d : docs) {
    const auto k = static_cast<std::size_t>(
        floor_div(d.year - bins.start_year, bins.width) - lo_bin);
    BinRow& row = rows[k];
    row.count += 1;
    for (std::size_t i = 0; i < 10; ++i) row.mean_f1[i] += d.features->f1[i];
    row.mean_rate += d.features->rate;
  }
  for (BinRow& row : rows) {
    if (row.count == 0) continue;
    for (double& v : row.mean_f1) v /= row.count;
    row.mean_rate /= row.count;
  }
  return rows;
}

std::vector<SeriesPoint> author_series(
    const std::vector<std::pair<DocumentMeta, const FeatureSet*>>& docs) {
  std::vector<SeriesPoint> series;
  for (const auto& [meta, fs] : docs) {
    if (!meta.pub_date) continue;
    SeriesPoint p;
    p.year = *meta.pub_date;
    p.doc_id = meta.doc_id;
    p.f1 = fs->f1;
    p.rate = fs->rate;
    series.push_back(std::move(p));
  }
  if (series.empty()) {
    throw std::invalid_argument("author_series: no document has a pub_date");
  }
  std::sort(series.begin(), series.end(), [](const SeriesPoint& a, const SeriesPoint& b) {
    if (a.year != b.year) return a.year < b.year;
    return a.doc_id < b.doc_id;
  });
  return series;
}

}  // namespace punct
