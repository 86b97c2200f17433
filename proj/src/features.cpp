#include "punct/features.hpp"

#include <algorithm>
#include <stdexcept>

namespace punct {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

std::array<double, 10> compute_f1(const MarkSequence& seq) {
  require(!seq.empty(), "compute_f1: empty document");
  std::array<double, 10> f1{};
  for (Mark m : seq) f1[mark_index(m)] += 1.0;
  for (double& v : f1) v /= static_cast<double>(seq.size());
  return f1;
}

TransitionMatrices compute_transitions(const MarkSequence& seq) {
  require(seq.size() >= 2, "compute_transitions: insufficient sequence");
  std::array<std::array<int, 10>, 10> pairs{};
  std::array<int, 10> out_count{};   // occurrences with a successor
  std::array<int, 10> total_count{};
  for (std::size_t l = 0; l + 1 < seq.size(); ++l) {
    const int a = mark_index(seq[l]);
    const int b = mark_index(seq[l + 1]);
    ++pairs[a][b];
    ++out_count[a];
  }
  for (Mark m : seq) ++total_count[mark_index(m)];

  TransitionMatrices t;
  const auto n_k = static_cast<double>(seq.size());
  for (int i = 0; i < kMarkCount; ++i) {
    t.row_defined[i] = out_count[i] > 0;
    if (!t.row_defined[i]) continue;
    const double f1_i = total_count[i] / n_k;
    for (int j = 0; j < kMarkCount; ++j) {
      t.P[i][j] = static_cast<double>(pairs[i][j]) / out_count[i];
      t.Pt[i][j] = t.P[i][j] * f1_i;
    }
  }
  return t;
}

SentenceHistogram compute_f4(const TokenizedDoc& doc, const FeatureConfig& cfg) {
  require(doc.seq.size() == doc.gaps.size(), "compute_f4: seq/gaps length mismatch");
  require(cfg.sentence_cap >= 1, "compute_f4: sentence_cap must be >= 1");
  require(!cfg.sentence_end.empty(), "compute_f4: empty sentence_end set");
  std::array<bool, 10> ends{};
  for (Mark m : cfg.sentence_end) ends[mark_index(m)] = true;

  SentenceHistogram hist;
  hist.f4.assign(static_cast<std::size_t>(cfg.sentence_cap) + 1, 0.0);
  long long length = 0;  // words accumulated since the previous sentence end
  for (std::size_t l = 0; l < doc.seq.size(); ++l) {
    length += doc.gaps[l];
    if (!ends[mark_index(doc.seq[l])]) continue;
    const auto bin = static_cast<std::size_t>(
        std::min<long long>(length, cfg.sentence_cap));
    hist.f4[bin] += 1.0;
    hist.sentence_count += 1;
    length = 0;
  }
  if (hist.sentence_count > 0) {
    for (double& v : hist.f4) v /= hist.sentence_count;
  }
  return hist;
}

std::vector<double> compute_f5(const GapSequence& gaps, const FeatureConfig& cfg) {
  require(!gaps.empty(), "compute_f5: empty document");
  require(cfg.gap_cap >= 1, "compute_f5: gap_cap must be >= 1");
  std::vector<double> f5(static_cast<std::size_t>(cfg.gap_cap) + 1, 0.0);
  for (int g : gaps) {
    f5[static_cast<std::size_t>(std::min(g, cfg.gap_cap))] += 1.0;
  }
  for (double& v : f5) v /= static_cast<double>(gaps.size());
  return f5;
}

double punctuation_rate(const GapSequence& gaps) {
  require(!gaps.empty(), "punctuation_rate: empty document");
  long long total = 0;
  for (int g : gaps) total += g;
  return static_cast<double>(total) / static_cast<double>(gaps.size());
}

Matrix10 compute_W(const TokenizedDoc& doc) {
  require(doc.seq.size() == doc.gaps.size(), "compute_W: seq/gaps length mismatch");
  require(doc.seq.size() >= 2, "compute_W: insufficient sequence");
  std::array<std::array<long long, 10>, 10> sums{};
  std::array<std::array<int, 10>, 10> counts{};
  for (std::size_t l = 0; l + 1 < doc.seq.size(); ++l) {
    const int a = mark_index(doc.seq[l]);
    const int b = mark_index(doc.seq[l + 1]);
    sums[a][b] += doc.gaps[l + 1];  // the gap inside the pair
    ++counts[a][b];
  }
  Matrix10 W{};
  for (int i = 0; i < kMarkCount; ++i) {
    for (int j = 0; j < kMarkCount; ++j) {
      if (counts[i][j] > 0) {
        W[i][j] = static_cast<double>(sums[i][j]) / counts[i][j];
      }
    }
  }
  return W;
}

std::vector<double> flatten(const Matrix10& m) {
  std::vector<double> v(100, 0.0);
  for (int j = 0; j < kMarkCount; ++j) {
    for (int i = 0; i < kMarkCount; ++i) {
      v[static_cast<std::size_t>(10 * j + i)] = m[i][j];
    }
  }
  return v;
}

Matrix10 unflatten(std::span<const double> v) {
  require(v.size() == 100, "unflatten: expected 100 entries");
  Matrix10 m{};
  for (int j = 0; j < kMarkCount; ++j) {
    for (int i = 0; i < kMarkCount; ++i) {
      m[i][j] = v[static_cast<std::size_t>(10 * j + i)];
    }
  }
  return m;
}

FeatureSet feature_set(const TokenizedDoc& doc, const FeatureConfig& cfg) {
  require(doc.seq.size() == doc.gaps.size(), "feature_set: seq/gaps length mismatch");
  require(doc.seq.size() >= 2, "feature_set: insufficient sequence");
  FeatureSet fs;
  fs.doc_id = doc.doc_id;
  fs.n_marks = static_cast<int>(doc.seq.size());
  fs.f1 = compute_f1(doc.seq);
  const TransitionMatrices t = compute_transitions(doc.seq);
  fs.P = t.P;
  fs.Pt = t.Pt;
  fs.row_defined = t.row_defined;
  fs.W = compute_W(doc);
  fs.f2 = flatten(fs.P);
  fs.f3 = flatten(fs.Pt);
  fs.f6 = flatten(fs.W);
  const SentenceHistogram hist = compute_f4(doc, cfg);
  fs.f4 = hist.f4;
  fs.sentence_count = hist.sentence_count;
  fs.f5 = compute_f5(doc.gaps, cfg);
  fs.rate = punctuation_rate(doc.gaps);
  return fs;
}

std::span<const double> feature_view(const FeatureSet& fs, FeatureIndex which) {
  switch (which) {
    case FeatureIndex::F1: return {fs.f1.data(), fs.f1.size()};
    case FeatureIndex::F3: return fs.f3;
    case FeatureIndex::F4: return fs.f4;
    case FeatureIndex::F5: return fs.f5;
  }
  throw std::invalid_argument("feature_view: invalid feature index");
}

const char* feature_name(FeatureIndex which) {
  switch (which) {
    case FeatureIndex::F1: return "f1";
    case FeatureIndex::F3: return "f3";
    case FeatureIndex::F4: return "f4";
    case FeatureIndex::F5: return "f5";
  }
  return "";
}

}  // namespace punct
