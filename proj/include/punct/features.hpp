#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "punct/marks.hpp"

namespace punct {

using Matrix10 = std::array<std::array<double, 10>, 10>;

/// Histogram caps and the sentence-end mark set.
struct FeatureConfig {
  int gap_cap = 40;        // top bin of the word-gap histogram (f5)
  int sentence_cap = 200;  // top bin of the sentence-length histogram (f4)
  std::vector<Mark> sentence_end = {Mark::Period, Mark::Ellipsis,
                                    Mark::Exclam, Mark::Question};
};

/// All per-document features.
///
/// f1    mark frequencies (length 10)
/// P     conditional transition matrix: P[i][j] = pairs(i->j) divided by
///       the occurrences of mark i that have a successor; rows for marks
///       with no such occurrence are all zero and flagged undefined
/// Pt    joint transition matrix, Pt[i][j] = P[i][j] * f1[i]
/// W     mean word gap inside each successive pair i->j (0 if unobserved)
/// f2/f3/f6  column-major flattenings of P/Pt/W (length 100)
/// f4    sentence-length distribution (length sentence_cap+1); the zero
///       vector when the document has no sentence-end mark
/// f5    word-gap distribution (length gap_cap+1)
/// rate  mean words per punctuation mark, on unclamped gaps
///
/// Sum(Pt) = 1 exactly when every mark type that occurs also occurs with
/// a successor; a type appearing only at the final position leaves its
/// row undefined and Sum(Pt) = 1 - f1[type].
struct FeatureSet {
  std::string doc_id;
  int n_marks = 0;
  int sentence_count = 0;
  std::array<double, 10> f1{};
  Matrix10 P{};
  Matrix10 Pt{};
  Matrix10 W{};
  std::array<bool, 10> row_defined{};
  std::vector<double> f2;
  std::vector<double> f3;
  std::vector<double> f4;
  std::vector<double> f5;
  std::vector<double> f6;
  double rate = 0.0;
};

/// Mark frequencies; throws std::invalid_argument on an empty sequence.
std::array<double, 10> compute_f1(const MarkSequence& seq);

struct TransitionMatrices {
  Matrix10 P{};
  Matrix10 Pt{};
  std::array<bool, 10> row_defined{};
};

/// Conditional and joint transition matrices as defined on FeatureSet.
/// Throws std::invalid_argument when the sequence has fewer than 2 marks.
TransitionMatrices compute_transitions(const MarkSequence& seq);

struct SentenceHistogram {
  std::vector<double> f4;  // length cfg.sentence_cap + 1
  int sentence_count = 0;  // 0 means f4 is the zero vector
};

/// Sentence-length distribution. A sentence ends at each sentence_end
/// mark; its length is the sum of word gaps since the previous sentence
/// end (or the document start), clamped to cfg.sentence_cap. Normalized
/// by the number of sentences.
SentenceHistogram compute_f4(const TokenizedDoc& doc, const FeatureConfig& cfg);

/// Word-gap distribution over 0..cfg.gap_cap; larger gaps accumulate in
/// the top bin. Throws std::invalid_argument on empty gaps.
std::vector<double> compute_f5(const GapSequence& gaps, const FeatureConfig& cfg);

/// Mean words per mark on unclamped gaps. Throws on empty gaps.
double punctuation_rate(const GapSequence& gaps);

/// Mean word gap per successive mark pair; unobserved pairs hold 0.
/// Throws std::invalid_argument when the document has fewer than 2 marks.
Matrix10 compute_W(const TokenizedDoc& doc);

/// Column-major flattening: result[10*j + i] = m[i][j].
std::vector<double> flatten(const Matrix10& m);

/// Inverse of flatten; throws unless v.size() == 100.
Matrix10 unflatten(std::span<const double> v);

/// Assembles every feature for one document; requires n_k >= 2.
FeatureSet feature_set(const TokenizedDoc& doc, const FeatureConfig& cfg);

/// The probability-inducing feature families selectable for KL analyses.
enum class FeatureIndex { F1 = 1, F3 = 3, F4 = 4, F5 = 5 };

constexpr std::array<FeatureIndex, 4> kKlFeatures = {
    FeatureIndex::F1, FeatureIndex::F3, FeatureIndex::F4, FeatureIndex::F5};

/// View of the selected feature vector inside a FeatureSet.
std::span<const double> feature_view(const FeatureSet& fs, FeatureIndex which);

/// "f1", "f3", "f4" or "f5".
const char* feature_name(FeatureIndex which);

}  // namespace punct
