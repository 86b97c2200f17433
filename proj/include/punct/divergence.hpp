#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "punct/features.hpp"

namespace punct {

/// Shannon entropy with natural log; 0 * ln 0 = 0.
double entropy(std::span<const double> p);

/// KL divergence with support adjustment: every index where exactly one
/// of p[i], q[i] is zero is removed from both vectors, the survivors are
/// renormalized proportionally to sum 1, and Sum p~ ln(p~/q~) is returned
/// (natural log). Returns 0 when the common support is empty or a single
/// index. Total on any pair of equal-length nonnegative vectors; throws
/// std::invalid_argument on a length mismatch.
double kl(std::span<const double> p, std::span<const double> q);

struct ConsistencyResult {
  std::string class_id;
  double mean_kl = 0.0;
  double std_kl = 0.0;  // population standard deviation
  int n_pairs = 0;      // m(m-1) ordered pairs
};

/// Mean and standard deviation of kl over all ordered pairs of distinct
/// documents on the selected feature, accumulated in fixed index order.
/// Throws std::invalid_argument on fewer than 2 documents.
ConsistencyResult consistency(const std::vector<const FeatureSet*>& docs,
                              FeatureIndex which);

/// Mean kl over n_pairs ordered pairs sampled uniformly (with rejection)
/// among pairs of documents with different class ids; deterministic per
/// seed. Throws std::invalid_argument when fewer than two distinct class
/// ids are present.
double baseline(const std::vector<std::pair<std::string, const FeatureSet*>>& corpus,
                FeatureIndex which, int n_pairs = 1000, std::uint64_t seed = 0);

}  // namespace punct
