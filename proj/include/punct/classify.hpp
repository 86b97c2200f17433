#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "punct/features.hpp"

namespace punct {

struct SplitSpec {
  double train_ratio = 0.8;  // must satisfy 0 < train_ratio < 1
  std::uint64_t seed = 0;
};

struct Split {
  std::vector<std::size_t> train;  // indices into the label list
  std::vector<std::size_t> test;
};

/// Per class, ceil(train_ratio * m) documents go to train (clamped to
/// [1, m-1] so both sets stay non-empty), the rest to test. Classes are
/// processed in sorted order and shuffled deterministically by seed.
/// Throws std::invalid_argument naming the class when one has < 2 docs.
Split stratified_split(const std::vector<std::string>& labels, const SplitSpec& spec);

/// Class-mean feature profiles over a training set.
struct ClassModel {
  struct Profile {
    std::array<double, 10> f1{};
    std::vector<double> f3;
    std::vector<double> f4;
    std::vector<double> f5;
  };
  std::vector<std::string> class_ids;  // sorted; position = class index
  std::vector<Profile> profiles;       // parallel to class_ids
};

/// View of the selected profile vector.
std::span<const double> profile_view(const ClassModel::Profile& p, FeatureIndex which);

/// Entrywise mean of each probability-inducing feature per class.
/// Throws std::invalid_argument on an empty training set.
ClassModel build_profiles(
    const std::vector<std::pair<std::string, const FeatureSet*>>& train);

/// argmin over classes of kl(profile, document feature); ties resolve to
/// the lowest class index.
std::string kl_classify(const FeatureSet& doc, const ClassModel& model,
                        FeatureIndex which);

/// Fraction of positions where predictions[i] == truth[i]. Throws on a
/// length mismatch or empty input.
double evaluate(const std::vector<std::string>& predictions,
                const std::vector<std::string>& truth);

/// Expected accuracy of assigning classes at random with probability
/// proportional to training-class size: Sum_j (test_j/T) * (train_j/R).
/// Throws std::invalid_argument on empty input or mismatched class sets.
double baseline_accuracy(const std::map<std::string, int>& train_counts,
                         const std::map<std::string, int>& test_counts);

}  // namespace punct
