#include "punct/classify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "punct/divergence.hpp"
#include "punct/rng.hpp"

namespace punct {

Split stratified_split(const std::vector<std::string>& labels, const SplitSpec& spec) {
  if (!(spec.train_ratio > 0.0 && spec.train_ratio < 1.0)) {
    throw std::invalid_argument("stratified_split: train_ratio must be in (0, 1)");
  }
  if (labels.empty()) {
    throw std::invalid_argument("stratified_split: empty label list");
  }
  // Group indices per class, classes visited in sorted order so the
  // result depends only on (labels, seed).
  std::map<std::string, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);

  Split split;
  rng::Engine eng(spec.seed);
  for (auto& [class_id, members] : by_class) {
    const std::size_t m = members.size();
    if (m < 2) {
      throw std::invalid_argument("stratified_split: class '" + class_id +
                                  "' has fewer than 2 documents");
    }
    rng::shuffle(members, eng);
    auto n_train = static_cast<std::size_t>(
        std::ceil(spec.train_ratio * static_cast<double>(m)));
    n_train = std::clamp<std::size_t>(n_train, 1, m - 1);
    for (std::size_t k = 0; k < m; ++k) {
      (k < n_train ? split.train : split.test).push_back(members[k]);
    }
  }
  return split;
}

std::span<const double> profile_view(const ClassModel::Profile& p, FeatureIndex which) {
  switch (which) {
    case FeatureIndex::F1: return {p.f1.data(), p.f1.size()};
    case FeatureIndex::F3: return p.f3;
    case FeatureIndex::F4: return p.f4;
    case FeatureIndex::F5: return p.f5;
  }
  throw std::invalid_argument("profile_view: invalid feature index");
}

ClassModel build_profiles(
    const std::vector<std::pair<std::string, const FeatureSet*>>& train) {
  if (train.empty()) throw std::invalid_argument("build_profiles: empty training set");

  std::map<std::string, std::vector<const FeatureSet*>> by_class;
  for (const auto& [class_id, fs] : train) by_class[class_id].push_back(fs);

  ClassModel model;
  for (auto& [class_id, members] : by_class) {
    ClassModel::Profile p;
    p.f3.assign(members.front()->f3.size(), 0.0);
    p.f4.assign(members.front()->f4.size(), 0.0);
    p.f5.assign(members.front()->f5.size(), 0.0);
    for (const FeatureSet* fs : members) {
      if (fs->f3.size() != p.f3.size() || fs->f4.size() != p.f4.size() ||
          fs->f5.size() != p.f5.size()) {
        throw std::invalid_argument("build_profiles: inconsistent feature lengths");
      }
      for (std::size_t i = 0; i < 10; ++i) p.f1[i] += fs->f1[i];
      for (std::size_t i = 0; i < p.f3.size(); ++i) p.f3[i] += fs->f3[i];
      for (std::size_t i = 0; i < p.f4.size(); ++i) p.f4[i] += fs->f4[i];
      for (std::size_t i = 0; i < p.f5.size(); ++i) p.f5[i] += fs->f5[i];
    }
    const auto m = static_cast<double>(members.size());
    for (double& v : p.f1) v /= m;
    for (double& v : p.f3) v /= m;
    for (double& v : p.f4) v /= m;
    for (double& v : p.f5) v /= m;
    model.class_ids.push_back(class_id);
    model.profiles.push_back(std::move(p));
  }
  return model;
}

std::string kl_classify(const FeatureSet& doc, const ClassModel& model,
                        FeatureIndex which) {
  if (model.class_ids.empty()) throw std::invalid_argument("kl_classify: empty model");
  std::size_t best = 0;
  double best_d = 0.0;
  for (std::size_t j = 0; j < model.profiles.size(); ++j) {
    // Profile first: divergence from the class profile to the document.
    const double d = kl(profile_view(model.profiles[j], which),
                        feature_view(doc, which));
    if (j == 0 || d < best_d) {
      best = j;
      best_d = d;
    }
  }
  return model.class_ids[best];
}

double evaluate(const std::vector<std::string>& predictions,
                const std::vector<std::string>& truth) {
  if (predictions.size() != truth.size()) {
    throw std::invalid_argument("evaluate: length mismatch");
  }
  if (predictions.empty()) throw std::invalid_argument("evaluate: empty input");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    if (predictions[i] == truth[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(predictions.size());
}

double baseline_accuracy(const std::map<std::string, int>& train_counts,
                         const std::map<std::string, int>& test_counts) {
  if (train_counts.empty() || test_counts.empty()) {
    throw std::invalid_argument("baseline_accuracy: empty class counts");
  }
  long long train_total = 0;
  long long test_total = 0;
  for (const auto& [c, n] : train_counts) train_total += n;
  for (const auto& [c, n] : test_counts) test_total += n;
  if (train_total <= 0 || test_total <= 0) {
    throw std::invalid_argument("baseline_accuracy: non-positive totals");
  }
  double acc = 0.0;
  for (const auto& [c, test_n] : test_counts) {
    auto it = train_counts.find(c);
    if (it == train_counts.end()) {
      throw std::invalid_argument("baseline_accuracy: class sets differ");
    }
    acc += (static_cast<double>(test_n) / test_total) *
           (static_cast<double>(it->second) / train_total);
  }
  if (test_counts.size() != train_counts.size()) {
    throw std::invalid_argument("baseline_accuracy: class sets differ");
  }
  return acc;
}

}  // namespace punct
