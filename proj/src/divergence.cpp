#include "punct/divergence.hpp"

#include <cmath>
#include <stdexcept>

#include "punct/rng.hpp"

namespace punct {

double entropy(std::span<const double> p) {
  double h = 0.0;
  for (double v : p) {
    if (v > 0.0) h -= v * std::log(v);
  }
  return h;
}

double kl(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw std::invalid_argument("kl: length mismatch");
  // Support adjustment: indices where exactly one side is zero are removed
  // from both vectors, then both are renormalized proportionally.
  double sp = 0.0;
  double sq = 0.0;
  std::size_t common = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const bool pz = p[i] == 0.0;
    const bool qz = q[i] == 0.0;
    if (pz != qz) continue;
    if (!pz) {
      sp += p[i];
      sq += q[i];
      ++common;
    }
  }
  if (common <= 1 || sp <= 0.0 || sq <= 0.0) return 0.0;
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0 || q[i] == 0.0) continue;
    const double pt = p[i] / sp;
    const double qt = q[i] / sq;
    d += pt * std::log(pt / qt);
  }
  return d;
}

ConsistencyResult consistency(const std::vector<const FeatureSet*>& docs,
                              FeatureIndex which) {
  if (docs.size() < 2) throw std::invalid_argument("consistency: need >= 2 documents");
  const auto m = docs.size();
  double sum = 0.0;
  double sumsq = 0.0;
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      if (a == b) continue;
      const double d = kl(feature_view(*docs[a], which), feature_view(*docs[b], which));
      sum += d;
      sumsq += d * d;
    }
  }
  ConsistencyResult r;
  r.n_pairs = static_cast<int>(m * (m - 1));
  r.mean_kl = sum / r.n_pairs;
  const double var = sumsq / r.n_pairs - r.mean_kl * r.mean_kl;
  r.std_kl = var > 0.0 ? std::sqrt(var) : 0.0;
  return r;
}

double baseline(const std::vector<std::pair<std::string, const FeatureSet*>>& corpus,
                FeatureIndex which, int n_pairs, std::uint64_t seed) {
  if (n_pairs <= 0) throw std::invalid_argument("baseline: n_pairs must be positive");
  bool two_classes = false;
  for (std::size_t i = 1; i < corpus.size(); ++i) {
    if (corpus[i].first != corpus[0].first) {
      two_classes = true;
      break;
    }
  }
  if (!two_classes) throw std::invalid_argument("baseline: need >= 2 classes");

  rng::Engine eng(seed);
  const auto n = static_cast<std::uint64_t>(corpus.size());
  double sum = 0.0;
  for (int k = 0; k < n_pairs; ++k) {
    std::size_t a;
    std::size_t b;
    do {
      a = static_cast<std::size_t>(rng::bounded(eng, n));
      b = static_cast<std::size_t>(rng::bounded(eng, n));
    } while (corpus[a].first == corpus[b].first);
    sum += kl(feature_view(*corpus[a].second, which),
              feature_view(*corpus[b].second, which));
  }
  return sum / n_pairs;
}

}  // namespace punct
