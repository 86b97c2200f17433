#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace punct::rng {

/// All randomized behavior draws from this engine through the helpers
/// below. std::uniform_int_distribution, std::normal_distribution and
/// std::shuffle are avoided on purpose: their outputs are
/// implementation-defined, and seeded runs must reproduce bit-identically
/// across standard libraries.
using Engine = std::mt19937_64;

/// Unbiased draw from {0, ..., n-1} by rejection sampling; n >= 1.
std::uint64_t bounded(Engine& eng, std::uint64_t n);

/// Uniform double in [0, 1) built from 53 random bits.
double unit(Engine& eng);

/// Fisher-Yates shuffle driven by bounded().
template <typename T>
void shuffle(std::vector<T>& v, Engine& eng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    auto j = static_cast<std::size_t>(bounded(eng, i));
    std::swap(v[i - 1], v[j]);
  }
}

/// Index draw proportional to a nonnegative weight vector (need not sum
/// to 1; at least one weight must be positive).
int categorical(std::span<const double> weights, Engine& eng);

}  // namespace punct::rng
