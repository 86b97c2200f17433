#include "punct/rng.hpp"

#include <stdexcept>

namespace punct::rng {

std::uint64_t bounded(Engine& eng, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("bounded: n must be >= 1");
  if (n == 1) return 0;
  // Reject draws above the largest multiple of n so every residue is
  // equally likely.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = eng();
  } while (x >= limit);
  return x % n;
}

double unit(Engine& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

int categorical(std::span<const double> weights, Engine& eng) {
  double total = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw std::invalid_argument("categorical: negative weight");
    total += w;
  }
  if (total <= 0.0) throw std::invalid_argument("categorical: all weights zero");
  const double target = unit(eng) * total;
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    if (target < acc) return static_cast<int>(i);
  }
  // target == total can only happen through rounding; last positive bin.
  for (std::size_t i = weights.size(); i > 0; --i) {
    if (weights[i - 1] > 0.0) return static_cast<int>(i - 1);
  }
  return 0;
}

}  // namespace punct::rng
