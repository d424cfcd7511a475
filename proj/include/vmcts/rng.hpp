#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

namespace vmcts {

/// All search randomness flows through one engine type so that runs are
/// reproducible from a single 64-bit seed.
using Rng = std::mt19937_64;

/// One SplitMix64 scrambling step.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Derives the seed for an independent stream (game index, trial index,
/// per-move search, ...) from a base seed. Documented so result shards can
/// be reproduced in isolation: stream i maps to
/// splitmix64(base ^ splitmix64(i + 1)).
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  return splitmix64(base ^ splitmix64(stream + 1));
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, n). Fixed-point multiply keeps the draw
/// reproducible across standard libraries.
inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  if (n == 0) throw std::invalid_argument("uniform_index: empty range");
  using u128 = unsigned __int128;
  return static_cast<std::size_t>((u128(rng()) * u128(n)) >> 64);
}

/// Samples an index proportionally to the given nonnegative weights.
inline std::size_t categorical(Rng& rng, std::span<const double> weights) {
  if (weights.empty()) throw std::invalid_argument("categorical: empty weights");
  double total = 0.0;
  for (double w : weights) total += w;
  if (total <= 0.0) return uniform_index(rng, weights.size());
  double u = uniform_unit(rng) * total;
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
    acc += weights[i];
    if (u < acc) return i;
  }
  return weights.size() - 1;
}

/// Draws from a symmetric Dirichlet(alpha) over `count` categories.
inline std::vector<double> dirichlet(Rng& rng, double alpha, std::size_t count) {
  std::gamma_distribution<double> gamma(alpha, 1.0);
  std::vector<double> draw(count);
  double total = 0.0;
  for (auto& value : draw) {
    value = gamma(rng);
    total += value;
  }
  if (total <= 0.0) {
    // All gamma draws underflowed (tiny alpha); fall back to a one-hot draw.
    std::vector<double> onehot(count, 0.0);
    onehot[uniform_index(rng, count)] = 1.0;
    return onehot;
  }
  for (auto& value : draw) value /= total;
  return draw;
}

}  // namespace vmcts
