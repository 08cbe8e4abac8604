// Copyright 2026 The stochsense Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

namespace stochsense {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed of the child stream `index` of a stream seeded with `parent`.
inline constexpr std::uint64_t derive_seed(std::uint64_t parent,
                                           std::uint64_t index) {
  return splitmix64(parent ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

/// A seeded random stream that can be split into independent children.
///
/// Children are derived from the seed alone, never from the engine state, so
/// `child(i)` is the same no matter how many draws the parent has made. Work
/// items that each use `child(item_index)` are therefore reproducible
/// regardless of how they are scheduled over threads.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit RandomStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  RandomStream child(std::uint64_t index) const {
    return RandomStream(derive_seed(seed_, index));
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() { return normal_(engine_); }

  std::int64_t binomial(std::int64_t n, double p) {
    if (n <= 0 || p <= 0.0) return 0;
    if (p >= 1.0) return n;
    std::binomial_distribution<std::int64_t> dist(n, p);
    return dist(engine_);
  }

  /// Index drawn with probability proportional to `weights`.
  std::size_t categorical(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    double r = uniform() * total;
    for (std::size_t k = 0; k + 1 < weights.size(); ++k) {
      r -= weights[k];
      if (r < 0.0) return k;
    }
    return weights.size() - 1;
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

/// Multinomial counts of `n` draws over `probs` by sequential binomials.
inline std::vector<std::int64_t> multinomial(std::span<const double> probs,
                                             std::int64_t n,
                                             RandomStream& rng) {
  if (n < 0) throw std::invalid_argument("multinomial: negative draw count");
  std::vector<std::int64_t> counts(probs.size(), 0);
  double remaining_mass = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0)) throw std::invalid_argument("multinomial: bad probability");
    remaining_mass += p;
  }
  std::int64_t remaining = n;
  for (std::size_t k = 0; k < probs.size() && remaining > 0; ++k) {
    if (k + 1 == probs.size()) {
      counts[k] = remaining;
      break;
    }
    double q = remaining_mass > 0.0 ? probs[k] / remaining_mass : 0.0;
    counts[k] = rng.binomial(remaining, q < 1.0 ? q : 1.0);
    remaining -= counts[k];
    remaining_mass -= probs[k];
  }
  return counts;
}

}  // namespace stochsense
