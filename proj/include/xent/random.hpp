// Copyright 2026 The xent Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace xent {

/// What a random stream is used for. Streams with different purposes never
/// share draws, so e.g. adding noise does not perturb the outcome stream.
enum class Purpose : std::uint64_t {
  Layout = 1,
  Gates = 2,
  Outcomes = 3,
  Noise = 4,
};

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline constexpr std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t value) noexcept {
  return splitmix64(seed ^ splitmix64(value + 0x632be59bd9b4e019ULL));
}

/// Key of the stream (master_seed, circuit_index, trajectory_index, purpose).
inline constexpr std::uint64_t stream_key(std::uint64_t master_seed, std::uint64_t circuit_index,
                                          std::uint64_t trajectory_index, Purpose purpose) noexcept {
  std::uint64_t k = hash_combine(master_seed, circuit_index);
  k = hash_combine(k, trajectory_index);
  return hash_combine(k, static_cast<std::uint64_t>(purpose));
}

/// Counter-based generator: draw i is a bijective mix of (key, i). Satisfies
/// UniformRandomBitGenerator; all derived draws below are bit-exact across
/// platforms (no libstdc++ distributions involved).
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t key) noexcept : key_(splitmix64(key)) {}
  Rng(std::uint64_t master_seed, std::uint64_t circuit_index, std::uint64_t trajectory_index,
      Purpose purpose) noexcept
      : Rng(stream_key(master_seed, circuit_index, trajectory_index, purpose)) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept { return splitmix64(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

  std::uint64_t counter() const noexcept { return counter_; }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n); n > 0. Rejection keeps it exactly uniform.
  std::uint64_t below(std::uint64_t n) noexcept {
    const std::uint64_t limit = max() - max() % n;
    std::uint64_t r;
    do {
      r = (*this)();
    } while (r >= limit);
    return r % n;
  }

  bool bernoulli(double p) noexcept { return uniform() < p; }

  bool coin() noexcept { return ((*this)() >> 63) != 0; }

  /// Standard normal by Box-Muller.
  double normal() noexcept {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
    has_spare_ = true;
    return r * std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Number of failures before the first success of a Bernoulli(p) sequence.
  /// Returns max() when p == 0.
  std::uint64_t geometric(double p) noexcept {
    if (p >= 1.0) return 0;
    if (p <= 0.0) return max();
    double u;
    do {
      u = uniform();
    } while (u <= 0.0);
    const double g = std::floor(std::log(u) / std::log1p(-p));
    return g >= 1.8e19 ? max() : static_cast<std::uint64_t>(g);
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace xent
