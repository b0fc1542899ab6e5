// Copyright 2026 The pce Authors
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

namespace pce {

/// SplitMix64 finalizer.
constexpr uint64_t mix64(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Small counter-style generator (SplitMix64). Satisfies
/// UniformRandomBitGenerator, so it can drive <random> distributions.
///
/// Streams are addressed by (master seed, stream id, index): every shot or
/// trial gets its own generator, so results do not depend on how work is
/// split across threads.
class Rng {
 public:
  using result_type = uint64_t;

  explicit constexpr Rng(uint64_t seed) : state_(seed) {}

  static constexpr Rng for_stream(uint64_t seed, uint64_t stream, uint64_t index) {
    uint64_t h = mix64(seed + 0x9E3779B97F4A7C15ULL);
    h = mix64(h ^ (stream * 0xD6E8FEB86659FD93ULL + 0x632BE59BD9B4E019ULL));
    h = mix64(h ^ (index * 0xA0761D6478BD642FULL + 0xE7037ED1A0B428DBULL));
    return Rng(h);
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix64(state_);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// `count` uniformly random low bits, count in [0, 64].
  uint64_t bits(int count) {
    if (count <= 0) {
      return 0;
    }
    uint64_t r = (*this)();
    return count >= 64 ? r : r >> (64 - count);
  }

  /// Exponential(1) variate; Gamma(1) for Dirichlet sampling.
  double exponential() { return -std::log1p(-uniform()); }

 private:
  uint64_t state_;
};

}  // namespace pce
