// Copyright 2026 the ecdispatch authors
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

namespace ecd {

/// splitmix64, Sebastiano Vigna's public-domain reference sequence.
///
/// Chosen as the scenario PRNG because it has exactly 64 bits of state,
/// a fixed published constant set, and therefore reproduces bit-identical
/// streams on every platform. Doubles are drawn from the top 53 bits so
/// uniform(low, high) = low + u * (high - low) with u in [0, 1).
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1).
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform double in [low, high).  Degenerate ranges return low.
  double uniform(double low, double high) {
    return low + uniform01() * (high - low);
  }

  /// Uniform integer in {low, ..., high} (both inclusive).
  int uniform_int(int low, int high) {
    const double span = static_cast<double>(high) - static_cast<double>(low) + 1.0;
    int v = low + static_cast<int>(uniform01() * span);
    return v > high ? high : v;
  }

 private:
  std::uint64_t state_;
};

}  // namespace ecd
