// Copyright 2026 The idldp Authors
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

#ifndef IDLDP_RANDOM_H_
#define IDLDP_RANDOM_H_

#include <array>
#include <cstdint>
#include <limits>

namespace idldp {

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

// Seed of substream `stream` under a global seed. Used for per-user and
// per-run streams so results do not depend on scheduling.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

// xoshiro256++ seeded through SplitMix64. Satisfies
// UniformRandomBitGenerator so it can drive <random> distributions.
class RandomSource {
 public:
  using result_type = std::uint64_t;

  explicit RandomSource(std::uint64_t seed, std::uint64_t stream = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  // Uniform in [0, 1) with 53 bits of precision.
  double uniform01();
  bool bernoulli(double p);
  // Uniform in [0, bound); bound > 0.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::array<std::uint64_t, 4> state_;
};

}  // namespace idldp

#endif  // IDLDP_RANDOM_H_
