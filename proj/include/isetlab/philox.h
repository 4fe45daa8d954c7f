// Copyright 2026 The iset-lab Authors
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

#ifndef ISETLAB_PHILOX_H_
#define ISETLAB_PHILOX_H_

#include <array>
#include <cstdint>

namespace isetlab {

// Philox4x64-10 counter-based generator (Salmon et al., SC'11). A pure
// function of (counter, key); no state is carried between calls.
class Philox4x64 {
 public:
  using Counter = std::array<std::uint64_t, 4>;
  using Key = std::array<std::uint64_t, 2>;

  static constexpr int kRounds = 10;

  static constexpr Counter apply(Counter ctr, Key key) {
    for (int round = 0; round < kRounds; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      ctr = single_round(ctr, key);
    }
    return ctr;
  }

 private:
  static constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
  static constexpr std::uint64_t kMul1 = 0xCA5A826395121157ULL;
  static constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
  static constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

  __extension__ using U128 = unsigned __int128;

  static constexpr Counter single_round(const Counter& x, const Key& key) {
    const U128 p0 = static_cast<U128>(kMul0) * x[0];
    const U128 p1 = static_cast<U128>(kMul1) * x[2];
    const auto hi0 = static_cast<std::uint64_t>(p0 >> 64);
    const auto lo0 = static_cast<std::uint64_t>(p0);
    const auto hi1 = static_cast<std::uint64_t>(p1 >> 64);
    const auto lo1 = static_cast<std::uint64_t>(p1);
    return {hi1 ^ x[1] ^ key[0], lo1, hi0 ^ x[3] ^ key[1], lo0};
  }
};

// Domain tags placed in counter word 1 so that different consumers of the
// same seed never share a counter.
enum class PrfDomain : std::uint64_t {
  kEdge = 0x65646765ULL,        // "edge"
  kTrialSeed = 0x7472696cULL,   // "tril"
  kAlgorithm = 0x616c676fULL,   // "algo"
};

// First output word of Philox4x64-10 at counter {a, domain, b, 0} under
// key {seed, stream}.
constexpr std::uint64_t prf64(std::uint64_t seed, std::uint64_t stream,
                              PrfDomain domain, std::uint64_t a,
                              std::uint64_t b = 0) {
  return Philox4x64::apply({a, static_cast<std::uint64_t>(domain), b, 0},
                           {seed, stream})[0];
}

// Seed of trial `index` in a battery with base seed `base_seed`.
constexpr std::uint64_t trial_seed(std::uint64_t base_seed,
                                   std::uint64_t index) {
  return prf64(base_seed, 0, PrfDomain::kTrialSeed, index);
}

// Uniform double in [0, 1) built from the top 53 bits.
constexpr double to_unit_double(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace isetlab

#endif  // ISETLAB_PHILOX_H_
