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

#ifndef ISETLAB_INSTABILITY_H_
#define ISETLAB_INSTABILITY_H_

#include <cstdint>
#include <string>

#include "isetlab/graph.h"

namespace isetlab {

// Stream label of the independent redraw of the pair {0, 1}.
inline constexpr std::uint64_t kInstabilityStream = 0x1A57AB1E;

// G_2: the base graph with the pair {0, 1} redrawn from its own stream.
// Every other pair reads the base.
class ResampledPair final : public EdgeOracle {
 public:
  ResampledPair(GnpSource base, PairKey pair);

  Vertex n() const override { return base_.n(); }
  EdgeStatus status(PairKey pair) const override;
  PairKey pair() const { return pair_; }

 private:
  GnpSource base_;
  GnpSource redraw_;
  PairKey pair_;
};

// Vertices are 0-based here: "vertex 1" and "vertex 2" of the usual
// statement are 0 and 1. Vertex 0 always joins greedy's set.
struct InstabilityRecord {
  std::uint64_t seed = 0;
  bool edge_g1 = false;  // {0,1} present in G_1
  bool edge_g2 = false;
  bool in_i1 = false;    // 1 in I_1
  bool in_i2 = false;
  std::uint64_t size1 = 0;
  std::uint64_t size2 = 0;
  std::uint64_t symmetric_difference = 0;
  // Neighbors of vertex 1 inside I_1 (in G_1). Meaningful for the flip
  // event 1 in I_2 \ I_1; recorded on every trial.
  std::uint64_t neighbors_in_i1 = 0;

  bool flip() const { return !in_i1 && in_i2; }
  bool operator==(const InstabilityRecord&) const = default;
};

// Throws UsageError unless n >= 3 and 0 <= p <= 1.
InstabilityRecord instability_trial(Vertex n, double p, std::uint64_t seed);

// Flag / size consistency; returns an empty string when the record is sound.
std::string instability_violation(const InstabilityRecord& record);

}  // namespace isetlab

#endif  // ISETLAB_INSTABILITY_H_
