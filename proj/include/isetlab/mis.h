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

#ifndef ISETLAB_MIS_H_
#define ISETLAB_MIS_H_

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "isetlab/graph.h"

namespace isetlab {

class Transcript;

// Status of a pair, or nullopt when it is unknown to the caller.
using PairStatusFn = std::function<std::optional<EdgeStatus>(PairKey)>;

struct MisOptions {
  std::optional<std::size_t> cap;  // stop at this size
  std::size_t limit = 400;         // refuse larger vertex sets
};

// Exact maximum independent set of the subgraph induced on `vertices`,
// returned ascending. Among all optimal sets (of size min(alpha, cap) when
// capped) the lexicographically smallest is returned.
//
// Branch and bound over bitsets: candidates are branched in ascending
// label order and each suffix is bounded by a greedy clique cover, which
// makes the first optimum reached in preorder the lexicographic minimum.
//
// Throws UsageError if some pair status is unknown, LimitExceeded if
// |vertices| > limit.
std::vector<Vertex> mis_bruteforce(std::span<const Vertex> vertices,
                                   const PairStatusFn& status,
                                   const MisOptions& options = {});

std::vector<Vertex> mis_bruteforce(std::span<const Vertex> vertices,
                                   const EdgeOracle& graph,
                                   const MisOptions& options = {});

// Reads statuses through the transcript, so only revealed pairs are usable.
std::vector<Vertex> mis_bruteforce(std::span<const Vertex> vertices,
                                   const Transcript& transcript,
                                   const MisOptions& options = {});

// Whole graph 0..n-1.
std::vector<Vertex> mis_bruteforce(const EdgeOracle& graph,
                                   const MisOptions& options = {});

}  // namespace isetlab

#endif  // ISETLAB_MIS_H_
