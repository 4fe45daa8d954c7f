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

#include "isetlab/instability.h"

#include <algorithm>
#include <iterator>
#include <vector>

#include "isetlab/algorithms.h"
#include "isetlab/errors.h"

namespace isetlab {

ResampledPair::ResampledPair(GnpSource base, PairKey pair)
    : base_(base), redraw_(base.with_stream(kInstabilityStream)), pair_(pair) {}

EdgeStatus ResampledPair::status(PairKey pair) const {
  check_pair(pair);
  return pair == pair_ ? redraw_.status_unchecked(pair)
                       : base_.status_unchecked(pair);
}

InstabilityRecord instability_trial(Vertex n, double p, std::uint64_t seed) {
  if (n < 3) throw UsageError("instability_trial: n must be >= 3");
  const GnpSource g1(n, p, seed);
  const PairKey flip_pair = PairKey::of(0, 1);
  const ResampledPair g2(g1, flip_pair);

  const RunResult r1 = greedy_run(g1);
  const RunResult r2 = greedy_run(g2);
  auto contains = [](const std::vector<Vertex>& set, Vertex v) {
    return std::binary_search(set.begin(), set.end(), v);
  };

  InstabilityRecord out;
  out.seed = seed;
  out.edge_g1 = g1.status(flip_pair) == EdgeStatus::kPresent;
  out.edge_g2 = g2.status(flip_pair) == EdgeStatus::kPresent;
  out.in_i1 = contains(r1.final_set, 1);
  out.in_i2 = contains(r2.final_set, 1);
  out.size1 = r1.size();
  out.size2 = r2.size();
  std::vector<Vertex> diff;
  std::set_symmetric_difference(r1.final_set.begin(), r1.final_set.end(),
                                r2.final_set.begin(), r2.final_set.end(),
                                std::back_inserter(diff));
  out.symmetric_difference = diff.size();
  for (Vertex u : r1.final_set) {
    if (u != 1 && g1.adjacent(u, 1)) ++out.neighbors_in_i1;
  }
  return out;
}

std::string instability_violation(const InstabilityRecord& r) {
  // Vertex 0 is always in both sets, so membership of 1 is decided by {0,1}.
  if (r.in_i1 == r.edge_g1) return "vertex 1 membership in I_1 contradicts {0,1} in G_1";
  if (r.in_i2 == r.edge_g2) return "vertex 1 membership in I_2 contradicts {0,1} in G_2";
  if (r.in_i1 && r.neighbors_in_i1 != 0) return "vertex 1 in I_1 has neighbors in I_1";
  if (!r.in_i1 && r.neighbors_in_i1 == 0) return "vertex 1 excluded from I_1 without a neighbor";
  if (r.edge_g1 == r.edge_g2 && r.symmetric_difference != 0) {
    return "identical graphs produced different sets";
  }
  if (r.flip() && r.symmetric_difference == 0) return "flip event with equal sets";
  if (r.size1 == 0 || r.size2 == 0) return "empty greedy set";
  return {};
}

}  // namespace isetlab
