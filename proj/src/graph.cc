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

#include "isetlab/graph.h"

#include <cmath>
#include <limits>
#include <string>

#include "isetlab/errors.h"
#include "isetlab/philox.h"

namespace isetlab {

PairKey PairKey::of(Vertex a, Vertex b) {
  if (a == b) {
    throw UsageError("vertex pair {" + std::to_string(a) + ", " +
                     std::to_string(b) + "} is a loop");
  }
  return a < b ? PairKey{a, b} : PairKey{b, a};
}

PairKey PairKey::from_code(std::uint64_t code) {
  const auto u = static_cast<Vertex>(code >> 32);
  const auto v = static_cast<Vertex>(code & 0xffffffffULL);
  if (u >= v) throw UsageError("non-canonical pair code");
  return PairKey{u, v};
}

void EdgeOracle::check_pair(PairKey pair) const {
  if (pair.u >= pair.v) throw UsageError("pair is not canonical");
  if (pair.v >= n()) {
    throw UsageError("vertex " + std::to_string(pair.v) +
                     " out of range for n = " + std::to_string(n()));
  }
}

std::uint64_t edge_threshold(double p) {
  if (!(p >= 0.0)) return 0;
  if (p >= 1.0) return std::numeric_limits<std::uint64_t>::max();
  // p * 2^64 is exact in long double for double p; floorl keeps it integral.
  const long double scaled = std::ldexp(static_cast<long double>(p), 64);
  return static_cast<std::uint64_t>(std::floor(scaled));
}

GnpSource::GnpSource(Vertex n, double p, std::uint64_t seed,
                     std::uint64_t stream)
    : n_(n),
      p_(p),
      seed_(seed),
      stream_(stream),
      threshold_(edge_threshold(p)),
      always_present_(p >= 1.0) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw UsageError("edge probability must lie in [0, 1], got " +
                     std::to_string(p));
  }
}

std::uint64_t GnpSource::raw(PairKey pair) const {
  return prf64(seed_, stream_, PrfDomain::kEdge, pair.code());
}

EdgeStatus GnpSource::status(PairKey pair) const {
  check_pair(pair);
  return status_unchecked(pair);
}

ExplicitGraph::ExplicitGraph(Vertex n,
                             const std::vector<std::pair<Vertex, Vertex>>& edges)
    : n_(n) {
  for (const auto& [a, b] : edges) {
    const PairKey pair = PairKey::of(a, b);
    check_pair(pair);
    edges_.insert(pair.code());
  }
}

EdgeStatus ExplicitGraph::status(PairKey pair) const {
  check_pair(pair);
  return edges_.contains(pair.code()) ? EdgeStatus::kPresent : EdgeStatus::kAbsent;
}

std::string to_string(EdgeStatus status) {
  return status == EdgeStatus::kPresent ? "present" : "absent";
}

}  // namespace isetlab
