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

#ifndef ISETLAB_GRAPH_H_
#define ISETLAB_GRAPH_H_

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

namespace isetlab {

using Vertex = std::uint32_t;

// Unordered vertex pair {u, v}, stored canonically with u < v.
struct PairKey {
  Vertex u = 0;
  Vertex v = 1;

  // Canonicalizes (a, b). Throws UsageError when a == b.
  static PairKey of(Vertex a, Vertex b);

  // Inverse of code(). Throws UsageError on a non-canonical code.
  static PairKey from_code(std::uint64_t code);

  constexpr std::uint64_t code() const {
    return (static_cast<std::uint64_t>(u) << 32) | v;
  }

  auto operator<=>(const PairKey&) const = default;
};

struct PairKeyHash {
  std::size_t operator()(const PairKey& key) const noexcept {
    return std::hash<std::uint64_t>{}(key.code());
  }
};

enum class EdgeStatus : std::uint8_t { kAbsent = 0, kPresent = 1 };

// Read-only view of the edge statuses of a graph on vertices 0..n-1.
class EdgeOracle {
 public:
  virtual ~EdgeOracle() = default;

  virtual Vertex n() const = 0;

  // Throws UsageError if the pair has a vertex >= n().
  virtual EdgeStatus status(PairKey pair) const = 0;

  bool adjacent(Vertex a, Vertex b) const {
    return status(PairKey::of(a, b)) == EdgeStatus::kPresent;
  }

  void check_pair(PairKey pair) const;
};

// Lazily sampled G(n, p). The status of a pair is a pure function of
// (seed, stream, pair): a Philox output compared against floor(p * 2^64).
// A pair is Present iff the output is strictly below the threshold; p = 1
// is special-cased to always Present since 2^64 is not representable.
class GnpSource final : public EdgeOracle {
 public:
  GnpSource(Vertex n, double p, std::uint64_t seed, std::uint64_t stream = 0);

  Vertex n() const override { return n_; }
  EdgeStatus status(PairKey pair) const override;

  // Status without the range check, for hot loops that already validated.
  EdgeStatus status_unchecked(PairKey pair) const {
    if (always_present_) return EdgeStatus::kPresent;
    return raw(pair) < threshold_ ? EdgeStatus::kPresent : EdgeStatus::kAbsent;
  }

  // Same graph parameters and seed on an independent stream.
  GnpSource with_stream(std::uint64_t stream) const {
    return GnpSource(n_, p_, seed_, stream);
  }

  // The uniform 64-bit PRF output behind a pair's status.
  std::uint64_t raw(PairKey pair) const;

  double p() const { return p_; }
  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }
  std::uint64_t threshold() const { return threshold_; }
  bool always_present() const { return always_present_; }

 private:
  Vertex n_;
  double p_;
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t threshold_;
  bool always_present_;
};

// A fixed graph given by its edge list. Statuses are looked up in a hash
// set; meant for loaded instances and hand-built test graphs.
class ExplicitGraph final : public EdgeOracle {
 public:
  ExplicitGraph(Vertex n, const std::vector<std::pair<Vertex, Vertex>>& edges);

  Vertex n() const override { return n_; }
  EdgeStatus status(PairKey pair) const override;
  std::size_t edge_count() const { return edges_.size(); }

 private:
  Vertex n_;
  std::unordered_set<std::uint64_t> edges_;
};

// floor(p * 2^64) for p in [0, 1); returns UINT64_MAX for p >= 1.
std::uint64_t edge_threshold(double p);

std::string to_string(EdgeStatus status);

}  // namespace isetlab

#endif  // ISETLAB_GRAPH_H_
