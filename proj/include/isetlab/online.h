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

#ifndef ISETLAB_ONLINE_H_
#define ISETLAB_ONLINE_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "isetlab/graph.h"

namespace isetlab {

struct Reveal {
  PairKey pair;
  EdgeStatus status;

  bool operator==(const Reveal&) const = default;
};

// Per-round summary. Digests are order-sensitive hashes: `query_digest`
// over the submitted pair codes, `read_digest` over every (pair, status)
// the algorithm read through Transcript::status() during the round.
struct RoundRecord {
  Vertex vertex = 0;
  std::uint64_t select_revealed = 0;
  std::uint64_t query_submitted = 0;
  std::uint64_t query_revealed = 0;
  std::uint64_t query_digest = 0;
  std::uint64_t reads = 0;
  std::uint64_t read_digest = 0;
  bool include = false;
  std::uint32_t set_size = 0;
  std::uint64_t budget = 0;

  bool operator==(const RoundRecord&) const = default;
};

// Full event log, kept only when TranscriptOptions::record_events is set.
struct TranscriptEvent {
  enum class Kind { kSelect, kQuery, kDecide };
  Kind kind = Kind::kSelect;
  std::uint32_t round = 0;
  Vertex vertex = 0;
  std::vector<PairKey> submitted;  // kQuery
  std::vector<Reveal> reveals;     // kSelect, kQuery: newly revealed pairs
  bool include = false;            // kDecide
  std::uint32_t set_size = 0;      // kDecide
  std::uint64_t budget = 0;        // kDecide

  bool operator==(const TranscriptEvent&) const = default;
};

struct TranscriptOptions {
  bool record_events = false;
};

struct RunResult {
  std::vector<Vertex> final_set;  // ascending
  std::uint64_t budget = 0;       // |E_n ∩ (final_set choose 2)|
  std::uint32_t rounds = 0;
  std::uint64_t future_queries = 0;  // |E_n|
  std::vector<std::uint32_t> set_size_by_round;  // |A_t| for t = 1..n
  bool degenerate = false;
  std::string warning;

  std::size_t size() const { return final_set.size(); }
};

class Transcript;

// Pairs {v_t, u}, u in V_{t-1}, revealed when v_t was selected. Evaluated
// lazily: the batch stores only the round and the count.
class SelectReveal {
 public:
  SelectReveal(const Transcript& transcript, std::uint32_t round,
               std::uint64_t count)
      : transcript_(&transcript), round_(round), count_(count) {}

  std::uint64_t size() const { return count_; }
  bool empty() const { return count_ == 0; }
  std::vector<Reveal> materialize() const;

 private:
  const Transcript* transcript_;
  std::uint32_t round_;
  std::uint64_t count_;
};

// State of one online run over an EdgeOracle, enforcing the round
// structure select -> query* -> decide for n rounds. Information access is
// enforced: status() only answers for pairs in (V_t choose 2) ∪ E_t.
// Rounds are 1-based; vertices are 0-based.
class Transcript {
 public:
  explicit Transcript(const EdgeOracle& graph, TranscriptOptions options = {});

  SelectReveal select_vertex(Vertex v);
  std::vector<Reveal> query_future(std::span<const PairKey> pairs);
  void decide(bool include);
  RunResult finalize() const;

  bool is_revealed(PairKey pair) const;
  // Throws ProtocolViolation for an unrevealed pair.
  EdgeStatus status(PairKey pair) const;
  bool adjacent(Vertex a, Vertex b) const {
    return status(PairKey::of(a, b)) == EdgeStatus::kPresent;
  }

  const EdgeOracle& graph() const { return *graph_; }
  Vertex n() const { return n_; }
  std::uint32_t round() const { return static_cast<std::uint32_t>(rounds_.size()); }
  bool round_open() const { return phase_ != Phase::kIdle; }
  bool complete() const { return round() == n_ && !round_open(); }

  std::span<const Vertex> inspected() const { return order_; }
  bool is_inspected(Vertex v) const { return inspect_round_[v] != 0; }
  // Round in which v was selected, 0 if never.
  std::uint32_t inspect_round(Vertex v) const { return inspect_round_[v]; }

  std::span<const Vertex> current_set() const { return set_; }
  bool in_set(Vertex v) const { return in_set_[v] != 0; }

  std::uint64_t future_size() const { return e_round_.size(); }
  // Round in which the pair first entered E, if ever.
  std::optional<std::uint32_t> future_round(PairKey pair) const;
  const std::unordered_map<std::uint64_t, std::uint32_t>& future_pairs() const {
    return e_round_;
  }

  std::uint64_t running_budget() const { return budget_; }
  const std::vector<RoundRecord>& rounds() const { return rounds_; }
  const std::vector<TranscriptEvent>& events() const { return events_; }

 private:
  enum class Phase { kIdle, kSelected };

  void require_open(const char* op) const;
  void note_read(PairKey pair, EdgeStatus status) const;

  const EdgeOracle* graph_;
  Vertex n_;
  TranscriptOptions options_;
  Phase phase_ = Phase::kIdle;

  std::vector<std::uint32_t> inspect_round_;
  std::vector<Vertex> order_;
  std::vector<std::uint8_t> in_set_;
  std::vector<Vertex> set_;

  std::unordered_map<std::uint64_t, std::uint32_t> e_round_;
  std::vector<std::vector<Vertex>> e_adj_;  // allocated on first query

  std::uint64_t budget_ = 0;
  std::vector<RoundRecord> rounds_;
  mutable std::uint64_t round_reads_ = 0;
  mutable std::uint64_t round_read_digest_ = 0;
  std::vector<TranscriptEvent> events_;
};

inline Transcript begin_run(const EdgeOracle& graph,
                            TranscriptOptions options = {}) {
  return Transcript(graph, options);
}

// Order-sensitive 64-bit digest step.
std::uint64_t digest_step(std::uint64_t state, std::uint64_t value);

}  // namespace isetlab

#endif  // ISETLAB_ONLINE_H_
