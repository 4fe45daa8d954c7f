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

#include "isetlab/online.h"

#include <algorithm>
#include <string>

#include "isetlab/errors.h"

namespace isetlab {

std::uint64_t digest_step(std::uint64_t state, std::uint64_t value) {
  std::uint64_t x = state + 0x9E3779B97F4A7C15ULL + value;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::vector<Reveal> SelectReveal::materialize() const {
  std::vector<Reveal> out;
  if (round_ == 0) return out;
  const auto order = transcript_->inspected();
  const Vertex v = order[round_ - 1];
  out.reserve(count_);
  for (std::uint32_t i = 0; i + 1 < round_; ++i) {
    const PairKey pair = PairKey::of(order[i], v);
    const auto joined = transcript_->future_round(pair);
    if (joined.has_value() && *joined < round_) continue;
    out.push_back({pair, transcript_->graph().status(pair)});
  }
  return out;
}

Transcript::Transcript(const EdgeOracle& graph, TranscriptOptions options)
    : graph_(&graph),
      n_(graph.n()),
      options_(options),
      inspect_round_(graph.n(), 0),
      in_set_(graph.n(), 0) {
  order_.reserve(n_);
  rounds_.reserve(n_);
}

void Transcript::require_open(const char* op) const {
  if (phase_ != Phase::kSelected) {
    throw ProtocolViolation(std::string(op) +
                            " called without a selected vertex this round");
  }
}

SelectReveal Transcript::select_vertex(Vertex v) {
  if (phase_ != Phase::kIdle) {
    throw ProtocolViolation("select_vertex called twice in round " +
                            std::to_string(round()));
  }
  if (round() == n_) {
    throw ProtocolViolation("select_vertex after all " + std::to_string(n_) +
                            " rounds");
  }
  if (v >= n_) {
    throw UsageError("vertex " + std::to_string(v) + " out of range for n = " +
                     std::to_string(n_));
  }
  if (is_inspected(v)) {
    throw ProtocolViolation("vertex " + std::to_string(v) +
                            " was already inspected in round " +
                            std::to_string(inspect_round_[v]));
  }
  std::uint64_t already = 0;
  if (!e_adj_.empty()) {
    for (Vertex u : e_adj_[v]) already += is_inspected(u) ? 1 : 0;
  }
  const std::uint64_t fresh = order_.size() - already;
  const auto t = static_cast<std::uint32_t>(rounds_.size() + 1);

  if (options_.record_events) {
    TranscriptEvent event;
    event.kind = TranscriptEvent::Kind::kSelect;
    event.round = t;
    event.vertex = v;
    for (Vertex u : order_) {
      const PairKey pair = PairKey::of(u, v);
      if (e_round_.contains(pair.code())) continue;
      event.reveals.push_back({pair, graph_->status(pair)});
    }
    events_.push_back(std::move(event));
  }

  order_.push_back(v);
  inspect_round_[v] = t;
  RoundRecord record;
  record.vertex = v;
  record.select_revealed = fresh;
  rounds_.push_back(record);
  round_reads_ = 0;
  round_read_digest_ = 0;
  phase_ = Phase::kSelected;
  return SelectReveal(*this, t, fresh);
}

std::vector<Reveal> Transcript::query_future(std::span<const PairKey> pairs) {
  require_open("query_future");
  for (const PairKey& pair : pairs) graph_->check_pair(pair);
  if (e_adj_.empty() && !pairs.empty()) e_adj_.resize(n_);

  const std::uint32_t t = round();
  RoundRecord& record = rounds_.back();
  std::vector<Reveal> fresh;
  for (const PairKey& pair : pairs) {
    record.query_digest = digest_step(record.query_digest, pair.code());
    const auto [it, inserted] = e_round_.try_emplace(pair.code(), t);
    if (!inserted) continue;
    e_adj_[pair.u].push_back(pair.v);
    e_adj_[pair.v].push_back(pair.u);
    if (in_set(pair.u) && in_set(pair.v)) ++budget_;
    if (is_inspected(pair.u) && is_inspected(pair.v)) continue;
    fresh.push_back({pair, graph_->status(pair)});
  }
  record.query_submitted += pairs.size();
  record.query_revealed += fresh.size();

  if (options_.record_events) {
    TranscriptEvent event;
    event.kind = TranscriptEvent::Kind::kQuery;
    event.round = t;
    event.vertex = record.vertex;
    event.submitted.assign(pairs.begin(), pairs.end());
    event.reveals = fresh;
    events_.push_back(std::move(event));
  }
  return fresh;
}

void Transcript::decide(bool include) {
  require_open("decide");
  const Vertex v = order_.back();
  if (include) {
    for (Vertex u : set_) {
      if (graph_->status(PairKey::of(u, v)) == EdgeStatus::kPresent) {
        throw ProtocolViolation("cannot include vertex " + std::to_string(v) +
                                ": revealed edge to " + std::to_string(u) +
                                " in the current set");
      }
    }
    if (!e_adj_.empty()) {
      for (Vertex u : e_adj_[v]) budget_ += in_set(u) ? 1 : 0;
    }
    in_set_[v] = 1;
    set_.push_back(v);
  }
  RoundRecord& record = rounds_.back();
  record.include = include;
  record.set_size = static_cast<std::uint32_t>(set_.size());
  record.budget = budget_;
  record.reads = round_reads_;
  record.read_digest = round_read_digest_;
  phase_ = Phase::kIdle;

  if (options_.record_events) {
    TranscriptEvent event;
    event.kind = TranscriptEvent::Kind::kDecide;
    event.round = round();
    event.vertex = v;
    event.include = include;
    event.set_size = record.set_size;
    event.budget = budget_;
    events_.push_back(std::move(event));
  }
}

bool Transcript::is_revealed(PairKey pair) const {
  graph_->check_pair(pair);
  if (is_inspected(pair.u) && is_inspected(pair.v)) return true;
  return e_round_.contains(pair.code());
}

std::optional<std::uint32_t> Transcript::future_round(PairKey pair) const {
  const auto it = e_round_.find(pair.code());
  if (it == e_round_.end()) return std::nullopt;
  return it->second;
}

void Transcript::note_read(PairKey pair, EdgeStatus status) const {
  if (phase_ != Phase::kSelected) return;
  ++round_reads_;
  round_read_digest_ = digest_step(round_read_digest_,
                                   (pair.code() << 1) ^ static_cast<std::uint64_t>(status));
}

EdgeStatus Transcript::status(PairKey pair) const {
  if (!is_revealed(pair)) {
    throw ProtocolViolation("pair {" + std::to_string(pair.u) + ", " +
                            std::to_string(pair.v) +
                            "} has not been revealed by round " +
                            std::to_string(round()));
  }
  const EdgeStatus s = graph_->status(pair);
  note_read(pair, s);
  return s;
}

RunResult Transcript::finalize() const {
  if (!complete()) {
    throw ProtocolViolation("finalize on an incomplete run: " +
                            std::to_string(round()) + " of " +
                            std::to_string(n_) + " rounds" +
                            (round_open() ? " (round still open)" : ""));
  }
  RunResult result;
  result.final_set.assign(set_.begin(), set_.end());
  std::sort(result.final_set.begin(), result.final_set.end());
  result.rounds = round();
  result.future_queries = e_round_.size();

  const std::size_t k = result.final_set.size();
  std::uint64_t budget = 0;
  if (k * (k - (k > 0 ? 1 : 0)) / 2 <= e_round_.size()) {
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = i + 1; j < k; ++j) {
        const PairKey pair{result.final_set[i], result.final_set[j]};
        budget += e_round_.contains(pair.code()) ? 1 : 0;
      }
    }
  } else {
    for (const auto& [code, round_added] : e_round_) {
      const PairKey pair = PairKey::from_code(code);
      budget += (in_set(pair.u) && in_set(pair.v)) ? 1 : 0;
    }
  }
  if (budget != budget_) {
    throw InvariantBreach("budget mismatch: running " + std::to_string(budget_) +
                          ", recount " + std::to_string(budget));
  }
  result.budget = budget;

  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      const PairKey pair{result.final_set[i], result.final_set[j]};
      if (graph_->status(pair) == EdgeStatus::kPresent) {
        throw InvariantBreach("final set is not independent: edge {" +
                              std::to_string(pair.u) + ", " +
                              std::to_string(pair.v) + "}");
      }
    }
  }
  result.set_size_by_round.reserve(rounds_.size());
  for (const RoundRecord& record : rounds_) {
    result.set_size_by_round.push_back(record.set_size);
  }
  return result;
}

}  // namespace isetlab
