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

#ifndef ISETLAB_ALGORITHMS_H_
#define ISETLAB_ALGORITHMS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "isetlab/graph.h"
#include "isetlab/online.h"

namespace isetlab {

// A deterministic online algorithm: drives all n rounds of a transcript
// using only information the transcript reveals.
class OnlineAlgorithm {
 public:
  virtual ~OnlineAlgorithm() = default;
  virtual std::string name() const = 0;
  virtual void run(Transcript& transcript) const = 0;
};

// begin_run + run + finalize.
RunResult execute(const OnlineAlgorithm& algorithm, const EdgeOracle& graph,
                  TranscriptOptions options = {});

// Classical greedy: vertices in natural order, no future queries; a vertex
// joins iff it has no neighbor in the current set.
class GreedyAlgorithm final : public OnlineAlgorithm {
 public:
  std::string name() const override { return "greedy"; }
  void run(Transcript& transcript) const override;
};

RunResult greedy_run(const EdgeOracle& graph);

// Greedy decisions, plus `queries_per_round` pseudo-random future pairs
// queried each round from the algorithm seed. Exercises E_t accounting.
class RandomQueryGreedy final : public OnlineAlgorithm {
 public:
  RandomQueryGreedy(std::uint64_t algorithm_seed, std::uint32_t queries_per_round)
      : seed_(algorithm_seed), per_round_(queries_per_round) {}
  std::string name() const override { return "random-query-greedy"; }
  void run(Transcript& transcript) const override;

 private:
  std::uint64_t seed_;
  std::uint32_t per_round_;
};

enum class LookaheadMode { kPaperExact, kPractical };

std::string to_string(LookaheadMode mode);
LookaheadMode parse_lookahead_mode(const std::string& text);

struct LookaheadParams {
  std::uint64_t n = 0;
  double p = 0.0;
  double eps = 0.0;
  LookaheadMode mode = LookaheadMode::kPractical;
  std::uint64_t ell = 0;          // greedy target
  std::uint64_t T = 0;            // greedy rounds
  std::uint64_t r = 0;            // search-set size
  std::uint64_t J_cap = 0;        // floor(2 log_b r)
  std::uint64_t ell_nominal = 0;  // floor((1 - eps) log_b n)

  // floor(2 log_b r) * (ell + log_b r) <= 3 eps log_b^2(np): the
  // deterministic budget chain applies to every run with these params.
  bool budget_chain_holds() const;
  // 3 eps log_b^2(np).
  double budget_limit() const;
};

// Paper-exact:
//   ell = floor((1-eps) log_b n - 3.5 log_b log_b n),
//   T = ell * ceil(n^(1-eps) * ell),  r = floor(n^eps log_b^3 n).
// Practical:
//   r = floor(n^eps) * ceil(log_b n),  T(ell) = ceil(8 ell b^ell),
//   ell = the largest value <= floor((1-eps) log_b n) with
//         T(ell) + 2 + r <= n and (n - T(ell) - 2)(1-p)^ell >= r.
// Both: J_cap = floor(2 log_b r). Throws InfeasibleParams naming the failing
// inequality, DomainError for p or eps out of range.
LookaheadParams lookahead_params(std::uint64_t n, double p, double eps,
                                 LookaheadMode mode);

// eps = C / sqrt(log_b n), the polynomial-time regime. Parameter helper only.
double sqrt_regime_eps(std::uint64_t n, double p, double C);

struct LookaheadResult {
  RunResult run;
  std::vector<Vertex> greedy_set;   // I_T
  std::vector<Vertex> search_set;   // R after truncation
  std::vector<Vertex> brute_force;  // J
  // |J| |I_T| + (|J| choose 2)
  std::uint64_t budget_bound() const;
};

// Three phases: greedy to size ell within T rounds; a search round on vertex
// n-1 that queries I_T x W and keeps the r smallest non-neighbors R; a
// brute-force round on vertex n-2 that queries (R choose 2) and finds a
// largest independent J in R of size <= J_cap; then J is added and the
// rest of W is skipped.
class LookaheadAlgorithm final : public OnlineAlgorithm {
 public:
  explicit LookaheadAlgorithm(LookaheadParams params);
  std::string name() const override { return "lookahead"; }
  void run(Transcript& transcript) const override;

  struct Phases {
    std::vector<Vertex> greedy_set;
    std::vector<Vertex> search_set;
    std::vector<Vertex> brute_force;
  };
  Phases run_phases(Transcript& transcript) const;

  const LookaheadParams& params() const { return params_; }

 private:
  LookaheadParams params_;
};

LookaheadResult lookahead_run(const EdgeOracle& graph,
                              const LookaheadParams& params);

}  // namespace isetlab

#endif  // ISETLAB_ALGORITHMS_H_
