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

#ifndef ISETLAB_OGP_H_
#define ISETLAB_OGP_H_

#include <cstdint>
#include <memory>
#include <span>
#include <unordered_set>
#include <vector>

#include "isetlab/algorithms.h"
#include "isetlab/graph.h"
#include "isetlab/online.h"
#include "isetlab/params.h"

namespace isetlab {

// Pairs revealed through round T of a base run: (V_T choose 2) ∪ E_T.
struct SharedReveal {
  std::uint32_t T = 0;
  std::vector<std::uint32_t> inspect_round;  // 0 or a round <= T
  std::vector<Vertex> inspected;              // V_T in selection order
  std::unordered_set<std::uint64_t> future;   // E_T pair codes

  bool contains(PairKey pair) const {
    return (inspect_round[pair.u] != 0 && inspect_round[pair.v] != 0) ||
           future.contains(pair.code());
  }
  bool in_prefix(Vertex v) const { return inspect_round[v] != 0; }
};

// One copy G_i^(T): shared pairs read the base graph, all other pairs read
// an independent resample stream. Copy 1 is the base graph itself.
class CorrelatedCopy final : public EdgeOracle {
 public:
  CorrelatedCopy(GnpSource base, std::shared_ptr<const SharedReveal> shared,
                 std::uint32_t index);

  Vertex n() const override { return base_.n(); }
  EdgeStatus status(PairKey pair) const override;

  std::uint32_t index() const { return index_; }
  bool is_base() const { return index_ == 1; }

 private:
  GnpSource base_;
  GnpSource resample_;
  std::shared_ptr<const SharedReveal> shared_;
  std::uint32_t index_;
};

// Stream label used by copy i >= 2 of a family built on `base`.
std::uint64_t copy_stream(const GnpSource& base, std::uint32_t index);

class CorrelatedFamily {
 public:
  // Family at round T of `transcript`, which must have run on `base` and
  // reached round >= T. T = 0 gives mutually independent copies.
  static CorrelatedFamily build(const GnpSource& base,
                                const Transcript& transcript, std::uint32_t T,
                                std::uint32_t m);
  // Degenerate T = 0 family with an empty shared set.
  static CorrelatedFamily independent(const GnpSource& base, std::uint32_t m);

  std::uint32_t m() const { return static_cast<std::uint32_t>(copies_.size()); }
  std::uint32_t T() const { return shared_->T; }
  Vertex n() const { return base_.n(); }
  const GnpSource& base() const { return base_; }
  const SharedReveal& shared() const { return *shared_; }
  bool is_shared(PairKey pair) const { return shared_->contains(pair); }

  // 1-based copy index, 1..m.
  const CorrelatedCopy& copy(std::uint32_t index) const;

 private:
  CorrelatedFamily(GnpSource base, std::shared_ptr<const SharedReveal> shared,
                   std::uint32_t m);

  GnpSource base_;
  std::shared_ptr<const SharedReveal> shared_;
  std::vector<CorrelatedCopy> copies_;
};

// Runs `algorithm` on copy i and checks that its first T rounds match the
// base transcript round for round (vertex, reveal counts, query and read
// digests, decisions). Throws InvariantBreach on divergence.
Transcript replay_prefix(const CorrelatedFamily& family,
                         const OnlineAlgorithm& algorithm,
                         const Transcript& base_transcript,
                         std::uint32_t index);

// Integer thresholds of the lower-bound machinery. Derived from LogParams
// or pinned explicitly at tiny n.
struct OgpThresholds {
  long long N = 0;            // common-prefix size
  long long size_floor = 0;   // minimum |I_i|
  long long budget_cap = 0;   // maximum |(I_i choose 2) ∩ E_T|
  long long size_split = 0;   // tuples with max |I_i| > size_split count as Y

  // N = ceil(gamma L), size_floor = ceil((1+eps) L),
  // budget_cap = floor(c L^2), size_split = floor(3 L).
  static OgpThresholds from_params(const LogParams& params);
};

struct StoppingTime {
  std::uint32_t tau = 0;  // 1-based round
  bool reached = false;   // |A_tau| == N
};

// tau = min{t : |A_t| = N or t = n} for a recorded run.
StoppingTime stopping_time(const RunResult& run, long long N);
StoppingTime stopping_time(const GnpSource& source,
                           const OnlineAlgorithm& algorithm,
                           const LogParams& params);

struct SuccessTrial {
  StoppingTime tau;
  std::vector<std::uint64_t> sizes;  // |A(G_i^(tau))|, i = 1..m
  bool success = false;              // every size >= size_floor
};

SuccessTrial success_trial(const GnpSource& source,
                           const OnlineAlgorithm& algorithm,
                           const OgpThresholds& thresholds, std::uint32_t m);
SuccessTrial success_trial(const GnpSource& source,
                           const OnlineAlgorithm& algorithm,
                           const LogParams& params, std::uint32_t m);

struct ForbiddenTupleQuery {
  std::uint32_t m = 2;
  double eps = 0.0;
  OgpThresholds thresholds;
};

struct EnumerationLimits {
  Vertex max_n = 14;
  std::uint32_t max_m = 3;
};

struct TupleCounts {
  std::uint64_t X = 0;
  std::uint64_t Y = 0;  // max |I_i| > size_split
  std::uint64_t Z = 0;  // max |I_i| <= size_split

  bool operator==(const TupleCounts&) const = default;
};

// Exact counts of forbidden m-tuples (I_1, ..., I_m) on the family:
// I_i independent in copy i with |I_i| >= size_floor; I_i ∩ V_T equal
// across i with |I_1 ∩ V_T| = N; |(I_i choose 2) ∩ E_T| <= budget_cap.
// Groups per-copy valid sets by their V_T-part, so the count is a sum of
// per-copy products. Throws LimitExceeded above `limits`.
TupleCounts count_forbidden_tuples(const CorrelatedFamily& family,
                                   const ForbiddenTupleQuery& query,
                                   const EnumerationLimits& limits = {});

// Psi(alpha) = sum_i [(a_i^2/2 - a_i) - (gamma^2/2 - gamma) - 2c] - gamma.
// Components must lie in [1 + eps, 3] with eps = 2 (1 - gamma); throws
// DomainError otherwise.
double psi(std::span<const double> alpha, double gamma, double c);

struct PsiGridMinimum {
  double value = 0.0;      // min over the grid of Psi
  double argmin = 0.0;     // common minimizing component
  std::uint64_t grid_points = 0;
};

// Minimum of Psi over the grid {1+eps, 1+eps+step, ..., 3}^m with the
// constants gamma, c, m of log_params(eps). Psi is a sum of identical
// one-dimensional terms, so the m-dimensional minimum is m times the 1-D
// minimum minus gamma.
PsiGridMinimum psi_grid_minimum(double eps, double step = 0.01);

struct CountBound {
  double log_counting = 0.0;     // ell L [sum (a_i - gamma) + gamma]
  double log_probability = 0.0;  // -ell L sum (a_i^2/2 - gamma^2/2 - 2c)
  double log_bound = 0.0;        // -ell L Psi(alpha)
  long double counting() const;
  long double probability() const;
  long double bound() const;
};

// Bound exp(-ell L Psi(alpha)) on the expected number of size-alpha L
// tuples, with its counting and probability factors.
CountBound expected_count_bound(std::span<const double> alpha,
                                const LogParams& params);

// Sum of exp(-ell L Psi(alpha)) over alpha = k / L for integers k in
// [size_floor, size_split] in every coordinate, m coordinates.
long double z_expectation_bound(const LogParams& params,
                                const OgpThresholds& thresholds,
                                std::uint32_t m);

}  // namespace isetlab

#endif  // ISETLAB_OGP_H_
