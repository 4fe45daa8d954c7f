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

#include "isetlab/ogp.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <string>

#include "isetlab/errors.h"

namespace isetlab {

std::uint64_t copy_stream(const GnpSource& base, std::uint32_t index) {
  return base.stream() + index;
}

CorrelatedCopy::CorrelatedCopy(GnpSource base,
                               std::shared_ptr<const SharedReveal> shared,
                               std::uint32_t index)
    : base_(base),
      resample_(base.with_stream(copy_stream(base, index))),
      shared_(std::move(shared)),
      index_(index) {}

EdgeStatus CorrelatedCopy::status(PairKey pair) const {
  check_pair(pair);
  if (index_ == 1 || shared_->contains(pair)) return base_.status_unchecked(pair);
  return resample_.status_unchecked(pair);
}

CorrelatedFamily::CorrelatedFamily(GnpSource base,
                                   std::shared_ptr<const SharedReveal> shared,
                                   std::uint32_t m)
    : base_(base), shared_(std::move(shared)) {
  if (m < 1) throw UsageError("correlated family needs m >= 1");
  copies_.reserve(m);
  for (std::uint32_t i = 1; i <= m; ++i) copies_.emplace_back(base_, shared_, i);
}

CorrelatedFamily CorrelatedFamily::build(const GnpSource& base,
                                         const Transcript& transcript,
                                         std::uint32_t T, std::uint32_t m) {
  if (transcript.graph().n() != base.n()) {
    throw UsageError("transcript and base graph disagree on n");
  }
  if (T > transcript.round()) {
    throw UsageError("family round T = " + std::to_string(T) +
                     " is beyond the transcript (round " +
                     std::to_string(transcript.round()) + ")");
  }
  auto shared = std::make_shared<SharedReveal>();
  shared->T = T;
  shared->inspect_round.assign(base.n(), 0);
  const auto order = transcript.inspected();
  for (std::uint32_t i = 0; i < T; ++i) {
    shared->inspected.push_back(order[i]);
    shared->inspect_round[order[i]] = i + 1;
  }
  for (const auto& [code, round] : transcript.future_pairs()) {
    if (round <= T) shared->future.insert(code);
  }
  return CorrelatedFamily(base, std::move(shared), m);
}

CorrelatedFamily CorrelatedFamily::independent(const GnpSource& base,
                                               std::uint32_t m) {
  auto shared = std::make_shared<SharedReveal>();
  shared->inspect_round.assign(base.n(), 0);
  return CorrelatedFamily(base, std::move(shared), m);
}

const CorrelatedCopy& CorrelatedFamily::copy(std::uint32_t index) const {
  if (index < 1 || index > copies_.size()) {
    throw UsageError("copy index " + std::to_string(index) + " outside 1.." +
                     std::to_string(copies_.size()));
  }
  return copies_[index - 1];
}

Transcript replay_prefix(const CorrelatedFamily& family,
                         const OnlineAlgorithm& algorithm,
                         const Transcript& base_transcript,
                         std::uint32_t index) {
  Transcript transcript = begin_run(family.copy(index));
  algorithm.run(transcript);
  const std::uint32_t T = family.T();
  if (base_transcript.round() < T || transcript.round() < T) {
    throw InvariantBreach("replay shorter than the family round");
  }
  for (std::uint32_t t = 0; t < T; ++t) {
    if (!(transcript.rounds()[t] == base_transcript.rounds()[t])) {
      throw InvariantBreach("copy " + std::to_string(index) +
                            " diverged from the base run in round " +
                            std::to_string(t + 1) + " <= T = " +
                            std::to_string(T));
    }
  }
  return transcript;
}

OgpThresholds OgpThresholds::from_params(const LogParams& params) {
  OgpThresholds out;
  out.N = params.N;
  out.size_floor = ceil_snap(params.size_floor());
  out.budget_cap = floor_snap(params.budget_cap());
  out.size_split = floor_snap(3.0 * params.L);
  return out;
}

StoppingTime stopping_time(const RunResult& run, long long N) {
  StoppingTime out;
  const auto& sizes = run.set_size_by_round;
  for (std::size_t t = 0; t < sizes.size(); ++t) {
    if (static_cast<long long>(sizes[t]) == N) {
      out.tau = static_cast<std::uint32_t>(t + 1);
      out.reached = true;
      return out;
    }
  }
  out.tau = static_cast<std::uint32_t>(sizes.size());
  return out;
}

StoppingTime stopping_time(const GnpSource& source,
                           const OnlineAlgorithm& algorithm,
                           const LogParams& params) {
  return stopping_time(execute(algorithm, source), params.N);
}

SuccessTrial success_trial(const GnpSource& source,
                           const OnlineAlgorithm& algorithm,
                           const OgpThresholds& thresholds, std::uint32_t m) {
  if (m < 1) throw UsageError("success_trial needs m >= 1");
  Transcript base = begin_run(source);
  algorithm.run(base);
  const RunResult base_result = base.finalize();

  SuccessTrial out;
  out.tau = stopping_time(base_result, thresholds.N);
  out.sizes.push_back(base_result.size());
  if (m > 1) {
    const CorrelatedFamily family =
        CorrelatedFamily::build(source, base, out.tau.tau, m);
    for (std::uint32_t i = 2; i <= m; ++i) {
      out.sizes.push_back(execute(algorithm, family.copy(i)).size());
    }
  }
  out.success = std::all_of(out.sizes.begin(), out.sizes.end(), [&](std::uint64_t s) {
    return static_cast<long long>(s) >= thresholds.size_floor;
  });
  return out;
}

SuccessTrial success_trial(const GnpSource& source,
                           const OnlineAlgorithm& algorithm,
                           const LogParams& params, std::uint32_t m) {
  return success_trial(source, algorithm, OgpThresholds::from_params(params), m);
}

namespace {

struct PrefixTally {
  std::uint64_t total = 0;
  std::uint64_t small = 0;  // |I| <= size_split
};

// Independent sets of one copy meeting the per-copy conditions, tallied
// by their intersection with V_T.
class CopyEnumerator {
 public:
  CopyEnumerator(const EdgeOracle& copy, const SharedReveal& shared,
                 const OgpThresholds& thresholds)
      : n_(copy.n()), thresholds_(thresholds), adjacency_(copy.n(), 0),
        future_(copy.n(), 0) {
    for (Vertex u = 0; u < n_; ++u) {
      if (shared.in_prefix(u)) prefix_mask_ |= 1u << u;
      for (Vertex v = u + 1; v < n_; ++v) {
        const PairKey pair{u, v};
        if (copy.status(pair) == EdgeStatus::kPresent) {
          adjacency_[u] |= 1u << v;
          adjacency_[v] |= 1u << u;
        }
        if (shared.future.contains(pair.code())) {
          future_[u] |= 1u << v;
          future_[v] |= 1u << u;
        }
      }
    }
  }

  std::map<std::uint32_t, PrefixTally> run() {
    extend(0, 0, 0);
    return tallies_;
  }

 private:
  void visit(std::uint32_t set) {
    const int size = std::popcount(set);
    if (size < thresholds_.size_floor) return;
    const std::uint32_t prefix = set & prefix_mask_;
    if (std::popcount(prefix) != thresholds_.N) return;
    long long used = 0;
    for (std::uint32_t rest = set; rest != 0; rest &= rest - 1) {
      const int v = std::countr_zero(rest);
      used += std::popcount(future_[v] & set);
    }
    if (used / 2 > thresholds_.budget_cap) return;
    PrefixTally& tally = tallies_[prefix];
    ++tally.total;
    if (size <= thresholds_.size_split) ++tally.small;
  }

  // Every independent set whose smallest-missing structure starts at `next`.
  void extend(Vertex next, std::uint32_t set, std::uint32_t blocked) {
    visit(set);
    for (Vertex v = next; v < n_; ++v) {
      if ((blocked >> v) & 1u) continue;
      extend(v + 1, set | (1u << v), blocked | adjacency_[v]);
    }
  }

  Vertex n_;
  OgpThresholds thresholds_;
  std::uint32_t prefix_mask_ = 0;
  std::vector<std::uint32_t> adjacency_;
  std::vector<std::uint32_t> future_;
  std::map<std::uint32_t, PrefixTally> tallies_;
};

}  // namespace

TupleCounts count_forbidden_tuples(const CorrelatedFamily& family,
                                   const ForbiddenTupleQuery& query,
                                   const EnumerationLimits& limits) {
  if (family.n() > limits.max_n || query.m > limits.max_m) {
    throw LimitExceeded("count_forbidden_tuples: n = " +
                        std::to_string(family.n()) + ", m = " +
                        std::to_string(query.m) + " exceeds limits n <= " +
                        std::to_string(limits.max_n) + ", m <= " +
                        std::to_string(limits.max_m));
  }
  if (query.m < 1 || query.m > family.m()) {
    throw UsageError("count_forbidden_tuples: query arity must lie in 1..family m");
  }
  if (family.n() > 31) throw LimitExceeded("count_forbidden_tuples: n > 31");

  std::vector<std::map<std::uint32_t, PrefixTally>> per_copy;
  for (std::uint32_t i = 1; i <= query.m; ++i) {
    CopyEnumerator enumerator(family.copy(i), family.shared(), query.thresholds);
    per_copy.push_back(enumerator.run());
  }
  TupleCounts counts;
  for (const auto& [prefix, first] : per_copy[0]) {
    std::uint64_t total = first.total;
    std::uint64_t small = first.small;
    for (std::size_t i = 1; i < per_copy.size() && total != 0; ++i) {
      const auto it = per_copy[i].find(prefix);
      if (it == per_copy[i].end()) {
        total = 0;
        small = 0;
        break;
      }
      total *= it->second.total;
      small *= it->second.small;
    }
    counts.X += total;
    counts.Z += small;
  }
  counts.Y = counts.X - counts.Z;
  return counts;
}

namespace {

double psi_term(double a, double gamma, double c) {
  return (a * a / 2.0 - a) - (gamma * gamma / 2.0 - gamma) - 2.0 * c;
}

void check_alpha(std::span<const double> alpha, double gamma) {
  const double eps = 2.0 * (1.0 - gamma);
  constexpr double kSlack = 1e-12;
  for (double a : alpha) {
    if (!(a >= 1.0 + eps - kSlack && a <= 3.0 + kSlack)) {
      throw DomainError("psi: component " + std::to_string(a) +
                        " outside [1 + eps, 3] = [" + std::to_string(1.0 + eps) +
                        ", 3]");
    }
  }
}

}  // namespace

double psi(std::span<const double> alpha, double gamma, double c) {
  check_alpha(alpha, gamma);
  double sum = 0.0;
  for (double a : alpha) sum += psi_term(a, gamma, c);
  return sum - gamma;
}

PsiGridMinimum psi_grid_minimum(double eps, double step) {
  if (!(eps > 0.0 && eps <= 1.0)) throw DomainError("psi_grid_minimum: eps out of (0, 1]");
  if (!(step > 0.0)) throw DomainError("psi_grid_minimum: step must be positive");
  const double gamma = 1.0 - eps / 2.0;
  const double c = eps * eps / 8.0;
  const long long m = ceil_snap(16.0 / (eps * eps));
  const double lo = 1.0 + eps;
  const long long steps = floor_snap((3.0 - lo) / step);

  PsiGridMinimum out;
  double best = psi_term(lo, gamma, c);
  out.argmin = lo;
  for (long long k = 1; k <= steps; ++k) {
    const double a = std::min(3.0, lo + static_cast<double>(k) * step);
    const double term = psi_term(a, gamma, c);
    if (term < best) {
      best = term;
      out.argmin = a;
    }
  }
  out.grid_points = static_cast<std::uint64_t>(steps + 1);
  out.value = static_cast<double>(m) * best - gamma;
  return out;
}

long double CountBound::counting() const { return std::exp(static_cast<long double>(log_counting)); }
long double CountBound::probability() const { return std::exp(static_cast<long double>(log_probability)); }
long double CountBound::bound() const { return std::exp(static_cast<long double>(log_bound)); }

CountBound expected_count_bound(std::span<const double> alpha,
                                const LogParams& params) {
  const double value = psi(alpha, params.gamma, params.c);
  const double scale = params.ell_log * params.L;
  double counting = params.gamma;
  double probability = 0.0;
  for (double a : alpha) {
    counting += a - params.gamma;
    probability += a * a / 2.0 - params.gamma * params.gamma / 2.0 - 2.0 * params.c;
  }
  CountBound out;
  out.log_counting = scale * counting;
  out.log_probability = -scale * probability;
  out.log_bound = -scale * value;
  return out;
}

long double z_expectation_bound(const LogParams& params,
                                const OgpThresholds& thresholds,
                                std::uint32_t m) {
  const long double scale = static_cast<long double>(params.ell_log) * params.L;
  long double axis = 0.0L;
  for (long long k = thresholds.size_floor; k <= thresholds.size_split; ++k) {
    const double a = static_cast<double>(k) / params.L;
    axis += std::exp(-scale * psi_term(a, params.gamma, params.c));
  }
  return std::exp(scale * params.gamma) * std::pow(axis, static_cast<long double>(m));
}

}  // namespace isetlab
