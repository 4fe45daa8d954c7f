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

#include "isetlab/algorithms.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "isetlab/errors.h"
#include "isetlab/mis.h"
#include "isetlab/params.h"
#include "isetlab/philox.h"

namespace isetlab {
namespace {

std::string fmt(double x) {
  std::ostringstream out;
  out.precision(10);
  out << x;
  return out.str();
}

bool greedy_accepts(const Transcript& transcript, Vertex v) {
  for (Vertex u : transcript.current_set()) {
    if (transcript.adjacent(u, v)) return false;
  }
  return true;
}

}  // namespace

RunResult execute(const OnlineAlgorithm& algorithm, const EdgeOracle& graph,
                  TranscriptOptions options) {
  Transcript transcript = begin_run(graph, options);
  algorithm.run(transcript);
  return transcript.finalize();
}

void GreedyAlgorithm::run(Transcript& transcript) const {
  for (Vertex t = 0; t < transcript.n(); ++t) {
    transcript.select_vertex(t);
    transcript.decide(greedy_accepts(transcript, t));
  }
}

RunResult greedy_run(const EdgeOracle& graph) {
  return execute(GreedyAlgorithm{}, graph);
}

void RandomQueryGreedy::run(Transcript& transcript) const {
  const Vertex n = transcript.n();
  std::vector<PairKey> batch;
  for (Vertex t = 0; t < n; ++t) {
    transcript.select_vertex(t);
    batch.clear();
    for (std::uint32_t j = 0; j < per_round_ && n >= 2; ++j) {
      const std::uint64_t x = prf64(seed_, 0, PrfDomain::kAlgorithm, t, j);
      const auto a = static_cast<Vertex>((x & 0xffffffffULL) % n);
      auto b = static_cast<Vertex>((x >> 32) % n);
      if (a == b) b = (b + 1) % n;
      batch.push_back(PairKey::of(a, b));
    }
    transcript.query_future(batch);
    transcript.decide(greedy_accepts(transcript, t));
  }
}

std::string to_string(LookaheadMode mode) {
  return mode == LookaheadMode::kPaperExact ? "paper-exact" : "practical";
}

LookaheadMode parse_lookahead_mode(const std::string& text) {
  if (text == "paper-exact") return LookaheadMode::kPaperExact;
  if (text == "practical") return LookaheadMode::kPractical;
  throw UsageError("mode must be 'paper-exact' or 'practical', got '" + text + "'");
}

double LookaheadParams::budget_limit() const {
  const double L = log_base_b(static_cast<double>(n) * p, p);
  return 3.0 * eps * L * L;
}

bool LookaheadParams::budget_chain_holds() const {
  const double worst = static_cast<double>(J_cap * ell + J_cap * (J_cap - (J_cap > 0 ? 1 : 0)) / 2);
  return worst <= budget_limit();
}

std::uint64_t LookaheadResult::budget_bound() const {
  const std::uint64_t j = brute_force.size();
  return j * greedy_set.size() + j * (j - (j > 0 ? 1 : 0)) / 2;
}

LookaheadParams lookahead_params(std::uint64_t n, double p, double eps,
                                 LookaheadMode mode) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("lookahead_params: p must lie in (0, 1), got " + fmt(p));
  }
  const double lo = mode == LookaheadMode::kPractical ? 0.0 : 1e-300;
  if (!(eps >= lo && eps < 1.0)) {
    throw DomainError("lookahead_params: eps out of range for " +
                      to_string(mode) + " mode, got " + fmt(eps));
  }
  if (n < 3) throw InfeasibleParams("lookahead_params: need n >= 3");

  LookaheadParams out;
  out.n = n;
  out.p = p;
  out.eps = eps;
  out.mode = mode;
  const double dn = static_cast<double>(n);
  const double log_n = log_base_b(dn, p);
  const double b = 1.0 / (1.0 - p);
  out.ell_nominal = static_cast<std::uint64_t>(std::max(0LL, floor_snap((1.0 - eps) * log_n)));

  if (mode == LookaheadMode::kPaperExact) {
    if (!(log_n > 1.0)) {
      throw InfeasibleParams("paper-exact: log_b(n) = " + fmt(log_n) +
                             " <= 1, so log_b log_b(n) is not positive");
    }
    const double ell_real = (1.0 - eps) * log_n - 3.5 * log_base_b(log_n, p);
    const long long ell = floor_snap(ell_real);
    if (ell < 1) {
      throw InfeasibleParams("paper-exact: ell = floor((1-eps) log_b n - 3.5 log_b log_b n) = floor(" +
                             fmt(ell_real) + ") = " + std::to_string(ell) + " < 1");
    }
    out.ell = static_cast<std::uint64_t>(ell);
    const double per = std::pow(dn, 1.0 - eps) * static_cast<double>(ell);
    const double T = static_cast<double>(ell) * static_cast<double>(ceil_snap(per));
    if (!(T + 2.0 <= dn)) {
      throw InfeasibleParams("paper-exact: T + 2 <= n fails (T = " + fmt(T) +
                             ", n = " + std::to_string(n) + ")");
    }
    out.T = static_cast<std::uint64_t>(T);
    out.r = static_cast<std::uint64_t>(floor_snap(std::pow(dn, eps) * log_n * log_n * log_n));
  } else {
    const std::uint64_t r = static_cast<std::uint64_t>(floor_snap(std::pow(dn, eps))) *
                            static_cast<std::uint64_t>(ceil_snap(log_n));
    if (out.ell_nominal < 1) {
      throw InfeasibleParams("practical: floor((1-eps) log_b n) = " +
                             std::to_string(out.ell_nominal) + " < 1");
    }
    bool found = false;
    for (std::uint64_t ell = out.ell_nominal; ell >= 1 && !found; --ell) {
      const double T = static_cast<double>(ceil_snap(8.0 * static_cast<double>(ell) *
                                                     std::pow(b, static_cast<double>(ell))));
      if (!(T + 2.0 + static_cast<double>(r) <= dn)) continue;
      const double expected_free = (dn - T - 2.0) * std::pow(1.0 - p, static_cast<double>(ell));
      if (!(expected_free >= static_cast<double>(r))) continue;
      out.ell = ell;
      out.T = static_cast<std::uint64_t>(T);
      found = true;
    }
    if (!found) {
      throw InfeasibleParams(
          "practical: no ell in [1, " + std::to_string(out.ell_nominal) +
          "] satisfies T(ell) + 2 + r <= n and (n - T(ell) - 2)(1-p)^ell >= r with r = " +
          std::to_string(r));
    }
    out.r = r;
  }
  out.J_cap = out.r >= 1
                  ? static_cast<std::uint64_t>(std::max(0LL, floor_snap(2.0 * log_base_b(static_cast<double>(out.r), p))))
                  : 0;
  return out;
}

double sqrt_regime_eps(std::uint64_t n, double p, double C) {
  const double log_n = log_base_b(static_cast<double>(n), p);
  if (!(log_n > 0.0)) throw DomainError("sqrt_regime_eps: log_b(n) must be positive");
  return C / std::sqrt(log_n);
}

LookaheadAlgorithm::LookaheadAlgorithm(LookaheadParams params)
    : params_(params) {
  if (params_.ell < 1 || params_.T + 2 > params_.n) {
    throw InfeasibleParams("lookahead: need ell >= 1 and T + 2 <= n");
  }
}

void LookaheadAlgorithm::run(Transcript& transcript) const {
  run_phases(transcript);
}

LookaheadAlgorithm::Phases LookaheadAlgorithm::run_phases(
    Transcript& transcript) const {
  const Vertex n = transcript.n();
  if (n != params_.n) {
    throw UsageError("lookahead: params were built for n = " +
                     std::to_string(params_.n) + ", graph has n = " +
                     std::to_string(n));
  }
  const auto T = static_cast<Vertex>(params_.T);
  Phases phases;

  // Greedy rounds 1..T.
  for (Vertex t = 0; t < T; ++t) {
    transcript.select_vertex(t);
    const bool full = transcript.current_set().size() >= params_.ell;
    transcript.decide(!full && greedy_accepts(transcript, t));
  }
  const auto greedy_view = transcript.current_set();
  phases.greedy_set.assign(greedy_view.begin(), greedy_view.end());

  // Search round: vertex n-1; W = {T, ..., n-3}.
  transcript.select_vertex(n - 1);
  const Vertex w_end = n - 2;
  std::vector<PairKey> batch;
  batch.reserve(w_end > T ? w_end - T : 0);
  for (Vertex u : phases.greedy_set) {
    batch.clear();
    for (Vertex w = T; w < w_end; ++w) batch.push_back(PairKey::of(u, w));
    transcript.query_future(batch);
  }
  for (Vertex w = T; w < w_end && phases.search_set.size() < params_.r; ++w) {
    bool free = true;
    for (Vertex u : phases.greedy_set) {
      if (transcript.adjacent(u, w)) {
        free = false;
        break;
      }
    }
    if (free) phases.search_set.push_back(w);
  }
  transcript.decide(false);

  // Brute-force round: vertex n-2.
  transcript.select_vertex(n - 2);
  const auto& R = phases.search_set;
  batch.clear();
  for (std::size_t i = 0; i < R.size(); ++i) {
    for (std::size_t j = i + 1; j < R.size(); ++j) batch.push_back(PairKey::of(R[i], R[j]));
  }
  transcript.query_future(batch);
  MisOptions options;
  options.cap = params_.J_cap;
  options.limit = std::max<std::size_t>(options.limit, R.size());
  phases.brute_force = mis_bruteforce(R, transcript, options);
  transcript.decide(false);

  // Final rounds: J first, then the rest of W.
  for (Vertex w : phases.brute_force) {
    transcript.select_vertex(w);
    transcript.decide(true);
  }
  for (Vertex w = T; w < w_end; ++w) {
    if (transcript.is_inspected(w)) continue;
    transcript.select_vertex(w);
    transcript.decide(false);
  }
  return phases;
}

LookaheadResult lookahead_run(const EdgeOracle& graph,
                              const LookaheadParams& params) {
  LookaheadAlgorithm algorithm(params);
  Transcript transcript = begin_run(graph);
  LookaheadAlgorithm::Phases phases = algorithm.run_phases(transcript);
  LookaheadResult result;
  result.run = transcript.finalize();
  result.greedy_set = std::move(phases.greedy_set);
  result.search_set = std::move(phases.search_set);
  result.brute_force = std::move(phases.brute_force);
  if (result.search_set.empty()) {
    result.run.degenerate = true;
    result.run.warning = "search set R is empty; the output is I_T alone";
  }
  return result;
}

}  // namespace isetlab
