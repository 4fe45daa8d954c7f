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

// Acceptance battery: one PASS/FAIL line per criterion, exit status 1 if
// any criterion fails. Sample sizes and seeds are fixed.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "isetlab/algorithms.h"
#include "isetlab/experiment.h"
#include "isetlab/graph.h"
#include "isetlab/instability.h"
#include "isetlab/mis.h"
#include "isetlab/ogp.h"
#include "isetlab/online.h"
#include "isetlab/params.h"
#include "isetlab/philox.h"

namespace {

using namespace isetlab;
using Clock = std::chrono::steady_clock;

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "NOT ") + what;
  }
};

std::string fmt(double x, int digits = 4) {
  std::ostringstream out;
  out.precision(digits);
  out << x;
  return out.str();
}

int failures = 0;

void report(int id, const std::string& title, double limit_seconds,
            const std::function<Verdict()>& body) {
  const auto start = Clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v.pass = false;
    v.detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  if (limit_seconds > 0) v.require(secs < limit_seconds, "runtime " + fmt(secs, 3) + " s < " + fmt(limit_seconds) + " s");
  if (!v.pass) ++failures;
  std::printf("criterion %2d %s  %s: %s\n", id, v.pass ? "PASS" : "FAIL", title.c_str(),
              v.detail.c_str());
  std::fflush(stdout);
}

Stat stat_of(const nlohmann::json& s) {
  Stat out;
  out.count = s.at("count").get<std::uint64_t>();
  out.mean = s.at("mean").get<double>();
  out.se = s.at("se").get<double>();
  return out;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& csv) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

ExperimentConfig config(ExperimentKind kind, std::uint64_t n, double p, std::uint64_t trials,
                        std::uint64_t seed) {
  ExperimentConfig c;
  c.experiment = kind;
  c.n = n;
  c.p = p;
  c.trials = trials;
  c.seed = seed;
  c.workers = default_workers();
  return c;
}

// Outcome of the look-ahead battery, shared between criteria 3 and 4.
nlohmann::json lookahead_summary;
std::string lookahead_csv;
nlohmann::json greedy_summary_2_18;

Verdict criterion1() {
  Verdict v;
  const auto out = run_experiment(config(ExperimentKind::kGreedy, 100000, 0.5, 200, 1001));
  const Stat ratio = stat_of(out.summary["stats"]["size_over_logb_n"]);
  v.require(ratio.mean >= 0.90 && ratio.mean <= 1.05,
            "mean |I| / log2 n = " + fmt(ratio.mean) + " in [0.90, 1.05]");
  v.require(out.summary["counts"]["max_budget"] == 0, "budget 0 on all 200 runs");
  return v;
}

Verdict criterion2() {
  Verdict v;
  const auto out = run_experiment(config(ExperimentKind::kMis, 50, 0.5, 100, 1002));
  const Stat alpha = stat_of(out.summary["stats"]["alpha"]);
  const double f = refined_alpha_formula(50, 0.5);
  v.require(std::abs(alpha.mean - f) <= 1.5,
            "mean alpha " + fmt(alpha.mean) + " within 1.5 of " + fmt(f));
  return v;
}

Verdict criterion3() {
  Verdict v;
  // Greedy: zero budget, several densities.
  std::uint64_t greedy_runs = 0, greedy_nonzero = 0;
  for (double p : {0.05, 0.3, 0.5, 0.9}) {
    for (std::uint64_t s = 0; s < 50; ++s) {
      ++greedy_runs;
      greedy_nonzero += greedy_run(GnpSource(5000, p, trial_seed(1003, s))).budget != 0;
    }
  }
  v.require(greedy_nonzero == 0, "greedy budget 0 on " + std::to_string(greedy_runs) + " runs");

  // Look-ahead, desk-scale practical parameters (from criterion 4's battery
  // and a smaller sweep): the budget identity on every run.
  std::uint64_t la_runs = 0, over_bound = 0;
  for (const auto& row : csv_rows(lookahead_csv)) {
    ++la_runs;
    over_bound += std::stoull(row[7]) > std::stoull(row[8]);
  }
  for (double eps : {0.1, 0.25, 0.4}) {
    const LookaheadParams params = lookahead_params(4096, 0.5, eps, LookaheadMode::kPractical);
    for (std::uint64_t s = 0; s < 20; ++s) {
      const LookaheadResult r = lookahead_run(GnpSource(4096, 0.5, trial_seed(1013, s)), params);
      ++la_runs;
      over_bound += r.run.budget > r.budget_bound();
    }
  }
  v.require(over_bound == 0,
            "look-ahead budget <= |J||I_T| + C(|J|,2) on " + std::to_string(la_runs) + " runs");

  // 3 eps L^2: parameters for which J_cap ell + C(J_cap, 2) <= 3 eps L^2.
  LookaheadParams chain;
  chain.n = 1u << 16;
  chain.p = 0.5;
  chain.eps = 0.25;
  chain.ell = 2;
  chain.T = 8 * 2 * 4;
  chain.r = 16 * 16;
  chain.J_cap = 16;
  const bool holds = chain.budget_chain_holds();
  v.require(holds, "chain inequality holds for n=2^16, eps=0.25, ell=2, r=256, J_cap=16");
  std::uint64_t over_limit = 0, max_budget = 0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const LookaheadResult r = lookahead_run(GnpSource(chain.n, 0.5, trial_seed(1023, s)), chain);
    max_budget = std::max(max_budget, r.run.budget);
    over_limit += static_cast<double>(r.run.budget) > chain.budget_limit();
    over_bound += r.run.budget > r.budget_bound();
  }
  v.require(over_limit == 0 && over_bound == 0,
            "budget <= 3 eps L^2 = " + fmt(chain.budget_limit()) + " on 20 chain runs (max " +
                std::to_string(max_budget) + ")");
  const auto& params = lookahead_summary["params"];
  v.detail += "; desk-scale practical n=2^18 chain " +
              std::string(params["budget_chain_holds"].get<bool>() ? "holds" : "does not hold") +
              " (max budget " + std::to_string(lookahead_summary["counts"]["max_budget"].get<std::uint64_t>()) +
              " vs 3 eps L^2 = " + fmt(params["budget_limit"].get<double>()) + ")";
  return v;
}

Verdict criterion4() {
  Verdict v;
  ExperimentConfig la = config(ExperimentKind::kLookahead, 1u << 18, 0.5, 10, 1004);
  la.eps = 0.25;
  la.mode = "practical";
  const auto out = run_experiment(la);
  lookahead_summary = out.summary;
  lookahead_csv = out.csv;
  const auto greedy = run_experiment(config(ExperimentKind::kGreedy, 1u << 18, 0.5, 10, 1004));
  greedy_summary_2_18 = greedy.summary;

  const double L = log_base_b((1u << 18) * 0.5, 0.5);
  const Stat size = stat_of(out.summary["stats"]["size"]);
  v.require(size.mean >= 1.12 * L, "mean |I| = " + fmt(size.mean) + " >= 1.12 L = " + fmt(1.12 * L));
  const ComparisonReport cmp = compare_summary(greedy.summary, out.summary);
  const auto row = std::find_if(cmp.rows.begin(), cmp.rows.end(),
                                [](const ComparisonRow& r) { return r.key == "size"; });
  v.require(row != cmp.rows.end() && row->delta > 0 && !row->overlap,
            "greedy " + fmt(row->a.mean) + " [" + fmt(row->a.lo3()) + ", " + fmt(row->a.hi3()) +
                "] vs look-ahead " + fmt(row->b.mean) + " [" + fmt(row->b.lo3()) + ", " +
                fmt(row->b.hi3()) + "] separated at 3 sigma");
  v.require(out.summary["counts"]["degenerate"] == 0, "no degenerate runs");
  return v;
}

Verdict criterion5() {
  Verdict v;
  ExperimentConfig c = config(ExperimentKind::kInstability, 10000, 0.5, 2000, 1005);
  const auto out = run_experiment(c);
  const Stat flip = stat_of(out.summary["stats"]["flip"]);
  const double se0 = std::sqrt(0.25 * 0.75 / 2000.0);
  v.require(std::abs(flip.mean - 0.25) <= 3 * se0,
            "P[flip] = " + fmt(flip.mean) + " within 3 sigma (" + fmt(3 * se0, 3) + ") of 0.25");
  const Stat residual = stat_of(out.summary["stats"]["neighbor_residual_given_flip"]);
  const Stat neighbors = stat_of(out.summary["stats"]["neighbors_given_flip"]);
  const Stat expected = stat_of(out.summary["stats"]["expected_neighbors_given_flip"]);
  v.require(std::abs(residual.mean) <= 3 * residual.se,
            "neighbors | flip = " + fmt(neighbors.mean) + " vs 1 + (|I1|-1)p = " +
                fmt(expected.mean) + " (residual " + fmt(residual.mean, 3) + " +/- " +
                fmt(3 * residual.se, 3) + ")");

  // Conditional symmetric difference grows with n.
  std::vector<double> means;
  for (std::uint64_t n : {1000u, 10000u, 100000u}) {
    ExperimentConfig s = config(ExperimentKind::kInstability, n, 0.5, n == 10000 ? 2000 : 1000, 1015);
    const auto o = n == 10000 ? out : run_experiment(s);
    means.push_back(o.summary["stats"]["symmetric_difference_given_flip"]["mean"].get<double>());
  }
  v.require(means[0] < means[1] && means[1] < means[2],
            "E|I1 D I2| given flip monotone in n: " + fmt(means[0]) + " < " + fmt(means[1]) +
                " < " + fmt(means[2]));
  return v;
}

Verdict criterion6() {
  Verdict v;
  // (a) Shared pairs agree on all copies, exhaustively at n = 64.
  std::uint64_t shared_checked = 0, disagreements = 0, shared_mismatch = 0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const GnpSource g(64, 0.5, trial_seed(1006, s));
    const RandomQueryGreedy alg(s, 3);
    Transcript tr = begin_run(g);
    alg.run(tr);
    const auto T = static_cast<std::uint32_t>(3 * s + 1);
    const CorrelatedFamily fam = CorrelatedFamily::build(g, tr, T, 4);
    for (Vertex a = 0; a < 64; ++a) {
      for (Vertex b = a + 1; b < 64; ++b) {
        const PairKey k{a, b};
        const bool in_vt = tr.inspect_round(a) <= T && tr.inspect_round(b) <= T &&
                           tr.inspect_round(a) && tr.inspect_round(b);
        const auto fr = tr.future_round(k);
        const bool shared = in_vt || (fr && *fr <= T);
        shared_mismatch += shared != fam.is_shared(k);
        if (!shared) continue;
        ++shared_checked;
        for (std::uint32_t i = 1; i <= 4; ++i) disagreements += fam.copy(i).status(k) != g.status(k);
      }
    }
  }
  v.require(disagreements == 0 && shared_mismatch == 0,
            "shared pairs agree on all 4 copies (" + std::to_string(shared_checked) + " pairs)");

  // (b) Unrevealed-pair marginal over 10^4 seeds, copies 2..4.
  constexpr int kSeeds = 10000;
  const PairKey far{62, 63};
  const GreedyAlgorithm greedy;
  std::uint64_t present[5] = {};
  bool unrevealed = true;
  for (int s = 0; s < kSeeds; ++s) {
    const GnpSource g(64, 0.5, trial_seed(1016, s));
    Transcript tr = begin_run(g);
    greedy.run(tr);
    const CorrelatedFamily fam = CorrelatedFamily::build(g, tr, 10, 4);
    unrevealed = unrevealed && !fam.is_shared(far);
    for (std::uint32_t i = 2; i <= 4; ++i) present[i] += fam.copy(i).status(far) == EdgeStatus::kPresent;
  }
  const double band = 3 * std::sqrt(0.25 / kSeeds);
  bool marg = unrevealed;
  std::string freqs;
  for (std::uint32_t i = 2; i <= 4; ++i) {
    const double f = present[i] / double(kSeeds);
    marg = marg && std::abs(f - 0.5) <= band;
    freqs += (i > 2 ? ", " : "") + fmt(f);
  }
  v.require(marg, "unrevealed-pair frequency " + freqs + " within 0.5 +/- " + fmt(band, 3));

  // (c) Greedy prefix identical for 50 random (T, seed).
  std::mt19937_64 rng(1026);
  int identical = 0;
  for (int k = 0; k < 50; ++k) {
    const GnpSource g(500, 0.5, rng());
    Transcript tr = begin_run(g);
    greedy.run(tr);
    const auto T = static_cast<std::uint32_t>(rng() % 501);
    const CorrelatedFamily fam = CorrelatedFamily::build(g, tr, T, 4);
    bool all = true;
    for (std::uint32_t i = 1; i <= 4; ++i) {
      const Transcript ti = replay_prefix(fam, greedy, tr, i);
      all = all && std::equal(ti.rounds().begin(), ti.rounds().begin() + T, tr.rounds().begin());
    }
    identical += all;
  }
  v.require(identical == 50, "first-T transcript identical on all copies for " +
                                 std::to_string(identical) + "/50 (T, seed)");
  return v;
}

// Naive oracle for criterion 7: all pairs of subsets.
TupleCounts naive_pairs(const CorrelatedFamily& fam, const Transcript& tr, std::uint32_t T,
                        const OgpThresholds& th) {
  const Vertex n = fam.n();
  const std::uint32_t full = 1u << n;
  std::uint32_t vt = 0;
  for (Vertex x = 0; x < n; ++x) {
    if (tr.inspect_round(x) != 0 && tr.inspect_round(x) <= T) vt |= 1u << x;
  }
  auto ok = [&](std::uint32_t copy, std::uint32_t s) {
    if (std::popcount(s) < th.size_floor) return false;
    long long used = 0;
    for (Vertex a = 0; a < n; ++a) {
      for (Vertex b = a + 1; b < n; ++b) {
        if (!(s >> a & 1u) || !(s >> b & 1u)) continue;
        if (fam.copy(copy).adjacent(a, b)) return false;
        const auto r = tr.future_round(PairKey{a, b});
        used += (r && *r <= T) ? 1 : 0;
      }
    }
    return used <= th.budget_cap;
  };
  std::vector<char> ok1(full), ok2(full);
  for (std::uint32_t s = 0; s < full; ++s) {
    ok1[s] = ok(1, s);
    ok2[s] = ok(2, s);
  }
  TupleCounts out;
  for (std::uint32_t s1 = 0; s1 < full; ++s1) {
    if (!ok1[s1]) continue;
    for (std::uint32_t s2 = 0; s2 < full; ++s2) {
      if (!ok2[s2]) continue;
      if ((s1 & vt) != (s2 & vt) || std::popcount(s1 & vt) != th.N) continue;
      ++out.X;
      if (std::max(std::popcount(s1), std::popcount(s2)) > th.size_split) ++out.Y; else ++out.Z;
    }
  }
  return out;
}

Verdict criterion7() {
  Verdict v;
  std::mt19937_64 rng(1007);
  int equal = 0, partition = 0, positive = 0;
  for (int k = 0; k < 20; ++k) {
    const Vertex n = 8 + static_cast<Vertex>(rng() % 5);
    const double p = 0.2 + 0.1 * static_cast<double>(rng() % 4);
    const GnpSource g(n, p, rng());
    const RandomQueryGreedy alg(rng(), 1 + static_cast<std::uint32_t>(rng() % 2));
    Transcript tr = begin_run(g);
    alg.run(tr);
    const auto T = static_cast<std::uint32_t>(2 + rng() % (n - 1));
    const CorrelatedFamily fam = CorrelatedFamily::build(g, tr, T, 2);
    OgpThresholds th;
    th.N = 1 + static_cast<long long>(rng() % 2);
    th.size_floor = th.N + 1 + static_cast<long long>(rng() % 2);
    th.budget_cap = static_cast<long long>(rng() % 2);
    th.size_split = th.size_floor + static_cast<long long>(rng() % 2);
    const TupleCounts fast = count_forbidden_tuples(fam, {2, 0.5, th});
    const TupleCounts slow = naive_pairs(fam, tr, T, th);
    equal += fast == slow;
    partition += fast.X == fast.Y + fast.Z;
    positive += fast.X > 0;
  }
  v.require(equal == 20, "optimized == naive on " + std::to_string(equal) + "/20 instances (" +
                             std::to_string(positive) + " with X > 0)");
  v.require(partition == 20, "X = Y + Z on all");
  return v;
}

Verdict criterion8() {
  Verdict v;
  std::mt19937_64 rng(1008);
  double worst_rel = 0.0;
  std::string mins;
  for (double eps : {0.25, 0.5, 0.75, 1.0}) {
    const PsiGridMinimum g = psi_grid_minimum(eps, 0.01);
    const LogParams lp = log_params(1u << 20, 0.5, eps);
    mins += (mins.empty() ? "" : ", ") + fmt(g.value);
    v.require(g.value >= 1.0 - 1e-9, "eps " + fmt(eps) + ": grid min " + fmt(g.value, 6) + " >= 1");
    // Separability cross-check: the full-length vector at the argmin.
    const std::vector<double> at(static_cast<std::size_t>(lp.m), g.argmin);
    v.require(std::abs(psi(at, lp.gamma, lp.c) - g.value) <= 1e-9, "direct Psi at argmin agrees");
    std::uniform_real_distribution<double> u(1.0 + eps, 3.0);
    for (int k = 0; k < 200; ++k) {
      std::vector<double> alpha(static_cast<std::size_t>(lp.m));
      for (double& a : alpha) a = u(rng);
      const CountBound b = expected_count_bound(alpha, lp);
      // counting * probability / bound - 1, formed from the logs: the
      // factors themselves under- or overflow at these exponents.
      const double rel = std::abs(std::expm1(b.log_counting + b.log_probability - b.log_bound));
      worst_rel = std::max(worst_rel, rel);
    }
  }
  v.require(worst_rel <= 1e-9, "counting x probability = bound, worst rel err " + fmt(worst_rel, 3));
  v.detail += "; grid minima " + mins;
  return v;
}

Verdict criterion9() {
  Verdict v;
  ExperimentConfig c = config(ExperimentKind::kOgpMonteCarlo, 4096, 0.5, 10000, 1009);
  c.eps = 0.5;
  c.m = 4;
  const auto out = run_experiment(c);
  const auto successes = out.summary["counts"]["successes"].get<std::uint64_t>();
  v.require(successes == 0, std::to_string(successes) + " successes in 10^4 trials");

  // Naive scan: greedy without the harness, first t with |A_t| = N.
  const long long N = log_params(4096, 0.5, 0.5).N;
  const auto rows = csv_rows(out.csv);
  std::uint64_t agree = 0;
  std::vector<std::uint32_t> taus;
  for (const auto& row : rows) {
    const GnpSource g(4096, 0.5, std::stoull(row[1]));
    std::vector<Vertex> set;
    std::uint32_t tau = 4096;
    for (Vertex t = 0; t < 4096; ++t) {
      bool free = true;
      for (Vertex u : set) {
        if (g.adjacent(u, t)) {
          free = false;
          break;
        }
      }
      if (free) set.push_back(t);
      if (static_cast<long long>(set.size()) == N) {
        tau = t + 1;
        break;
      }
    }
    agree += std::to_string(tau) == row[2];
    taus.push_back(tau);
  }
  v.require(agree == rows.size() && rows.size() == 10000,
            "tau = naive scan on " + std::to_string(agree) + "/" + std::to_string(rows.size()) + " trials");
  std::sort(taus.begin(), taus.end());
  v.detail += "; tau quantiles (min, 25%, 50%, 75%, max) = " + std::to_string(taus.front()) + ", " +
              std::to_string(taus[taus.size() / 4]) + ", " + std::to_string(taus[taus.size() / 2]) +
              ", " + std::to_string(taus[3 * taus.size() / 4]) + ", " + std::to_string(taus.back()) +
              "; max copy size " + std::to_string(out.summary["counts"]["max_size"].get<std::uint64_t>()) +
              " vs floor " + std::to_string(OgpThresholds::from_params(log_params(4096, 0.5, 0.5)).size_floor);
  return v;
}

Verdict criterion10() {
  Verdict v;
  std::vector<ExperimentConfig> batteries;
  batteries.push_back(config(ExperimentKind::kGreedy, 20000, 0.5, 40, 1010));
  ExperimentConfig la = config(ExperimentKind::kLookahead, 1u << 14, 0.5, 4, 1010);
  la.eps = 0.25;
  batteries.push_back(la);
  batteries.push_back(config(ExperimentKind::kInstability, 2000, 0.5, 100, 1010));
  ExperimentConfig en = config(ExperimentKind::kOgpEnum, 12, 0.5, 20, 1010);
  en.eps = 0.25;
  en.queries = 1;
  batteries.push_back(en);
  ExperimentConfig mc = config(ExperimentKind::kOgpMonteCarlo, 1024, 0.5, 100, 1010);
  mc.m = 4;
  batteries.push_back(mc);
  batteries.push_back(config(ExperimentKind::kMis, 40, 0.5, 20, 1010));
  batteries.push_back(config(ExperimentKind::kCalibrate, 100000, 0.5, 0, 1010));
  int identical = 0;
  std::string names;
  for (ExperimentConfig c : batteries) {
    c.workers = 1;
    const auto a = run_experiment(c);
    const auto b = run_experiment(c);
    c.workers = 4;
    const auto d = run_experiment(c);
    const bool same = a.csv == b.csv && a.csv == d.csv && a.summary.dump(2) == b.summary.dump(2) &&
                      a.summary.dump(2) == d.summary.dump(2);
    identical += same;
    if (!same) names += " " + to_string(c.experiment);
  }
  v.require(identical == static_cast<int>(batteries.size()),
            "CSV and JSON byte-identical for " + std::to_string(identical) + "/" +
                std::to_string(batteries.size()) + " batteries at 1, 1 and 4 workers" + names);
  return v;
}

}  // namespace

int main() {
  report(1, "greedy size", 60, criterion1);
  report(2, "optimum size", 300, criterion2);
  // 4 before 3: the budget audit reuses the look-ahead battery.
  report(4, "look-ahead gain", 600, criterion4);
  report(3, "budget exactness", 0, criterion3);
  report(5, "instability", 120, criterion5);
  report(6, "coupling correctness", 0, criterion6);
  report(7, "enumeration oracle equivalence", 300, criterion7);
  report(8, "Psi bound", 0, criterion8);
  report(9, "success-event rarity", 0, criterion9);
  report(10, "determinism", 0, criterion10);
  std::printf("%s: %d of 10 criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
