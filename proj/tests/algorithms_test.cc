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

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "isetlab/algorithms.h"
#include "isetlab/errors.h"
#include "isetlab/graph.h"
#include "isetlab/params.h"

namespace isetlab {
namespace {

TEST(Greedy, Extremes) {
  EXPECT_EQ(greedy_run(GnpSource(30, 0.0, 1)).size(), 30u);
  EXPECT_EQ(greedy_run(GnpSource(30, 1.0, 1)).final_set, std::vector<Vertex>{0});
  EXPECT_EQ(greedy_run(GnpSource(1, 0.5, 1)).final_set, std::vector<Vertex>{0});
}

TEST(Greedy, ZeroBudgetAndMaximal) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const GnpSource g(300, 0.2, seed);
    const RunResult r = greedy_run(g);
    EXPECT_EQ(r.budget, 0u);
    EXPECT_EQ(r.future_queries, 0u);
    for (Vertex v = 0; v < 300; ++v) {
      if (std::binary_search(r.final_set.begin(), r.final_set.end(), v)) continue;
      bool blocked = false;
      for (Vertex u : r.final_set) blocked = blocked || (u < v && g.adjacent(u, v));
      ASSERT_TRUE(blocked);
    }
  }
}

TEST(RandomQueryGreedy, SameDecisionsAsGreedy) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const GnpSource g(200, 0.3, seed);
    const RunResult a = greedy_run(g);
    const RunResult b = execute(RandomQueryGreedy(seed, 5), g);
    EXPECT_EQ(a.final_set, b.final_set);
    EXPECT_GT(b.future_queries, 0u);
  }
}

// The stated monotone coupling (lower p never shrinks greedy's output)
// does not hold: greedy is not monotone under edge deletion.
TEST(Greedy, NotMonotoneUnderEdgeRemoval) {
  const ExplicitGraph star(4, {{0, 1}, {1, 2}, {1, 3}});
  const ExplicitGraph fewer(4, {{1, 2}, {1, 3}});
  EXPECT_EQ(greedy_run(star).final_set, (std::vector<Vertex>{0, 2, 3}));
  EXPECT_EQ(greedy_run(fewer).final_set, (std::vector<Vertex>{0, 1}));

  // Same thing on the threshold coupling: G(n, 0.3) ⊆ G(n, 0.6) pairwise.
  int decreases = 0;
  for (std::uint64_t seed = 0; seed < 2000; ++seed) {
    const GnpSource lo(10, 0.3, seed);
    const GnpSource hi(10, 0.6, seed);
    for (Vertex u = 0; u < 10; ++u) {
      for (Vertex v = u + 1; v < 10; ++v) {
        if (lo.adjacent(u, v)) ASSERT_TRUE(hi.adjacent(u, v));
      }
    }
    decreases += greedy_run(lo).size() < greedy_run(hi).size() ? 1 : 0;
  }
  EXPECT_GT(decreases, 0);
}

TEST(LookaheadParams, PaperExactInfeasibleAtDeskScale) {
  try {
    lookahead_params(4096, 0.5, 0.3, LookaheadMode::kPaperExact);
    FAIL() << "expected InfeasibleParams";
  } catch (const InfeasibleParams& e) {
    EXPECT_NE(std::string(e.what()).find("ell"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("< 1"), std::string::npos);
  }
  EXPECT_THROW(lookahead_params(1u << 20, 0.5, 0.25, LookaheadMode::kPaperExact),
               InfeasibleParams);
}

TEST(LookaheadParams, PaperExactFormulas) {
  // Feasible only far beyond desk scale: n = 2^63, eps = 1/2.
  const LookaheadParams a = lookahead_params(1ULL << 63, 0.5, 0.5, LookaheadMode::kPaperExact);
  const double log_n = 63.0;
  EXPECT_EQ(a.ell, static_cast<std::uint64_t>(std::floor(0.5 * log_n - 3.5 * std::log2(log_n))));
  EXPECT_EQ(a.ell, 10u);
  EXPECT_EQ(a.T, a.ell * static_cast<std::uint64_t>(std::ceil(std::pow(2.0, 31.5) * a.ell)));
  EXPECT_EQ(a.r, static_cast<std::uint64_t>(std::floor(std::pow(2.0, 31.5) * log_n * log_n * log_n)));
  EXPECT_EQ(a.J_cap, static_cast<std::uint64_t>(std::floor(2.0 * std::log2(double(a.r)))));
}

TEST(LookaheadParams, PracticalValues) {
  const LookaheadParams a = lookahead_params(1u << 20, 0.5, 0.25, LookaheadMode::kPractical);
  EXPECT_EQ(a.r, 32u * 20u);
  EXPECT_EQ(a.J_cap, 18u);  // floor(2 log2 640)
  EXPECT_EQ(a.ell_nominal, 15u);
  EXPECT_EQ(a.ell, 10u);
  EXPECT_EQ(a.T, 8u * 10u * 1024u);

  const LookaheadParams b = lookahead_params(1u << 18, 0.5, 0.25, LookaheadMode::kPractical);
  EXPECT_EQ(b.r, 22u * 18u);
  EXPECT_EQ(b.ell, 9u);
  EXPECT_EQ(b.T, 36864u);
  EXPECT_EQ(b.J_cap, 17u);
  // Expected non-neighbours of I_T in W cover r.
  EXPECT_GE((double(b.n) - b.T - 2) * std::pow(0.5, double(b.ell)), double(b.r));

  const LookaheadParams z = lookahead_params(1u << 16, 0.5, 0.0, LookaheadMode::kPractical);
  EXPECT_EQ(z.ell_nominal, 16u);
  EXPECT_EQ(z.r, 16u);
}

TEST(LookaheadParams, Errors) {
  EXPECT_THROW(lookahead_params(1000, 0.0, 0.2, LookaheadMode::kPractical), DomainError);
  EXPECT_THROW(lookahead_params(1000, 0.5, 1.0, LookaheadMode::kPractical), DomainError);
  EXPECT_THROW(lookahead_params(1000, 0.5, 0.0, LookaheadMode::kPaperExact), DomainError);
  EXPECT_THROW(lookahead_params(16, 0.5, 0.5, LookaheadMode::kPractical), InfeasibleParams);
  EXPECT_THROW(parse_lookahead_mode("exact"), UsageError);
  EXPECT_EQ(parse_lookahead_mode(to_string(LookaheadMode::kPaperExact)), LookaheadMode::kPaperExact);
}

TEST(LookaheadParams, SqrtRegime) {
  EXPECT_NEAR(sqrt_regime_eps(1u << 16, 0.5, 2.0), 0.5, 1e-12);
}

TEST(Lookahead, EmptyGraph) {
  LookaheadParams params;
  params.n = 100;
  params.p = 0.5;
  params.eps = 0.25;
  params.ell = 5;
  params.T = 20;
  params.r = 12;
  params.J_cap = 7;
  const LookaheadResult r = lookahead_run(GnpSource(100, 0.0, 3), params);
  EXPECT_EQ(r.greedy_set, (std::vector<Vertex>{0, 1, 2, 3, 4}));
  ASSERT_EQ(r.search_set.size(), 12u);
  EXPECT_EQ(r.search_set.front(), 20u);
  EXPECT_EQ(r.search_set.back(), 31u);
  EXPECT_EQ(r.brute_force, (std::vector<Vertex>{20, 21, 22, 23, 24, 25, 26}));
  EXPECT_EQ(r.run.size(), 12u);
  EXPECT_EQ(r.run.budget, 7u * 5u + 21u);
  EXPECT_EQ(r.run.budget, r.budget_bound());
}

TEST(Lookahead, BudgetIdentityAndStructure) {
  const LookaheadParams params = lookahead_params(4096, 0.5, 0.25, LookaheadMode::kPractical);
  EXPECT_EQ(params.ell, 4u);
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const GnpSource g(4096, 0.5, seed);
    const LookaheadResult r = lookahead_run(g, params);
    EXPECT_LE(r.run.budget, r.budget_bound());
    EXPECT_LE(r.greedy_set.size(), params.ell);
    EXPECT_LE(r.search_set.size(), params.r);
    EXPECT_LE(r.brute_force.size(), params.J_cap);
    std::vector<Vertex> both = r.greedy_set;
    both.insert(both.end(), r.brute_force.begin(), r.brute_force.end());
    std::sort(both.begin(), both.end());
    EXPECT_EQ(std::adjacent_find(both.begin(), both.end()), both.end());
    EXPECT_EQ(both, r.run.final_set);
    for (Vertex w : r.search_set) {
      EXPECT_GE(w, params.T);
      EXPECT_LT(w, 4094u);
      for (Vertex u : r.greedy_set) EXPECT_FALSE(g.adjacent(u, w));
    }
    EXPECT_TRUE(std::is_sorted(r.search_set.begin(), r.search_set.end()));
  }
}

TEST(Lookahead, DegenerateWhenSearchSetEmpty) {
  LookaheadParams params;
  params.n = 12;
  params.p = 0.5;
  params.eps = 0.5;
  params.ell = 1;
  params.T = 4;
  params.r = 5;
  params.J_cap = 2;
  const LookaheadResult r = lookahead_run(GnpSource(12, 1.0, 1), params);
  EXPECT_TRUE(r.run.degenerate);
  EXPECT_FALSE(r.run.warning.empty());
  EXPECT_EQ(r.run.final_set, std::vector<Vertex>{0});
}

TEST(Lookahead, RejectsMismatchedGraph) {
  const LookaheadParams params = lookahead_params(4096, 0.5, 0.25, LookaheadMode::kPractical);
  EXPECT_THROW(lookahead_run(GnpSource(4000, 0.5, 1), params), UsageError);
}

}  // namespace
}  // namespace isetlab
