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

#include "isetlab/experiment.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "isetlab/algorithms.h"
#include "isetlab/errors.h"
#include "isetlab/graph.h"
#include "isetlab/instability.h"
#include "isetlab/mis.h"
#include "isetlab/ogp.h"
#include "isetlab/params.h"
#include "isetlab/philox.h"

namespace isetlab {

using nlohmann::json;

namespace {

constexpr const char* kCsvMagic = "#iset-lab-csv";

const std::map<ExperimentKind, std::string>& kind_names() {
  static const std::map<ExperimentKind, std::string> names = {
      {ExperimentKind::kGreedy, "greedy"},
      {ExperimentKind::kLookahead, "lookahead"},
      {ExperimentKind::kInstability, "instability"},
      {ExperimentKind::kOgpEnum, "ogp-enum"},
      {ExperimentKind::kOgpMonteCarlo, "ogp-montecarlo"},
      {ExperimentKind::kMis, "mis"},
      {ExperimentKind::kCalibrate, "calibrate"},
  };
  return names;
}

const std::map<std::string, std::vector<std::string>>& csv_columns() {
  static const std::map<std::string, std::vector<std::string>> columns = {
      {"greedy", {"trial", "seed", "size", "budget", "future_queries"}},
      {"lookahead",
       {"trial", "seed", "size", "greedy_size", "prefix_size", "search_size",
        "j_size", "budget", "budget_bound", "degenerate"}},
      {"instability",
       {"trial", "seed", "edge_g1", "edge_g2", "in_i1", "in_i2", "size1",
        "size2", "symmetric_difference", "neighbors_in_i1", "flip"}},
      {"ogp-enum",
       {"trial", "seed", "T", "N", "size_floor", "budget_cap", "size_split",
        "success", "X", "Y", "Z"}},
      {"ogp-montecarlo",
       {"trial", "seed", "tau", "reached", "success", "size_floor", "max_size",
        "sizes"}},
      {"mis", {"trial", "seed", "n", "alpha"}},
      {"calibrate",
       {"eps", "b", "L", "ell_log", "gamma", "N", "c", "xi", "m",
        "size_floor", "budget_cap"}},
  };
  return columns;
}

std::string num(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string num(std::uint64_t x) { return std::to_string(x); }
std::string flag(bool b) { return b ? "1" : "0"; }

json stat_json(const Stat& s) {
  return {{"count", s.count}, {"mean", s.mean}, {"se", s.se},
          {"lo3", s.lo3()},   {"hi3", s.hi3()}};
}

Stat stat_from(const json& j) {
  Stat s;
  s.count = j.at("count").get<std::uint64_t>();
  s.mean = j.at("mean").get<double>();
  s.se = j.at("se").get<double>();
  return s;
}

using Row = std::vector<std::string>;

struct Battery {
  std::vector<Row> rows;
  json summary = json::object();
};

std::string render_csv(const std::string& experiment, const std::vector<Row>& rows) {
  std::ostringstream out;
  out << kCsvMagic << " schema=" << kCsvSchemaVersion << " experiment=" << experiment << '\n';
  const auto& header = csv_columns().at(experiment);
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (const Row& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  }
  return out.str();
}

std::vector<std::uint64_t> trial_seeds(const ExperimentConfig& c) {
  std::vector<std::uint64_t> seeds(c.trials);
  for (std::uint64_t i = 0; i < c.trials; ++i) seeds[i] = trial_seed(c.seed, i);
  return seeds;
}

json log_params_json(const LogParams& lp) {
  return {{"b", lp.b},         {"L", lp.L},       {"two_L", 2.0 * lp.L},
          {"ell_log", lp.ell_log}, {"gamma", lp.gamma}, {"N", lp.N},
          {"c", lp.c},         {"xi", lp.xi},     {"m", lp.m},
          {"size_floor", lp.size_floor()}, {"budget_cap", lp.budget_cap()}};
}

json scale_json(const ExperimentConfig& c) {
  json out = json::object();
  if (c.p > 0.0 && c.p < 1.0) {
    out["b"] = 1.0 / (1.0 - c.p);
    out["logb_n"] = log_base_b(static_cast<double>(c.n), c.p);
    if (static_cast<double>(c.n) * c.p > 1.0) {
      const double L = log_base_b(static_cast<double>(c.n) * c.p, c.p);
      out["L"] = L;
      out["two_L"] = 2.0 * L;
    }
  }
  return out;
}

template <typename Record>
std::vector<Record> run_trials(const ExperimentConfig& c,
                               const std::vector<std::uint64_t>& seeds,
                               const std::function<Record(std::uint64_t, std::uint64_t)>& fn) {
  std::vector<Record> out(seeds.size());
  parallel_for(seeds.size(), c.workers, [&](std::uint64_t i) { out[i] = fn(i, seeds[i]); });
  return out;
}

Battery greedy_battery(const ExperimentConfig& c, const std::vector<std::uint64_t>& seeds) {
  const auto n = static_cast<Vertex>(c.n);
  const auto results = run_trials<RunResult>(c, seeds, [&](std::uint64_t, std::uint64_t s) {
    RunResult r = greedy_run(GnpSource(n, c.p, s));
    r.set_size_by_round.clear();
    return r;
  });
  Battery b;
  std::vector<double> sizes;
  std::uint64_t max_budget = 0;
  for (std::uint64_t i = 0; i < results.size(); ++i) {
    const RunResult& r = results[i];
    if (r.budget != 0) throw InvariantBreach("greedy run with nonzero budget");
    max_budget = std::max(max_budget, r.budget);
    sizes.push_back(static_cast<double>(r.size()));
    b.rows.push_back({num(i), num(seeds[i]), num(r.size()), num(r.budget), num(r.future_queries)});
  }
  b.summary["stats"]["size"] = stat_json(summarize(sizes));
  const json scale = scale_json(c);
  if (scale.contains("logb_n")) {
    std::vector<double> ratio;
    for (double s : sizes) ratio.push_back(s / scale["logb_n"].get<double>());
    b.summary["stats"]["size_over_logb_n"] = stat_json(summarize(ratio));
  }
  b.summary["formula"] = scale;
  b.summary["counts"] = {{"trials", results.size()}, {"max_budget", max_budget}};
  return b;
}

Battery lookahead_battery(const ExperimentConfig& c, const std::vector<std::uint64_t>& seeds) {
  const LookaheadParams params = lookahead_params(c.n, c.p, c.eps, parse_lookahead_mode(c.mode));
  const auto n = static_cast<Vertex>(c.n);
  struct Trial {
    LookaheadResult la;
    std::uint64_t greedy_size = 0;
  };
  const auto trials = run_trials<Trial>(c, seeds, [&](std::uint64_t, std::uint64_t s) {
    const GnpSource g(n, c.p, s);
    Trial t;
    t.la = lookahead_run(g, params);
    t.la.run.set_size_by_round.clear();
    t.greedy_size = greedy_run(g).size();
    return t;
  });
  Battery b;
  std::vector<double> size, greedy, gain;
  std::uint64_t degenerate = 0, max_budget = 0, bound_violations = 0, chain_violations = 0;
  for (std::uint64_t i = 0; i < trials.size(); ++i) {
    const LookaheadResult& la = trials[i].la;
    const std::uint64_t bound = la.budget_bound();
    if (la.run.budget > bound) ++bound_violations;
    if (params.budget_chain_holds() &&
        static_cast<double>(la.run.budget) > params.budget_limit()) {
      ++chain_violations;
    }
    max_budget = std::max(max_budget, la.run.budget);
    degenerate += la.run.degenerate ? 1 : 0;
    size.push_back(static_cast<double>(la.run.size()));
    greedy.push_back(static_cast<double>(trials[i].greedy_size));
    gain.push_back(size.back() - greedy.back());
    b.rows.push_back({num(i), num(seeds[i]), num(la.run.size()), num(trials[i].greedy_size),
                      num(la.greedy_set.size()), num(la.search_set.size()),
                      num(la.brute_force.size()), num(la.run.budget), num(bound),
                      flag(la.run.degenerate)});
  }
  if (bound_violations != 0) {
    throw InvariantBreach("look-ahead budget exceeded |J||I_T| + C(|J|,2) on " +
                          std::to_string(bound_violations) + " runs");
  }
  if (chain_violations != 0) {
    throw InvariantBreach("look-ahead budget exceeded 3 eps log_b^2(np) on " +
                          std::to_string(chain_violations) + " runs");
  }
  b.summary["stats"]["size"] = stat_json(summarize(size));
  b.summary["stats"]["greedy_size"] = stat_json(summarize(greedy));
  b.summary["stats"]["gain"] = stat_json(summarize(gain));
  b.summary["params"] = {{"mode", to_string(params.mode)}, {"ell", params.ell},
                         {"ell_nominal", params.ell_nominal}, {"T", params.T},
                         {"r", params.r}, {"J_cap", params.J_cap},
                         {"budget_limit", params.budget_limit()},
                         {"budget_chain_holds", params.budget_chain_holds()}};
  b.summary["formula"] = scale_json(c);
  b.summary["counts"] = {{"trials", trials.size()}, {"degenerate", degenerate},
                         {"max_budget", max_budget}};
  return b;
}

Battery instability_battery(const ExperimentConfig& c, const std::vector<std::uint64_t>& seeds) {
  const auto n = static_cast<Vertex>(c.n);
  const auto records = run_trials<InstabilityRecord>(
      c, seeds, [&](std::uint64_t, std::uint64_t s) { return instability_trial(n, c.p, s); });
  Battery b;
  std::uint64_t flips = 0;
  std::vector<double> neighbors, expected, residual, symdiff_flip;
  for (std::uint64_t i = 0; i < records.size(); ++i) {
    const InstabilityRecord& r = records[i];
    if (const std::string why = instability_violation(r); !why.empty()) {
      throw InvariantBreach("instability trial " + std::to_string(i) + ": " + why);
    }
    if (r.flip()) {
      ++flips;
      const double e = 1.0 + (static_cast<double>(r.size1) - 1.0) * c.p;
      neighbors.push_back(static_cast<double>(r.neighbors_in_i1));
      expected.push_back(e);
      residual.push_back(static_cast<double>(r.neighbors_in_i1) - e);
      symdiff_flip.push_back(static_cast<double>(r.symmetric_difference));
    }
    b.rows.push_back({num(i), num(seeds[i]), flag(r.edge_g1), flag(r.edge_g2), flag(r.in_i1),
                      flag(r.in_i2), num(r.size1), num(r.size2), num(r.symmetric_difference),
                      num(r.neighbors_in_i1), flag(r.flip())});
  }
  b.summary["stats"]["flip"] = stat_json(frequency(flips, records.size()));
  b.summary["stats"]["neighbors_given_flip"] = stat_json(summarize(neighbors));
  b.summary["stats"]["expected_neighbors_given_flip"] = stat_json(summarize(expected));
  b.summary["stats"]["neighbor_residual_given_flip"] = stat_json(summarize(residual));
  b.summary["stats"]["symmetric_difference_given_flip"] = stat_json(summarize(symdiff_flip));
  b.summary["formula"] = scale_json(c);
  b.summary["formula"]["flip_probability"] = c.p * (1.0 - c.p);
  b.summary["counts"] = {{"trials", records.size()}, {"flips", flips}};
  return b;
}

std::unique_ptr<OnlineAlgorithm> ogp_algorithm(const ExperimentConfig& c, std::uint64_t seed) {
  if (c.queries == 0) return std::make_unique<GreedyAlgorithm>();
  return std::make_unique<RandomQueryGreedy>(prf64(seed, 0, PrfDomain::kAlgorithm, 0, 1),
                                             c.queries);
}

Battery ogp_enum_battery(const ExperimentConfig& c, const std::vector<std::uint64_t>& seeds) {
  const LogParams lp = log_params(c.n, c.p, c.eps);
  const OgpThresholds th = OgpThresholds::from_params(lp);
  const auto n = static_cast<Vertex>(c.n);
  struct Trial {
    std::uint32_t T = 0;
    bool success = false;
    TupleCounts counts;
  };
  const auto trials = run_trials<Trial>(c, seeds, [&](std::uint64_t, std::uint64_t s) {
    const GnpSource g(n, c.p, s);
    const auto alg = ogp_algorithm(c, s);
    Transcript base = begin_run(g);
    alg->run(base);
    const RunResult r = base.finalize();
    const StoppingTime tau = stopping_time(r, th.N);
    Trial t;
    t.T = c.T.value_or(tau.tau);
    const CorrelatedFamily family = CorrelatedFamily::build(g, base, t.T, c.m);
    t.counts = count_forbidden_tuples(family, ForbiddenTupleQuery{c.m, c.eps, th});
    t.success = static_cast<long long>(r.size()) >= th.size_floor;
    bool budget_ok = static_cast<long long>(r.budget) <= th.budget_cap;
    for (std::uint32_t i = 2; i <= c.m; ++i) {
      const RunResult ri = execute(*alg, family.copy(i));
      t.success = t.success && static_cast<long long>(ri.size()) >= th.size_floor;
      budget_ok = budget_ok && static_cast<long long>(ri.budget) <= th.budget_cap;
    }
    // With the family at tau and |A_tau| = N, a successful c-restricted
    // tuple of outputs is itself forbidden.
    if (t.success && budget_ok && tau.reached && t.T == tau.tau && t.counts.X == 0) {
      throw InvariantBreach("successful tuple at tau not counted as forbidden");
    }
    return t;
  });
  Battery b;
  json records = json::array();
  std::vector<double> X;
  std::uint64_t successes = 0, positive = 0;
  for (std::uint64_t i = 0; i < trials.size(); ++i) {
    const Trial& t = trials[i];
    if (t.counts.X != t.counts.Y + t.counts.Z) throw InvariantBreach("X != Y + Z");
    successes += t.success ? 1 : 0;
    positive += t.counts.X > 0 ? 1 : 0;
    X.push_back(static_cast<double>(t.counts.X));
    b.rows.push_back({num(i), num(seeds[i]), num(std::uint64_t{t.T}),
                      std::to_string(th.N), std::to_string(th.size_floor),
                      std::to_string(th.budget_cap), std::to_string(th.size_split),
                      flag(t.success), num(t.counts.X), num(t.counts.Y), num(t.counts.Z)});
    records.push_back({{"n", c.n}, {"p", c.p}, {"m", c.m}, {"eps", c.eps}, {"T", t.T},
                       {"N", th.N}, {"size_floor", th.size_floor},
                       {"budget_cap", th.budget_cap}, {"X", t.counts.X},
                       {"Y", t.counts.Y}, {"Z", t.counts.Z}, {"seed", seeds[i]}});
  }
  b.summary["stats"]["X"] = stat_json(summarize(X));
  b.summary["records"] = std::move(records);
  b.summary["formula"] = log_params_json(lp);
  b.summary["formula"]["size_split"] = th.size_split;
  b.summary["formula"]["z_expectation_bound"] =
      static_cast<double>(z_expectation_bound(lp, th, c.m));
  b.summary["counts"] = {{"trials", trials.size()}, {"successes", successes},
                         {"X_positive", positive}};
  return b;
}

Battery ogp_montecarlo_battery(const ExperimentConfig& c, const std::vector<std::uint64_t>& seeds) {
  const LogParams lp = log_params(c.n, c.p, c.eps);
  const OgpThresholds th = OgpThresholds::from_params(lp);
  const auto n = static_cast<Vertex>(c.n);
  const GreedyAlgorithm greedy;
  const auto trials = run_trials<SuccessTrial>(c, seeds, [&](std::uint64_t, std::uint64_t s) {
    return success_trial(GnpSource(n, c.p, s), greedy, th, c.m);
  });
  Battery b;
  std::uint64_t successes = 0, reached = 0, max_size = 0;
  std::vector<double> tau;
  std::map<std::uint32_t, std::uint64_t> histogram;
  for (std::uint64_t i = 0; i < trials.size(); ++i) {
    const SuccessTrial& t = trials[i];
    successes += t.success ? 1 : 0;
    reached += t.tau.reached ? 1 : 0;
    tau.push_back(t.tau.tau);
    ++histogram[t.tau.tau];
    const std::uint64_t mx = *std::max_element(t.sizes.begin(), t.sizes.end());
    max_size = std::max(max_size, mx);
    std::string sizes;
    for (std::size_t k = 0; k < t.sizes.size(); ++k) sizes += (k ? ";" : "") + num(t.sizes[k]);
    b.rows.push_back({num(i), num(seeds[i]), num(std::uint64_t{t.tau.tau}), flag(t.tau.reached),
                      flag(t.success), std::to_string(th.size_floor), num(mx), sizes});
  }
  json hist = json::array();
  for (const auto& [value, count] : histogram) hist.push_back({value, count});
  b.summary["stats"]["success"] = stat_json(frequency(successes, trials.size()));
  b.summary["stats"]["tau"] = stat_json(summarize(tau));
  b.summary["tau_histogram"] = std::move(hist);
  b.summary["formula"] = log_params_json(lp);
  b.summary["counts"] = {{"trials", trials.size()}, {"successes", successes},
                         {"tau_reached", reached}, {"max_size", max_size}};
  return b;
}

Battery mis_battery(const ExperimentConfig& c, const std::vector<std::uint64_t>& seeds) {
  Battery b;
  std::vector<double> alpha;
  if (!c.graph_file.empty()) {
    const EdgeList list = read_edge_list(c.graph_file);
    const ExplicitGraph g(list.n, list.edges);
    const auto set = mis_bruteforce(g, MisOptions{std::nullopt, std::max<std::size_t>(400, list.n)});
    alpha.push_back(static_cast<double>(set.size()));
    b.rows.push_back({"0", "0", num(std::uint64_t{list.n}), num(set.size())});
    json members = json::array();
    for (Vertex v : set) members.push_back(v);
    b.summary["graph"] = {{"n", list.n}, {"edges", g.edge_count()}, {"mis", members}};
  } else {
    const auto n = static_cast<Vertex>(c.n);
    const auto sizes = run_trials<std::uint64_t>(c, seeds, [&](std::uint64_t, std::uint64_t s) {
      return mis_bruteforce(GnpSource(n, c.p, s),
                            MisOptions{std::nullopt, std::max<std::size_t>(400, n)})
          .size();
    });
    for (std::uint64_t i = 0; i < sizes.size(); ++i) {
      alpha.push_back(static_cast<double>(sizes[i]));
      b.rows.push_back({num(i), num(seeds[i]), num(c.n), num(sizes[i])});
    }
  }
  b.summary["stats"]["alpha"] = stat_json(summarize(alpha));
  b.summary["formula"] = scale_json(c);
  if (c.graph_file.empty() && c.p > 0.0 && c.p < 1.0) {
    const double f = refined_alpha_formula(static_cast<double>(c.n), c.p);
    b.summary["formula"]["refined_alpha"] = f;
    std::vector<double> delta;
    for (double a : alpha) delta.push_back(a - f);
    b.summary["stats"]["alpha_minus_refined"] = stat_json(summarize(delta));
  }
  b.summary["counts"] = {{"trials", alpha.size()}};
  return b;
}

Battery calibrate_battery(const ExperimentConfig& c) {
  Battery b;
  json table = json::array();
  for (double eps : {0.25, 0.5, 1.0}) {
    const LogParams lp = log_params(c.n, c.p, eps);
    b.rows.push_back({num(eps), num(lp.b), num(lp.L), num(lp.ell_log), num(lp.gamma),
                      std::to_string(lp.N), num(lp.c), num(lp.xi), std::to_string(lp.m),
                      num(lp.size_floor()), num(lp.budget_cap())});
    json entry = log_params_json(lp);
    entry["eps"] = eps;
    table.push_back(std::move(entry));
  }
  b.summary["calibration"] = std::move(table);
  b.summary["formula"] = scale_json(c);
  b.summary["counts"] = {{"trials", 0}};
  return b;
}

std::string output_stem(const std::string& out) {
  for (const char* ext : {".csv", ".json"}) {
    const std::string e(ext);
    if (out.size() > e.size() && out.compare(out.size() - e.size(), e.size(), e) == 0) {
      return out.substr(0, out.size() - e.size());
    }
  }
  return out;
}

void write_file(const std::string& path, const std::string& body) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("out: cannot write " + path);
  f << body;
  if (!f) throw UsageError("out: write failed for " + path);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

std::string to_string(ExperimentKind kind) { return kind_names().at(kind); }

ExperimentKind parse_experiment(const std::string& name) {
  for (const auto& [kind, text] : kind_names()) {
    if (text == name) return kind;
  }
  throw UsageError("experiment: unknown name '" + name + "'");
}

void validate_config(const ExperimentConfig& c) {
  auto fail = [](const std::string& field, const std::string& why) {
    throw UsageError(field + ": " + why);
  };
  if (!(c.p >= 0.0 && c.p <= 1.0)) fail("p", "must lie in [0, 1]");
  if (c.n > 0xffffffffULL) fail("n", "must fit in 32 bits");
  if (c.workers == 0) fail("workers", "must be >= 1");
  switch (c.experiment) {
    case ExperimentKind::kGreedy:
      if (c.n < 1) fail("n", "must be >= 1");
      break;
    case ExperimentKind::kLookahead:
      parse_lookahead_mode(c.mode);
      if (c.n < 4) fail("n", "must be >= 4");
      if (!(c.p > 0.0 && c.p < 1.0)) fail("p", "must lie in (0, 1)");
      if (!(c.eps >= 0.0 && c.eps < 1.0)) fail("eps", "must lie in [0, 1)");
      break;
    case ExperimentKind::kInstability:
      if (c.n < 3) fail("n", "must be >= 3");
      break;
    case ExperimentKind::kOgpEnum:
    case ExperimentKind::kOgpMonteCarlo:
      if (!(c.p > 0.0 && c.p < 1.0)) fail("p", "must lie in (0, 1)");
      if (!(c.eps > 0.0 && c.eps <= 1.0)) fail("eps", "must lie in (0, 1]");
      if (c.m < 1) fail("m", "must be >= 1");
      if (c.experiment == ExperimentKind::kOgpEnum) {
        const EnumerationLimits limits;
        if (c.n < 2 || c.n > limits.max_n) {
          fail("n", "ogp-enum needs 2 <= n <= " + std::to_string(limits.max_n));
        }
        if (c.m > limits.max_m) fail("m", "ogp-enum needs m <= " + std::to_string(limits.max_m));
        if (c.T && *c.T > c.n) fail("T", "must be <= n");
      }
      if (static_cast<double>(c.n) * c.p <= 1.0) fail("n", "needs n p > 1");
      break;
    case ExperimentKind::kMis:
      if (c.graph_file.empty() && c.n < 1) fail("n", "must be >= 1");
      break;
    case ExperimentKind::kCalibrate:
      if (!(c.p > 0.0 && c.p < 1.0)) fail("p", "must lie in (0, 1)");
      if (static_cast<double>(c.n) * c.p <= 1.0) fail("n", "needs n p > 1");
      break;
  }
}

unsigned default_workers() {
  if (const char* env = std::getenv(kWorkersEnv); env != nullptr && *env != '\0') {
    unsigned value = 0;
    const char* end = env + std::char_traits<char>::length(env);
    const auto res = std::from_chars(env, end, value);
    if (res.ec == std::errc() && res.ptr == end && value > 0) return value;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

Stat summarize(std::span<const double> values) {
  Stat s;
  s.count = values.size();
  if (values.empty()) return s;
  // Two-pass in index order: identical bits for any worker count.
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    const double var = ss / static_cast<double>(values.size() - 1);
    s.se = std::sqrt(var / static_cast<double>(values.size()));
  }
  return s;
}

Stat frequency(std::uint64_t hits, std::uint64_t count) {
  Stat s;
  s.count = count;
  if (count == 0) return s;
  s.mean = static_cast<double>(hits) / static_cast<double>(count);
  s.se = std::sqrt(s.mean * (1.0 - s.mean) / static_cast<double>(count));
  return s;
}

void parallel_for(std::uint64_t count, unsigned workers,
                  const std::function<void(std::uint64_t)>& fn) {
  if (count == 0) return;
  const unsigned threads =
      static_cast<unsigned>(std::min<std::uint64_t>(std::max(1u, workers), count));
  std::atomic<std::uint64_t> next{0};
  std::atomic<bool> stop{false};
  std::mutex mu;
  std::uint64_t failed_index = count;
  std::exception_ptr failure;

  auto work = [&] {
    while (!stop.load(std::memory_order_relaxed)) {
      const std::uint64_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (i < failed_index) {
          failed_index = i;
          failure = std::current_exception();
        }
        stop = true;
      }
    }
  };
  if (threads == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
}

ExperimentOutput run_experiment(const ExperimentConfig& config) {
  validate_config(config);
  const auto start = std::chrono::steady_clock::now();
  const std::string name = to_string(config.experiment);
  const std::vector<std::uint64_t> seeds =
      config.experiment == ExperimentKind::kCalibrate ||
              (config.experiment == ExperimentKind::kMis && !config.graph_file.empty())
          ? std::vector<std::uint64_t>{}
          : trial_seeds(config);

  Battery battery;
  switch (config.experiment) {
    case ExperimentKind::kGreedy: battery = greedy_battery(config, seeds); break;
    case ExperimentKind::kLookahead: battery = lookahead_battery(config, seeds); break;
    case ExperimentKind::kInstability: battery = instability_battery(config, seeds); break;
    case ExperimentKind::kOgpEnum: battery = ogp_enum_battery(config, seeds); break;
    case ExperimentKind::kOgpMonteCarlo: battery = ogp_montecarlo_battery(config, seeds); break;
    case ExperimentKind::kMis: battery = mis_battery(config, seeds); break;
    case ExperimentKind::kCalibrate: battery = calibrate_battery(config); break;
  }

  ExperimentOutput out;
  out.csv = render_csv(name, battery.rows);
  json summary = std::move(battery.summary);
  summary["schema"] = kSummarySchemaVersion;
  summary["experiment"] = name;
  json cfg = {{"n", config.n},       {"p", config.p},         {"eps", config.eps},
              {"m", config.m},       {"trials", config.trials}, {"seed", config.seed},
              {"mode", config.mode}, {"queries", config.queries}};
  cfg["T"] = config.T ? json(*config.T) : json(nullptr);
  cfg["graph_file"] = config.graph_file;
  summary["config"] = std::move(cfg);
  summary["seeds"] = seeds;
  if (!summary.contains("stats")) summary["stats"] = json::object();
  out.summary = std::move(summary);
  out.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (!config.out.empty()) {
    const std::string stem = output_stem(config.out);
    write_file(stem + ".csv", out.csv);
    write_file(stem + ".json", out.summary.dump(2) + "\n");
    write_file(stem + ".timing.json",
               json{{"wall_seconds", out.wall_seconds}, {"workers", config.workers}}.dump(2) +
                   "\n");
  }
  return out;
}

std::string ComparisonReport::text() const {
  std::ostringstream out;
  out << "a = " << experiment_a << ", b = " << experiment_b << '\n';
  for (const ComparisonRow& r : rows) {
    out << r.key << ": a " << num(r.a.mean) << " [" << num(r.a.lo3()) << ", " << num(r.a.hi3())
        << "], b " << num(r.b.mean) << " [" << num(r.b.lo3()) << ", " << num(r.b.hi3())
        << "], delta " << num(r.delta) << ", " << (r.overlap ? "overlap" : "separated") << '\n';
  }
  return out.str();
}

json ComparisonReport::to_json() const {
  json out = {{"a", experiment_a}, {"b", experiment_b}, {"rows", json::array()}};
  for (const ComparisonRow& r : rows) {
    out["rows"].push_back({{"key", r.key}, {"a", stat_json(r.a)}, {"b", stat_json(r.b)},
                           {"delta", r.delta}, {"overlap", r.overlap}});
  }
  return out;
}

ComparisonReport compare_summary(const json& a, const json& b) {
  const std::string ea = a.value("experiment", "");
  const std::string eb = b.value("experiment", "");
  auto size_pair = [](const std::string& e) { return e == "greedy" || e == "lookahead"; };
  if (ea.empty() || eb.empty()) throw UsageError("compare: summary without an experiment field");
  if (ea != eb && !(size_pair(ea) && size_pair(eb))) {
    throw UsageError("compare: mismatched experiments '" + ea + "' and '" + eb + "'");
  }
  for (const char* field : {"n", "p"}) {
    if (a.at("config").at(field) != b.at("config").at(field)) {
      throw UsageError(std::string("compare: mismatched ") + field);
    }
  }
  ComparisonReport report;
  report.experiment_a = ea;
  report.experiment_b = eb;
  const json& sa = a.at("stats");
  const json& sb = b.at("stats");
  for (auto it = sa.begin(); it != sa.end(); ++it) {
    if (!sb.contains(it.key())) continue;
    ComparisonRow row;
    row.key = it.key();
    row.a = stat_from(it.value());
    row.b = stat_from(sb.at(it.key()));
    row.delta = row.b.mean - row.a.mean;
    row.overlap = row.a.lo3() <= row.b.hi3() && row.b.lo3() <= row.a.hi3();
    report.rows.push_back(row);
  }
  return report;
}

CsvValidation validate_csv(const std::string& text) {
  CsvValidation v;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind(kCsvMagic, 0) != 0) {
    v.problems.push_back("missing '" + std::string(kCsvMagic) + "' schema line");
    return v;
  }
  std::map<std::string, std::string> tags;
  for (const std::string& part : split(line, ' ')) {
    const auto eq = part.find('=');
    if (eq != std::string::npos) tags[part.substr(0, eq)] = part.substr(eq + 1);
  }
  if (tags["schema"] != std::to_string(kCsvSchemaVersion)) {
    v.problems.push_back("unsupported schema '" + tags["schema"] + "'");
    return v;
  }
  v.experiment = tags["experiment"];
  const auto cols = csv_columns().find(v.experiment);
  if (cols == csv_columns().end()) {
    v.problems.push_back("unknown experiment '" + v.experiment + "'");
    return v;
  }
  const auto& header = cols->second;
  if (!std::getline(in, line) || split(line, ',') != header) {
    v.problems.push_back("header does not match the " + v.experiment + " schema");
    return v;
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ++v.rows;
    const auto cells = split(line, ',');
    const std::string where = "row " + std::to_string(v.rows) + ": ";
    if (cells.size() != header.size()) {
      v.problems.push_back(where + "expected " + std::to_string(header.size()) + " fields");
      continue;
    }
    std::map<std::string, double> f;
    bool numeric = true;
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == "sizes") continue;
      double x = 0.0;
      const auto res = std::from_chars(cells[i].data(), cells[i].data() + cells[i].size(), x);
      if (res.ec != std::errc() || res.ptr != cells[i].data() + cells[i].size()) {
        v.problems.push_back(where + "non-numeric " + header[i]);
        numeric = false;
        break;
      }
      f[header[i]] = x;
    }
    if (!numeric) continue;
    auto check = [&](bool ok, const std::string& what) {
      if (!ok) v.problems.push_back(where + what);
    };
    const std::string& e = v.experiment;
    if (e != "calibrate") check(f["trial"] == static_cast<double>(v.rows - 1), "trial index out of sequence");
    if (e == "greedy") {
      check(f["size"] >= 1, "empty greedy set");
      check(f["budget"] == 0, "greedy budget must be 0");
    } else if (e == "lookahead") {
      check(f["budget"] <= f["budget_bound"], "budget above |J||I_T| + C(|J|,2)");
      check(f["j_size"] <= f["search_size"], "J larger than R");
      check(f["size"] == f["prefix_size"] + f["j_size"], "size != |I_T| + |J|");
    } else if (e == "instability") {
      InstabilityRecord r;
      r.edge_g1 = f["edge_g1"] != 0;
      r.edge_g2 = f["edge_g2"] != 0;
      r.in_i1 = f["in_i1"] != 0;
      r.in_i2 = f["in_i2"] != 0;
      r.size1 = static_cast<std::uint64_t>(f["size1"]);
      r.size2 = static_cast<std::uint64_t>(f["size2"]);
      r.symmetric_difference = static_cast<std::uint64_t>(f["symmetric_difference"]);
      r.neighbors_in_i1 = static_cast<std::uint64_t>(f["neighbors_in_i1"]);
      const std::string why = instability_violation(r);
      check(why.empty(), why);
      check((f["flip"] != 0) == r.flip(), "flip flag inconsistent");
    } else if (e == "ogp-enum") {
      check(f["X"] == f["Y"] + f["Z"], "X != Y + Z");
    } else if (e == "ogp-montecarlo") {
      check(f["tau"] >= 1, "tau must be >= 1");
      check(f["success"] == 0 || f["max_size"] >= f["size_floor"], "success below size floor");
    } else if (e == "mis") {
      check(f["alpha"] >= (f["n"] > 0 ? 1 : 0) && f["alpha"] <= f["n"], "alpha out of range");
    } else if (e == "calibrate") {
      check(f["N"] == static_cast<double>(ceil_snap(f["gamma"] * f["L"])), "N != ceil(gamma L)");
    }
  }
  return v;
}

EdgeList read_edge_list(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("graph: cannot open " + path);
  EdgeList list;
  bool have_n = false;
  std::string line;
  std::uint64_t line_no = 0;
  while (std::getline(f, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream in(line);
    long long a = 0, b = 0;
    if (!(in >> a)) continue;
    auto bad = [&](const std::string& why) {
      throw UsageError("graph: " + path + ":" + std::to_string(line_no) + ": " + why);
    };
    if (!have_n) {
      if (a < 0 || a > 0xffffffffLL) bad("vertex count out of range");
      list.n = static_cast<std::uint32_t>(a);
      have_n = true;
      continue;
    }
    if (!(in >> b)) bad("expected 'u v'");
    if (a < 0 || b < 0 || a >= list.n || b >= list.n) bad("vertex out of range");
    if (a == b) bad("self-loop");
    list.edges.emplace_back(static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b));
  }
  if (!have_n) throw UsageError("graph: " + path + " has no vertex count line");
  return list;
}

double refined_alpha_formula(double r, double p) {
  const double lb_r = log_base_b(r, p);
  return 2.0 * lb_r - 2.0 * log_base_b(log_base_b(r * p, p), p) +
         2.0 * log_base_b(std::exp(1.0) / 2.0, p) + 1.0 - 1.0 / p;
}

}  // namespace isetlab
