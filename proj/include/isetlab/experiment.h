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

#ifndef ISETLAB_EXPERIMENT_H_
#define ISETLAB_EXPERIMENT_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace isetlab {

inline constexpr int kCsvSchemaVersion = 1;
inline constexpr int kSummarySchemaVersion = 1;
inline constexpr const char* kWorkersEnv = "ISET_LAB_WORKERS";

enum class ExperimentKind {
  kGreedy,
  kLookahead,
  kInstability,
  kOgpEnum,
  kOgpMonteCarlo,
  kMis,
  kCalibrate,
};

std::string to_string(ExperimentKind kind);
// Throws UsageError naming the field.
ExperimentKind parse_experiment(const std::string& name);

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::kGreedy;
  std::uint64_t n = 1000;
  double p = 0.5;
  double eps = 0.5;
  std::uint32_t m = 2;
  std::uint64_t trials = 10;
  std::uint64_t seed = 1;
  std::string mode = "practical";  // lookahead: practical | paper-exact
  std::string out;                 // output stem; empty = no files
  unsigned workers = 1;
  // mis: read this edge list instead of sampling G(n, p).
  std::string graph_file;
  // ogp-enum: random future queries per round of the base algorithm
  // (0 = plain greedy) and an optional fixed family round.
  std::uint32_t queries = 0;
  std::optional<std::uint32_t> T;
};

// Range checks on every field the named experiment reads. Throws
// UsageError naming the offending field.
void validate_config(const ExperimentConfig& config);

// Workers from ISET_LAB_WORKERS if set and positive, else the hardware
// concurrency (at least 1).
unsigned default_workers();

struct Stat {
  std::uint64_t count = 0;
  double mean = 0.0;
  double se = 0.0;  // sample sd / sqrt(count)
  double lo3() const { return mean - 3.0 * se; }
  double hi3() const { return mean + 3.0 * se; }
};

Stat summarize(std::span<const double> values);
// Bernoulli frequency with binomial standard error sqrt(q (1-q) / k).
Stat frequency(std::uint64_t hits, std::uint64_t count);

// Calls fn(i) for i in [0, count) on `workers` threads. Results are the
// caller's business (write into slot i). The exception from the lowest
// failing index is rethrown after all workers stop.
void parallel_for(std::uint64_t count, unsigned workers,
                  const std::function<void(std::uint64_t)>& fn);

struct ExperimentOutput {
  std::string csv;       // header + one row per trial
  nlohmann::json summary;
  double wall_seconds = 0.0;
};

// Runs the battery. Output is a pure function of the config minus
// `workers` and `out`. Writes <out>.csv, <out>.json and
// <out>.timing.json when `out` is set.
ExperimentOutput run_experiment(const ExperimentConfig& config);

// Side-by-side statistics of two summaries. Requires equal n and p and
// either the same experiment or a greedy / lookahead pair; UsageError
// otherwise.
struct ComparisonRow {
  std::string key;
  Stat a;
  Stat b;
  double delta = 0.0;  // b.mean - a.mean
  bool overlap = true; // 3-sigma intervals intersect
};
struct ComparisonReport {
  std::string experiment_a;
  std::string experiment_b;
  std::vector<ComparisonRow> rows;
  std::string text() const;
  nlohmann::json to_json() const;
};
ComparisonReport compare_summary(const nlohmann::json& a, const nlohmann::json& b);

// Parses a CSV produced by run_experiment and checks header and per-row
// invariants. Returns the problems found (empty when clean).
struct CsvValidation {
  std::string experiment;
  std::uint64_t rows = 0;
  std::vector<std::string> problems;
  bool ok() const { return problems.empty(); }
};
CsvValidation validate_csv(const std::string& text);

// Edge list: first non-comment line "n", then one "u v" pair per line,
// 0-based. '#' starts a comment.
struct EdgeList {
  std::uint32_t n = 0;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
};
EdgeList read_edge_list(const std::string& path);

// Reference scale 2 log_b(r) - 2 log_b log_b(rp) + 2 log_b(e/2) + 1 - 1/p
// for the independence number of G(r, p).
double refined_alpha_formula(double r, double p);

}  // namespace isetlab

#endif  // ISETLAB_EXPERIMENT_H_
