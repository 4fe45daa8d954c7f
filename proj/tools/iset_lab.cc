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

// iset-lab: command-line front end for the experiment batteries.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "isetlab/algorithms.h"
#include "isetlab/errors.h"
#include "isetlab/experiment.h"
#include "isetlab/graph.h"
#include "isetlab/transcript_io.h"

namespace {

using isetlab::ExperimentConfig;
using nlohmann::json;

constexpr int kExitUsage = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitBreach = 4;

void add_common(CLI::App* sub, ExperimentConfig& c, std::optional<unsigned>& workers) {
  sub->add_option("--n", c.n, "number of vertices");
  sub->add_option("--p", c.p, "edge probability");
  sub->add_option("--eps", c.eps, "epsilon");
  sub->add_option("--m", c.m, "number of correlated copies");
  sub->add_option("--trials", c.trials, "number of trials");
  sub->add_option("--seed", c.seed, "base seed");
  sub->add_option("--mode", c.mode, "lookahead parameter mode: practical | paper-exact");
  sub->add_option("--workers", workers, "worker threads (default $ISET_LAB_WORKERS or all cores)");
  sub->add_option("--out", c.out, "output stem: writes <out>.csv, <out>.json, <out>.timing.json");
}

void print_summary(const json& s) {
  std::cout << s.at("experiment").get<std::string>() << ": " << s.at("config").dump() << '\n';
  for (const auto& [key, st] : s.at("stats").items()) {
    std::cout << "  " << key << " = " << st.at("mean").get<double>() << " +/- "
              << st.at("se").get<double>() << " (n = " << st.at("count").get<std::uint64_t>()
              << ")\n";
  }
  if (s.contains("params")) std::cout << "  params " << s["params"].dump() << '\n';
  if (s.contains("counts")) std::cout << "  counts " << s["counts"].dump() << '\n';
  if (s.contains("formula")) std::cout << "  formula " << s["formula"].dump() << '\n';
  if (s.contains("calibration")) {
    for (const json& row : s["calibration"]) std::cout << "  " << row.dump() << '\n';
  }
}

json read_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw isetlab::UsageError("cannot open " + path);
  try {
    return json::parse(f);
  } catch (const json::exception& e) {
    throw isetlab::UsageError(path + ": " + e.what());
  }
}

std::string read_text(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw isetlab::UsageError("cannot open " + path);
  std::ostringstream out;
  out << f.rdbuf();
  return out.str();
}

int run(int argc, char** argv) {
  CLI::App app{"Online independent-set laboratory on G(n, p)"};
  app.require_subcommand(1);

  ExperimentConfig config;
  std::optional<unsigned> workers;
  for (const char* name : {"greedy", "lookahead", "instability", "ogp-enum", "ogp-montecarlo",
                           "mis", "calibrate"}) {
    CLI::App* sub = app.add_subcommand(name, std::string("run the ") + name + " battery");
    add_common(sub, config, workers);
    if (std::string(name) == "mis") {
      sub->add_option("--graph", config.graph_file, "edge-list file instead of G(n, p)");
    }
    if (std::string(name) == "ogp-enum") {
      sub->add_option("--queries", config.queries, "random future queries per round (0 = greedy)");
      sub->add_option("--T", config.T, "fixed family round (default: stopping time)");
    }
    sub->callback([&config, name] { config.experiment = isetlab::parse_experiment(name); });
  }

  std::string path_a, path_b;
  bool as_json = false;
  CLI::App* compare = app.add_subcommand("compare", "compare two summary JSON files");
  compare->add_option("a", path_a, "first summary")->required();
  compare->add_option("b", path_b, "second summary")->required();
  compare->add_flag("--json", as_json, "print the report as JSON");

  std::string csv_path;
  CLI::App* validate = app.add_subcommand("validate", "check a CSV against its schema");
  validate->add_option("csv", csv_path, "CSV file")->required();

  std::string algorithm = "greedy", jsonl_path;
  CLI::App* transcript = app.add_subcommand("transcript", "export one run as JSONL");
  add_common(transcript, config, workers);
  transcript->add_option("--algorithm", algorithm, "greedy | lookahead");
  CLI::App* replay = app.add_subcommand("replay", "replay a JSONL transcript on G(n, p, seed)");
  replay->add_option("transcript", jsonl_path, "JSONL file")->required();
  replay->add_option("--n", config.n, "number of vertices");
  replay->add_option("--p", config.p, "edge probability");
  replay->add_option("--seed", config.seed, "graph seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }
  config.workers = workers.value_or(isetlab::default_workers());

  if (compare->parsed()) {
    const auto report = isetlab::compare_summary(read_json(path_a), read_json(path_b));
    if (as_json) {
      std::cout << report.to_json().dump(2) << '\n';
    } else {
      std::cout << report.text();
    }
    return 0;
  }
  if (validate->parsed()) {
    const auto v = isetlab::validate_csv(read_text(csv_path));
    for (const std::string& problem : v.problems) std::cerr << csv_path << ": " << problem << '\n';
    std::cout << csv_path << ": " << v.experiment << ", " << v.rows << " rows, "
              << (v.ok() ? "ok" : "INVALID") << '\n';
    return v.ok() ? 0 : kExitBreach;
  }
  if (transcript->parsed()) {
    if (config.out.empty()) throw isetlab::UsageError("out: transcript needs --out");
    const isetlab::GnpSource g(static_cast<isetlab::Vertex>(config.n), config.p, config.seed);
    isetlab::Transcript tr = isetlab::begin_run(g, isetlab::TranscriptOptions{true});
    if (algorithm == "greedy") {
      isetlab::GreedyAlgorithm{}.run(tr);
    } else if (algorithm == "lookahead") {
      isetlab::LookaheadAlgorithm(
          isetlab::lookahead_params(config.n, config.p, config.eps,
                                    isetlab::parse_lookahead_mode(config.mode)))
          .run(tr);
    } else {
      throw isetlab::UsageError("algorithm: expected greedy or lookahead");
    }
    std::ofstream f(config.out);
    if (!f) throw isetlab::UsageError("out: cannot write " + config.out);
    isetlab::write_transcript_jsonl(tr, f);
    std::cout << "wrote " << tr.round() << " rounds to " << config.out << '\n';
    return 0;
  }
  if (replay->parsed()) {
    const isetlab::GnpSource g(static_cast<isetlab::Vertex>(config.n), config.p, config.seed);
    std::ifstream f(jsonl_path);
    if (!f) throw isetlab::UsageError("cannot open " + jsonl_path);
    const auto report = isetlab::replay_transcript_jsonl(g, f);
    std::cout << "replayed " << report.rounds << " rounds, " << report.events
              << " events; final size " << report.result.size() << ", budget "
              << report.result.budget << '\n';
    return 0;
  }

  const auto output = isetlab::run_experiment(config);
  print_summary(output.summary);
  std::cout << "  wall " << output.wall_seconds << " s, " << config.workers << " workers\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const isetlab::InfeasibleParams& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const isetlab::LimitExceeded& e) {
    std::cerr << "refused: " << e.what() << '\n';
    return kExitUsage;
  } catch (const isetlab::InvariantBreach& e) {
    std::cerr << "invariant breach: " << e.what() << '\n';
    return kExitBreach;
  } catch (const isetlab::ProtocolViolation& e) {
    std::cerr << "protocol violation: " << e.what() << '\n';
    return kExitBreach;
  } catch (const std::invalid_argument& e) {  // UsageError
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
