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

#include "isetlab/transcript_io.h"

#include <istream>
#include <ostream>
#include <vector>

#include <nlohmann/json.hpp>

#include "isetlab/errors.h"

namespace isetlab {
namespace {

using nlohmann::json;

json pair_json(PairKey pair) { return json::array({pair.u, pair.v}); }

PairKey pair_from(const json& j) {
  if (!j.is_array() || j.size() != 2) throw UsageError("transcript: malformed pair");
  return PairKey::of(j[0].get<Vertex>(), j[1].get<Vertex>());
}

void expect(bool ok, std::uint64_t line, const std::string& what) {
  if (!ok) {
    throw InvariantBreach("transcript replay, line " + std::to_string(line) + ": " + what);
  }
}

}  // namespace

void write_transcript_jsonl(const Transcript& transcript, std::ostream& out) {
  if (!transcript.complete()) throw UsageError("transcript export needs a complete run");
  if (transcript.events().empty() && transcript.n() != 0) {
    throw UsageError("transcript export needs record_events");
  }
  out << json{{"event", "begin"}, {"schema", kTranscriptSchemaVersion},
              {"n", transcript.n()}}.dump()
      << '\n';
  for (const TranscriptEvent& e : transcript.events()) {
    json line{{"round", e.round}, {"vertex", e.vertex}};
    switch (e.kind) {
      case TranscriptEvent::Kind::kSelect: {
        line["event"] = "select";
        line["new_pairs"] = e.reveals.size();
        json present = json::array();
        for (const Reveal& r : e.reveals) {
          if (r.status == EdgeStatus::kPresent) {
            present.push_back(r.pair.u == e.vertex ? r.pair.v : r.pair.u);
          }
        }
        line["present"] = std::move(present);
        break;
      }
      case TranscriptEvent::Kind::kQuery: {
        line["event"] = "query";
        json submitted = json::array();
        for (PairKey pair : e.submitted) submitted.push_back(pair_json(pair));
        json reveals = json::array();
        for (const Reveal& r : e.reveals) {
          reveals.push_back({r.pair.u, r.pair.v, r.status == EdgeStatus::kPresent ? 1 : 0});
        }
        line["submitted"] = std::move(submitted);
        line["reveals"] = std::move(reveals);
        break;
      }
      case TranscriptEvent::Kind::kDecide:
        line["event"] = "decide";
        line["include"] = e.include;
        line["set_size"] = e.set_size;
        line["budget"] = e.budget;
        break;
    }
    out << line.dump() << '\n';
  }
  const RunResult result = transcript.finalize();
  out << json{{"event", "finalize"},
              {"size", result.size()},
              {"budget", result.budget},
              {"future_queries", result.future_queries},
              {"final_set", result.final_set}}
             .dump()
      << '\n';
}

ReplayReport replay_transcript_jsonl(const EdgeOracle& graph, std::istream& in) {
  Transcript transcript(graph, TranscriptOptions{true});
  ReplayReport report;
  std::string text;
  std::uint64_t line_no = 0;
  bool begun = false;
  bool finished = false;
  while (std::getline(in, text)) {
    ++line_no;
    if (text.empty()) continue;
    json line;
    try {
      line = json::parse(text);
    } catch (const json::exception& e) {
      throw UsageError("transcript line " + std::to_string(line_no) + ": " + e.what());
    }
    const std::string kind = line.value("event", "");
    ++report.events;
    if (!begun) {
      if (kind != "begin") throw UsageError("transcript must start with a begin event");
      if (line.value("schema", 0) != kTranscriptSchemaVersion) {
        throw UsageError("unsupported transcript schema " + line.value("schema", json()).dump());
      }
      expect(line.at("n").get<Vertex>() == graph.n(), line_no, "n differs from the graph");
      begun = true;
      continue;
    }
    expect(!finished, line_no, "event after finalize");
    if (kind == "select") {
      const Vertex v = line.at("vertex").get<Vertex>();
      const SelectReveal batch = transcript.select_vertex(v);
      expect(transcript.round() == line.at("round").get<std::uint32_t>(), line_no, "round number");
      expect(batch.size() == line.at("new_pairs").get<std::uint64_t>(), line_no,
             "newly revealed pair count");
      std::vector<Vertex> present;
      for (const Reveal& r : batch.materialize()) {
        if (r.status == EdgeStatus::kPresent) present.push_back(r.pair.u == v ? r.pair.v : r.pair.u);
      }
      expect(present == line.at("present").get<std::vector<Vertex>>(), line_no,
             "present partners");
    } else if (kind == "query") {
      std::vector<PairKey> submitted;
      for (const json& j : line.at("submitted")) submitted.push_back(pair_from(j));
      const std::vector<Reveal> fresh = transcript.query_future(submitted);
      const json& recorded = line.at("reveals");
      expect(fresh.size() == recorded.size(), line_no, "query reveal count");
      for (std::size_t i = 0; i < fresh.size(); ++i) {
        const json& r = recorded[i];
        expect(fresh[i].pair == PairKey::of(r.at(0).get<Vertex>(), r.at(1).get<Vertex>()) &&
                   (fresh[i].status == EdgeStatus::kPresent) == (r.at(2).get<int>() == 1),
               line_no, "query reveal " + std::to_string(i));
      }
    } else if (kind == "decide") {
      transcript.decide(line.at("include").get<bool>());
      const RoundRecord& record = transcript.rounds().back();
      expect(record.set_size == line.at("set_size").get<std::uint32_t>(), line_no, "set size");
      expect(record.budget == line.at("budget").get<std::uint64_t>(), line_no, "budget");
    } else if (kind == "finalize") {
      report.result = transcript.finalize();
      expect(report.result.size() == line.at("size").get<std::size_t>(), line_no, "final size");
      expect(report.result.budget == line.at("budget").get<std::uint64_t>(), line_no,
             "final budget");
      expect(report.result.future_queries == line.at("future_queries").get<std::uint64_t>(),
             line_no, "future query count");
      expect(report.result.final_set == line.at("final_set").get<std::vector<Vertex>>(), line_no,
             "final set");
      finished = true;
    } else {
      throw UsageError("transcript line " + std::to_string(line_no) + ": unknown event '" +
                       kind + "'");
    }
  }
  if (!finished) throw UsageError("transcript ended without a finalize event");
  report.rounds = transcript.round();
  return report;
}

}  // namespace isetlab
