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

#ifndef ISETLAB_TRANSCRIPT_IO_H_
#define ISETLAB_TRANSCRIPT_IO_H_

#include <iosfwd>
#include <string>

#include "isetlab/graph.h"
#include "isetlab/online.h"

namespace isetlab {

inline constexpr int kTranscriptSchemaVersion = 1;

// One JSON object per line: begin, then select / query / decide per round,
// then finalize. The transcript must have been recorded with
// TranscriptOptions::record_events and be complete.
void write_transcript_jsonl(const Transcript& transcript, std::ostream& out);

struct ReplayReport {
  std::uint32_t rounds = 0;
  std::uint64_t events = 0;
  RunResult result;
};

// Drives a fresh run on `graph` with the recorded actions and checks every
// recorded reveal, set size, budget and the final summary. Throws
// UsageError on malformed input and InvariantBreach on any mismatch.
ReplayReport replay_transcript_jsonl(const EdgeOracle& graph, std::istream& in);

}  // namespace isetlab

#endif  // ISETLAB_TRANSCRIPT_IO_H_
