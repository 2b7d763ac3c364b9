// Copyright 2026 The Semlink Authors
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

#ifndef SEMLINK_INGEST_H_
#define SEMLINK_INGEST_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "semlink/temporal_graph.h"

namespace semlink {

// Edge-list text format:
//
//   num_nodes=<N>
//   <u>\t<v>\t<day>
//   ...
//
// Blank lines and lines starting with '#' are skipped on read. Line numbers
// in ParseError are 1-based and count every physical line.
TemporalGraph ReadEdgeList(std::istream& in);
TemporalGraph ReadEdgeFile(const std::filesystem::path& path);

// Writes edges in stored order.
void WriteEdgeList(const TemporalGraph& graph, std::ostream& out);
void WriteEdgeFile(const TemporalGraph& graph, const std::filesystem::path& path);

struct SyntheticConfig {
  std::size_t num_nodes = 1000;
  std::size_t edges_per_new_node = 2;  // m
  std::size_t intra_step_edges = 0;
  Day days_per_step = 1;
  std::uint64_t seed = 0;

  // Throws Error(kInvalidArgument) describing the first violated constraint.
  void Validate() const;
};

// Preferential-attachment growth. Starts from an (m+1)-clique at day 0;
// step s adds node m+s on day s * days_per_step with m distinct targets
// drawn with probability proportional to degree + 1, plus
// `intra_step_edges` new pairs among existing nodes (both endpoints drawn
// the same way; already-adjacent draws are retried a bounded number of
// times, then skipped).
TemporalGraph GenerateSynthetic(const SyntheticConfig& config);

}  // namespace semlink

#endif  // SEMLINK_INGEST_H_
