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

#include "semlink/ingest.h"

#include <istream>
#include <ostream>
#include <string>
#include <unordered_set>
#include <vector>

#include "semlink/random.h"
#include "semlink/status.h"
#include "semlink/text_io.h"

namespace semlink {
namespace {

constexpr std::string_view kHeaderKey = "num_nodes=";
constexpr int kIntraRetries = 32;

}  // namespace

TemporalGraph ReadEdgeList(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::optional<std::uint64_t> num_nodes;
  std::vector<RawEdge> edges;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view text = Trim(line);
    if (text.empty() || text.front() == '#') continue;
    if (!num_nodes) {
      if (!text.starts_with(kHeaderKey)) {
        throw ParseError(line_no, "expected header 'num_nodes=<N>'");
      }
      num_nodes = ParseUint(text.substr(kHeaderKey.size()));
      if (!num_nodes) throw ParseError(line_no, "bad num_nodes value");
      continue;
    }
    auto fields = Split(text, '\t');
    if (fields.size() != 3) {
      throw ParseError(line_no, "expected 3 tab-separated fields, got " +
                                    std::to_string(fields.size()));
    }
    auto u = ParseInt(fields[0]);
    auto v = ParseInt(fields[1]);
    auto day = ParseInt(fields[2]);
    if (!u || !v || !day) throw ParseError(line_no, "non-integer field");
    if (*day < kBeginningOfTime || *day > kEndOfTime) {
      throw ParseError(line_no, "day out of range");
    }
    edges.push_back({*u, *v, static_cast<Day>(*day)});
  }
  if (in.bad()) throw Error(ErrorCode::kIo, "read failed");
  if (!num_nodes) throw ParseError(line_no + 1, "missing header 'num_nodes=<N>'");
  return TemporalGraph::Build(edges, *num_nodes);
}

TemporalGraph ReadEdgeFile(const std::filesystem::path& path) {
  auto in = OpenForRead(path);
  return ReadEdgeList(in);
}

void WriteEdgeList(const TemporalGraph& graph, std::ostream& out) {
  out << kHeaderKey << graph.num_nodes() << '\n';
  for (const TemporalEdge& e : graph.edges()) {
    out << e.u << '\t' << e.v << '\t' << e.day << '\n';
  }
}

void WriteEdgeFile(const TemporalGraph& graph,
                   const std::filesystem::path& path) {
  auto out = OpenForWrite(path);
  WriteEdgeList(graph, out);
  CheckWritten(out, path);
}

void SyntheticConfig::Validate() const {
  auto fail = [](const std::string& msg) {
    throw Error(ErrorCode::kInvalidArgument, "synthetic config: " + msg);
  };
  if (edges_per_new_node < 1) fail("edges_per_new_node must be >= 1");
  if (num_nodes < edges_per_new_node + 1) {
    fail("num_nodes must be >= edges_per_new_node + 1");
  }
  if (num_nodes > std::numeric_limits<NodeId>::max()) fail("num_nodes too large");
  if (days_per_step < 1) fail("days_per_step must be positive");
  const auto steps = static_cast<std::int64_t>(num_nodes - edges_per_new_node - 1);
  if (steps * days_per_step > kEndOfTime) fail("day range overflows");
}

TemporalGraph GenerateSynthetic(const SyntheticConfig& config) {
  config.Validate();
  const std::size_t m = config.edges_per_new_node;
  Rng rng(config.seed);

  // Each node appears once, plus once per incident edge, so a uniform draw
  // from `urn` selects a node with probability proportional to degree + 1.
  std::vector<NodeId> urn;
  urn.reserve(config.num_nodes * (1 + 2 * (m + config.intra_step_edges)));
  std::unordered_set<std::uint64_t> present;
  std::vector<RawEdge> edges;

  auto add_edge = [&](NodeId a, NodeId b, Day day) {
    present.insert(NodePair::Canonical(a, b).Key());
    urn.push_back(a);
    urn.push_back(b);
    edges.push_back({a, b, day});
  };

  for (NodeId i = 0; i <= m; ++i) urn.push_back(i);
  for (NodeId i = 0; i <= m; ++i) {
    for (NodeId j = i + 1; j <= m; ++j) add_edge(i, j, 0);
  }

  std::vector<NodeId> targets;
  for (std::size_t node = m + 1; node < config.num_nodes; ++node) {
    const auto step = static_cast<Day>(node - m);
    const Day day = step * config.days_per_step;

    for (std::size_t k = 0; k < config.intra_step_edges; ++k) {
      for (int attempt = 0; attempt < kIntraRetries; ++attempt) {
        NodeId a = urn[rng.Uniform(urn.size())];
        NodeId b = urn[rng.Uniform(urn.size())];
        if (a == b || present.contains(NodePair::Canonical(a, b).Key())) continue;
        add_edge(a, b, day);
        break;
      }
    }

    // Targets are drawn against the degrees at the start of this attachment
    // so that the m draws are exchangeable.
    const std::size_t urn_size = urn.size();
    targets.clear();
    while (targets.size() < m) {
      NodeId t = urn[rng.Uniform(urn_size)];
      if (std::find(targets.begin(), targets.end(), t) == targets.end()) {
        targets.push_back(t);
      }
    }
    const auto new_node = static_cast<NodeId>(node);
    urn.push_back(new_node);
    for (NodeId t : targets) add_edge(new_node, t, day);
  }
  return TemporalGraph::Build(edges, config.num_nodes);
}

}  // namespace semlink
