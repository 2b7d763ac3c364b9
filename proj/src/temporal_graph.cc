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

#include "semlink/temporal_graph.h"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <string>

#include "semlink/status.h"

namespace semlink {

Day DayFromCivil(int year, unsigned month, unsigned day) {
  using namespace std::chrono;
  const sys_days date = std::chrono::year{year} / std::chrono::month{month} /
                        std::chrono::day{day};
  const sys_days epoch = std::chrono::year{1990} / January / 1;
  return static_cast<Day>((date - epoch).count());
}

TemporalGraph TemporalGraph::Build(std::span<const RawEdge> edges,
                                   std::size_t num_nodes) {
  TemporalGraph g;
  g.num_nodes_ = num_nodes;
  g.edges_.reserve(edges.size());
  const auto n = static_cast<std::int64_t>(num_nodes);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const RawEdge& e = edges[i];
    if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n) {
      throw RecordError(i, "node id out of range (edge " +
                               std::to_string(e.u) + "-" +
                               std::to_string(e.v) + ", num_nodes=" +
                               std::to_string(num_nodes) + ")");
    }
    if (e.u == e.v) {
      ++g.dropped_self_loops_;
      continue;
    }
    const NodePair p = NodePair::Canonical(static_cast<NodeId>(e.u),
                                           static_cast<NodeId>(e.v));
    g.edges_.push_back({p.u, p.v, e.day});
  }
  std::stable_sort(g.edges_.begin(), g.edges_.end(),
                   [](const TemporalEdge& a, const TemporalEdge& b) {
                     return a.day < b.day;
                   });
  return g;
}

std::size_t TemporalGraph::EdgesUpTo(Day day) const {
  auto it = std::upper_bound(
      edges_.begin(), edges_.end(), day,
      [](Day d, const TemporalEdge& e) { return d < e.day; });
  return static_cast<std::size_t>(it - edges_.begin());
}

std::vector<Day> TemporalGraph::BirthDays() const {
  std::vector<Day> birth(num_nodes_, kEndOfTime);
  for (const TemporalEdge& e : edges_) {
    // Edges are day-sorted, so the first hit is the birth day.
    if (birth[e.u] == kEndOfTime) birth[e.u] = e.day;
    if (birth[e.v] == kEndOfTime) birth[e.v] = e.day;
  }
  return birth;
}

Snapshot::Snapshot(const TemporalGraph& graph, Day cutoff_day)
    : cutoff_day_(cutoff_day) {
  const std::size_t n = graph.num_nodes();
  const std::size_t end = graph.EdgesUpTo(cutoff_day);
  num_temporal_edges_ = end;
  auto edges = graph.edges().first(end);

  // Collapse the multigraph to (pair, count), then emit both directions.
  std::vector<std::uint64_t> keys;
  keys.reserve(end);
  for (const TemporalEdge& e : edges) keys.push_back(NodePair{e.u, e.v}.Key());
  std::sort(keys.begin(), keys.end());

  std::vector<std::size_t> degree(n, 0);
  std::vector<std::pair<NodePair, std::uint32_t>> pairs;
  for (std::size_t i = 0; i < keys.size();) {
    std::size_t j = i;
    while (j < keys.size() && keys[j] == keys[i]) ++j;
    NodePair p{static_cast<NodeId>(keys[i] >> 32),
               static_cast<NodeId>(keys[i] & 0xffffffffULL)};
    pairs.emplace_back(p, static_cast<std::uint32_t>(j - i));
    ++degree[p.u];
    ++degree[p.v];
    i = j;
  }

  offsets_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] = offsets_[i] + degree[i];
  neighbors_.resize(offsets_[n]);
  multiplicity_.resize(offsets_[n]);
  std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
  // Pairs are sorted by (u, v). Filling lower neighbors first, then higher
  // ones, leaves every list sorted.
  for (const auto& [p, m] : pairs) {
    neighbors_[cursor[p.v]] = p.u;
    multiplicity_[cursor[p.v]++] = m;
  }
  for (const auto& [p, m] : pairs) {
    neighbors_[cursor[p.u]] = p.v;
    multiplicity_[cursor[p.u]++] = m;
  }
}

std::vector<std::uint32_t> Snapshot::Degrees() const {
  std::vector<std::uint32_t> out(num_nodes());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = Degree(static_cast<NodeId>(i));
  }
  return out;
}

std::uint32_t Snapshot::Multiplicity(NodeId a, NodeId b) const {
  if (a == b || a >= num_nodes() || b >= num_nodes()) return 0;
  if (Degree(a) > Degree(b)) std::swap(a, b);
  auto nbrs = Neighbors(a);
  auto it = std::lower_bound(nbrs.begin(), nbrs.end(), b);
  if (it == nbrs.end() || *it != b) return 0;
  return multiplicity_[offsets_[a] + static_cast<std::size_t>(it - nbrs.begin())];
}

ComponentSummary ConnectedComponents(const Snapshot& snapshot) {
  const std::size_t n = snapshot.num_nodes();
  std::vector<NodeId> parent(n);
  std::iota(parent.begin(), parent.end(), NodeId{0});
  auto find = [&](NodeId x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v : snapshot.Neighbors(u)) {
      if (v < u) continue;
      NodeId ru = find(u), rv = find(v);
      if (ru != rv) parent[std::max(ru, rv)] = std::min(ru, rv);
    }
  }
  std::vector<std::size_t> size(n, 0);
  for (NodeId u = 0; u < n; ++u) ++size[find(u)];

  ComponentSummary out;
  for (NodeId u = 0; u < n; ++u) {
    if (size[u] == 1) {
      ++out.isolated;
    } else if (size[u] > 1) {
      out.sizes.push_back(size[u]);
    }
  }
  std::sort(out.sizes.begin(), out.sizes.end(), std::greater<>());
  return out;
}

std::map<std::uint32_t, std::size_t> DegreeHistogram(const Snapshot& snapshot) {
  std::map<std::uint32_t, std::size_t> hist;
  for (std::size_t i = 0; i < snapshot.num_nodes(); ++i) {
    ++hist[snapshot.Degree(static_cast<NodeId>(i))];
  }
  return hist;
}

}  // namespace semlink
