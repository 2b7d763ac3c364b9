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

#ifndef SEMLINK_TEMPORAL_GRAPH_H_
#define SEMLINK_TEMPORAL_GRAPH_H_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace semlink {

using NodeId = std::uint32_t;

// Days since 1990-01-01. Negative values encode earlier dates.
using Day = std::int32_t;

inline constexpr Day kEndOfTime = std::numeric_limits<Day>::max();
inline constexpr Day kBeginningOfTime = std::numeric_limits<Day>::min();

// Day number of a civil date (proleptic Gregorian).
Day DayFromCivil(int year, unsigned month, unsigned day);

// Cutoff representing "the state of the network in year Y": Y-12-31.
inline Day EndOfYear(int year) { return DayFromCivil(year, 12, 31); }

// Unordered node pair stored with u < v.
struct NodePair {
  NodeId u = 0;
  NodeId v = 0;

  static NodePair Canonical(NodeId a, NodeId b) {
    return a < b ? NodePair{a, b} : NodePair{b, a};
  }
  std::uint64_t Key() const {
    return (static_cast<std::uint64_t>(u) << 32) | v;
  }

  friend bool operator==(const NodePair&, const NodePair&) = default;
  friend auto operator<=>(const NodePair&, const NodePair&) = default;
};

// Edge record as read from input, before validation.
struct RawEdge {
  std::int64_t u = 0;
  std::int64_t v = 0;
  Day day = 0;
};

struct TemporalEdge {
  NodeId u = 0;
  NodeId v = 0;
  Day day = 0;

  friend bool operator==(const TemporalEdge&, const TemporalEdge&) = default;
};

// Day-stamped undirected multigraph. Edges are canonical (u < v) and sorted
// by day; within a day the input order is preserved. Immutable once built.
class TemporalGraph {
 public:
  TemporalGraph() = default;

  // Validates ids, canonicalizes endpoints, drops self-loops and sorts by
  // day. Throws RecordError naming the first out-of-range record.
  static TemporalGraph Build(std::span<const RawEdge> edges,
                             std::size_t num_nodes);

  std::size_t num_nodes() const { return num_nodes_; }
  std::span<const TemporalEdge> edges() const { return edges_; }
  std::size_t dropped_self_loops() const { return dropped_self_loops_; }

  // Index of the first edge with day > `day`.
  std::size_t EdgesUpTo(Day day) const;

  // Day of each node's first incident edge, or kEndOfTime if it has none.
  std::vector<Day> BirthDays() const;

  // Optional id -> concept string metadata. Never consulted by algorithms.
  const std::map<NodeId, std::string>& vocab() const { return vocab_; }
  void set_vocab(std::map<NodeId, std::string> vocab) {
    vocab_ = std::move(vocab);
  }

 private:
  std::size_t num_nodes_ = 0;
  std::vector<TemporalEdge> edges_;
  std::size_t dropped_self_loops_ = 0;
  std::map<NodeId, std::string> vocab_;
};

// Simple-graph view of a TemporalGraph at a cutoff day, stored as CSR with
// sorted neighbor lists and a parallel multiplicity array.
class Snapshot {
 public:
  Snapshot() = default;
  Snapshot(const TemporalGraph& graph, Day cutoff_day);

  Day cutoff_day() const { return cutoff_day_; }
  std::size_t num_nodes() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t num_adjacent_pairs() const { return neighbors_.size() / 2; }
  std::size_t num_temporal_edges() const { return num_temporal_edges_; }

  std::span<const NodeId> Neighbors(NodeId node) const {
    return {neighbors_.data() + offsets_[node],
            neighbors_.data() + offsets_[node + 1]};
  }
  std::uint32_t Degree(NodeId node) const {
    return static_cast<std::uint32_t>(offsets_[node + 1] - offsets_[node]);
  }
  std::vector<std::uint32_t> Degrees() const;

  bool Adjacent(NodeId a, NodeId b) const { return Multiplicity(a, b) > 0; }

  // Number of temporal edges between a and b with day <= cutoff.
  std::uint32_t Multiplicity(NodeId a, NodeId b) const;

 private:
  Day cutoff_day_ = 0;
  std::size_t num_temporal_edges_ = 0;
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> neighbors_;
  std::vector<std::uint32_t> multiplicity_;
};

struct ComponentSummary {
  // Sizes of components with more than one node, descending.
  std::vector<std::size_t> sizes;
  std::size_t isolated = 0;
};

ComponentSummary ConnectedComponents(const Snapshot& snapshot);

// degree -> number of nodes with that degree.
std::map<std::uint32_t, std::size_t> DegreeHistogram(const Snapshot& snapshot);

}  // namespace semlink

#endif  // SEMLINK_TEMPORAL_GRAPH_H_
