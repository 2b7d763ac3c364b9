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


#ifndef SEMLINK_TESTS_TEST_GRAPHS_H_
#define SEMLINK_TESTS_TEST_GRAPHS_H_

#include <vector>

#include "semlink/temporal_graph.h"

namespace semlink::testing {

// Nodes 0..4, edges (0,1),(0,2),(1,2),(2,3),(3,4), degrees [2,2,3,2,1].
inline std::vector<RawEdge> G1Edges(Day day = 0) {
  return {{0, 1, day}, {0, 2, day}, {1, 2, day}, {2, 3, day}, {3, 4, day}};
}

inline TemporalGraph G1(Day day = 0) {
  const std::vector<RawEdge> edges = G1Edges(day);
  return TemporalGraph::Build(edges, 5);
}

inline TemporalGraph Star(std::size_t n, Day day = 0) {
  std::vector<RawEdge> edges;
  for (std::size_t i = 1; i < n; ++i) {
    edges.push_back({0, static_cast<std::int64_t>(i), day});
  }
  return TemporalGraph::Build(edges, n);
}

}  // namespace semlink::testing

#endif  // SEMLINK_TESTS_TEST_GRAPHS_H_
