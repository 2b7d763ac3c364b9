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

#ifndef SEMLINK_TASK_H_
#define SEMLINK_TASK_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "semlink/temporal_graph.h"

namespace semlink {

// A link-forecasting benchmark: which pairs unconnected at t0, with both
// endpoint degrees <= degree_cutoff, reach min_multiplicity temporal edges
// by t1.
struct TaskSpec {
  Day t0_day = 0;
  Day t1_day = 1;
  std::optional<std::uint32_t> degree_cutoff;  // nullopt: unbounded
  std::uint32_t min_multiplicity = 1;
  std::optional<std::size_t> num_samples;  // nullopt: every eligible pair
  std::uint64_t seed = 0;

  void Validate() const;
  bool Eligible(std::uint32_t degree) const {
    return !degree_cutoff || degree <= *degree_cutoff;
  }

  friend bool operator==(const TaskSpec&, const TaskSpec&) = default;
};

struct TaskInstance {
  TaskSpec spec;
  std::vector<NodePair> pairs;
  std::vector<std::uint8_t> labels;

  std::size_t num_positive() const;
};

// Number of unordered pairs that are unconnected at t0 with both endpoints
// passing the degree filter.
std::uint64_t CountEligiblePairs(const Snapshot& t0, const TaskSpec& spec);

// Uniform sampling without replacement over eligible pairs (or exhaustive
// enumeration in (u, v) order when spec.num_samples is unset), labelled from
// the t1 snapshot. Throws Error(kInsufficientData) if fewer eligible pairs
// exist than requested.
TaskInstance SamplePairs(const TemporalGraph& graph, const TaskSpec& spec);

// label_i = [multiplicity_t1(pair_i) >= min_multiplicity].
std::vector<std::uint8_t> LabelMultiplicity(const Snapshot& t1,
                                            std::span<const NodePair> pairs,
                                            std::uint32_t min_multiplicity,
                                            unsigned threads = 1);

// Exactly size/2 positives and size/2 negatives, shuffled. Positives are
// found by scanning edges in (t0, t1]. `size` must be even. spec.num_samples
// and spec.seed are ignored in favour of `size` and `seed`.
TaskInstance BalancedTrainingSet(const TemporalGraph& graph,
                                 const TaskSpec& spec, std::size_t size,
                                 std::uint64_t seed);

// Task file: one header line "# task <json spec>", then "u\tv\tlabel" rows.
void WriteTask(const TaskInstance& task, std::ostream& out);
void WriteTaskFile(const TaskInstance& task, const std::filesystem::path& path);
TaskInstance ReadTask(std::istream& in);
TaskInstance ReadTaskFile(const std::filesystem::path& path);

}  // namespace semlink

#endif  // SEMLINK_TASK_H_
