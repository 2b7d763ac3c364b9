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

#ifndef SEMLINK_EVAL_H_
#define SEMLINK_EVAL_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "semlink/temporal_graph.h"

namespace semlink {

struct RocPoint {
  double fpr = 0;
  double tpr = 0;
};

struct RocResult {
  double auc = 0;
  // One point per distinct score threshold, from (0, 0) to (1, 1).
  std::vector<RocPoint> curve;
  std::size_t positives = 0;
  std::size_t negatives = 0;
};

// Mann-Whitney AUC with midranks for ties: the probability that a random
// positive outscores a random negative, ties counting one half. O(n log n).
// Throws Error(kInvalidArgument) unless both classes are present or when
// a score is NaN.
RocResult ComputeRoc(std::span<const double> scores,
                     std::span<const std::uint8_t> labels);

// Trapezoidal area under a ROC curve.
double TrapezoidArea(std::span<const RocPoint> curve);

void WriteRocCsv(const RocResult& roc, std::ostream& out);

struct CentralizationPoint {
  double node_fraction = 0;  // fraction of nodes at or below this degree rank
  double edge_fraction = 0;  // fraction of edge endpoints they contribute
};

// Cumulative endpoint share with nodes sorted by increasing degree, starting
// at (0, 0). Throws Error(kInsufficientData) on a snapshot without edges.
std::vector<CentralizationPoint> CentralizationCurve(const Snapshot& snapshot);

struct PowerLawFit {
  double alpha = 0;
  std::size_t tail_size = 0;
};

// alpha = 1 + n / sum(ln(k_i / (k_min - 0.5))) over samples >= k_min.
// Throws Error(kInsufficientData) with fewer than `min_tail` tail samples or
// when every tail sample equals the same value.
PowerLawFit FitPowerLaw(std::span<const double> samples, double k_min,
                        std::size_t min_tail = 10);

struct TopNode {
  NodeId node = 0;
  std::uint32_t degree = 0;
  std::string name;  // empty without vocabulary
};

struct CutoffReport {
  Day cutoff_day = 0;
  std::size_t num_nodes = 0;
  std::size_t num_adjacent_pairs = 0;
  std::size_t num_temporal_edges = 0;
  std::vector<std::size_t> component_sizes;  // components > 1 node
  std::size_t isolated = 0;
  std::map<std::uint32_t, std::size_t> degree_histogram;
  double average_clustering = 0;
  std::vector<TopNode> top_degree;  // up to 10, degree desc then id asc
  std::optional<PowerLawFit> power_law;  // unset when the tail is too small
  std::vector<CentralizationPoint> centralization;  // empty without edges
};

CutoffReport AnalyzeCutoff(const TemporalGraph& graph, Day cutoff,
                           double k_min = 5);
std::vector<CutoffReport> AnalysisReport(const TemporalGraph& graph,
                                         std::span<const Day> cutoffs,
                                         double k_min = 5);

// Writes components.csv, degree_histogram.csv, clustering.csv,
// top_degree.csv, power_law.csv, centralization.csv and summary.json.
void WriteAnalysisReport(std::span<const CutoffReport> reports,
                         const std::filesystem::path& out_dir);

}  // namespace semlink

#endif  // SEMLINK_EVAL_H_
