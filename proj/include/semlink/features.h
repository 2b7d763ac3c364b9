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

#ifndef SEMLINK_FEATURES_H_
#define SEMLINK_FEATURES_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "semlink/temporal_graph.h"

namespace semlink {

// ---------------------------------------------------------------------------
// Pair similarity
// ---------------------------------------------------------------------------

// Neighborhood-overlap scores of a node pair in one snapshot. With
// I = |N(u) & N(v)| and k the degree: ratios whose denominator is zero are 0,
// and Adamic-Adar skips common neighbors of degree 1.
struct PairSimilarity {
  double cn = 0;               // I
  double jaccard = 0;          // I / |N(u) | N(v)|
  double dice = 0;             // 2I / (k_u + k_v)
  double simpson = 0;          // I / min(k_u, k_v)
  double cosine = 0;           // I / sqrt(k_u k_v)
  double geometric = 0;        // I^2 / (k_u k_v)
  double adamic_adar = 0;      // sum over z in I of 1 / ln k_z
  double resource_alloc = 0;   // sum over z in I of 1 / k_z
  double pa_product = 0;       // k_u k_v
  double pa_sum = 0;           // k_u + k_v
  double total_neighbors = 0;  // |N(u) | N(v)|

  static constexpr std::size_t kSize = 11;
  static const std::array<std::string_view, kSize>& Names();
  std::array<double, kSize> ToArray() const;
};

// Throws Error(kOutOfRange) for ids outside the snapshot and
// Error(kInvalidArgument) when u == v.
PairSimilarity PairSimilarityFeatures(const Snapshot& snapshot, NodeId u,
                                      NodeId v);

std::uint32_t CommonNeighbors(const Snapshot& snapshot, NodeId u, NodeId v);

// ---------------------------------------------------------------------------
// Node statistics
// ---------------------------------------------------------------------------

// Power iteration on the undirected snapshot. Dangling mass is spread
// uniformly. Stops when the L1 change drops below `tolerance` or after 1000
// iterations.
std::vector<double> PageRank(const Snapshot& snapshot, double damping = 0.85,
                             double tolerance = 1e-10);

// triangles / (k (k - 1) / 2); 0 for k < 2.
double ClusteringCoefficient(const Snapshot& snapshot, NodeId node);
double AverageClustering(const Snapshot& snapshot);

// 0 for isolated nodes.
double MeanNeighborDegree(const Snapshot& snapshot, NodeId node);

// Nodes within distance 2, excluding the node itself.
std::size_t TwoHopNeighborhoodSize(const Snapshot& snapshot, NodeId node);

// Per-node base statistics of one snapshot. Nodes without edges get zero in
// every column, including PageRank.
struct NodeStatsTable {
  static constexpr std::size_t kNumStats = 4;
  static const std::array<std::string_view, kNumStats>& Names();

  std::vector<double> degree;
  std::vector<double> clustering;
  std::vector<double> pagerank;
  std::vector<double> mean_neighbor_degree;

  std::array<double, kNumStats> Get(NodeId node) const {
    return {degree[node], clustering[node], pagerank[node],
            mean_neighbor_degree[node]};
  }
};

NodeStatsTable ComputeNodeStats(const Snapshot& snapshot, double damping,
                                double tolerance, unsigned threads = 1);

// Given a series ordered newest first, returns {f0 - f1} for two values and
// {f0 - f1, f0 - 2 f1 + f2} for three or more; empty otherwise.
std::vector<double> TimeDifferences(std::span<const double> newest_first);

// Node feature layout over snapshots s0 (newest) .. s{k-1}: the four base
// statistics at every snapshot (stat-major), followed by their first
// differences (k >= 2) and second differences (k >= 3).
std::vector<double> NodeFeatureSeries(std::span<const NodeStatsTable> tables,
                                      NodeId node);
std::vector<std::string> NodeFeatureSeriesNames(std::size_t num_snapshots,
                                                std::string_view prefix);

// Convenience overload that builds the snapshots and statistics.
std::vector<double> NodeFeatureSeries(const TemporalGraph& graph, NodeId node,
                                      std::span<const Day> snapshot_days,
                                      double damping = 0.85,
                                      double tolerance = 1e-10);

// ---------------------------------------------------------------------------
// Fixed baseline features
// ---------------------------------------------------------------------------

inline constexpr Day kDaysPerYear = 365;

// Over snapshots {t0, t0 - 365, t0 - 730}: degree(u), degree(v) per snapshot
// (6 values), two-hop neighborhood size of u and of v per snapshot (6), and
// common neighbors per snapshot (3).
std::array<double, 15> Baseline15Features(const TemporalGraph& graph, NodeId u,
                                          NodeId v, Day t0);
std::array<double, 15> Baseline15Features(std::span<const Snapshot> snapshots,
                                          NodeId u, NodeId v);
std::vector<std::string> Baseline15Names();

// ---------------------------------------------------------------------------
// Transforms
// ---------------------------------------------------------------------------

double YeoJohnson(double x, double lambda);
std::vector<double> YeoJohnson(std::span<const double> values, double lambda);

// Grid search over lambda in {-2.0, -1.9, ..., 2.0} maximizing the Gaussian
// profile log-likelihood. Constant input returns 1 (identity). Throws
// Error(kInvalidArgument) on empty input.
double FitYeoJohnsonLambda(std::span<const double> values);

// ---------------------------------------------------------------------------
// Cold start
// ---------------------------------------------------------------------------

struct Imputation {
  std::vector<double> values;
  std::size_t num_born = 0;  // nodes averaged
  bool fallback = false;     // no births in window; values are zeros
};

// Average of `extract(node)` over nodes whose first edge falls in
// (t0 - window, t0].
Imputation ImputeUnseen(const TemporalGraph& graph, Day t0, Day window,
                        std::size_t dim,
                        const std::function<std::vector<double>(NodeId)>& extract);

// ---------------------------------------------------------------------------
// Feature matrices
// ---------------------------------------------------------------------------

enum class FeatureSet { kBaseline15, kPairSim, kExtended };

std::string_view FeatureSetName(FeatureSet set);
std::optional<FeatureSet> ParseFeatureSet(std::string_view name);

struct FeatureConfig {
  std::vector<Day> snapshot_days;  // strictly decreasing, first is t0
  FeatureSet set = FeatureSet::kBaseline15;
  double damping = 0.85;
  double tolerance = 1e-10;
  bool yeo_johnson = false;
  // Nodes with degree 0 at t0 get node-level features imputed from nodes
  // born in (t0 - window, t0]. Disabled when unset.
  std::optional<Day> impute_window = kDaysPerYear;

  // t0, t0 - 365, t0 - 730.
  static FeatureConfig Default(FeatureSet set, Day t0);
  void Validate() const;
  Day t0() const { return snapshot_days.front(); }
};

inline constexpr int kFeatureFormatVersion = 1;

// Everything needed to rebuild a matrix's columns for a different t0.
struct FeatureSchema {
  FeatureSet set = FeatureSet::kBaseline15;
  std::vector<Day> snapshot_offsets;  // t0 - day, ascending from 0
  std::optional<Day> impute_window;
  double damping = 0.85;
  double tolerance = 1e-10;
  std::vector<std::string> columns;
  std::vector<double> yeo_johnson_lambdas;  // per column; empty if untransformed

  // Config reproducing this schema at `t0` (transform applied separately).
  FeatureConfig ConfigAt(Day t0) const;

  friend bool operator==(const FeatureSchema&, const FeatureSchema&) = default;
};

struct FeatureMatrix {
  FeatureSchema schema;
  std::vector<NodePair> pairs;
  std::vector<double> values;  // row-major, pairs.size() x columns

  std::size_t rows() const { return pairs.size(); }
  std::size_t cols() const { return schema.columns.size(); }
  std::span<const double> Row(std::size_t i) const {
    return {values.data() + i * cols(), cols()};
  }
  std::span<double> Row(std::size_t i) {
    return {values.data() + i * cols(), cols()};
  }
  std::vector<double> Column(std::size_t j) const;
  bool AllFinite() const;
};

struct FeatureBuildInfo {
  std::size_t imputed_nodes = 0;
  bool imputation_fallback = false;
};

// Rows are in the order of `pairs`; output is identical for any thread count.
FeatureMatrix BuildFeatureMatrix(const TemporalGraph& graph,
                                 std::span<const NodePair> pairs,
                                 const FeatureConfig& config,
                                 unsigned threads = 1,
                                 FeatureBuildInfo* info = nullptr);

// Builds the columns described by `schema` at `t0`, applying its stored
// Yeo-Johnson lambdas if any.
FeatureMatrix BuildFeatureMatrix(const TemporalGraph& graph,
                                 std::span<const NodePair> pairs,
                                 const FeatureSchema& schema, Day t0,
                                 unsigned threads = 1,
                                 FeatureBuildInfo* info = nullptr);

// Transforms every column; fits lambdas per column unless given.
void ApplyYeoJohnson(FeatureMatrix& matrix,
                     std::optional<std::span<const double>> lambdas = std::nullopt);

// CSV. Preamble comment lines:
//   # semlink-features version=1 set=<name> offsets=<o1>;<o2>;...
//       impute_window=<days|none> damping=<x> tolerance=<x>   (one line)
//   # yeo_johnson_lambdas=<l1>;<l2>;...                       (optional)
// then a header row "u,v,<columns...>" and one row per pair.
void WriteFeatureCsv(const FeatureMatrix& matrix, std::ostream& out);
void WriteFeatureCsvFile(const FeatureMatrix& matrix,
                         const std::filesystem::path& path);
FeatureMatrix ReadFeatureCsv(std::istream& in);
FeatureMatrix ReadFeatureCsvFile(const std::filesystem::path& path);

}  // namespace semlink

#endif  // SEMLINK_FEATURES_H_
