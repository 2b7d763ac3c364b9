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

#include "semlink/features.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <string>
#include <unordered_map>

#include "semlink/parallel.h"
#include "semlink/status.h"
#include "semlink/text_io.h"

namespace semlink {
namespace {

void CheckNode(const Snapshot& s, NodeId node) {
  if (node >= s.num_nodes()) {
    throw Error(ErrorCode::kOutOfRange,
                "node " + std::to_string(node) + " out of range (num_nodes=" +
                    std::to_string(s.num_nodes()) + ")");
  }
}

// Calls fn(z) for every z in both sorted lists.
template <typename Fn>
void ForEachCommon(std::span<const NodeId> a, std::span<const NodeId> b, Fn&& fn) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      fn(*i);
      ++i;
      ++j;
    }
  }
}

double SafeDiv(double num, double den) { return den == 0 ? 0.0 : num / den; }

std::string SnapshotSuffix(std::size_t i) { return "_s" + std::to_string(i); }

}  // namespace

// ---------------------------------------------------------------------------

const std::array<std::string_view, PairSimilarity::kSize>& PairSimilarity::Names() {
  static const std::array<std::string_view, kSize> names = {
      "cn",          "jaccard",        "dice",       "simpson",
      "cosine",      "geometric",      "adamic_adar", "resource_alloc",
      "pa_product",  "pa_sum",         "total_neighbors"};
  return names;
}

std::array<double, PairSimilarity::kSize> PairSimilarity::ToArray() const {
  return {cn,          jaccard,        dice,       simpson,
          cosine,      geometric,      adamic_adar, resource_alloc,
          pa_product,  pa_sum,         total_neighbors};
}

PairSimilarity PairSimilarityFeatures(const Snapshot& snapshot, NodeId u,
                                      NodeId v) {
  CheckNode(snapshot, u);
  CheckNode(snapshot, v);
  if (u == v) {
    throw Error(ErrorCode::kInvalidArgument, "pair features need u != v");
  }
  const double ku = snapshot.Degree(u);
  const double kv = snapshot.Degree(v);
  PairSimilarity f;
  ForEachCommon(snapshot.Neighbors(u), snapshot.Neighbors(v), [&](NodeId z) {
    const double kz = snapshot.Degree(z);
    f.cn += 1;
    f.resource_alloc += 1.0 / kz;
    if (kz > 1) f.adamic_adar += 1.0 / std::log(kz);
  });
  const double I = f.cn;
  f.total_neighbors = ku + kv - I;
  f.jaccard = SafeDiv(I, f.total_neighbors);
  f.dice = SafeDiv(2 * I, ku + kv);
  f.simpson = SafeDiv(I, std::min(ku, kv));
  f.cosine = SafeDiv(I, std::sqrt(ku * kv));
  f.geometric = SafeDiv(I * I, ku * kv);
  f.pa_product = ku * kv;
  f.pa_sum = ku + kv;
  return f;
}

std::uint32_t CommonNeighbors(const Snapshot& snapshot, NodeId u, NodeId v) {
  CheckNode(snapshot, u);
  CheckNode(snapshot, v);
  std::uint32_t count = 0;
  ForEachCommon(snapshot.Neighbors(u), snapshot.Neighbors(v),
                [&](NodeId) { ++count; });
  return count;
}

// ---------------------------------------------------------------------------

std::vector<double> PageRank(const Snapshot& snapshot, double damping,
                             double tolerance) {
  const std::size_t n = snapshot.num_nodes();
  if (n == 0) return {};
  const double inv_n = 1.0 / static_cast<double>(n);
  std::vector<double> rank(n, inv_n);
  std::vector<double> next(n);
  std::vector<double> share(n);
  for (int iter = 0; iter < 1000; ++iter) {
    double dangling = 0;
    for (NodeId i = 0; i < n; ++i) {
      const std::uint32_t k = snapshot.Degree(i);
      if (k == 0) {
        dangling += rank[i];
        share[i] = 0;
      } else {
        share[i] = rank[i] / k;
      }
    }
    const double base = (1.0 - damping) * inv_n + damping * dangling * inv_n;
    double change = 0;
    for (NodeId i = 0; i < n; ++i) {
      double sum = 0;
      for (NodeId j : snapshot.Neighbors(i)) sum += share[j];
      next[i] = base + damping * sum;
      change += std::abs(next[i] - rank[i]);
    }
    rank.swap(next);
    if (change < tolerance) break;
  }
  return rank;
}

double ClusteringCoefficient(const Snapshot& snapshot, NodeId node) {
  CheckNode(snapshot, node);
  const double k = snapshot.Degree(node);
  if (k < 2) return 0.0;
  auto nbrs = snapshot.Neighbors(node);
  std::size_t twice_triangles = 0;
  for (NodeId w : nbrs) {
    ForEachCommon(nbrs, snapshot.Neighbors(w), [&](NodeId) { ++twice_triangles; });
  }
  return static_cast<double>(twice_triangles) / (k * (k - 1));
}

double AverageClustering(const Snapshot& snapshot) {
  const std::size_t n = snapshot.num_nodes();
  if (n == 0) return 0.0;
  double sum = 0;
  for (NodeId i = 0; i < n; ++i) sum += ClusteringCoefficient(snapshot, i);
  return sum / static_cast<double>(n);
}

double MeanNeighborDegree(const Snapshot& snapshot, NodeId node) {
  CheckNode(snapshot, node);
  auto nbrs = snapshot.Neighbors(node);
  if (nbrs.empty()) return 0.0;
  double sum = 0;
  for (NodeId w : nbrs) sum += snapshot.Degree(w);
  return sum / static_cast<double>(nbrs.size());
}

std::size_t TwoHopNeighborhoodSize(const Snapshot& snapshot, NodeId node) {
  CheckNode(snapshot, node);
  std::vector<NodeId> reach;
  for (NodeId w : snapshot.Neighbors(node)) {
    reach.push_back(w);
    for (NodeId x : snapshot.Neighbors(w)) {
      if (x != node) reach.push_back(x);
    }
  }
  std::sort(reach.begin(), reach.end());
  return static_cast<std::size_t>(
      std::unique(reach.begin(), reach.end()) - reach.begin());
}

const std::array<std::string_view, NodeStatsTable::kNumStats>&
NodeStatsTable::Names() {
  static const std::array<std::string_view, kNumStats> names = {
      "degree", "clustering", "pagerank", "mean_nbr_degree"};
  return names;
}

NodeStatsTable ComputeNodeStats(const Snapshot& snapshot, double damping,
                                double tolerance, unsigned threads) {
  const std::size_t n = snapshot.num_nodes();
  NodeStatsTable t;
  t.degree.resize(n);
  t.clustering.resize(n);
  t.mean_neighbor_degree.resize(n);
  t.pagerank = PageRank(snapshot, damping, tolerance);
  ParallelFor(n, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto node = static_cast<NodeId>(i);
      t.degree[i] = snapshot.Degree(node);
      t.clustering[i] = ClusteringCoefficient(snapshot, node);
      t.mean_neighbor_degree[i] = MeanNeighborDegree(snapshot, node);
      if (t.degree[i] == 0) t.pagerank[i] = 0;
    }
  });
  return t;
}

std::vector<double> TimeDifferences(std::span<const double> f) {
  if (f.size() < 2) return {};
  if (f.size() == 2) return {f[0] - f[1]};
  return {f[0] - f[1], f[0] - 2 * f[1] + f[2]};
}

std::vector<double> NodeFeatureSeries(std::span<const NodeStatsTable> tables,
                                      NodeId node) {
  const std::size_t k = tables.size();
  constexpr std::size_t S = NodeStatsTable::kNumStats;
  std::array<std::vector<double>, S> series;
  for (const NodeStatsTable& t : tables) {
    auto values = t.Get(node);
    for (std::size_t s = 0; s < S; ++s) series[s].push_back(values[s]);
  }
  std::vector<double> out;
  for (std::size_t s = 0; s < S; ++s) {
    out.insert(out.end(), series[s].begin(), series[s].end());
  }
  std::array<std::vector<double>, S> diffs;
  for (std::size_t s = 0; s < S; ++s) diffs[s] = TimeDifferences(series[s]);
  const std::size_t orders = k >= 3 ? 2 : (k == 2 ? 1 : 0);
  for (std::size_t order = 0; order < orders; ++order) {
    for (std::size_t s = 0; s < S; ++s) out.push_back(diffs[s][order]);
  }
  return out;
}

std::vector<std::string> NodeFeatureSeriesNames(std::size_t num_snapshots,
                                                std::string_view prefix) {
  std::vector<std::string> names;
  const auto& stats = NodeStatsTable::Names();
  for (auto stat : stats) {
    for (std::size_t i = 0; i < num_snapshots; ++i) {
      names.push_back(std::string(prefix) + std::string(stat) + SnapshotSuffix(i));
    }
  }
  const std::size_t orders = num_snapshots >= 3 ? 2 : (num_snapshots == 2 ? 1 : 0);
  for (std::size_t order = 1; order <= orders; ++order) {
    for (auto stat : stats) {
      names.push_back(std::string(prefix) + std::string(stat) + "_d" +
                      std::to_string(order));
    }
  }
  return names;
}

std::vector<double> NodeFeatureSeries(const TemporalGraph& graph, NodeId node,
                                      std::span<const Day> snapshot_days,
                                      double damping, double tolerance) {
  std::vector<NodeStatsTable> tables;
  for (Day day : snapshot_days) {
    tables.push_back(ComputeNodeStats(Snapshot(graph, day), damping, tolerance));
  }
  if (node >= graph.num_nodes()) {
    throw Error(ErrorCode::kOutOfRange, "node " + std::to_string(node) + " out of range");
  }
  return NodeFeatureSeries(tables, node);
}

// ---------------------------------------------------------------------------

std::array<double, 15> Baseline15Features(std::span<const Snapshot> snapshots,
                                          NodeId u, NodeId v) {
  if (snapshots.size() != 3) {
    throw Error(ErrorCode::kInvalidArgument, "baseline15 needs 3 snapshots");
  }
  std::array<double, 15> out{};
  for (std::size_t i = 0; i < 3; ++i) {
    const Snapshot& s = snapshots[i];
    CheckNode(s, u);
    CheckNode(s, v);
    out[2 * i] = s.Degree(u);
    out[2 * i + 1] = s.Degree(v);
    out[6 + 2 * i] = static_cast<double>(TwoHopNeighborhoodSize(s, u));
    out[6 + 2 * i + 1] = static_cast<double>(TwoHopNeighborhoodSize(s, v));
    out[12 + i] = CommonNeighbors(s, u, v);
  }
  return out;
}

std::array<double, 15> Baseline15Features(const TemporalGraph& graph, NodeId u,
                                          NodeId v, Day t0) {
  const std::array<Snapshot, 3> snaps = {
      Snapshot(graph, t0), Snapshot(graph, t0 - kDaysPerYear),
      Snapshot(graph, t0 - 2 * kDaysPerYear)};
  return Baseline15Features(snaps, u, v);
}

std::vector<std::string> Baseline15Names() {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < 3; ++i) {
    names.push_back("deg_u" + SnapshotSuffix(i));
    names.push_back("deg_v" + SnapshotSuffix(i));
  }
  for (std::size_t i = 0; i < 3; ++i) {
    names.push_back("hop2_u" + SnapshotSuffix(i));
    names.push_back("hop2_v" + SnapshotSuffix(i));
  }
  for (std::size_t i = 0; i < 3; ++i) names.push_back("cn" + SnapshotSuffix(i));
  return names;
}

// ---------------------------------------------------------------------------

double YeoJohnson(double x, double lambda) {
  if (x >= 0) {
    if (lambda == 0) return std::log1p(x);
    return std::expm1(lambda * std::log1p(x)) / lambda;
  }
  if (lambda == 2) return -std::log1p(-x);
  const double p = 2 - lambda;
  return -std::expm1(p * std::log1p(-x)) / p;
}

std::vector<double> YeoJohnson(std::span<const double> values, double lambda) {
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = YeoJohnson(values[i], lambda);
  return out;
}

double FitYeoJohnsonLambda(std::span<const double> values) {
  if (values.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "yeo-johnson fit needs data");
  }
  if (std::all_of(values.begin(), values.end(),
                  [&](double x) { return x == values.front(); })) {
    return 1.0;
  }
  const auto n = static_cast<double>(values.size());
  double log_jacobian_base = 0;
  for (double x : values) log_jacobian_base += std::copysign(std::log1p(std::abs(x)), x);

  double best_lambda = 1.0;
  double best_ll = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 40; ++i) {
    const double lambda = (i - 20) / 10.0;
    double mean = 0;
    bool finite = true;
    std::vector<double> t(values.size());
    for (std::size_t j = 0; j < values.size(); ++j) {
      t[j] = YeoJohnson(values[j], lambda);
      finite = finite && std::isfinite(t[j]);
      mean += t[j];
    }
    if (!finite) continue;
    mean /= n;
    double var = 0;
    for (double y : t) var += (y - mean) * (y - mean);
    var /= n;
    if (!(var > 0)) continue;
    const double ll = -0.5 * n * std::log(var) + (lambda - 1) * log_jacobian_base;
    if (ll > best_ll) {
      best_ll = ll;
      best_lambda = lambda;
    }
  }
  return best_lambda;
}

// ---------------------------------------------------------------------------

Imputation ImputeUnseen(
    const TemporalGraph& graph, Day t0, Day window, std::size_t dim,
    const std::function<std::vector<double>(NodeId)>& extract) {
  Imputation out;
  out.values.assign(dim, 0.0);
  const std::vector<Day> birth = graph.BirthDays();
  const std::int64_t lo = static_cast<std::int64_t>(t0) - window;
  for (NodeId node = 0; node < birth.size(); ++node) {
    if (birth[node] == kEndOfTime) continue;
    if (birth[node] <= lo || birth[node] > t0) continue;
    std::vector<double> f = extract(node);
    if (f.size() != dim) {
      throw Error(ErrorCode::kInvalidArgument, "imputation: extractor size mismatch");
    }
    for (std::size_t i = 0; i < dim; ++i) out.values[i] += f[i];
    ++out.num_born;
  }
  if (out.num_born == 0) {
    out.fallback = true;
    return out;
  }
  for (double& x : out.values) x /= static_cast<double>(out.num_born);
  return out;
}

// ---------------------------------------------------------------------------

std::string_view FeatureSetName(FeatureSet set) {
  switch (set) {
    case FeatureSet::kBaseline15: return "baseline15";
    case FeatureSet::kPairSim: return "pairsim";
    case FeatureSet::kExtended: return "extended";
  }
  return "unknown";
}

std::optional<FeatureSet> ParseFeatureSet(std::string_view name) {
  for (FeatureSet s : {FeatureSet::kBaseline15, FeatureSet::kPairSim,
                       FeatureSet::kExtended}) {
    if (FeatureSetName(s) == name) return s;
  }
  return std::nullopt;
}

FeatureConfig FeatureConfig::Default(FeatureSet set, Day t0) {
  FeatureConfig c;
  c.set = set;
  c.snapshot_days = {t0, t0 - kDaysPerYear, t0 - 2 * kDaysPerYear};
  return c;
}

void FeatureConfig::Validate() const {
  auto fail = [](const std::string& msg) {
    throw Error(ErrorCode::kInvalidArgument, "feature config: " + msg);
  };
  if (snapshot_days.empty()) fail("need at least one snapshot day");
  for (std::size_t i = 1; i < snapshot_days.size(); ++i) {
    if (snapshot_days[i] >= snapshot_days[i - 1]) {
      fail("snapshot days must be strictly decreasing");
    }
  }
  if (set == FeatureSet::kBaseline15 && snapshot_days.size() != 3) {
    fail("baseline15 uses exactly 3 snapshots");
  }
  if (!(damping > 0 && damping < 1)) fail("damping must lie in (0, 1)");
  if (!(tolerance > 0)) fail("tolerance must be positive");
  if (impute_window && *impute_window <= 0) fail("impute window must be positive");
}

FeatureConfig FeatureSchema::ConfigAt(Day t0) const {
  FeatureConfig c;
  c.set = set;
  for (Day offset : snapshot_offsets) c.snapshot_days.push_back(t0 - offset);
  c.damping = damping;
  c.tolerance = tolerance;
  c.impute_window = impute_window;
  c.yeo_johnson = false;
  return c;
}

std::vector<double> FeatureMatrix::Column(std::size_t j) const {
  std::vector<double> out(rows());
  for (std::size_t i = 0; i < rows(); ++i) out[i] = values[i * cols() + j];
  return out;
}

bool FeatureMatrix::AllFinite() const {
  return std::all_of(values.begin(), values.end(),
                     [](double x) { return std::isfinite(x); });
}

namespace {

// Assembles rows as [node block(u), node block(v), pair block(u, v)] and
// then permutes into the published column order of each set.
class FeatureAssembler {
 public:
  FeatureAssembler(const TemporalGraph& graph, const FeatureConfig& config,
                   unsigned threads)
      : config_(config) {
    for (Day d : config.snapshot_days) snapshots_.emplace_back(graph, d);
    if (config.set == FeatureSet::kExtended) {
      for (const Snapshot& s : snapshots_) {
        tables_.push_back(
            ComputeNodeStats(s, config.damping, config.tolerance, threads));
      }
    }
  }

  const Snapshot& t0() const { return snapshots_.front(); }
  std::size_t k() const { return snapshots_.size(); }

  std::vector<double> NodeBlock(NodeId node) const {
    switch (config_.set) {
      case FeatureSet::kBaseline15: {
        std::vector<double> out;
        for (const Snapshot& s : snapshots_) out.push_back(s.Degree(node));
        for (const Snapshot& s : snapshots_) {
          out.push_back(static_cast<double>(TwoHopNeighborhoodSize(s, node)));
        }
        return out;
      }
      case FeatureSet::kPairSim: {
        std::vector<double> out;
        for (const Snapshot& s : snapshots_) out.push_back(s.Degree(node));
        return out;
      }
      case FeatureSet::kExtended:
        return NodeFeatureSeries(tables_, node);
    }
    return {};
  }

  std::size_t NodeBlockSize() const {
    switch (config_.set) {
      case FeatureSet::kBaseline15: return 2 * k();
      case FeatureSet::kPairSim: return k();
      case FeatureSet::kExtended: return NodeFeatureSeriesNames(k(), "").size();
    }
    return 0;
  }

  std::vector<std::string> Columns() const {
    switch (config_.set) {
      case FeatureSet::kBaseline15:
        return Baseline15Names();
      case FeatureSet::kPairSim: {
        std::vector<std::string> names;
        for (std::size_t i = 0; i < k(); ++i) {
          for (auto base : kPairSimColumns) {
            names.push_back(std::string(base) + SnapshotSuffix(i));
          }
        }
        return names;
      }
      case FeatureSet::kExtended: {
        auto names = NodeFeatureSeriesNames(k(), "u_");
        auto v_names = NodeFeatureSeriesNames(k(), "v_");
        names.insert(names.end(), v_names.begin(), v_names.end());
        names.push_back("dice_s0");
        names.push_back("cn_s0");
        return names;
      }
    }
    return {};
  }

  void Row(std::span<const double> fu, std::span<const double> fv, NodeId u,
           NodeId v, std::span<double> out) const {
    switch (config_.set) {
      case FeatureSet::kBaseline15:
        for (std::size_t i = 0; i < 3; ++i) {
          out[2 * i] = fu[i];
          out[2 * i + 1] = fv[i];
          out[6 + 2 * i] = fu[3 + i];
          out[6 + 2 * i + 1] = fv[3 + i];
          out[12 + i] = CommonNeighbors(snapshots_[i], u, v);
        }
        return;
      case FeatureSet::kPairSim: {
        std::size_t c = 0;
        for (std::size_t i = 0; i < k(); ++i) {
          const PairSimilarity p = PairSimilarityFeatures(snapshots_[i], u, v);
          out[c++] = fu[i];
          out[c++] = fv[i];
          out[c++] = p.total_neighbors;
          out[c++] = p.cn;
          out[c++] = p.jaccard;
          out[c++] = p.simpson;
          out[c++] = p.geometric;
          out[c++] = p.cosine;
          out[c++] = p.adamic_adar;
          out[c++] = p.resource_alloc;
          out[c++] = p.pa_product;
        }
        return;
      }
      case FeatureSet::kExtended: {
        std::copy(fu.begin(), fu.end(), out.begin());
        std::copy(fv.begin(), fv.end(), out.begin() + fu.size());
        const PairSimilarity p = PairSimilarityFeatures(snapshots_[0], u, v);
        out[2 * fu.size()] = p.dice;
        out[2 * fu.size() + 1] = p.cn;
        return;
      }
    }
  }

 private:
  static constexpr std::array<std::string_view, 11> kPairSimColumns = {
      "deg_u",     "deg_v",  "total_neighbors", "cn",
      "jaccard",   "simpson", "geometric",      "cosine",
      "adamic_adar", "resource_alloc", "pa_product"};

  const FeatureConfig& config_;
  std::vector<Snapshot> snapshots_;
  std::vector<NodeStatsTable> tables_;
};

}  // namespace

FeatureMatrix BuildFeatureMatrix(const TemporalGraph& graph,
                                 std::span<const NodePair> pairs,
                                 const FeatureConfig& config, unsigned threads,
                                 FeatureBuildInfo* info) {
  config.Validate();
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (pairs[i].u >= graph.num_nodes() || pairs[i].v >= graph.num_nodes()) {
      throw RecordError(i, "pair node id out of range");
    }
    if (pairs[i].u == pairs[i].v) {
      throw Error(ErrorCode::kInvalidArgument,
                  "record " + std::to_string(i) + ": pair has u == v");
    }
  }

  const FeatureAssembler assembler(graph, config, threads);
  FeatureMatrix m;
  m.schema.set = config.set;
  for (Day d : config.snapshot_days) m.schema.snapshot_offsets.push_back(config.t0() - d);
  m.schema.impute_window = config.impute_window;
  m.schema.damping = config.damping;
  m.schema.tolerance = config.tolerance;
  m.schema.columns = assembler.Columns();
  m.pairs.assign(pairs.begin(), pairs.end());
  m.values.assign(m.rows() * m.cols(), 0.0);

  // Node blocks, computed once per distinct endpoint.
  std::vector<NodeId> nodes;
  nodes.reserve(2 * pairs.size());
  for (const NodePair& p : pairs) {
    nodes.push_back(p.u);
    nodes.push_back(p.v);
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  std::vector<std::vector<double>> blocks(nodes.size());

  const std::size_t dim = assembler.NodeBlockSize();
  std::optional<Imputation> imputation;
  std::size_t imputed = 0;
  if (config.impute_window) {
    for (NodeId node : nodes) {
      if (assembler.t0().Degree(node) == 0) ++imputed;
    }
    if (imputed > 0) {
      imputation = ImputeUnseen(graph, config.t0(), *config.impute_window, dim,
                                [&](NodeId n) { return assembler.NodeBlock(n); });
    }
  }

  ParallelFor(nodes.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      if (imputation && assembler.t0().Degree(nodes[i]) == 0) {
        blocks[i] = imputation->values;
      } else {
        blocks[i] = assembler.NodeBlock(nodes[i]);
      }
    }
  });
  auto block_of = [&](NodeId node) -> const std::vector<double>& {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), node);
    return blocks[static_cast<std::size_t>(it - nodes.begin())];
  };

  ParallelFor(pairs.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      assembler.Row(block_of(pairs[i].u), block_of(pairs[i].v), pairs[i].u,
                    pairs[i].v, m.Row(i));
    }
  });

  if (config.yeo_johnson) ApplyYeoJohnson(m);
  if (info) {
    info->imputed_nodes = imputation ? imputed : 0;
    info->imputation_fallback = imputation && imputation->fallback;
  }
  return m;
}

FeatureMatrix BuildFeatureMatrix(const TemporalGraph& graph,
                                 std::span<const NodePair> pairs,
                                 const FeatureSchema& schema, Day t0,
                                 unsigned threads, FeatureBuildInfo* info) {
  FeatureMatrix m =
      BuildFeatureMatrix(graph, pairs, schema.ConfigAt(t0), threads, info);
  if (m.schema.columns != schema.columns) {
    throw Error(ErrorCode::kSchemaMismatch,
                "feature columns differ from the requested schema");
  }
  if (!schema.yeo_johnson_lambdas.empty()) {
    ApplyYeoJohnson(m, schema.yeo_johnson_lambdas);
  }
  return m;
}

void ApplyYeoJohnson(FeatureMatrix& matrix,
                     std::optional<std::span<const double>> lambdas) {
  if (lambdas && lambdas->size() != matrix.cols()) {
    throw Error(ErrorCode::kSchemaMismatch,
                "yeo-johnson: expected " + std::to_string(matrix.cols()) +
                    " lambdas, got " + std::to_string(lambdas->size()));
  }
  if (!matrix.schema.yeo_johnson_lambdas.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "matrix is already transformed");
  }
  std::vector<double> fitted(matrix.cols(), 1.0);
  for (std::size_t j = 0; j < matrix.cols(); ++j) {
    if (lambdas) {
      fitted[j] = (*lambdas)[j];
    } else if (matrix.rows() > 0) {
      fitted[j] = FitYeoJohnsonLambda(matrix.Column(j));
    }
    for (std::size_t i = 0; i < matrix.rows(); ++i) {
      double& x = matrix.values[i * matrix.cols() + j];
      x = YeoJohnson(x, fitted[j]);
    }
  }
  matrix.schema.yeo_johnson_lambdas = std::move(fitted);
}

// ---------------------------------------------------------------------------

namespace {
constexpr std::string_view kFeaturePreamble = "# semlink-features";
constexpr std::string_view kLambdaPreamble = "# yeo_johnson_lambdas=";
}  // namespace

void WriteFeatureCsv(const FeatureMatrix& matrix, std::ostream& out) {
  const FeatureSchema& schema = matrix.schema;
  out << kFeaturePreamble << " version=" << kFeatureFormatVersion
      << " set=" << FeatureSetName(schema.set) << " offsets=";
  for (std::size_t i = 0; i < schema.snapshot_offsets.size(); ++i) {
    if (i) out << ';';
    out << schema.snapshot_offsets[i];
  }
  out << " impute_window=";
  if (schema.impute_window) {
    out << *schema.impute_window;
  } else {
    out << "none";
  }
  out << " damping=" << FormatDouble(schema.damping)
      << " tolerance=" << FormatDouble(schema.tolerance) << '\n';
  if (!schema.yeo_johnson_lambdas.empty()) {
    out << kLambdaPreamble;
    for (std::size_t j = 0; j < schema.yeo_johnson_lambdas.size(); ++j) {
      if (j) out << ';';
      out << FormatDouble(schema.yeo_johnson_lambdas[j]);
    }
    out << '\n';
  }
  out << "u,v";
  for (const auto& c : schema.columns) out << ',' << c;
  out << '\n';
  std::string line;
  for (std::size_t i = 0; i < matrix.rows(); ++i) {
    line.clear();
    line += std::to_string(matrix.pairs[i].u);
    line += ',';
    line += std::to_string(matrix.pairs[i].v);
    for (double x : matrix.Row(i)) {
      line += ',';
      line += FormatDouble(x);
    }
    line += '\n';
    out << line;
  }
}

void WriteFeatureCsvFile(const FeatureMatrix& matrix,
                         const std::filesystem::path& path) {
  auto out = OpenForWrite(path);
  WriteFeatureCsv(matrix, out);
  CheckWritten(out, path);
}

FeatureMatrix ReadFeatureCsv(std::istream& in) {
  FeatureMatrix m;
  std::string line;
  std::size_t line_no = 0;
  bool have_preamble = false;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view text = Trim(line);
    if (text.empty()) continue;
    if (!have_preamble) {
      if (!text.starts_with(kFeaturePreamble)) {
        throw ParseError(line_no, "expected '# semlink-features' preamble");
      }
      bool have_version = false;
      for (auto tok : Split(text.substr(kFeaturePreamble.size()), ' ')) {
        auto eq = tok.find('=');
        if (eq == std::string_view::npos) continue;
        auto key = tok.substr(0, eq);
        auto value = tok.substr(eq + 1);
        if (key == "version") {
          auto v = ParseInt(value);
          if (!v || *v != kFeatureFormatVersion) {
            throw Error(ErrorCode::kSchemaMismatch,
                        "unsupported feature format version");
          }
          have_version = true;
        } else if (key == "set") {
          auto set = ParseFeatureSet(value);
          if (!set) throw ParseError(line_no, "unknown feature set");
          m.schema.set = *set;
        } else if (key == "offsets") {
          for (auto o : Split(value, ';')) {
            auto d = ParseInt(o);
            if (!d) throw ParseError(line_no, "bad snapshot offset");
            m.schema.snapshot_offsets.push_back(static_cast<Day>(*d));
          }
        } else if (key == "impute_window") {
          if (value == "none") {
            m.schema.impute_window.reset();
          } else {
            auto d = ParseInt(value);
            if (!d) throw ParseError(line_no, "bad impute_window");
            m.schema.impute_window = static_cast<Day>(*d);
          }
        } else if (key == "damping" || key == "tolerance") {
          auto x = ParseDouble(value);
          if (!x) throw ParseError(line_no, "bad " + std::string(key));
          (key == "damping" ? m.schema.damping : m.schema.tolerance) = *x;
        }
      }
      if (!have_version) throw ParseError(line_no, "preamble lacks version");
      have_preamble = true;
      continue;
    }
    if (!have_header && text.starts_with(kLambdaPreamble)) {
      for (auto tok : Split(text.substr(kLambdaPreamble.size()), ';')) {
        auto x = ParseDouble(tok);
        if (!x) throw ParseError(line_no, "bad lambda value");
        m.schema.yeo_johnson_lambdas.push_back(*x);
      }
      continue;
    }
    if (text.front() == '#') continue;
    auto fields = Split(text, ',');
    if (!have_header) {
      if (fields.size() < 2 || fields[0] != "u" || fields[1] != "v") {
        throw ParseError(line_no, "expected header starting with 'u,v'");
      }
      for (std::size_t j = 2; j < fields.size(); ++j) {
        m.schema.columns.emplace_back(Trim(fields[j]));
      }
      if (!m.schema.yeo_johnson_lambdas.empty() &&
          m.schema.yeo_johnson_lambdas.size() != m.schema.columns.size()) {
        throw Error(ErrorCode::kSchemaMismatch, "lambda count != column count");
      }
      have_header = true;
      continue;
    }
    if (fields.size() != m.schema.columns.size() + 2) {
      throw ParseError(line_no, "expected " + std::to_string(m.schema.columns.size() + 2) +
                                    " fields, got " + std::to_string(fields.size()));
    }
    auto u = ParseUint(fields[0]);
    auto v = ParseUint(fields[1]);
    if (!u || !v || *u > std::numeric_limits<NodeId>::max() ||
        *v > std::numeric_limits<NodeId>::max()) {
      throw ParseError(line_no, "bad node id");
    }
    m.pairs.push_back({static_cast<NodeId>(*u), static_cast<NodeId>(*v)});
    for (std::size_t j = 2; j < fields.size(); ++j) {
      auto x = ParseDouble(fields[j]);
      if (!x) throw ParseError(line_no, "bad number in column " + std::to_string(j + 1));
      m.values.push_back(*x);
    }
  }
  if (!have_header) throw ParseError(line_no + 1, "missing feature header");
  return m;
}

FeatureMatrix ReadFeatureCsvFile(const std::filesystem::path& path) {
  auto in = OpenForRead(path);
  return ReadFeatureCsv(in);
}

}  // namespace semlink
