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

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <vector>

#include "oracles.h"
#include "semlink/ingest.h"
#include "semlink/status.h"
#include "semlink/task.h"
#include "test_graphs.h"

namespace semlink {
namespace {

using ::testing::ElementsAre;

TEST(PairSimilarityTest, G1Pair03) {
  const Snapshot s(testing::G1(), 0);
  const PairSimilarity p = PairSimilarityFeatures(s, 0, 3);
  EXPECT_EQ(p.cn, 1);
  EXPECT_DOUBLE_EQ(p.jaccard, 1.0 / 3);
  EXPECT_DOUBLE_EQ(p.dice, 0.5);
  EXPECT_DOUBLE_EQ(p.simpson, 0.5);
  EXPECT_DOUBLE_EQ(p.cosine, 0.5);
  EXPECT_DOUBLE_EQ(p.geometric, 0.25);
  EXPECT_NEAR(p.adamic_adar, 0.9102392266, 1e-9);
  EXPECT_DOUBLE_EQ(p.resource_alloc, 1.0 / 3);
  EXPECT_EQ(p.pa_product, 4);
  EXPECT_EQ(p.pa_sum, 4);
  EXPECT_EQ(p.total_neighbors, 3);
}

TEST(PairSimilarityTest, DisjointAndIsolated) {
  const Snapshot s(testing::G1(), 0);
  const PairSimilarity p = PairSimilarityFeatures(s, 0, 4);
  EXPECT_EQ(p.cn, 0);
  EXPECT_EQ(p.jaccard + p.dice + p.simpson + p.cosine + p.geometric +
                p.adamic_adar + p.resource_alloc,
            0);
  EXPECT_EQ(p.pa_sum, 3);

  const Snapshot empty(TemporalGraph::Build({}, 3), 0);
  for (double x : PairSimilarityFeatures(empty, 0, 2).ToArray()) EXPECT_EQ(x, 0);
}

TEST(PairSimilarityTest, AdamicAdarSkipsDegreeOne) {
  // Path 0 - 1 - 2 where the middle node has degree 2, plus pendant 3 - 4.
  const std::vector<RawEdge> raw = {{0, 1, 0}, {1, 2, 0}};
  const Snapshot s(TemporalGraph::Build(raw, 3), 0);
  EXPECT_DOUBLE_EQ(PairSimilarityFeatures(s, 0, 2).adamic_adar, 1 / std::log(2.0));
  // Common neighbor of degree 1 cannot exist for u != v; self pairs throw.
  EXPECT_THROW(PairSimilarityFeatures(s, 1, 1), Error);
  EXPECT_THROW(PairSimilarityFeatures(s, 0, 3), Error);
}

TEST(PairSimilarityTest, MatchesSetOracleOnRandomGraphs) {
  std::mt19937_64 gen(101);
  for (int trial = 0; trial < 15; ++trial) {
    const auto rg = oracle::MakeRandomGraph(gen, 70);
    const Snapshot s(TemporalGraph::Build(rg.edges, rg.num_nodes), 6);
    const auto ref = oracle::BuildSetGraph(rg, 6);
    const Eigen::MatrixXd a2 = oracle::CommonNeighborMatrix(ref);
    for (NodeId u = 0; u < rg.num_nodes; ++u) {
      for (NodeId v = u + 1; v < rg.num_nodes; ++v) {
        const auto got = PairSimilarityFeatures(s, u, v).ToArray();
        const auto want = oracle::Similarities(ref, u, v);
        for (std::size_t f = 0; f < got.size(); ++f) {
          ASSERT_NEAR(got[f], want[f], 1e-12) << PairSimilarity::Names()[f];
        }
        ASSERT_EQ(CommonNeighbors(s, u, v), a2(u, v));
        // Identities between the ratios.
        EXPECT_LE(got[1], got[3] + 1e-15);
        EXPECT_LE(got[3], 1.0);
        EXPECT_DOUBLE_EQ(got[2], got[1] == 0 ? 0 : 2 * got[1] / (1 + got[1]));
      }
    }
  }
}

TEST(PageRankTest, SmallCases) {
  const std::vector<RawEdge> edge = {{0, 1, 0}};
  const auto two = PageRank(Snapshot(TemporalGraph::Build(edge, 2), 0));
  EXPECT_NEAR(two[0], 0.5, 1e-12);
  EXPECT_NEAR(two[1], 0.5, 1e-12);
  const auto empty = PageRank(Snapshot(TemporalGraph::Build({}, 4), 0));
  for (double x : empty) EXPECT_DOUBLE_EQ(x, 0.25);
}

TEST(PageRankTest, MatchesLinearSolve) {
  const auto g1 = testing::G1Edges();
  oracle::RandomGraph rg{5, g1};
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 12; ++trial) {
    if (trial > 0) rg = oracle::MakeRandomGraph(gen, 80);
    const Snapshot s(TemporalGraph::Build(rg.edges, rg.num_nodes), 5);
    const auto pr = PageRank(s, 0.85, 1e-13);
    const Eigen::VectorXd want = oracle::PageRankSolve(oracle::BuildSetGraph(rg, 5), 0.85);
    double l1 = 0;
    double sum = 0;
    for (std::size_t i = 0; i < pr.size(); ++i) {
      l1 += std::abs(pr[i] - want[static_cast<Eigen::Index>(i)]);
      sum += pr[i];
      EXPECT_GE(pr[i], 0);
    }
    EXPECT_LT(l1, 1e-8);
    EXPECT_NEAR(sum, 1.0, 1e-8);
  }
}

TEST(ClusteringTest, G1Values) {
  const Snapshot s(testing::G1(), 0);
  EXPECT_DOUBLE_EQ(ClusteringCoefficient(s, 0), 1.0);
  EXPECT_DOUBLE_EQ(ClusteringCoefficient(s, 2), 1.0 / 3);
  EXPECT_DOUBLE_EQ(ClusteringCoefficient(s, 4), 0.0);
  EXPECT_NEAR(AverageClustering(s), 7.0 / 15, 1e-15);
}

TEST(ClusteringTest, CliqueAndOracle) {
  std::vector<RawEdge> clique;
  for (int i = 0; i < 6; ++i) {
    for (int j = i + 1; j < 6; ++j) clique.push_back({i, j, 0});
  }
  const Snapshot k6(TemporalGraph::Build(clique, 6), 0);
  for (NodeId i = 0; i < 6; ++i) EXPECT_DOUBLE_EQ(ClusteringCoefficient(k6, i), 1.0);

  std::mt19937_64 gen(13);
  for (int trial = 0; trial < 10; ++trial) {
    const auto rg = oracle::MakeRandomGraph(gen, 90);
    const Snapshot s(TemporalGraph::Build(rg.edges, rg.num_nodes), 9);
    const auto ref = oracle::BuildSetGraph(rg, 9);
    for (NodeId u = 0; u < rg.num_nodes; ++u) {
      ASSERT_NEAR(ClusteringCoefficient(s, u), oracle::Clustering(ref, u), 1e-12);
      ASSERT_EQ(TwoHopNeighborhoodSize(s, u), oracle::TwoHop(ref, u));
    }
  }
}

TEST(NodeStatsTest, MeanNeighborDegree) {
  const Snapshot s(testing::G1(), 0);
  EXPECT_DOUBLE_EQ(MeanNeighborDegree(s, 0), 2.5);
  EXPECT_DOUBLE_EQ(MeanNeighborDegree(s, 4), 2.0);
  const Snapshot empty(TemporalGraph::Build({}, 2), 0);
  EXPECT_DOUBLE_EQ(MeanNeighborDegree(empty, 1), 0.0);
}

TEST(TimeDifferencesTest, Examples) {
  const std::vector<double> degrees = {5, 3, 2};
  EXPECT_EQ(TimeDifferences(degrees), (std::vector<double>{2, 1}));
  const std::vector<double> flat = {4, 4, 4};
  EXPECT_EQ(TimeDifferences(flat), (std::vector<double>{0, 0}));
  const std::vector<double> two = {4, 1};
  EXPECT_EQ(TimeDifferences(two), (std::vector<double>{3}));
}

TEST(NodeFeatureSeriesTest, LayoutAndUnbornNode) {
  // Node 2 gains neighbours over time; node 4 is born after every snapshot.
  const std::vector<RawEdge> raw = {{0, 2, 0}, {1, 2, 10}, {2, 3, 20}, {3, 4, 40}};
  const TemporalGraph g = TemporalGraph::Build(raw, 5);
  const std::vector<Day> days = {30, 15, 5};
  const auto f = NodeFeatureSeries(g, 2, days);
  const auto names = NodeFeatureSeriesNames(3, "u_");
  ASSERT_EQ(f.size(), 20u);
  ASSERT_EQ(names.size(), 20u);
  EXPECT_EQ(names[0], "u_degree_s0");
  EXPECT_EQ(names[12], "u_degree_d1");
  EXPECT_EQ(names[16], "u_degree_d2");
  EXPECT_EQ(f[0], 3);
  EXPECT_EQ(f[1], 2);
  EXPECT_EQ(f[2], 1);
  EXPECT_EQ(f[12], 1);  // 3 - 2
  EXPECT_EQ(f[16], 0);  // 3 - 4 + 1
  for (double x : NodeFeatureSeries(g, 4, days)) EXPECT_EQ(x, 0);
}

TEST(Baseline15Test, G1Replicated) {
  const Snapshot s(testing::G1(), 0);
  const std::vector<Snapshot> snaps = {s, s, s};
  const auto f = Baseline15Features(snaps, 0, 3);
  // Two-hop neighbourhoods within distance 2: node 0 reaches {1,2,3} and
  // node 3 reaches {0,1,2,4}.
  EXPECT_THAT(f, ElementsAre(2, 2, 2, 2, 2, 2, 3, 4, 3, 4, 3, 4, 1, 1, 1));
  EXPECT_EQ(Baseline15Names().size(), 15u);
}

TEST(Baseline15Test, AbsentAndStatic) {
  const std::vector<RawEdge> raw = {{0, 1, 0}, {1, 2, 0}, {3, 4, 5000}};
  const TemporalGraph g = TemporalGraph::Build(raw, 6);
  for (double x : Baseline15Features(g, 3, 5, 2000)) EXPECT_EQ(x, 0);
  const auto f = Baseline15Features(g, 0, 2, 2000);
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(f[2 * i], f[0]);
    EXPECT_EQ(f[6 + 2 * i], f[6]);
    EXPECT_EQ(f[12 + i], 1);
  }
}

TEST(YeoJohnsonTest, AnalyticValues) {
  for (double x : {-3.0, -0.5, 0.0, 0.7, 12.0}) {
    EXPECT_NEAR(YeoJohnson(x, 1.0), x, 1e-15);
  }
  EXPECT_NEAR(YeoJohnson(std::exp(1.0) - 1, 0.0), 1.0, 1e-15);
  EXPECT_NEAR(YeoJohnson(-(std::exp(1.0) - 1), 2.0), -1.0, 1e-15);
}

TEST(YeoJohnsonTest, StrictlyMonotone) {
  for (int li = -20; li <= 20; ++li) {
    const double lambda = li / 10.0;
    double prev = -INFINITY;
    for (double x = -20; x <= 20; x += 0.25) {
      const double y = YeoJohnson(x, lambda);
      EXPECT_GT(y, prev) << "lambda " << lambda << " x " << x;
      prev = y;
    }
  }
}

TEST(YeoJohnsonTest, FitLambda) {
  EXPECT_THROW(FitYeoJohnsonLambda(std::vector<double>{}), Error);
  EXPECT_EQ(FitYeoJohnsonLambda(std::vector<double>{3, 3, 3}), 1.0);
  // Right-skewed data prefers a compressing transform.
  std::mt19937_64 gen(1);
  std::exponential_distribution<double> expo(0.2);
  std::vector<double> skewed(2000);
  for (double& x : skewed) x = expo(gen);
  const double lambda = FitYeoJohnsonLambda(skewed);
  EXPECT_LT(lambda, 1.0);
  EXPECT_GE(lambda, -2.0);
  EXPECT_NEAR(std::round(lambda * 10), lambda * 10, 1e-9);
}

TEST(ImputeUnseenTest, AveragesRecentBirths) {
  // Node 2 born day 10 (degree 1 at t0), node 3 born day 12 (degree 3).
  const std::vector<RawEdge> raw = {{0, 1, 0},  {1, 2, 10}, {3, 0, 12},
                                    {3, 1, 12}, {3, 4, 12}};
  const TemporalGraph g = TemporalGraph::Build(raw, 6);
  const Snapshot t0(g, 12);
  auto degree = [&](NodeId n) { return std::vector<double>{double(t0.Degree(n))}; };
  const Imputation two = ImputeUnseen(g, 12, 5, 1, degree);
  // Nodes 2, 3 and 4 are born in (7, 12]; degrees 1, 3, 1.
  EXPECT_EQ(two.num_born, 3u);
  EXPECT_DOUBLE_EQ(two.values[0], 5.0 / 3);
  const Imputation one = ImputeUnseen(g, 10, 1, 1, degree);
  EXPECT_EQ(one.num_born, 1u);
  EXPECT_FALSE(one.fallback);
  const Imputation none = ImputeUnseen(g, 30, 5, 1, degree);
  EXPECT_TRUE(none.fallback);
  EXPECT_EQ(none.values, std::vector<double>{0});
}

TemporalGraph Synthetic(std::uint64_t seed = 5) {
  SyntheticConfig cfg;
  cfg.num_nodes = 400;
  cfg.edges_per_new_node = 2;
  cfg.intra_step_edges = 2;
  cfg.days_per_step = 5;
  cfg.seed = seed;
  return GenerateSynthetic(cfg);
}

TaskInstance Task(const TemporalGraph& g, Day t0, Day t1) {
  TaskSpec spec;
  spec.t0_day = t0;
  spec.t1_day = t1;
  spec.num_samples = 300;
  spec.seed = 2;
  return SamplePairs(g, spec);
}

TEST(FeatureMatrixTest, ShapesAndNames) {
  const TemporalGraph g = Synthetic();
  const TaskInstance task = Task(g, 1600, 1990);
  const std::size_t expected[] = {15, 33, 42};
  int i = 0;
  for (FeatureSet set : {FeatureSet::kBaseline15, FeatureSet::kPairSim,
                         FeatureSet::kExtended}) {
    const FeatureMatrix m =
        BuildFeatureMatrix(g, task.pairs, FeatureConfig::Default(set, 1600));
    EXPECT_EQ(m.cols(), expected[i++]) << FeatureSetName(set);
    EXPECT_EQ(m.rows(), task.pairs.size());
    EXPECT_TRUE(m.AllFinite());
    EXPECT_EQ(m.schema.snapshot_offsets, (std::vector<Day>{0, 365, 730}));
  }
}

TEST(FeatureMatrixTest, ThreadCountDoesNotChangeOutput) {
  const TemporalGraph g = Synthetic();
  const TaskInstance task = Task(g, 1600, 1990);
  for (FeatureSet set : {FeatureSet::kPairSim, FeatureSet::kExtended}) {
    const FeatureConfig cfg = FeatureConfig::Default(set, 1600);
    const FeatureMatrix a = BuildFeatureMatrix(g, task.pairs, cfg, 1);
    const FeatureMatrix b = BuildFeatureMatrix(g, task.pairs, cfg, 4);
    EXPECT_EQ(a.values, b.values);
  }
}

TEST(FeatureMatrixTest, UnseenNodesAreImputed) {
  const TemporalGraph g = Synthetic();
  // Nodes above ~320 are born after day 1600.
  const std::vector<NodePair> pairs = {{380, 390}, {0, 395}};
  FeatureConfig cfg = FeatureConfig::Default(FeatureSet::kBaseline15, 1600);
  FeatureBuildInfo info;
  const FeatureMatrix m = BuildFeatureMatrix(g, pairs, cfg, 1, &info);
  EXPECT_EQ(info.imputed_nodes, 3u);
  EXPECT_FALSE(info.imputation_fallback);
  EXPECT_GT(m.Row(0)[0], 0);
  EXPECT_EQ(m.Row(0)[0], m.Row(0)[1]);
  EXPECT_EQ(m.Row(0)[0], m.Row(1)[1]);
  cfg.impute_window.reset();
  const FeatureMatrix raw = BuildFeatureMatrix(g, pairs, cfg, 1, &info);
  EXPECT_EQ(raw.Row(0)[0], 0);
  EXPECT_EQ(info.imputed_nodes, 0u);
}

TEST(FeatureMatrixTest, RejectsBadPairsAndConfigs) {
  const TemporalGraph g = Synthetic();
  const std::vector<NodePair> bad = {{0, 400}};
  EXPECT_THROW(
      BuildFeatureMatrix(g, bad, FeatureConfig::Default(FeatureSet::kPairSim, 100)),
      RecordError);
  FeatureConfig cfg = FeatureConfig::Default(FeatureSet::kBaseline15, 100);
  cfg.snapshot_days = {100, 50};
  EXPECT_THROW(cfg.Validate(), Error);
  cfg.set = FeatureSet::kPairSim;
  cfg.snapshot_days = {100, 100};
  EXPECT_THROW(cfg.Validate(), Error);
  cfg.snapshot_days = {100};
  cfg.damping = 1.0;
  EXPECT_THROW(cfg.Validate(), Error);
}

TEST(FeatureMatrixTest, SchemaRebuildAppliesStoredLambdas) {
  const TemporalGraph g = Synthetic();
  const TaskInstance task = Task(g, 1600, 1990);
  FeatureConfig cfg = FeatureConfig::Default(FeatureSet::kPairSim, 1600);
  cfg.yeo_johnson = true;
  const FeatureMatrix m = BuildFeatureMatrix(g, task.pairs, cfg);
  ASSERT_EQ(m.schema.yeo_johnson_lambdas.size(), m.cols());
  const FeatureMatrix again = BuildFeatureMatrix(g, task.pairs, m.schema, 1600);
  EXPECT_EQ(again.values, m.values);
  EXPECT_EQ(again.schema, m.schema);
  FeatureMatrix twice = m;
  EXPECT_THROW(ApplyYeoJohnson(twice), Error);
}

TEST(FeatureCsvTest, RoundTripIsExact) {
  const TemporalGraph g = Synthetic();
  const TaskInstance task = Task(g, 1600, 1990);
  FeatureConfig cfg = FeatureConfig::Default(FeatureSet::kExtended, 1600);
  cfg.yeo_johnson = true;
  cfg.impute_window.reset();
  const FeatureMatrix m = BuildFeatureMatrix(g, task.pairs, cfg);
  std::ostringstream out;
  WriteFeatureCsv(m, out);
  std::istringstream in(out.str());
  const FeatureMatrix back = ReadFeatureCsv(in);
  EXPECT_EQ(back.schema, m.schema);
  EXPECT_EQ(back.pairs, m.pairs);
  EXPECT_EQ(back.values, m.values);
}

TEST(FeatureCsvTest, RejectsMalformedInput) {
  const std::string pre =
      "# semlink-features version=1 set=pairsim offsets=0 impute_window=none "
      "damping=0.85 tolerance=1e-10\n";
  std::istringstream wrong_version(
      "# semlink-features version=9 set=pairsim offsets=0 impute_window=none "
      "damping=0.85 tolerance=1e-10\nu,v,a\n");
  EXPECT_THROW(ReadFeatureCsv(wrong_version), Error);
  std::istringstream short_row(pre + "u,v,deg_u_s0\n0,1\n");
  EXPECT_THROW(ReadFeatureCsv(short_row), ParseError);
  std::istringstream bad_number(pre + "u,v,deg_u_s0\n0,1,abc\n");
  EXPECT_THROW(ReadFeatureCsv(bad_number), ParseError);
}

}  // namespace
}  // namespace semlink
