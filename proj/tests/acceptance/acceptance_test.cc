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


// End-to-end acceptance checks. Prints one PASS or FAIL line per criterion
// and exits nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.h"
#include "semlink/cli.h"
#include "semlink/eval.h"
#include "semlink/features.h"
#include "semlink/ingest.h"
#include "semlink/models.h"
#include "semlink/parallel.h"
#include "semlink/task.h"
#include "semlink/temporal_graph.h"

namespace semlink {
namespace {

namespace fs = std::filesystem;

// Tolerances and budgets.
constexpr double kAucTolerance = 1e-12;
constexpr double kAucSeconds = 10;
constexpr double kFeatureTolerance = 1e-10;
constexpr double kFeatureSeconds = 30;
constexpr double kFdStep = 1e-5;
constexpr double kFdRelativeError = 1e-4;
// Denominator floor for the relative error of near-zero gradients.
constexpr double kFdScaleFloor = 1e-6;
// Rows whose ReLU pre-activations come this close to zero are redrawn.
constexpr double kKinkMargin = 1e-3;
constexpr double kRandomAucLow = 0.48;
constexpr double kRandomAucHigh = 0.52;
constexpr double kPaAucMin = 0.75;
constexpr double kCnAucMin = 0.60;
constexpr double kMlpSlack = 0.05;
constexpr double kBenchmarkSeconds = 300;
constexpr double kAlphaTolerance = 0.1;

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string Fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

Outcome AucOracle() {
  const auto start = Clock::now();
  std::mt19937_64 gen(101);
  double worst = 0;
  double worst_trapezoid = 0;
  for (int instance = 0; instance < 1000; ++instance) {
    const auto n = std::uniform_int_distribution<std::size_t>(2, 500)(gen);
    // Few distinct values force ties.
    const int levels = std::uniform_int_distribution<int>(1, 40)(gen);
    std::uniform_int_distribution<int> level(0, levels - 1);
    std::vector<double> scores(n);
    std::vector<std::uint8_t> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
      scores[i] = instance % 4 == 0 ? std::uniform_real_distribution<double>(-1, 1)(gen)
                                    : level(gen) * 0.25;
      labels[i] = static_cast<std::uint8_t>(gen() & 1);
    }
    labels[0] = 1;
    labels[1] = 0;
    const RocResult roc = ComputeRoc(scores, labels);
    const double truth = oracle::BruteAuc(scores, labels);
    worst = std::max(worst, std::abs(roc.auc - truth));
    worst_trapezoid = std::max(worst_trapezoid, std::abs(TrapezoidArea(roc.curve) - truth));
  }
  const double t = Seconds(start);
  return {worst <= kAucTolerance && worst_trapezoid <= kAucTolerance && t < kAucSeconds,
          Fmt("max_abs_err=%.3g curve_area_err=%.3g time=%.2fs", worst, worst_trapezoid, t)};
}

Outcome FeatureOracle() {
  const auto start = Clock::now();
  std::mt19937_64 gen(202);
  double worst = 0;
  std::size_t integer_mismatches = 0;
  std::size_t pairs_checked = 0;
  constexpr std::array<bool, PairSimilarity::kSize> kInteger = {
      true, false, false, false, false, false, false, false, true, true, true};
  for (int g = 0; g < 50; ++g) {
    const oracle::RandomGraph rg = oracle::MakeRandomGraph(gen, 200);
    const TemporalGraph graph = TemporalGraph::Build(rg.edges, rg.num_nodes);
    const Day cutoff = std::uniform_int_distribution<Day>(0, 9)(gen);
    const Snapshot s(graph, cutoff);
    const oracle::SetGraph o = oracle::BuildSetGraph(rg, cutoff);
    const Eigen::MatrixXd cn = oracle::CommonNeighborMatrix(o);

    std::vector<NodePair> pairs;
    for (NodeId u = 0; u < rg.num_nodes; ++u) {
      worst = std::max(worst, std::abs(ClusteringCoefficient(s, u) - oracle::Clustering(o, u)));
      for (NodeId v = u + 1; v < rg.num_nodes; ++v) pairs.push_back({u, v});
    }
    const std::vector<double> pa = ScorePaSum(s, pairs);
    const std::vector<double> cn_scores = ScoreCommonNeighbors(s, pairs);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const auto [u, v] = pairs[i];
      const auto got = PairSimilarityFeatures(s, u, v).ToArray();
      const auto want = oracle::Similarities(o, u, v);
      for (std::size_t f = 0; f < got.size(); ++f) {
        if (kInteger[f]) {
          integer_mismatches += got[f] != want[f];
        } else {
          worst = std::max(worst, std::abs(got[f] - want[f]));
        }
      }
      integer_mismatches += cn_scores[i] != cn(u, v);
      integer_mismatches += CommonNeighbors(s, u, v) != cn(u, v);
      integer_mismatches += pa[i] != static_cast<double>(o.k(u) + o.k(v));
    }
    pairs_checked += pairs.size();
  }
  const double t = Seconds(start);
  return {integer_mismatches == 0 && worst <= kFeatureTolerance && t < kFeatureSeconds,
          Fmt("pairs=%zu integer_mismatches=%zu max_real_err=%.3g time=%.2fs",
              pairs_checked, integer_mismatches, worst, t)};
}

// True if any hidden pre-activation of `row` lies within kKinkMargin of zero.
bool NearKink(const MlpModel& model, std::span<const double> row) {
  std::vector<double> in(row.begin(), row.end());
  const auto layers = model.layers();
  for (std::size_t l = 0; l + 1 < layers.size(); ++l) {
    std::vector<double> out(layers[l].outputs);
    for (std::size_t o = 0; o < out.size(); ++o) {
      double z = layers[l].biases[o];
      for (std::size_t i = 0; i < in.size(); ++i) {
        z += layers[l].weights[o * layers[l].inputs + i] * in[i];
      }
      if (std::abs(z) < kKinkMargin) return true;
      out[o] = std::max(z, 0.0);
    }
    in = std::move(out);
  }
  return false;
}

Outcome GradientCheck() {
  std::mt19937_64 gen(303);
  std::uniform_int_distribution<std::size_t> units(1, 20);
  std::normal_distribution<double> normal(0, 1);
  double worst = 0;
  std::size_t components = 0;
  for (int m = 0; m < 20; ++m) {
    std::vector<std::size_t> sizes = {units(gen)};
    const auto hidden = std::uniform_int_distribution<std::size_t>(0, 3)(gen);
    for (std::size_t h = 0; h < hidden; ++h) sizes.push_back(units(gen));
    sizes.push_back(1);
    MlpModel model = MlpModel::Create(sizes, gen());
    for (DenseLayer& layer : model.mutable_layers()) {
      for (double& b : layer.biases) b = 0.1 * normal(gen);
    }

    const auto n = std::uniform_int_distribution<std::size_t>(1, 16)(gen);
    const std::size_t d = sizes.front();
    std::vector<double> rows;
    std::vector<std::uint8_t> labels;
    while (labels.size() < n) {
      std::vector<double> row(d);
      for (double& x : row) x = normal(gen);
      if (NearKink(model, row)) continue;
      rows.insert(rows.end(), row.begin(), row.end());
      labels.push_back(static_cast<std::uint8_t>(gen() & 1));
    }

    const MlpGradients grads = ComputeMlpGradients(model, rows, labels);
    auto check = [&](std::vector<double>& params, const std::vector<double>& analytic) {
      for (std::size_t i = 0; i < params.size(); ++i) {
        const double saved = params[i];
        params[i] = saved + kFdStep;
        const double up = MlpLoss(model, rows, labels);
        params[i] = saved - kFdStep;
        const double down = MlpLoss(model, rows, labels);
        params[i] = saved;
        const double fd = (up - down) / (2 * kFdStep);
        const double scale = std::max({std::abs(fd), std::abs(analytic[i]), kFdScaleFloor});
        worst = std::max(worst, std::abs(fd - analytic[i]) / scale);
        ++components;
      }
    };
    for (std::size_t l = 0; l < grads.layers.size(); ++l) {
      check(model.mutable_layers()[l].weights, grads.layers[l].weights);
      check(model.mutable_layers()[l].biases, grads.layers[l].biases);
    }
  }
  return {worst < kFdRelativeError,
          Fmt("models=20 components=%zu max_rel_err=%.3g", components, worst)};
}

double TaskAuc(const PairScorer& scorer, const TemporalGraph& graph,
               const TaskInstance& task) {
  const std::vector<double> scores = PredictTask(scorer, graph, task, 0);
  return ComputeRoc(scores, task.labels).auc;
}

Outcome Benchmark() {
  const auto start = Clock::now();
  SyntheticConfig gc;
  gc.num_nodes = 5000;
  gc.edges_per_new_node = 3;
  gc.intra_step_edges = 10;
  gc.days_per_step = 1;
  gc.seed = 42;
  const TemporalGraph graph = GenerateSynthetic(gc);
  const Day last = graph.edges().back().day;
  const auto t0 = static_cast<Day>(std::lround(0.8 * last));
  const auto train_t0 = static_cast<Day>(std::lround(0.6 * last));

  TaskSpec eval_spec;
  eval_spec.t0_day = t0;
  eval_spec.t1_day = last;
  eval_spec.num_samples = 20000;
  eval_spec.seed = 1;
  const TaskInstance eval = BalancedTrainingSet(graph, eval_spec, 20000, 1);

  TaskSpec train_spec = eval_spec;
  train_spec.t0_day = train_t0;
  train_spec.t1_day = t0;
  train_spec.seed = 2;
  const TaskInstance train = BalancedTrainingSet(graph, train_spec, 20000, 2);
  const FeatureMatrix features = BuildFeatureMatrix(
      graph, train.pairs, FeatureConfig::Default(FeatureSet::kBaseline15, train_t0), 0);
  MlpModel model = MlpModel::Create({features.cols(), 100, 10, 1}, 3);
  model.set_feature_schema(features.schema);
  TrainConfig tc;
  tc.epochs = 30;
  tc.seed = 3;
  TrainMlp(model, features.values, train.labels, tc);

  const double random = TaskAuc(RandomScorer(7), graph, eval);
  const double pa = TaskAuc(PaSumScorer(), graph, eval);
  const double cn = TaskAuc(CommonNeighborsScorer(), graph, eval);
  const double mlp = TaskAuc(MlpScorer(std::move(model)), graph, eval);
  const double t = Seconds(start);
  const bool pass = random >= kRandomAucLow && random <= kRandomAucHigh && pa >= kPaAucMin &&
                    cn >= kCnAucMin && mlp >= pa - kMlpSlack && t < kBenchmarkSeconds;
  return {pass, Fmt("t0=%d t1=%d random=%.4f pa=%.4f cn=%.4f mlp=%.4f time=%.1fs", t0, last,
                    random, pa, cn, mlp, t)};
}

Outcome ExhaustiveTasks() {
  std::mt19937_64 gen(505);
  std::size_t mismatches = 0;
  std::size_t pairs_checked = 0;
  for (int g = 0; g < 20; ++g) {
    const oracle::RandomGraph rg = oracle::MakeRandomGraph(gen, 200, 20);
    const TemporalGraph graph = TemporalGraph::Build(rg.edges, rg.num_nodes);
    const Day t0 = std::uniform_int_distribution<Day>(0, 12)(gen);
    const Day t1 = std::uniform_int_distribution<Day>(t0 + 1, 19)(gen);
    const oracle::SetGraph before = oracle::BuildSetGraph(rg, t0);
    const oracle::SetGraph after = oracle::BuildSetGraph(rg, t1);
    for (std::optional<std::uint32_t> c :
         {std::optional<std::uint32_t>(0), std::optional<std::uint32_t>(2),
          std::optional<std::uint32_t>(5), std::optional<std::uint32_t>()}) {
      for (std::uint32_t w : {1u, 2u, 3u}) {
        TaskSpec spec;
        spec.t0_day = t0;
        spec.t1_day = t1;
        spec.degree_cutoff = c;
        spec.min_multiplicity = w;
        const TaskInstance task = SamplePairs(graph, spec);

        std::map<NodePair, std::uint8_t> want;
        auto ok = [&](std::size_t x) { return !c || before.k(x) <= *c; };
        for (std::size_t u = 0; u < rg.num_nodes; ++u) {
          for (std::size_t v = u + 1; v < rg.num_nodes; ++v) {
            if (!ok(u) || !ok(v) || before.Multiplicity(u, v) > 0) continue;
            want[{static_cast<NodeId>(u), static_cast<NodeId>(v)}] =
                after.Multiplicity(u, v) >= static_cast<int>(w);
          }
        }
        std::map<NodePair, std::uint8_t> got;
        for (std::size_t i = 0; i < task.pairs.size(); ++i) {
          got[task.pairs[i]] = task.labels[i];
        }
        mismatches += got != want || got.size() != task.pairs.size();
        pairs_checked += want.size();
      }
    }
  }
  return {mismatches == 0,
          Fmt("graphs=20 configs=12 pairs=%zu mismatched_configs=%zu", pairs_checked,
              mismatches)};
}

Outcome PowerLawRecovery() {
  const oracle::DiscretePowerLaw law(2.5, 5);
  std::string detail;
  bool pass = true;
  for (std::uint64_t seed : {1, 2, 3}) {
    std::mt19937_64 gen(seed);
    std::vector<double> samples(100000);
    for (double& k : samples) k = law(gen);
    const double alpha = FitPowerLaw(samples, 5).alpha;
    pass = pass && std::abs(alpha - 2.5) <= kAlphaTolerance;
    detail += Fmt("alpha[%d]=%.4f ", static_cast<int>(seed), alpha);
  }
  return {pass, detail + "truth=2.5"};
}

bool AllFinite(std::span<const double> values) {
  return std::all_of(values.begin(), values.end(), [](double x) { return std::isfinite(x); });
}

Outcome ColdStart() {
  SyntheticConfig gc;
  gc.num_nodes = 600;
  gc.edges_per_new_node = 2;
  gc.intra_step_edges = 3;
  gc.seed = 7;
  const TemporalGraph graph = GenerateSynthetic(gc);
  const Day last = graph.edges().back().day;
  const auto t0 = static_cast<Day>(std::lround(0.8 * last));

  TaskSpec spec;
  spec.t0_day = t0;
  spec.t1_day = last;
  spec.degree_cutoff = 0;
  spec.num_samples = 2000;
  spec.seed = 4;
  const TaskInstance cold = SamplePairs(graph, spec);
  const Snapshot at_t0(graph, t0);
  bool pass = !cold.pairs.empty();
  for (const NodePair& p : cold.pairs) {
    pass = pass && at_t0.Degree(p.u) == 0 && at_t0.Degree(p.v) == 0;
  }

  TaskSpec train_spec;
  train_spec.t0_day = static_cast<Day>(std::lround(0.6 * last));
  train_spec.t1_day = t0;
  const TaskInstance train = BalancedTrainingSet(graph, train_spec, 400, 5);

  std::size_t bad_rows = 0;
  std::size_t bad_scores = 0;
  for (const FeatureSet set : {FeatureSet::kBaseline15, FeatureSet::kPairSim,
                               FeatureSet::kExtended}) {
    for (const bool transform : {false, true}) {
      FeatureConfig fc = FeatureConfig::Default(set, train_spec.t0_day);
      fc.yeo_johnson = transform;
      const FeatureMatrix features = BuildFeatureMatrix(graph, train.pairs, fc);
      MlpModel model = MlpModel::Create({features.cols(), 16, 1}, 6);
      model.set_feature_schema(features.schema);
      TrainConfig tc;
      tc.epochs = 3;
      TrainMlp(model, features.values, train.labels, tc);

      const FeatureMatrix cold_features =
          BuildFeatureMatrix(graph, cold.pairs, features.schema, t0);
      bad_rows += !cold_features.AllFinite();
      const MlpScorer scorer(std::move(model));
      bad_scores += !AllFinite(scorer.ScoreFeatures(cold_features, 1));
      bad_scores += !AllFinite(PredictTask(scorer, graph, cold));
    }
  }
  bad_scores += !AllFinite(PredictTask(PaSumScorer(), graph, cold));
  bad_scores += !AllFinite(PredictTask(CommonNeighborsScorer(), graph, cold));
  bad_scores += !AllFinite(PredictTask(RandomScorer(1), graph, cold));
  pass = pass && bad_rows == 0 && bad_scores == 0;
  return {pass, Fmt("cold_pairs=%zu nonfinite_feature_sets=%zu nonfinite_score_sets=%zu",
                    cold.pairs.size(), bad_rows, bad_scores)};
}

std::string Slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome CliDeterminism() {
  const fs::path root = fs::temp_directory_path() /
                        ("semlink_acceptance_" + std::to_string(Clock::now().time_since_epoch().count()));
  std::string stdout_a;
  std::string stdout_b;
  std::size_t failures = 0;
  for (const char* tag : {"a", "b"}) {
    const fs::path dir = root / tag;
    fs::create_directories(dir);
    auto f = [&](const char* name) { return (dir / name).string(); };
    const std::vector<std::vector<std::string>> runs = {
        {"generate", "--nodes", "1200", "--m", "2", "--intra", "4", "--seed", "11", "--out",
         f("g.tsv")},
        {"task", "--graph", f("g.tsv"), "--t0", "700", "--t1", "900", "--samples", "600",
         "--balanced", "--seed", "1", "--out", f("train.task")},
        {"task", "--graph", f("g.tsv"), "--t0", "900", "--t1", "1196", "--samples", "400",
         "--balanced", "--seed", "2", "--out", f("eval.task")},
        {"task", "--graph", f("g.tsv"), "--t0", "900", "--t1", "1196", "--samples", "500",
         "--seed", "3", "--out", f("uniform.task")},
        {"features", "--graph", f("g.tsv"), "--task", f("train.task"), "--yeo-johnson",
         "--threads", "3", "--out", f("train.csv")},
        {"features", "--graph", f("g.tsv"), "--task", f("eval.task"), "--set", "extended",
         "--threads", "2", "--out", f("eval_ext.csv")},
        {"train", "--features", f("train.csv"), "--labels", f("train.task"), "--arch", "16,8",
         "--pca", "6", "--epochs", "5", "--seed", "9", "--model-out", f("m.txt")},
        {"predict", "--graph", f("g.tsv"), "--task", f("eval.task"), "--scorer",
         std::string("mlp:") + f("m.txt"), "--threads", "2", "--out", f("mlp.csv")},
        {"predict", "--graph", f("g.tsv"), "--task", f("eval.task"), "--scorer", "pa", "--out",
         f("pa.csv")},
        {"predict", "--graph", f("g.tsv"), "--task", f("eval.task"), "--scorer", "cn", "--out",
         f("cn.csv")},
        {"predict", "--graph", f("g.tsv"), "--task", f("eval.task"), "--scorer", "random",
         "--seed", "5", "--out", f("random.csv")},
        {"eval", "--scores", f("mlp.csv"), "--task", f("eval.task"), "--roc-out", f("roc.csv")},
        {"analyze", "--graph", f("g.tsv"), "--cutoffs", "300,700,1196", "--out-dir",
         f("report")},
    };
    std::string& captured = std::string(tag) == "a" ? stdout_a : stdout_b;
    for (const auto& args : runs) {
      std::ostringstream out;
      std::ostringstream err;
      if (RunCli(args, out, err) != kExitOk) {
        ++failures;
        std::fprintf(stderr, "%s: %s", args[0].c_str(), err.str().c_str());
      }
      captured += out.str();
    }
  }

  std::size_t files = 0;
  std::size_t differing = 0;
  for (const auto& entry : fs::recursive_directory_iterator(root / "a")) {
    if (!entry.is_regular_file() || entry.path().filename() == "manifest.json") continue;
    const fs::path twin = root / "b" / fs::relative(entry.path(), root / "a");
    ++files;
    differing += !fs::exists(twin) || Slurp(entry.path()) != Slurp(twin);
  }
  fs::remove_all(root);
  const bool pass = failures == 0 && files >= 20 && differing == 0 && stdout_a == stdout_b;
  return {pass, Fmt("commands=13 failed_runs=%zu files=%zu differing=%zu stdout_equal=%d",
                    failures, files, differing, static_cast<int>(stdout_a == stdout_b))};
}

}  // namespace
}  // namespace semlink

int main() {
  using semlink::Outcome;
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"auc_oracle", semlink::AucOracle},
      {"feature_oracle", semlink::FeatureOracle},
      {"mlp_gradient", semlink::GradientCheck},
      {"synthetic_benchmark", semlink::Benchmark},
      {"exhaustive_tasks", semlink::ExhaustiveTasks},
      {"power_law", semlink::PowerLawRecovery},
      {"cold_start", semlink::ColdStart},
      {"cli_determinism", semlink::CliDeterminism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
