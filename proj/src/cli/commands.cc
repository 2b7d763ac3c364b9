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


#include <algorithm>
#include <chrono>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "CLI11.hpp"
#include "cli/manifest.h"
#include "semlink/cli.h"
#include "semlink/eval.h"
#include "semlink/features.h"
#include "semlink/ingest.h"
#include "semlink/models.h"
#include "semlink/parallel.h"
#include "semlink/pca.h"
#include "semlink/status.h"
#include "semlink/task.h"
#include "semlink/temporal_graph.h"
#include "semlink/text_io.h"

namespace semlink {
namespace {

namespace fs = std::filesystem;
using cli::RunManifest;

constexpr const char* kExitCodeHelp =
    "Exit codes:\n"
    "  0  success\n"
    "  1  internal error\n"
    "  2  usage: unknown flag, bad flag value, invalid argument\n"
    "  3  io_error: missing or unreadable input, failed write\n"
    "  4  parse_error: malformed input file\n"
    "  5  schema_mismatch: inputs that do not belong together\n"
    "  6  insufficient_data: not enough pairs, samples or labels\n"
    "  7  training_failed: non-finite loss\n"
    "  8  out_of_range: node id outside the graph\n"
    "Failures print one line to stderr:\n"
    "  error code=<name> exit=<n> message=\"<text>\"\n"
    "Dates are day numbers since 1990-01-01 or YYYY-MM-DD.\n"
    "--config <file> reads key=value lines naming long flags without dashes;\n"
    "flags given on the command line win.";

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return kExitUsage;
    case ErrorCode::kOutOfRange: return kExitOutOfRange;
    case ErrorCode::kParse: return kExitParse;
    case ErrorCode::kIo: return kExitIo;
    case ErrorCode::kSchemaMismatch: return kExitSchemaMismatch;
    case ErrorCode::kInsufficientData: return kExitInsufficientData;
    case ErrorCode::kTrainingFailed: return kExitTrainingFailed;
  }
  return kExitInternal;
}

std::string Escape(std::string_view text) {
  std::string s;
  for (char c : text) {
    if (c == '"' || c == '\\') s += '\\';
    if (c == '\n') {
      s += "\\n";
      continue;
    }
    s += c;
  }
  return s;
}

int Fail(std::ostream& err, std::string_view code, int exit_code,
         std::string_view message) {
  err << "error code=" << code << " exit=" << exit_code << " message=\""
      << Escape(message) << "\"\n";
  return exit_code;
}

Error Usage(const std::string& message) {
  return Error(ErrorCode::kInvalidArgument, message);
}

Day ParseDayArg(const std::string& flag, const std::string& text) {
  const std::string_view t = Trim(text);
  if (t.size() == 10 && t[4] == '-' && t[7] == '-') {
    auto y = ParseInt(t.substr(0, 4));
    auto m = ParseUint(t.substr(5, 2));
    auto d = ParseUint(t.substr(8, 2));
    if (y && m && d && *m >= 1 && *m <= 12 && *d >= 1 && *d <= 31) {
      return DayFromCivil(static_cast<int>(*y), static_cast<unsigned>(*m),
                          static_cast<unsigned>(*d));
    }
  }
  auto v = ParseInt(t);
  if (!v || *v < std::numeric_limits<Day>::min() / 2 ||
      *v > std::numeric_limits<Day>::max() / 2) {
    throw Usage(flag + ": expected a day number or YYYY-MM-DD, got '" + text + "'");
  }
  return static_cast<Day>(*v);
}

std::vector<Day> ParseDayList(const std::string& flag, const std::string& text) {
  std::vector<Day> out;
  for (std::string_view item : Split(text, ',')) {
    out.push_back(ParseDayArg(flag, std::string(item)));
  }
  if (out.empty()) throw Usage(flag + ": empty list");
  return out;
}

std::vector<std::size_t> ParseSizeList(const std::string& flag,
                                       const std::string& text) {
  std::vector<std::size_t> out;
  if (Trim(text).empty()) return out;
  for (std::string_view item : Split(text, ',')) {
    auto v = ParseUint(item);
    if (!v || *v == 0) throw Usage(flag + ": expected positive integers, got '" + text + "'");
    out.push_back(static_cast<std::size_t>(*v));
  }
  return out;
}

// "inf"/"none" -> nullopt.
template <typename T>
std::optional<T> ParseUnbounded(const std::string& flag, const std::string& text,
                                std::string_view unbounded) {
  if (Trim(text) == unbounded) return std::nullopt;
  auto v = ParseUint(text);
  if (!v || *v > std::numeric_limits<T>::max()) {
    throw Usage(flag + ": expected a non-negative integer or '" +
                std::string(unbounded) + "', got '" + text + "'");
  }
  return static_cast<T>(*v);
}

// Refuses to overwrite any input with an output.
void CheckDistinct(const std::vector<fs::path>& inputs, const fs::path& output) {
  std::error_code ec;
  for (const fs::path& in : inputs) {
    if (fs::exists(output, ec) && fs::equivalent(in, output, ec)) {
      throw Usage("output " + output.string() + " would overwrite input " + in.string());
    }
  }
}

void EnsureParent(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
}

fs::path ManifestDir(const fs::path& output) { return output.parent_path(); }

// Every long option of a subcommand with its effective value.
std::map<std::string, std::string> EffectiveConfig(const CLI::App& sub) {
  std::map<std::string, std::string> config;
  for (const CLI::Option* opt : sub.get_options()) {
    if (opt->get_lnames().empty()) continue;
    const std::string& name = opt->get_lnames().front();
    if (name == "help") continue;
    std::string value;
    if (opt->count() > 0) {
      if (opt->get_type_size() == 0) {
        value = "true";
      } else {
        for (const std::string& r : opt->results()) {
          value += value.empty() ? r : "," + r;
        }
      }
    } else {
      value = opt->get_type_size() == 0 ? "false" : opt->get_default_str();
    }
    config[name] = value;
  }
  return config;
}

// Expands `--config <file>` into flags not already present on the command
// line. Boolean flags take true/false values.
std::vector<std::string> ExpandConfig(std::vector<std::string> args,
                                      std::optional<fs::path>* config_path) {
  std::optional<std::string> path;
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw Usage("--config requires a file");
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (!path) return rest;
  *config_path = *path;

  auto present = [&](const std::string& key) {
    const std::string flag = "--" + key;
    return std::any_of(rest.begin(), rest.end(), [&](const std::string& a) {
      return a == flag || a.rfind(flag + "=", 0) == 0;
    });
  };
  std::ifstream in = OpenForRead(*path);
  std::vector<std::string> extra;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view t = Trim(line);
    if (t.empty() || t.front() == '#') continue;
    const std::size_t eq = t.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "config: expected key=value");
    std::string key(Trim(t.substr(0, eq)));
    const std::string value(Trim(t.substr(eq + 1)));
    if (key.rfind("--", 0) == 0) key = key.substr(2);
    if (key.empty() || key == "config") throw ParseError(line_no, "config: bad key");
    if (present(key)) continue;
    if (value == "true") {
      extra.push_back("--" + key);
    } else if (value != "false") {
      extra.push_back("--" + key);
      extra.push_back(value);
    }
  }
  rest.insert(rest.end(), extra.begin(), extra.end());
  return rest;
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

struct Common {
  unsigned threads = 0;
};

struct GenerateArgs {
  SyntheticConfig config;
  std::string out;
};

struct TaskArgs {
  std::string graph, t0, t1, cutoff = "inf", samples = "all", out;
  std::uint32_t min_w = 1;
  bool balanced = false;
  std::uint64_t seed = 0;
};

struct FeaturesArgs {
  std::string graph, task, set = "baseline15", snapshots, impute_window = "365", out;
  bool yeo_johnson = false;
  double damping = 0.85;
  double tolerance = 1e-10;
};

struct TrainArgs {
  std::string features, labels, arch = "100,10", optimizer = "adam", model_out, loss_out;
  std::size_t pca = 0;
  double lr = 1e-3;
  std::size_t epochs = 50;
  std::size_t batch = 64;
  std::uint64_t seed = 0;
};

struct PredictArgs {
  std::string graph, task, scorer, out;
  std::uint64_t seed = 0;
};

struct EvalArgs {
  std::string scores, task, roc_out;
};

struct AnalyzeArgs {
  std::string graph, cutoffs, out_dir;
  double k_min = 5;
};

int RunGenerate(const GenerateArgs& a, RunManifest& manifest, std::ostream& out) {
  a.config.Validate();
  const TemporalGraph graph = GenerateSynthetic(a.config);
  const fs::path path = a.out;
  EnsureParent(path);
  WriteEdgeFile(graph, path);
  manifest.SetSeed(a.config.seed);
  manifest.AddOutput(path);
  manifest.Commit(ManifestDir(path), path.filename().string());
  out << "nodes=" << graph.num_nodes() << " temporal_edges=" << graph.edges().size()
      << " last_day=" << (graph.edges().empty() ? 0 : graph.edges().back().day) << '\n';
  return kExitOk;
}

int RunTask(const TaskArgs& a, RunManifest& manifest, std::ostream& out) {
  TaskSpec spec;
  spec.t0_day = ParseDayArg("--t0", a.t0);
  spec.t1_day = ParseDayArg("--t1", a.t1);
  spec.degree_cutoff = ParseUnbounded<std::uint32_t>("--cutoff-c", a.cutoff, "inf");
  spec.min_multiplicity = a.min_w;
  spec.num_samples = ParseUnbounded<std::size_t>("--samples", a.samples, "all");
  spec.seed = a.seed;
  spec.Validate();

  const fs::path graph_path = a.graph, path = a.out;
  CheckDistinct({graph_path}, path);
  const TemporalGraph graph = ReadEdgeFile(graph_path);
  TaskInstance task;
  if (a.balanced) {
    if (!spec.num_samples) throw Usage("--balanced requires a numeric --samples");
    task = BalancedTrainingSet(graph, spec, *spec.num_samples, a.seed);
  } else {
    task = SamplePairs(graph, spec);
  }
  EnsureParent(path);
  WriteTaskFile(task, path);
  manifest.SetSeed(a.seed);
  manifest.AddInput(graph_path);
  manifest.AddOutput(path);
  manifest.Commit(ManifestDir(path), path.filename().string());
  out << "pairs=" << task.pairs.size() << " positives=" << task.num_positive() << '\n';
  return kExitOk;
}

int RunFeatures(const FeaturesArgs& a, const Common& c, RunManifest& manifest,
                std::ostream& out, std::ostream& err) {
  const auto set = ParseFeatureSet(a.set);
  if (!set) throw Usage("--set: expected baseline15, pairsim or extended, got '" + a.set + "'");
  const fs::path graph_path = a.graph, task_path = a.task, path = a.out;
  CheckDistinct({graph_path, task_path}, path);
  const TemporalGraph graph = ReadEdgeFile(graph_path);
  const TaskInstance task = ReadTaskFile(task_path);

  const Day t0 = task.spec.t0_day;
  FeatureConfig config = FeatureConfig::Default(*set, t0);
  if (!a.snapshots.empty()) {
    config.snapshot_days.clear();
    for (Day offset : ParseDayList("--snapshots", a.snapshots)) {
      config.snapshot_days.push_back(t0 - offset);
    }
  }
  config.damping = a.damping;
  config.tolerance = a.tolerance;
  config.yeo_johnson = a.yeo_johnson;
  config.impute_window = ParseUnbounded<Day>("--impute-window", a.impute_window, "none");
  config.Validate();

  FeatureBuildInfo info;
  FeatureMatrix matrix =
      BuildFeatureMatrix(graph, task.pairs, config, ResolveThreads(c.threads), &info);
  if (!matrix.AllFinite()) {
    throw Error(ErrorCode::kInsufficientData, "feature matrix contains non-finite values");
  }
  EnsureParent(path);
  WriteFeatureCsvFile(matrix, path);
  manifest.AddInput(graph_path);
  manifest.AddInput(task_path);
  manifest.AddOutput(path);
  manifest.Commit(ManifestDir(path), path.filename().string());
  if (info.imputation_fallback) {
    err << "warning: no nodes born in the imputation window; unseen nodes use zeros\n";
  }
  out << "rows=" << matrix.rows() << " cols=" << matrix.cols()
      << " imputed_nodes=" << info.imputed_nodes << '\n';
  return kExitOk;
}

int RunTrain(const TrainArgs& a, RunManifest& manifest, std::ostream& out) {
  TrainConfig cfg;
  if (a.optimizer == "adam") {
    cfg.optimizer = Optimizer::kAdam;
  } else if (a.optimizer == "sgd") {
    cfg.optimizer = Optimizer::kSgd;
  } else {
    throw Usage("--optimizer: expected adam or sgd, got '" + a.optimizer + "'");
  }
  cfg.learning_rate = a.lr;
  cfg.epochs = a.epochs;
  cfg.batch_size = a.batch;
  cfg.seed = a.seed;
  cfg.Validate();
  const std::vector<std::size_t> hidden = ParseSizeList("--arch", a.arch);

  const fs::path features_path = a.features, labels_path = a.labels,
                 model_path = a.model_out;
  const fs::path loss_path =
      a.loss_out.empty() ? fs::path(a.model_out + ".loss.csv") : fs::path(a.loss_out);
  CheckDistinct({features_path, labels_path}, model_path);
  CheckDistinct({features_path, labels_path}, loss_path);
  const FeatureMatrix matrix = ReadFeatureCsvFile(features_path);
  const TaskInstance task = ReadTaskFile(labels_path);
  if (task.pairs != matrix.pairs) {
    throw Error(ErrorCode::kSchemaMismatch,
                "--labels pairs do not match --features rows in count or order");
  }
  if (matrix.rows() == 0) throw Error(ErrorCode::kInsufficientData, "no training rows");

  std::vector<std::size_t> sizes;
  sizes.push_back(a.pca > 0 ? a.pca : matrix.cols());
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(1);
  MlpModel model = MlpModel::Create(sizes, a.seed);
  if (a.pca > 0) model.set_pca(PcaFit(matrix.values, matrix.cols(), a.pca));
  model.set_feature_schema(matrix.schema);
  const TrainResult result = TrainMlp(model, matrix.values, task.labels, cfg);

  EnsureParent(model_path);
  WriteModelFile(model, model_path);
  EnsureParent(loss_path);
  {
    std::ofstream loss = OpenForWrite(loss_path);
    loss << "epoch,loss\n";
    for (std::size_t i = 0; i < result.loss_history.size(); ++i) {
      loss << i + 1 << ',' << FormatDouble(result.loss_history[i]) << '\n';
    }
    CheckWritten(loss, loss_path);
  }
  manifest.SetSeed(a.seed);
  manifest.AddInput(features_path);
  manifest.AddInput(labels_path);
  manifest.AddOutput(model_path);
  manifest.AddOutput(loss_path);
  manifest.Commit(ManifestDir(model_path), model_path.filename().string());
  out << "epochs=" << result.loss_history.size() << " final_loss="
      << (result.loss_history.empty() ? std::string("none")
                                      : FormatDouble(result.loss_history.back()))
      << '\n';
  return kExitOk;
}

int RunPredict(const PredictArgs& a, const Common& c, RunManifest& manifest,
               std::ostream& out) {
  const fs::path graph_path = a.graph, task_path = a.task, path = a.out;
  std::vector<fs::path> inputs = {graph_path, task_path};
  std::unique_ptr<PairScorer> scorer;
  if (a.scorer == "pa") {
    scorer = std::make_unique<PaSumScorer>();
  } else if (a.scorer == "cn") {
    scorer = std::make_unique<CommonNeighborsScorer>();
  } else if (a.scorer == "random") {
    scorer = std::make_unique<RandomScorer>(a.seed);
  } else if (a.scorer.rfind("mlp:", 0) == 0 && a.scorer.size() > 4) {
    inputs.emplace_back(a.scorer.substr(4));
    scorer = std::make_unique<MlpScorer>(ReadModelFile(inputs.back()));
  } else {
    throw Usage("--scorer: expected pa, cn, random or mlp:<model>, got '" + a.scorer + "'");
  }
  CheckDistinct(inputs, path);
  const TemporalGraph graph = ReadEdgeFile(graph_path);
  const TaskInstance task = ReadTaskFile(task_path);
  const std::vector<double> scores =
      PredictTask(*scorer, graph, task, ResolveThreads(c.threads));
  EnsureParent(path);
  WriteScoresCsvFile(task.pairs, scores, path);
  if (a.scorer == "random") manifest.SetSeed(a.seed);
  for (const fs::path& in : inputs) manifest.AddInput(in);
  manifest.AddOutput(path);
  manifest.Commit(ManifestDir(path), path.filename().string());
  out << "scorer=" << scorer->Name() << " pairs=" << scores.size() << '\n';
  return kExitOk;
}

int RunEval(const EvalArgs& a, RunManifest& manifest, std::ostream& out) {
  const fs::path scores_path = a.scores, task_path = a.task;
  if (!a.roc_out.empty()) CheckDistinct({scores_path, task_path}, a.roc_out);
  const ScoreTable table = ReadScoresCsvFile(scores_path);
  const TaskInstance task = ReadTaskFile(task_path);
  if (table.pairs.size() != task.pairs.size()) {
    throw Error(ErrorCode::kSchemaMismatch,
                "--scores has " + std::to_string(table.pairs.size()) +
                    " rows but --task has " + std::to_string(task.pairs.size()) + " pairs");
  }
  std::unordered_map<std::uint64_t, double> by_pair;
  for (std::size_t i = 0; i < table.pairs.size(); ++i) {
    if (!by_pair.emplace(table.pairs[i].Key(), table.scores[i]).second) {
      throw RecordError(i + 1, "duplicate pair in --scores");
    }
  }
  std::vector<double> scores;
  scores.reserve(task.pairs.size());
  for (const NodePair& p : task.pairs) {
    auto it = by_pair.find(p.Key());
    if (it == by_pair.end()) {
      throw Error(ErrorCode::kSchemaMismatch,
                  "pair " + std::to_string(p.u) + "," + std::to_string(p.v) +
                      " of --task is missing from --scores");
    }
    scores.push_back(it->second);
  }
  const RocResult roc = ComputeRoc(scores, task.labels);
  if (!a.roc_out.empty()) {
    const fs::path path = a.roc_out;
    EnsureParent(path);
    {
      std::ofstream f = OpenForWrite(path);
      WriteRocCsv(roc, f);
      CheckWritten(f, path);
    }
    manifest.AddInput(scores_path);
    manifest.AddInput(task_path);
    manifest.AddOutput(path);
    manifest.Commit(ManifestDir(path), path.filename().string());
  }
  out << "auc=" << FormatDouble(roc.auc) << " positives=" << roc.positives
      << " negatives=" << roc.negatives << '\n';
  return kExitOk;
}

int RunAnalyze(const AnalyzeArgs& a, RunManifest& manifest, std::ostream& out) {
  const fs::path graph_path = a.graph, dir = a.out_dir;
  const TemporalGraph graph = ReadEdgeFile(graph_path);
  std::vector<Day> cutoffs;
  if (a.cutoffs.empty()) {
    cutoffs.push_back(graph.edges().empty() ? 0 : graph.edges().back().day);
  } else {
    cutoffs = ParseDayList("--cutoffs", a.cutoffs);
  }
  const std::vector<CutoffReport> reports = AnalysisReport(graph, cutoffs, a.k_min);
  WriteAnalysisReport(reports, dir);
  manifest.AddInput(graph_path);
  for (const char* name : {"components.csv", "degree_histogram.csv", "clustering.csv",
                           "top_degree.csv", "power_law.csv", "centralization.csv",
                           "summary.json"}) {
    manifest.AddOutput(dir / name);
  }
  manifest.Commit(dir, "report");
  for (const CutoffReport& r : reports) {
    out << "cutoff_day=" << r.cutoff_day << " adjacent_pairs=" << r.num_adjacent_pairs
        << " components=" << r.component_sizes.size() << " isolated=" << r.isolated
        << " alpha=" << (r.power_law ? FormatDouble(r.power_law->alpha) : "NA") << '\n';
  }
  return kExitOk;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  std::optional<fs::path> config_path;
  std::vector<std::string> expanded;
  try {
    expanded = ExpandConfig(args, &config_path);
  } catch (const Error& e) {
    return Fail(err, ErrorCodeName(e.code()), ExitCodeFor(e.code()), e.what());
  }

  CLI::App app{"Temporal link-forecasting benchmark on concept co-occurrence graphs",
               "semlink"};
  app.require_subcommand(1);
  app.footer(kExitCodeHelp);
  app.set_version_flag("--version", SEMLINK_VERSION);

  Common common;
  auto add_threads = [&](CLI::App* sub) {
    sub->add_option("--threads", common.threads,
                    "Worker threads, 0 = all cores; output is identical for any value")
        ->capture_default_str();
  };

  GenerateArgs gen;
  CLI::App* generate =
      app.add_subcommand("generate", "Synthetic preferential-attachment edge file");
  generate->add_option("--nodes", gen.config.num_nodes, "Final node count")
      ->capture_default_str();
  generate->add_option("--m", gen.config.edges_per_new_node, "Edges per new node")
      ->capture_default_str();
  generate->add_option("--intra", gen.config.intra_step_edges,
                       "Edges added among existing nodes per step")
      ->capture_default_str();
  generate->add_option("--days-per-step", gen.config.days_per_step, "Days between steps")
      ->capture_default_str();
  generate->add_option("--seed", gen.config.seed, "Random seed")->capture_default_str();
  generate->add_option("--out", gen.out, "Edge file to write")->required();

  TaskArgs ta;
  CLI::App* task = app.add_subcommand("task", "Sample and label candidate pairs");
  task->add_option("--graph", ta.graph, "Edge file")->required();
  task->add_option("--t0", ta.t0, "Observation cutoff")->required();
  task->add_option("--t1", ta.t1, "Evaluation date")->required();
  task->add_option("--cutoff-c", ta.cutoff, "Maximum t0 degree of both endpoints, or inf")
      ->capture_default_str();
  task->add_option("--min-w", ta.min_w, "Edges a pair needs by t1 to be positive")
      ->capture_default_str();
  task->add_option("--samples", ta.samples, "Number of pairs, or all")->capture_default_str();
  task->add_flag("--balanced", ta.balanced,
                 "Half positives, half negatives (needs a numeric --samples)");
  task->add_option("--seed", ta.seed, "Random seed")->capture_default_str();
  task->add_option("--out", ta.out, "Task file to write")->required();
  add_threads(task);

  FeaturesArgs fa;
  CLI::App* features = app.add_subcommand("features", "Feature CSV for a task");
  features->add_option("--graph", fa.graph, "Edge file")->required();
  features->add_option("--task", fa.task, "Task file")->required();
  features->add_option("--set", fa.set, "baseline15, pairsim or extended")
      ->capture_default_str();
  features->add_option("--snapshots", fa.snapshots,
                       "Comma-separated snapshot offsets in days before t0 "
                       "(default 0,365,730)");
  features->add_flag("--yeo-johnson", fa.yeo_johnson,
                     "Fit and apply a Yeo-Johnson transform per column");
  features->add_option("--impute-window", fa.impute_window,
                       "Days of recent births used to impute unseen nodes, or none")
      ->capture_default_str();
  features->add_option("--damping", fa.damping, "PageRank damping")->capture_default_str();
  features->add_option("--tolerance", fa.tolerance, "PageRank L1 tolerance")
      ->capture_default_str();
  features->add_option("--out", fa.out, "Feature CSV to write")->required();
  add_threads(features);

  TrainArgs tr;
  CLI::App* train = app.add_subcommand("train", "Train an MLP on a feature CSV");
  train->add_option("--features", tr.features, "Feature CSV")->required();
  train->add_option("--labels", tr.labels, "Task file with the same pairs")->required();
  train->add_option("--arch", tr.arch, "Comma-separated hidden layer sizes")
      ->capture_default_str();
  train->add_option("--pca", tr.pca, "Project inputs onto K principal axes, 0 = off")
      ->capture_default_str();
  train->add_option("--optimizer", tr.optimizer, "adam or sgd")->capture_default_str();
  train->add_option("--lr", tr.lr, "Learning rate")->capture_default_str();
  train->add_option("--epochs", tr.epochs, "Passes over the data")->capture_default_str();
  train->add_option("--batch", tr.batch, "Minibatch size")->capture_default_str();
  train->add_option("--seed", tr.seed, "Random seed")->capture_default_str();
  train->add_option("--model-out", tr.model_out, "Model file to write")->required();
  train->add_option("--loss-out", tr.loss_out,
                    "Loss CSV to write (default <model-out>.loss.csv)");

  PredictArgs pr;
  CLI::App* predict = app.add_subcommand("predict", "Score the pairs of a task");
  predict->add_option("--graph", pr.graph, "Edge file")->required();
  predict->add_option("--task", pr.task, "Task file")->required();
  predict->add_option("--scorer", pr.scorer, "pa, cn, random or mlp:<model file>")
      ->required();
  predict->add_option("--seed", pr.seed, "Seed of the random scorer")->capture_default_str();
  predict->add_option("--out", pr.out, "Score CSV to write")->required();
  add_threads(predict);

  EvalArgs ev;
  CLI::App* eval = app.add_subcommand("eval", "ROC AUC of a score CSV");
  eval->add_option("--scores", ev.scores, "Score CSV")->required();
  eval->add_option("--task", ev.task, "Task file with labels")->required();
  eval->add_option("--roc-out", ev.roc_out, "ROC curve CSV to write");

  AnalyzeArgs an;
  CLI::App* analyze = app.add_subcommand("analyze", "Network statistics per cutoff");
  analyze->add_option("--graph", an.graph, "Edge file")->required();
  analyze->add_option("--cutoffs", an.cutoffs,
                      "Comma-separated cutoff days (default: last edge day)");
  analyze->add_option("--k-min", an.k_min, "Lower bound of the power-law tail")
      ->capture_default_str();
  analyze->add_option("--out-dir", an.out_dir, "Report directory")->required();

  std::vector<std::string> reversed(expanded.rbegin(), expanded.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << SEMLINK_VERSION << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    return Fail(err, "usage", kExitUsage, e.what());
  }

  CLI::App* sub = app.get_subcommands().front();
  std::vector<std::string> argv = {"semlink"};
  argv.insert(argv.end(), args.begin(), args.end());
  RunManifest manifest(sub->get_name(), argv);
  std::map<std::string, std::string> config = EffectiveConfig(*sub);
  if (config_path) config["config"] = config_path->string();
  manifest.SetConfig(std::move(config));
  try {
    if (config_path) manifest.AddInput(*config_path);
    if (sub == generate) return RunGenerate(gen, manifest, out);
    if (sub == task) return RunTask(ta, manifest, out);
    if (sub == features) return RunFeatures(fa, common, manifest, out, err);
    if (sub == train) return RunTrain(tr, manifest, out);
    if (sub == predict) return RunPredict(pr, common, manifest, out);
    if (sub == eval) return RunEval(ev, manifest, out);
    if (sub == analyze) return RunAnalyze(an, manifest, out);
    return Fail(err, "internal", kExitInternal, "unhandled subcommand");
  } catch (const Error& e) {
    return Fail(err, ErrorCodeName(e.code()), ExitCodeFor(e.code()), e.what());
  } catch (const fs::filesystem_error& e) {
    return Fail(err, "io_error", kExitIo, e.what());
  } catch (const std::exception& e) {
    return Fail(err, "internal", kExitInternal, e.what());
  }
}

int RunCli(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return RunCli(args, std::cout, std::cerr);
}

}  // namespace semlink
