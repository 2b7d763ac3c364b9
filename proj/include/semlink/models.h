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

#ifndef SEMLINK_MODELS_H_
#define SEMLINK_MODELS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "semlink/features.h"
#include "semlink/pca.h"
#include "semlink/task.h"
#include "semlink/temporal_graph.h"

namespace semlink {

// ---------------------------------------------------------------------------
// Statistical scorers
// ---------------------------------------------------------------------------

// degree(u) + degree(v).
std::vector<double> ScorePaSum(const Snapshot& snapshot,
                               std::span<const NodePair> pairs);

// |N(u) & N(v)|.
std::vector<double> ScoreCommonNeighbors(const Snapshot& snapshot,
                                         std::span<const NodePair> pairs);

// ---------------------------------------------------------------------------
// Multilayer perceptron
// ---------------------------------------------------------------------------

struct DenseLayer {
  std::size_t inputs = 0;
  std::size_t outputs = 0;
  std::vector<double> weights;  // outputs x inputs, row-major
  std::vector<double> biases;   // outputs

  friend bool operator==(const DenseLayer&, const DenseLayer&) = default;
};

// Feed-forward network with ReLU hidden layers and one logistic output.
// Raw inputs pass through an optional PCA projection and then a per-column
// z-score before reaching the first layer; both are part of the model so a
// saved file is self-contained.
class MlpModel {
 public:
  MlpModel() = default;

  // `sizes` = {inputs, hidden..., 1}. Weights are drawn uniformly from
  // +-sqrt(6 / (fan_in + fan_out)); biases start at zero.
  static MlpModel Create(const std::vector<std::size_t>& sizes,
                         std::uint64_t seed);

  std::vector<std::size_t> LayerSizes() const;
  std::size_t network_inputs() const { return layers_.front().inputs; }
  // Width of rows accepted by Predict (before PCA).
  std::size_t raw_inputs() const {
    return pca_ ? pca_->dim : network_inputs();
  }

  std::span<const DenseLayer> layers() const { return layers_; }
  std::span<DenseLayer> mutable_layers() { return layers_; }

  const std::optional<PcaProjection>& pca() const { return pca_; }
  void set_pca(PcaProjection pca);

  std::span<const double> norm_mean() const { return norm_mean_; }
  std::span<const double> norm_std() const { return norm_std_; }
  // Column statistics over network-input rows. Zero-variance columns keep
  // std = 1 and mean = 0, i.e. pass through unchanged.
  void FitNormalization(std::span<const double> network_rows);
  void SetNormalization(std::vector<double> mean, std::vector<double> std_dev);

  // Schema of the feature rows the model was trained on; empty when the
  // model was built directly from numeric rows.
  const std::optional<FeatureSchema>& feature_schema() const { return schema_; }
  void set_feature_schema(FeatureSchema schema) { schema_ = std::move(schema); }

  // Raw rows -> network-input rows (PCA, then z-score).
  std::vector<double> Preprocess(std::span<const double> raw_rows) const;

  // Output logit for one preprocessed row.
  double Logit(std::span<const double> network_row) const;

  // Probability for one raw row.
  double Predict(std::span<const double> raw_row) const;
  std::vector<double> PredictRows(std::span<const double> raw_rows,
                                  unsigned threads = 1) const;

  friend bool operator==(const MlpModel&, const MlpModel&) = default;

 private:
  std::vector<DenseLayer> layers_;
  std::optional<PcaProjection> pca_;
  std::vector<double> norm_mean_;
  std::vector<double> norm_std_;
  std::optional<FeatureSchema> schema_;
};

// Mean binary cross-entropy of raw rows, evaluated from logits.
double MlpLoss(const MlpModel& model, std::span<const double> raw_rows,
               std::span<const std::uint8_t> labels);

struct MlpGradients {
  double loss = 0;
  std::vector<DenseLayer> layers;  // d loss / d weights and biases
};

// Exact gradient of the mean binary cross-entropy over the batch. Throws
// Error(kInvalidArgument) on size mismatches or labels outside {0, 1}.
MlpGradients ComputeMlpGradients(const MlpModel& model,
                                 std::span<const double> raw_rows,
                                 std::span<const std::uint8_t> labels);

enum class Optimizer { kAdam, kSgd };

struct TrainConfig {
  Optimizer optimizer = Optimizer::kAdam;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::size_t epochs = 50;
  std::size_t batch_size = 64;
  std::uint64_t seed = 0;

  void Validate() const;
};

struct TrainResult {
  // Mean loss over the full training set after each epoch.
  std::vector<double> loss_history;
};

// Fits input normalization, then optimizes in place. Rows are raw model
// inputs (row-major, labels.size() rows). Throws Error(kTrainingFailed) if
// the loss becomes non-finite.
TrainResult TrainMlp(MlpModel& model, std::span<const double> raw_rows,
                     std::span<const std::uint8_t> labels,
                     const TrainConfig& config);

// Versioned text format; doubles use shortest round-trip formatting.
void WriteModel(const MlpModel& model, std::ostream& out);
void WriteModelFile(const MlpModel& model, const std::filesystem::path& path);
MlpModel ReadModel(std::istream& in);
MlpModel ReadModelFile(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Scorer interface
// ---------------------------------------------------------------------------

// Maps candidate pairs to link likelihoods; higher means more likely.
class PairScorer {
 public:
  virtual ~PairScorer() = default;
  virtual std::string Name() const = 0;

  // Scores pairs of `task` against `graph`. The t0 snapshot comes from the
  // task spec.
  virtual std::vector<double> ScoreTask(const TemporalGraph& graph,
                                        const TaskInstance& task,
                                        unsigned threads) const = 0;
};

class PaSumScorer : public PairScorer {
 public:
  std::string Name() const override { return "pa"; }
  std::vector<double> ScoreTask(const TemporalGraph& graph,
                                const TaskInstance& task,
                                unsigned threads) const override;
};

class CommonNeighborsScorer : public PairScorer {
 public:
  std::string Name() const override { return "cn"; }
  std::vector<double> ScoreTask(const TemporalGraph& graph,
                                const TaskInstance& task,
                                unsigned threads) const override;
};

// Uniform score from a hash of (seed, u, v); independent of pair order.
class RandomScorer : public PairScorer {
 public:
  explicit RandomScorer(std::uint64_t seed) : seed_(seed) {}
  std::string Name() const override { return "random"; }
  std::vector<double> ScoreTask(const TemporalGraph& graph,
                                const TaskInstance& task,
                                unsigned threads) const override;

 private:
  std::uint64_t seed_;
};

// Builds the model's feature schema at the task's t0 (with cold-start
// imputation when the schema enables it) and runs the network.
class MlpScorer : public PairScorer {
 public:
  explicit MlpScorer(MlpModel model);
  std::string Name() const override { return "mlp"; }
  std::vector<double> ScoreTask(const TemporalGraph& graph,
                                const TaskInstance& task,
                                unsigned threads) const override;
  std::vector<double> ScoreFeatures(const FeatureMatrix& features,
                                    unsigned threads) const;

 private:
  MlpModel model_;
};

// One finite score per task pair, aligned with task.pairs.
std::vector<double> PredictTask(const PairScorer& scorer,
                                const TemporalGraph& graph,
                                const TaskInstance& task, unsigned threads = 1);

// Score CSV: header "u,v,score".
void WriteScoresCsv(std::span<const NodePair> pairs,
                    std::span<const double> scores, std::ostream& out);
void WriteScoresCsvFile(std::span<const NodePair> pairs,
                        std::span<const double> scores,
                        const std::filesystem::path& path);
struct ScoreTable {
  std::vector<NodePair> pairs;
  std::vector<double> scores;
};
ScoreTable ReadScoresCsv(std::istream& in);
ScoreTable ReadScoresCsvFile(const std::filesystem::path& path);

}  // namespace semlink

#endif  // SEMLINK_MODELS_H_
