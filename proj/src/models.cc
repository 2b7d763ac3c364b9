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

#include "semlink/models.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include "semlink/parallel.h"
#include "semlink/random.h"
#include "semlink/status.h"
#include "semlink/text_io.h"

namespace semlink {
namespace {

double Sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// -[y log s(z) + (1 - y) log(1 - s(z))], stable for large |z|.
double BceFromLogit(double z, double y) {
  return std::max(z, 0.0) - z * y + std::log1p(std::exp(-std::abs(z)));
}

void CheckBatch(const MlpModel& model, std::span<const double> raw_rows,
                std::span<const std::uint8_t> labels) {
  const std::size_t width = model.raw_inputs();
  if (raw_rows.size() != labels.size() * width) {
    throw Error(ErrorCode::kInvalidArgument,
                "mlp: expected " + std::to_string(labels.size()) + " rows of " +
                    std::to_string(width) + " values, got " +
                    std::to_string(raw_rows.size()) + " values");
  }
  for (std::uint8_t y : labels) {
    if (y > 1) throw Error(ErrorCode::kInvalidArgument, "mlp: labels must be 0 or 1");
  }
}

// Per-example forward state for backpropagation.
struct Trace {
  std::vector<std::vector<double>> pre;   // z per layer
  std::vector<std::vector<double>> post;  // a per layer, post[0] = input
};

double ForwardTrace(std::span<const DenseLayer> layers,
                    std::span<const double> x, Trace& trace) {
  trace.pre.resize(layers.size());
  trace.post.resize(layers.size() + 1);
  trace.post[0].assign(x.begin(), x.end());
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const DenseLayer& layer = layers[l];
    auto& z = trace.pre[l];
    auto& a = trace.post[l + 1];
    const auto& in = trace.post[l];
    z.assign(layer.outputs, 0.0);
    a.assign(layer.outputs, 0.0);
    for (std::size_t o = 0; o < layer.outputs; ++o) {
      double sum = layer.biases[o];
      const double* w = layer.weights.data() + o * layer.inputs;
      for (std::size_t i = 0; i < layer.inputs; ++i) sum += w[i] * in[i];
      z[o] = sum;
      a[o] = l + 1 == layers.size() ? sum : std::max(sum, 0.0);
    }
  }
  return trace.pre.back()[0];
}

std::vector<DenseLayer> ZeroLike(std::span<const DenseLayer> layers) {
  std::vector<DenseLayer> out(layers.begin(), layers.end());
  for (DenseLayer& l : out) {
    std::fill(l.weights.begin(), l.weights.end(), 0.0);
    std::fill(l.biases.begin(), l.biases.end(), 0.0);
  }
  return out;
}

// Accumulates the gradient of the mean loss over preprocessed rows into
// `grads` and returns the mean loss.
double Backprop(std::span<const DenseLayer> layers,
                std::span<const double> network_rows,
                std::span<const std::uint8_t> labels,
                std::span<const std::size_t> batch, std::vector<DenseLayer>& grads) {
  const std::size_t width = layers.front().inputs;
  const double scale = 1.0 / static_cast<double>(batch.size());
  Trace trace;
  std::vector<double> delta;
  std::vector<double> prev_delta;
  double loss = 0;
  for (std::size_t idx : batch) {
    const double y = labels[idx];
    const double z = ForwardTrace(layers, network_rows.subspan(idx * width, width), trace);
    loss += BceFromLogit(z, y);
    delta.assign(1, (Sigmoid(z) - y) * scale);
    for (std::size_t l = layers.size(); l-- > 0;) {
      const DenseLayer& layer = layers[l];
      DenseLayer& g = grads[l];
      const auto& in = trace.post[l];
      for (std::size_t o = 0; o < layer.outputs; ++o) {
        const double d = delta[o];
        if (d == 0) continue;
        g.biases[o] += d;
        double* gw = g.weights.data() + o * layer.inputs;
        for (std::size_t i = 0; i < layer.inputs; ++i) gw[i] += d * in[i];
      }
      if (l == 0) break;
      prev_delta.assign(layer.inputs, 0.0);
      for (std::size_t o = 0; o < layer.outputs; ++o) {
        const double d = delta[o];
        if (d == 0) continue;
        const double* w = layer.weights.data() + o * layer.inputs;
        for (std::size_t i = 0; i < layer.inputs; ++i) prev_delta[i] += w[i] * d;
      }
      const auto& z_prev = trace.pre[l - 1];
      for (std::size_t i = 0; i < layer.inputs; ++i) {
        if (z_prev[i] <= 0) prev_delta[i] = 0;
      }
      delta.swap(prev_delta);
    }
  }
  return loss * scale;
}

double MeanLoss(std::span<const DenseLayer> layers,
                std::span<const double> network_rows,
                std::span<const std::uint8_t> labels) {
  const std::size_t width = layers.front().inputs;
  Trace trace;
  double loss = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double z = ForwardTrace(layers, network_rows.subspan(i * width, width), trace);
    loss += BceFromLogit(z, labels[i]);
  }
  return labels.empty() ? 0.0 : loss / static_cast<double>(labels.size());
}

}  // namespace

// ---------------------------------------------------------------------------

std::vector<double> ScorePaSum(const Snapshot& snapshot,
                               std::span<const NodePair> pairs) {
  std::vector<double> out(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (pairs[i].u >= snapshot.num_nodes() || pairs[i].v >= snapshot.num_nodes()) {
      throw RecordError(i, "pair node id out of range");
    }
    out[i] = static_cast<double>(snapshot.Degree(pairs[i].u)) +
             static_cast<double>(snapshot.Degree(pairs[i].v));
  }
  return out;
}

std::vector<double> ScoreCommonNeighbors(const Snapshot& snapshot,
                                         std::span<const NodePair> pairs) {
  std::vector<double> out(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    out[i] = CommonNeighbors(snapshot, pairs[i].u, pairs[i].v);
  }
  return out;
}

// ---------------------------------------------------------------------------

MlpModel MlpModel::Create(const std::vector<std::size_t>& sizes,
                          std::uint64_t seed) {
  if (sizes.size() < 2 || sizes.back() != 1 ||
      std::find(sizes.begin(), sizes.end(), 0) != sizes.end()) {
    throw Error(ErrorCode::kInvalidArgument,
                "mlp: layer sizes must be positive and end in 1");
  }
  Rng rng(seed);
  MlpModel m;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    DenseLayer layer;
    layer.inputs = sizes[l];
    layer.outputs = sizes[l + 1];
    const double limit = std::sqrt(6.0 / static_cast<double>(layer.inputs + layer.outputs));
    layer.weights.resize(layer.inputs * layer.outputs);
    for (double& w : layer.weights) w = rng.UniformReal(-limit, limit);
    layer.biases.assign(layer.outputs, 0.0);
    m.layers_.push_back(std::move(layer));
  }
  m.norm_mean_.assign(sizes.front(), 0.0);
  m.norm_std_.assign(sizes.front(), 1.0);
  return m;
}

std::vector<std::size_t> MlpModel::LayerSizes() const {
  std::vector<std::size_t> sizes;
  if (layers_.empty()) return sizes;
  sizes.push_back(layers_.front().inputs);
  for (const DenseLayer& l : layers_) sizes.push_back(l.outputs);
  return sizes;
}

void MlpModel::set_pca(PcaProjection pca) {
  if (pca.components() != network_inputs()) {
    throw Error(ErrorCode::kInvalidArgument,
                "mlp: PCA components must equal the network input size");
  }
  pca_ = std::move(pca);
}

void MlpModel::FitNormalization(std::span<const double> network_rows) {
  const std::size_t d = network_inputs();
  const std::size_t n = network_rows.size() / d;
  norm_mean_.assign(d, 0.0);
  norm_std_.assign(d, 1.0);
  if (n == 0) return;
  std::vector<double> mean(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) mean[j] += network_rows[i * d + j];
  }
  for (double& m : mean) m /= static_cast<double>(n);
  std::vector<double> var(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const double c = network_rows[i * d + j] - mean[j];
      var[j] += c * c;
    }
  }
  for (std::size_t j = 0; j < d; ++j) {
    const double sd = std::sqrt(var[j] / static_cast<double>(n));
    if (sd > 0 && std::isfinite(sd)) {
      norm_mean_[j] = mean[j];
      norm_std_[j] = sd;
    }
  }
}

void MlpModel::SetNormalization(std::vector<double> mean,
                                std::vector<double> std_dev) {
  if (mean.size() != network_inputs() || std_dev.size() != network_inputs()) {
    throw Error(ErrorCode::kSchemaMismatch, "mlp: normalization size mismatch");
  }
  for (double s : std_dev) {
    if (!(s > 0) || !std::isfinite(s)) {
      throw Error(ErrorCode::kInvalidArgument, "mlp: normalization std must be positive");
    }
  }
  norm_mean_ = std::move(mean);
  norm_std_ = std::move(std_dev);
}

std::vector<double> MlpModel::Preprocess(std::span<const double> raw_rows) const {
  const std::size_t width = raw_inputs();
  if (raw_rows.size() % width != 0) {
    throw Error(ErrorCode::kSchemaMismatch,
                "mlp: input rows must have " + std::to_string(width) + " values");
  }
  std::vector<double> x = pca_ ? PcaTransform(*pca_, raw_rows)
                               : std::vector<double>(raw_rows.begin(), raw_rows.end());
  const std::size_t d = network_inputs();
  for (std::size_t i = 0; i < x.size(); ++i) {
    const std::size_t j = i % d;
    x[i] = (x[i] - norm_mean_[j]) / norm_std_[j];
  }
  return x;
}

double MlpModel::Logit(std::span<const double> network_row) const {
  Trace trace;
  return ForwardTrace(layers_, network_row, trace);
}

double MlpModel::Predict(std::span<const double> raw_row) const {
  if (raw_row.size() != raw_inputs()) {
    throw Error(ErrorCode::kSchemaMismatch,
                "mlp: expected " + std::to_string(raw_inputs()) + " inputs, got " +
                    std::to_string(raw_row.size()));
  }
  return Sigmoid(Logit(Preprocess(raw_row)));
}

std::vector<double> MlpModel::PredictRows(std::span<const double> raw_rows,
                                          unsigned threads) const {
  const std::vector<double> x = Preprocess(raw_rows);
  const std::size_t d = network_inputs();
  const std::size_t n = x.size() / d;
  std::vector<double> out(n);
  ParallelFor(n, threads, [&](std::size_t begin, std::size_t end) {
    Trace trace;
    for (std::size_t i = begin; i < end; ++i) {
      out[i] = Sigmoid(ForwardTrace(layers_, std::span(x).subspan(i * d, d), trace));
    }
  });
  return out;
}

double MlpLoss(const MlpModel& model, std::span<const double> raw_rows,
               std::span<const std::uint8_t> labels) {
  CheckBatch(model, raw_rows, labels);
  return MeanLoss(model.layers(), model.Preprocess(raw_rows), labels);
}

MlpGradients ComputeMlpGradients(const MlpModel& model,
                                 std::span<const double> raw_rows,
                                 std::span<const std::uint8_t> labels) {
  CheckBatch(model, raw_rows, labels);
  if (labels.empty()) throw Error(ErrorCode::kInvalidArgument, "mlp: empty batch");
  MlpGradients out;
  out.layers = ZeroLike(model.layers());
  const std::vector<double> x = model.Preprocess(raw_rows);
  std::vector<std::size_t> batch(labels.size());
  std::iota(batch.begin(), batch.end(), std::size_t{0});
  out.loss = Backprop(model.layers(), x, labels, batch, out.layers);
  return out;
}

void TrainConfig::Validate() const {
  if (!(learning_rate > 0)) {
    throw Error(ErrorCode::kInvalidArgument, "train: learning rate must be positive");
  }
  if (batch_size < 1) throw Error(ErrorCode::kInvalidArgument, "train: batch size must be >= 1");
}

TrainResult TrainMlp(MlpModel& model, std::span<const double> raw_rows,
                     std::span<const std::uint8_t> labels,
                     const TrainConfig& config) {
  config.Validate();
  CheckBatch(model, raw_rows, labels);
  if (labels.empty()) throw Error(ErrorCode::kInvalidArgument, "train: no rows");

  std::vector<double> x = model.pca() ? PcaTransform(*model.pca(), raw_rows)
                                      : std::vector<double>(raw_rows.begin(), raw_rows.end());
  model.FitNormalization(x);
  x = model.Preprocess(raw_rows);

  auto layers = model.mutable_layers();
  std::vector<DenseLayer> grads = ZeroLike(layers);
  std::vector<DenseLayer> m1 = ZeroLike(layers);
  std::vector<DenseLayer> m2 = ZeroLike(layers);
  std::vector<std::size_t> order(labels.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng = Rng(config.seed).Split(1);
  std::uint64_t step = 0;

  auto update = [&](std::vector<double>& param, const std::vector<double>& g,
                    std::vector<double>& s1, std::vector<double>& s2) {
    if (config.optimizer == Optimizer::kSgd) {
      for (std::size_t i = 0; i < param.size(); ++i) param[i] -= config.learning_rate * g[i];
      return;
    }
    const double c1 = 1.0 - std::pow(config.beta1, static_cast<double>(step));
    const double c2 = 1.0 - std::pow(config.beta2, static_cast<double>(step));
    for (std::size_t i = 0; i < param.size(); ++i) {
      s1[i] = config.beta1 * s1[i] + (1 - config.beta1) * g[i];
      s2[i] = config.beta2 * s2[i] + (1 - config.beta2) * g[i] * g[i];
      const double mhat = s1[i] / c1;
      const double vhat = s2[i] / c2;
      param[i] -= config.learning_rate * mhat / (std::sqrt(vhat) + config.epsilon);
    }
  };

  TrainResult result;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    rng.Shuffle(std::span<std::size_t>(order));
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      for (DenseLayer& g : grads) {
        std::fill(g.weights.begin(), g.weights.end(), 0.0);
        std::fill(g.biases.begin(), g.biases.end(), 0.0);
      }
      const double loss = Backprop(layers, x, labels,
                                   std::span(order).subspan(start, end - start), grads);
      if (!std::isfinite(loss)) {
        throw Error(ErrorCode::kTrainingFailed,
                    "train: non-finite loss in epoch " + std::to_string(epoch + 1) +
                        " (learning rate " + FormatDouble(config.learning_rate) + ")");
      }
      ++step;
      for (std::size_t l = 0; l < layers.size(); ++l) {
        update(layers[l].weights, grads[l].weights, m1[l].weights, m2[l].weights);
        update(layers[l].biases, grads[l].biases, m1[l].biases, m2[l].biases);
      }
    }
    const double epoch_loss = MeanLoss(layers, x, labels);
    if (!std::isfinite(epoch_loss)) {
      throw Error(ErrorCode::kTrainingFailed,
                  "train: non-finite loss after epoch " + std::to_string(epoch + 1));
    }
    result.loss_history.push_back(epoch_loss);
  }
  return result;
}

// ---------------------------------------------------------------------------

namespace {

constexpr std::string_view kModelMagic = "semlink-mlp";
constexpr int kModelVersion = 1;

void WriteValues(std::ostream& out, std::string_view key,
                 std::span<const double> values) {
  out << key;
  for (double x : values) out << ' ' << FormatDouble(x);
  out << '\n';
}

class ModelReader {
 public:
  explicit ModelReader(std::istream& in) : in_(in) {}

  // Next non-empty line split on spaces; the first token must be `key`.
  std::vector<std::string> Expect(std::string_view key) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      std::string_view text = Trim(line);
      if (text.empty()) continue;
      std::vector<std::string> tokens;
      for (auto t : Split(text, ' ')) {
        if (!t.empty()) tokens.emplace_back(t);
      }
      if (tokens.front() != key) {
        throw ParseError(line_no_, "expected '" + std::string(key) + "', got '" +
                                       tokens.front() + "'");
      }
      tokens.erase(tokens.begin());
      return tokens;
    }
    throw ParseError(line_no_ + 1, "unexpected end of model file, wanted '" +
                                       std::string(key) + "'");
  }

  std::vector<double> Doubles(std::string_view key, std::size_t count) {
    auto tokens = Expect(key);
    if (tokens.size() != count) {
      throw ParseError(line_no_, std::string(key) + ": expected " +
                                     std::to_string(count) + " values, got " +
                                     std::to_string(tokens.size()));
    }
    std::vector<double> out;
    for (const auto& t : tokens) {
      auto x = ParseDouble(t);
      if (!x) throw ParseError(line_no_, "bad number '" + t + "'");
      out.push_back(*x);
    }
    return out;
  }

  std::size_t Size(const std::string& token) {
    auto x = ParseUint(token);
    if (!x) throw ParseError(line_no_, "bad size '" + token + "'");
    return static_cast<std::size_t>(*x);
  }

  std::size_t line_no() const { return line_no_; }

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

}  // namespace

void WriteModel(const MlpModel& model, std::ostream& out) {
  out << kModelMagic << ' ' << kModelVersion << '\n';
  const auto sizes = model.LayerSizes();
  out << "layers " << sizes.size();
  for (std::size_t s : sizes) out << ' ' << s;
  out << '\n';
  if (model.pca()) {
    const PcaProjection& p = *model.pca();
    out << "pca " << p.dim << ' ' << p.components() << '\n';
    WriteValues(out, "pca_mean", p.mean);
    WriteValues(out, "pca_eigenvalues", p.eigenvalues);
    WriteValues(out, "pca_axes", p.axes);
  } else {
    out << "pca none\n";
  }
  WriteValues(out, "norm_mean", model.norm_mean());
  WriteValues(out, "norm_std", model.norm_std());
  if (const auto& schema = model.feature_schema()) {
    out << "schema set=" << FeatureSetName(schema->set) << " offsets=";
    for (std::size_t i = 0; i < schema->snapshot_offsets.size(); ++i) {
      if (i) out << ';';
      out << schema->snapshot_offsets[i];
    }
    out << " impute_window=";
    if (schema->impute_window) {
      out << *schema->impute_window;
    } else {
      out << "none";
    }
    out << " damping=" << FormatDouble(schema->damping)
        << " tolerance=" << FormatDouble(schema->tolerance) << '\n';
    out << "columns " << schema->columns.size();
    for (const auto& c : schema->columns) out << ' ' << c;
    out << '\n';
    out << "lambdas " << schema->yeo_johnson_lambdas.size();
    for (double x : schema->yeo_johnson_lambdas) out << ' ' << FormatDouble(x);
    out << '\n';
  } else {
    out << "schema none\n";
  }
  for (std::size_t l = 0; l < model.layers().size(); ++l) {
    const DenseLayer& layer = model.layers()[l];
    WriteValues(out, "weights", layer.weights);
    WriteValues(out, "biases", layer.biases);
  }
}

void WriteModelFile(const MlpModel& model, const std::filesystem::path& path) {
  auto out = OpenForWrite(path);
  WriteModel(model, out);
  CheckWritten(out, path);
}

MlpModel ReadModel(std::istream& in) {
  ModelReader r(in);
  auto magic = r.Expect(kModelMagic);
  if (magic.size() != 1 || magic[0] != std::to_string(kModelVersion)) {
    throw Error(ErrorCode::kSchemaMismatch, "unsupported model file version");
  }
  auto layer_tokens = r.Expect("layers");
  if (layer_tokens.empty() || r.Size(layer_tokens[0]) != layer_tokens.size() - 1) {
    throw ParseError(r.line_no(), "bad layer list");
  }
  std::vector<std::size_t> sizes;
  for (std::size_t i = 1; i < layer_tokens.size(); ++i) sizes.push_back(r.Size(layer_tokens[i]));
  MlpModel model = MlpModel::Create(sizes, 0);

  auto pca_tokens = r.Expect("pca");
  std::optional<PcaProjection> pca;
  if (!(pca_tokens.size() == 1 && pca_tokens[0] == "none")) {
    if (pca_tokens.size() != 2) throw ParseError(r.line_no(), "bad pca line");
    PcaProjection p;
    p.dim = r.Size(pca_tokens[0]);
    const std::size_t k = r.Size(pca_tokens[1]);
    p.mean = r.Doubles("pca_mean", p.dim);
    p.eigenvalues = r.Doubles("pca_eigenvalues", k);
    p.axes = r.Doubles("pca_axes", k * p.dim);
    pca = std::move(p);
  }
  std::vector<double> mean = r.Doubles("norm_mean", sizes.front());
  std::vector<double> sd = r.Doubles("norm_std", sizes.front());

  auto schema_tokens = r.Expect("schema");
  std::optional<FeatureSchema> schema;
  if (!(schema_tokens.size() == 1 && schema_tokens[0] == "none")) {
    // Reuse the feature CSV preamble parser for the key=value fields.
    std::string preamble = "# semlink-features version=" +
                           std::to_string(kFeatureFormatVersion);
    for (const auto& t : schema_tokens) preamble += " " + t;
    auto columns = r.Expect("columns");
    if (columns.empty() || r.Size(columns[0]) != columns.size() - 1) {
      throw ParseError(r.line_no(), "bad column list");
    }
    std::string header = "u,v";
    for (std::size_t i = 1; i < columns.size(); ++i) header += "," + columns[i];
    auto lambda_tokens = r.Expect("lambdas");
    if (lambda_tokens.empty() || r.Size(lambda_tokens[0]) != lambda_tokens.size() - 1) {
      throw ParseError(r.line_no(), "bad lambda list");
    }
    if (lambda_tokens.size() > 1) {
      preamble += "\n# yeo_johnson_lambdas=";
      for (std::size_t i = 1; i < lambda_tokens.size(); ++i) {
        if (i > 1) preamble += ';';
        preamble += lambda_tokens[i];
      }
    }
    std::istringstream csv(preamble + "\n" + header + "\n");
    schema = ReadFeatureCsv(csv).schema;
  }

  for (DenseLayer& layer : model.mutable_layers()) {
    layer.weights = r.Doubles("weights", layer.inputs * layer.outputs);
    layer.biases = r.Doubles("biases", layer.outputs);
  }

  if (pca) model.set_pca(std::move(*pca));
  model.SetNormalization(std::move(mean), std::move(sd));
  if (schema) {
    if (schema->columns.size() != model.raw_inputs()) {
      throw Error(ErrorCode::kSchemaMismatch,
                  "model schema column count does not match input size");
    }
    model.set_feature_schema(std::move(*schema));
  }
  return model;
}

MlpModel ReadModelFile(const std::filesystem::path& path) {
  auto in = OpenForRead(path);
  return ReadModel(in);
}

// ---------------------------------------------------------------------------

std::vector<double> PaSumScorer::ScoreTask(const TemporalGraph& graph,
                                           const TaskInstance& task,
                                           unsigned) const {
  return ScorePaSum(Snapshot(graph, task.spec.t0_day), task.pairs);
}

std::vector<double> CommonNeighborsScorer::ScoreTask(const TemporalGraph& graph,
                                                     const TaskInstance& task,
                                                     unsigned threads) const {
  const Snapshot t0(graph, task.spec.t0_day);
  std::vector<double> out(task.pairs.size());
  ParallelFor(task.pairs.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      out[i] = CommonNeighbors(t0, task.pairs[i].u, task.pairs[i].v);
    }
  });
  return out;
}

std::vector<double> RandomScorer::ScoreTask(const TemporalGraph&,
                                            const TaskInstance& task,
                                            unsigned) const {
  std::vector<double> out(task.pairs.size());
  for (std::size_t i = 0; i < task.pairs.size(); ++i) {
    const std::uint64_t h = Rng::Mix(seed_ ^ Rng::Mix(task.pairs[i].Key()));
    out[i] = static_cast<double>(h >> 11) * 0x1.0p-53;
  }
  return out;
}

MlpScorer::MlpScorer(MlpModel model) : model_(std::move(model)) {
  if (!model_.feature_schema()) {
    throw Error(ErrorCode::kSchemaMismatch,
                "mlp scorer needs a model trained on a feature file");
  }
  if (model_.feature_schema()->columns.size() != model_.raw_inputs()) {
    throw Error(ErrorCode::kSchemaMismatch,
                "model schema has " +
                    std::to_string(model_.feature_schema()->columns.size()) +
                    " columns but the network takes " +
                    std::to_string(model_.raw_inputs()));
  }
}

std::vector<double> MlpScorer::ScoreTask(const TemporalGraph& graph,
                                         const TaskInstance& task,
                                         unsigned threads) const {
  const FeatureMatrix features = BuildFeatureMatrix(
      graph, task.pairs, *model_.feature_schema(), task.spec.t0_day, threads);
  return ScoreFeatures(features, threads);
}

std::vector<double> MlpScorer::ScoreFeatures(const FeatureMatrix& features,
                                             unsigned threads) const {
  const FeatureSchema& expected = *model_.feature_schema();
  if (features.schema.columns != expected.columns ||
      features.schema.yeo_johnson_lambdas != expected.yeo_johnson_lambdas) {
    throw Error(ErrorCode::kSchemaMismatch,
                "feature columns or transform differ from the model's schema");
  }
  return model_.PredictRows(features.values, threads);
}

std::vector<double> PredictTask(const PairScorer& scorer,
                                const TemporalGraph& graph,
                                const TaskInstance& task, unsigned threads) {
  std::vector<double> scores = scorer.ScoreTask(graph, task, threads);
  if (scores.size() != task.pairs.size()) {
    throw Error(ErrorCode::kInvalidArgument, "scorer returned wrong number of scores");
  }
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!std::isfinite(scores[i])) {
      throw RecordError(i, "scorer '" + scorer.Name() + "' produced a non-finite score");
    }
  }
  return scores;
}

// ---------------------------------------------------------------------------

void WriteScoresCsv(std::span<const NodePair> pairs,
                    std::span<const double> scores, std::ostream& out) {
  out << "u,v,score\n";
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    out << pairs[i].u << ',' << pairs[i].v << ',' << FormatDouble(scores[i]) << '\n';
  }
}

void WriteScoresCsvFile(std::span<const NodePair> pairs,
                        std::span<const double> scores,
                        const std::filesystem::path& path) {
  auto out = OpenForWrite(path);
  WriteScoresCsv(pairs, scores, out);
  CheckWritten(out, path);
}

ScoreTable ReadScoresCsv(std::istream& in) {
  ScoreTable t;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view text = Trim(line);
    if (text.empty() || text.front() == '#') continue;
    if (!have_header) {
      if (text != "u,v,score") throw ParseError(line_no, "expected header 'u,v,score'");
      have_header = true;
      continue;
    }
    auto f = Split(text, ',');
    if (f.size() != 3) throw ParseError(line_no, "expected 3 fields");
    auto u = ParseUint(f[0]);
    auto v = ParseUint(f[1]);
    auto s = ParseDouble(f[2]);
    if (!u || !v || !s || *u > std::numeric_limits<NodeId>::max() ||
        *v > std::numeric_limits<NodeId>::max()) {
      throw ParseError(line_no, "bad score row");
    }
    t.pairs.push_back({static_cast<NodeId>(*u), static_cast<NodeId>(*v)});
    t.scores.push_back(*s);
  }
  if (!have_header) throw ParseError(line_no + 1, "missing score header");
  return t;
}

ScoreTable ReadScoresCsvFile(const std::filesystem::path& path) {
  auto in = OpenForRead(path);
  return ReadScoresCsv(in);
}

}  // namespace semlink
