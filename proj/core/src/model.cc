/*
 * Copyright 2026 The DPSketch Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "dpsketch/model.h"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <string>

#include "dpsketch/errors.h"
#include "dpsketch/random.h"

namespace dpsketch {
namespace {

constexpr std::array<char, 8> kCheckpointMagic = {'D', 'P', 'S', 'K',
                                                  'C', 'K', 'P', 'T'};

// Views of the flat parameter vector as the layers of the architecture.
struct Affine {
  const double* weights;  // outputs x inputs
  const double* bias;
  int64_t inputs;
  int64_t outputs;

  void Forward(std::span<const double> x, std::span<double> out) const {
    for (int64_t o = 0; o < outputs; ++o) {
      const double* w = weights + o * inputs;
      double acc = bias[o];
      for (int64_t i = 0; i < inputs; ++i) acc += w[i] * x[static_cast<size_t>(i)];
      out[static_cast<size_t>(o)] = acc;
    }
  }
};

struct Layers {
  Affine first;
  Affine second;  // MLP only
  bool two_layers;
};

Layers LayersOf(const Architecture& arch, const double* base) {
  if (arch.kind != ModelKind::kMlp) {
    const double* w = base;
    return {{w, w + arch.num_outputs * arch.input_dim, arch.input_dim,
             arch.num_outputs},
            {},
            false};
  }
  const double* w1 = base;
  const double* b1 = w1 + arch.hidden * arch.input_dim;
  const double* w2 = b1 + arch.hidden;
  const double* b2 = w2 + arch.num_outputs * arch.hidden;
  return {{w1, b1, arch.input_dim, arch.hidden},
          {w2, b2, arch.hidden, arch.num_outputs},
          true};
}

void CheckFits(const ModelParams& params, const Dataset& data) {
  const Architecture& arch = params.arch;
  if (static_cast<int64_t>(params.values.size()) != arch.ParameterCount()) {
    throw ConfigError("parameter vector has " +
                      std::to_string(params.values.size()) +
                      " entries, architecture needs " +
                      std::to_string(arch.ParameterCount()));
  }
  if (data.input_dim != arch.input_dim) {
    throw ConfigError("batch input_dim " + std::to_string(data.input_dim) +
                      " does not match model input_dim " +
                      std::to_string(arch.input_dim));
  }
  if (data.size() == 0) throw ConfigError("empty batch");
  const bool needs_labels = arch.kind == ModelKind::kLogisticRegression ||
                            (arch.kind == ModelKind::kMlp && data.is_classification());
  if (needs_labels) {
    if (!data.is_classification()) {
      throw ConfigError("classifier needs a labelled dataset");
    }
    if (data.num_classes > arch.num_outputs) {
      throw ConfigError("dataset has " + std::to_string(data.num_classes) +
                        " classes but the model has " +
                        std::to_string(arch.num_outputs) + " outputs");
    }
  } else {
    if (data.is_classification()) {
      throw ConfigError("regression model needs real-valued targets");
    }
    if (arch.num_outputs != 1) {
      throw ConfigError("regression model must have exactly one output");
    }
  }
}

// Loss of one example given output activations; writes d loss / d output.
double OutputLoss(const Dataset& data, int64_t row, std::span<const double> out,
                  std::span<double> d_out) {
  if (!data.is_classification()) {
    const double diff = out[0] - data.targets[static_cast<size_t>(row)];
    d_out[0] = diff;
    return 0.5 * diff * diff;
  }
  const auto label = static_cast<size_t>(data.labels[static_cast<size_t>(row)]);
  const double peak = *std::max_element(out.begin(), out.end());
  double sum = 0.0;
  for (size_t o = 0; o < out.size(); ++o) {
    d_out[o] = std::exp(out[o] - peak);
    sum += d_out[o];
  }
  for (size_t o = 0; o < out.size(); ++o) d_out[o] /= sum;
  d_out[label] -= 1.0;
  return peak + std::log(sum) - out[label];
}

void PutU64(std::ostream& out, uint64_t v) {
  std::array<char, 8> buf;
  for (int b = 0; b < 8; ++b) buf[b] = static_cast<char>((v >> (8 * b)) & 0xff);
  out.write(buf.data(), 8);
}

uint64_t GetU64(std::istream& in) {
  std::array<unsigned char, 8> buf;
  in.read(reinterpret_cast<char*>(buf.data()), 8);
  if (!in) throw IngestError("checkpoint truncated");
  uint64_t v = 0;
  for (int b = 0; b < 8; ++b) v |= static_cast<uint64_t>(buf[b]) << (8 * b);
  return v;
}

}  // namespace

std::string_view ModelKindName(ModelKind kind) {
  switch (kind) {
    case ModelKind::kLinearRegression:
      return "linear";
    case ModelKind::kLogisticRegression:
      return "logistic";
    case ModelKind::kMlp:
      return "mlp";
  }
  return "unknown";
}

ModelKind ParseModelKind(std::string_view name) {
  if (name == "linear") return ModelKind::kLinearRegression;
  if (name == "logistic") return ModelKind::kLogisticRegression;
  if (name == "mlp") return ModelKind::kMlp;
  throw ArgumentError("unknown model kind '" + std::string(name) +
                      "' (expected linear, logistic or mlp)");
}

int64_t Architecture::ParameterCount() const {
  if (kind == ModelKind::kMlp) {
    return hidden * (input_dim + 1) + num_outputs * (hidden + 1);
  }
  return num_outputs * (input_dim + 1);
}

void Architecture::Validate() const {
  if (input_dim < 1) throw ConfigError("model input_dim must be >= 1");
  if (num_outputs < 1) throw ConfigError("model num_outputs must be >= 1");
  if (kind == ModelKind::kMlp && hidden < 1) {
    throw ConfigError("MLP hidden width must be >= 1");
  }
  if (kind == ModelKind::kLinearRegression && num_outputs != 1) {
    throw ConfigError("linear regression has exactly one output");
  }
}

ModelParams InitializeModel(const Architecture& arch, uint64_t seed) {
  arch.Validate();
  ModelParams params{arch, std::vector<double>(
                               static_cast<size_t>(arch.ParameterCount()), 0.0)};
  if (arch.kind != ModelKind::kMlp) return params;
  Rng rng(seed);
  const auto fill = [&rng](double* w, int64_t fan_in, int64_t fan_out) {
    const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    std::uniform_real_distribution<double> uniform(-bound, bound);
    for (int64_t i = 0; i < fan_in * fan_out; ++i) w[i] = uniform(rng);
  };
  double* w1 = params.values.data();
  double* w2 = w1 + arch.hidden * (arch.input_dim + 1);
  fill(w1, arch.input_dim, arch.hidden);
  fill(w2, arch.hidden, arch.num_outputs);
  return params;
}

LossAndGradient ComputeLossAndGradient(const ModelParams& params,
                                       const Batch& batch) {
  CheckFits(params, batch);
  const Architecture& arch = params.arch;
  const Layers layers = LayersOf(arch, params.values.data());
  LossAndGradient result;
  result.gradient.assign(params.values.size(), 0.0);
  double* grad = result.gradient.data();

  std::vector<double> hidden(static_cast<size_t>(arch.hidden));
  std::vector<double> d_hidden(static_cast<size_t>(arch.hidden));
  std::vector<double> out(static_cast<size_t>(arch.num_outputs));
  std::vector<double> d_out(static_cast<size_t>(arch.num_outputs));

  const auto accumulate_affine = [](double* gw, double* gb, int64_t inputs,
                                    std::span<const double> x,
                                    std::span<const double> d) {
    for (size_t o = 0; o < d.size(); ++o) {
      double* row = gw + static_cast<int64_t>(o) * inputs;
      for (int64_t i = 0; i < inputs; ++i) row[i] += d[o] * x[static_cast<size_t>(i)];
      gb[o] += d[o];
    }
  };

  const int64_t n = batch.size();
  for (int64_t r = 0; r < n; ++r) {
    const auto x = batch.row(r);
    if (!layers.two_layers) {
      layers.first.Forward(x, out);
      result.loss += OutputLoss(batch, r, out, d_out);
      accumulate_affine(grad, grad + arch.num_outputs * arch.input_dim,
                        arch.input_dim, x, d_out);
      continue;
    }
    layers.first.Forward(x, hidden);
    for (double& h : hidden) h = std::tanh(h);
    layers.second.Forward(hidden, out);
    result.loss += OutputLoss(batch, r, out, d_out);

    double* gw1 = grad;
    double* gb1 = gw1 + arch.hidden * arch.input_dim;
    double* gw2 = gb1 + arch.hidden;
    double* gb2 = gw2 + arch.num_outputs * arch.hidden;
    accumulate_affine(gw2, gb2, arch.hidden, hidden, d_out);
    for (int64_t h = 0; h < arch.hidden; ++h) {
      double acc = 0.0;
      for (int64_t o = 0; o < arch.num_outputs; ++o) {
        acc += layers.second.weights[o * arch.hidden + h] * d_out[static_cast<size_t>(o)];
      }
      const double a = hidden[static_cast<size_t>(h)];
      d_hidden[static_cast<size_t>(h)] = acc * (1.0 - a * a);
    }
    accumulate_affine(gw1, gb1, arch.input_dim, x, d_hidden);
  }
  const double inv = 1.0 / static_cast<double>(n);
  result.loss *= inv;
  for (double& g : result.gradient) g *= inv;
  return result;
}

double ComputeLoss(const ModelParams& params, const Batch& batch) {
  CheckFits(params, batch);
  const Architecture& arch = params.arch;
  const Layers layers = LayersOf(arch, params.values.data());
  std::vector<double> hidden(static_cast<size_t>(arch.hidden));
  std::vector<double> out(static_cast<size_t>(arch.num_outputs));
  std::vector<double> scratch(static_cast<size_t>(arch.num_outputs));
  double loss = 0.0;
  for (int64_t r = 0; r < batch.size(); ++r) {
    if (layers.two_layers) {
      layers.first.Forward(batch.row(r), hidden);
      for (double& h : hidden) h = std::tanh(h);
      layers.second.Forward(hidden, out);
    } else {
      layers.first.Forward(batch.row(r), out);
    }
    loss += OutputLoss(batch, r, out, scratch);
  }
  return loss / static_cast<double>(batch.size());
}

void ApplyUpdate(ModelParams& params, const TopKResult& delta) {
  for (const auto& e : delta.entries) {
    if (e.index < 0 || e.index >= params.dimension()) {
      throw ArgumentError("update index " + std::to_string(e.index) +
                          " outside [0, " + std::to_string(params.dimension()) +
                          ")");
    }
  }
  for (const auto& e : delta.entries) {
    params.values[static_cast<size_t>(e.index)] -= e.value;
  }
}

void ApplyUpdate(ModelParams& params, std::span<const double> delta) {
  if (static_cast<int64_t>(delta.size()) != params.dimension()) {
    throw ConfigError("dense update has " + std::to_string(delta.size()) +
                      " entries, model has " +
                      std::to_string(params.dimension()));
  }
  for (size_t i = 0; i < delta.size(); ++i) params.values[i] -= delta[i];
}

std::vector<int32_t> Predict(const ModelParams& params,
                             const Dataset& dataset) {
  const Architecture& arch = params.arch;
  if (dataset.input_dim != arch.input_dim) {
    throw ConfigError("dataset input_dim does not match the model");
  }
  const Layers layers = LayersOf(arch, params.values.data());
  std::vector<double> hidden(static_cast<size_t>(arch.hidden));
  std::vector<double> out(static_cast<size_t>(arch.num_outputs));
  std::vector<int32_t> predictions;
  predictions.reserve(static_cast<size_t>(dataset.size()));
  for (int64_t r = 0; r < dataset.size(); ++r) {
    if (layers.two_layers) {
      layers.first.Forward(dataset.row(r), hidden);
      for (double& h : hidden) h = std::tanh(h);
      layers.second.Forward(hidden, out);
    } else {
      layers.first.Forward(dataset.row(r), out);
    }
    // max_element returns the first maximum.
    predictions.push_back(static_cast<int32_t>(
        std::max_element(out.begin(), out.end()) - out.begin()));
  }
  return predictions;
}

double EvaluateAccuracy(const ModelParams& params, const Dataset& dataset) {
  if (!dataset.is_classification()) {
    throw ConfigError("accuracy needs a labelled dataset");
  }
  if (dataset.size() == 0) throw ConfigError("accuracy of an empty dataset");
  const std::vector<int32_t> predictions = Predict(params, dataset);
  int64_t correct = 0;
  for (size_t i = 0; i < predictions.size(); ++i) {
    if (predictions[i] == dataset.labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(dataset.size());
}

void WriteCheckpoint(const ModelParams& params, std::ostream& out) {
  out.write(kCheckpointMagic.data(), kCheckpointMagic.size());
  PutU64(out, static_cast<uint64_t>(params.arch.kind));
  PutU64(out, static_cast<uint64_t>(params.arch.input_dim));
  PutU64(out, static_cast<uint64_t>(params.arch.num_outputs));
  PutU64(out, static_cast<uint64_t>(params.arch.hidden));
  PutU64(out, static_cast<uint64_t>(params.values.size()));
  for (double v : params.values) PutU64(out, std::bit_cast<uint64_t>(v));
}

ModelParams ReadCheckpoint(std::istream& in) {
  std::array<char, 8> magic;
  in.read(magic.data(), magic.size());
  if (!in || magic != kCheckpointMagic) {
    throw IngestError("not a model checkpoint (bad magic)");
  }
  ModelParams params;
  const uint64_t kind = GetU64(in);
  if (kind > static_cast<uint64_t>(ModelKind::kMlp)) {
    throw IngestError("checkpoint has unknown model kind");
  }
  params.arch.kind = static_cast<ModelKind>(kind);
  params.arch.input_dim = static_cast<int64_t>(GetU64(in));
  params.arch.num_outputs = static_cast<int64_t>(GetU64(in));
  params.arch.hidden = static_cast<int64_t>(GetU64(in));
  const uint64_t count = GetU64(in);
  params.arch.Validate();
  if (static_cast<int64_t>(count) != params.arch.ParameterCount()) {
    throw IngestError("checkpoint parameter count does not match architecture");
  }
  params.values.resize(count);
  for (double& v : params.values) v = std::bit_cast<double>(GetU64(in));
  return params;
}

}  // namespace dpsketch
