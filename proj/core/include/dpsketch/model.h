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

#ifndef DPSKETCH_MODEL_H_
#define DPSKETCH_MODEL_H_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "dpsketch/count_sketch.h"
#include "dpsketch/dataset.h"

namespace dpsketch {

enum class ModelKind {
  kLinearRegression,    // affine, one output, mean 0.5 * squared error
  kLogisticRegression,  // affine, softmax cross-entropy
  kMlp,                 // affine -> tanh -> affine, softmax cross-entropy
};

std::string_view ModelKindName(ModelKind kind);
ModelKind ParseModelKind(std::string_view name);

struct Architecture {
  ModelKind kind = ModelKind::kLogisticRegression;
  int64_t input_dim = 1;
  int64_t num_outputs = 1;
  int64_t hidden = 0;  // MLP only

  int64_t ParameterCount() const;
  void Validate() const;

  friend bool operator==(const Architecture&, const Architecture&) = default;
};

// Flat parameter vector. Affine layers are stored as the row-major weight
// matrix (outputs x inputs) followed by the bias; the MLP stores the hidden
// layer first.
struct ModelParams {
  Architecture arch;
  std::vector<double> values;

  int64_t dimension() const { return static_cast<int64_t>(values.size()); }
};

// Zeros for the linear models; Glorot-uniform weights and zero biases for
// the MLP.
ModelParams InitializeModel(const Architecture& arch, uint64_t seed);

struct LossAndGradient {
  double loss = 0.0;
  std::vector<double> gradient;
};

// Mean loss and mean gradient over the batch. Throws ConfigError when the
// batch does not fit the architecture.
LossAndGradient ComputeLossAndGradient(const ModelParams& params,
                                       const Batch& batch);
double ComputeLoss(const ModelParams& params, const Batch& batch);

// w <- w - delta for every sparse entry.
void ApplyUpdate(ModelParams& params, const TopKResult& delta);
// w <- w - delta, dense.
void ApplyUpdate(ModelParams& params, std::span<const double> delta);

// Argmax class per row; ties resolve to the lowest class index.
std::vector<int32_t> Predict(const ModelParams& params,
                             const Dataset& dataset);
// Fraction of rows classified correctly, in [0, 1].
double EvaluateAccuracy(const ModelParams& params, const Dataset& dataset);

// Checkpoint: "DPSKCKPT", then kind, input_dim, num_outputs, hidden and the
// parameter count as little-endian u64, then the parameters as
// little-endian binary64.
void WriteCheckpoint(const ModelParams& params, std::ostream& out);
ModelParams ReadCheckpoint(std::istream& in);

}  // namespace dpsketch

#endif  // DPSKETCH_MODEL_H_
