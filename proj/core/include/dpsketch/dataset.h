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

#ifndef DPSKETCH_DATASET_H_
#define DPSKETCH_DATASET_H_

#include <cstdint>
#include <span>
#include <vector>

namespace dpsketch {

// Row-major feature matrix with either class labels (num_classes > 0) or
// real regression targets (num_classes == 0).
struct Dataset {
  int64_t input_dim = 0;
  int64_t num_classes = 0;
  std::vector<double> features;
  std::vector<int32_t> labels;
  std::vector<double> targets;

  bool is_classification() const { return num_classes > 0; }
  int64_t size() const;
  std::span<const double> row(int64_t i) const {
    return {features.data() + i * input_dim, static_cast<size_t>(input_dim)};
  }

  Dataset Subset(std::span<const int64_t> indices) const;
  // Throws ConfigError on inconsistent shapes or labels out of range.
  void Validate() const;
};

// A mini-batch is a small dataset.
using Batch = Dataset;

}  // namespace dpsketch

#endif  // DPSKETCH_DATASET_H_
