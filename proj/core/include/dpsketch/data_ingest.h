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

#ifndef DPSKETCH_DATA_INGEST_H_
#define DPSKETCH_DATA_INGEST_H_

#include <cstdint>
#include <filesystem>
#include <string_view>
#include <vector>

#include "dpsketch/dataset.h"

namespace dpsketch {

// Reads an IDX image file (magic 0x00000803) and label file (magic
// 0x00000801), both big-endian. Pixels are scaled to [0, 1] by 1/255 and
// labels must be digits 0-9. Errors name the offending path.
Dataset LoadIdx(const std::filesystem::path& images_path,
                const std::filesystem::path& labels_path);

enum class SyntheticKind {
  kBlobs,   // isotropic Gaussian class clusters
  kLinear,  // y = <w, x> + b + noise
};

std::string_view SyntheticKindName(SyntheticKind kind);
SyntheticKind ParseSyntheticKind(std::string_view name);

struct SyntheticOptions {
  SyntheticKind kind = SyntheticKind::kBlobs;
  int64_t num_samples = 2000;
  int64_t input_dim = 10;
  int64_t num_classes = 2;
  // Blobs: distance between class means in units of `noise`.
  double separation = 10.0;
  // Blobs: per-coordinate std of each cluster. Linear: target noise std.
  double noise = 1.0;
  uint64_t seed = 0;
};

// Deterministic in options.seed. Blob means sit on distinct coordinate axes
// when num_classes <= input_dim and on random directions otherwise; labels
// are balanced.
Dataset Synthesize(const SyntheticOptions& options);

struct TrainTestSplit {
  Dataset train;
  Dataset test;
};

// Random split holding out round(test_fraction * n) rows (at least one).
TrainTestSplit SplitTrainTest(const Dataset& dataset, double test_fraction,
                              uint64_t seed);

enum class PartitionKind {
  kIid,
  kDirichlet,  // label skew: each class split across clients by Dir(alpha)
};

std::string_view PartitionKindName(PartitionKind kind);
PartitionKind ParsePartitionKind(std::string_view name);

// Disjoint per-client index lists covering every row of the dataset. Every
// client holds at least one row.
struct ClientPartition {
  PartitionKind kind = PartitionKind::kIid;
  double alpha = 0.5;
  std::vector<std::vector<int64_t>> clients;

  int64_t num_clients() const { return static_cast<int64_t>(clients.size()); }
};

// Throws ArgumentError when num_clients is outside [1, dataset.size()].
ClientPartition Partition(const Dataset& dataset, int64_t num_clients,
                          PartitionKind kind, double alpha, uint64_t seed);

}  // namespace dpsketch

#endif  // DPSKETCH_DATA_INGEST_H_
