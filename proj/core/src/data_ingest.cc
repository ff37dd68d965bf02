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

#include "dpsketch/data_ingest.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <numeric>
#include <random>
#include <string>

#include "dpsketch/errors.h"
#include "dpsketch/random.h"

namespace dpsketch {
namespace {

constexpr uint32_t kIdxImagesMagic = 0x00000803;
constexpr uint32_t kIdxLabelsMagic = 0x00000801;
constexpr int32_t kDigitClasses = 10;

std::vector<unsigned char> ReadAll(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError(path.string() + ": cannot open");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

uint32_t ReadBigEndian32(const std::vector<unsigned char>& bytes, size_t offset,
                         const std::filesystem::path& path) {
  if (bytes.size() < offset + 4) {
    throw IngestError(path.string() + ": truncated header");
  }
  return (static_cast<uint32_t>(bytes[offset]) << 24) |
         (static_cast<uint32_t>(bytes[offset + 1]) << 16) |
         (static_cast<uint32_t>(bytes[offset + 2]) << 8) |
         static_cast<uint32_t>(bytes[offset + 3]);
}

}  // namespace

Dataset LoadIdx(const std::filesystem::path& images_path,
                const std::filesystem::path& labels_path) {
  const auto images = ReadAll(images_path);
  const auto labels = ReadAll(labels_path);

  if (ReadBigEndian32(images, 0, images_path) != kIdxImagesMagic) {
    throw IngestError(images_path.string() + ": bad IDX image magic");
  }
  if (ReadBigEndian32(labels, 0, labels_path) != kIdxLabelsMagic) {
    throw IngestError(labels_path.string() + ": bad IDX label magic");
  }
  const uint64_t count = ReadBigEndian32(images, 4, images_path);
  const uint64_t rows = ReadBigEndian32(images, 8, images_path);
  const uint64_t cols = ReadBigEndian32(images, 12, images_path);
  const uint64_t label_count = ReadBigEndian32(labels, 4, labels_path);
  if (count != label_count) {
    throw IngestError(images_path.string() + ": " + std::to_string(count) +
                      " images but " + labels_path.string() + " has " +
                      std::to_string(label_count) + " labels");
  }
  const uint64_t pixels = rows * cols;
  if (pixels == 0) throw IngestError(images_path.string() + ": zero-size images");
  if (images.size() < 16 + count * pixels) {
    throw IngestError(images_path.string() + ": truncated pixel data");
  }
  if (labels.size() < 8 + count) {
    throw IngestError(labels_path.string() + ": truncated label data");
  }

  Dataset out;
  out.input_dim = static_cast<int64_t>(pixels);
  out.num_classes = kDigitClasses;
  out.features.resize(count * pixels);
  for (size_t p = 0; p < out.features.size(); ++p) {
    out.features[p] = static_cast<double>(images[16 + p]) / 255.0;
  }
  out.labels.resize(count);
  for (size_t i = 0; i < count; ++i) {
    const int32_t label = labels[8 + i];
    if (label >= kDigitClasses) {
      throw IngestError(labels_path.string() + ": label " +
                        std::to_string(label) + " at row " + std::to_string(i) +
                        " is not a digit");
    }
    out.labels[i] = label;
  }
  return out;
}

std::string_view SyntheticKindName(SyntheticKind kind) {
  return kind == SyntheticKind::kBlobs ? "blobs" : "linear";
}

SyntheticKind ParseSyntheticKind(std::string_view name) {
  if (name == "blobs") return SyntheticKind::kBlobs;
  if (name == "linear") return SyntheticKind::kLinear;
  throw ArgumentError("unknown synthetic dataset kind '" + std::string(name) +
                      "' (expected blobs or linear)");
}

Dataset Synthesize(const SyntheticOptions& options) {
  if (options.num_samples < 1 || options.input_dim < 1) {
    throw ArgumentError("synthetic dataset sizes must be positive");
  }
  Rng rng(options.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto n = static_cast<size_t>(options.num_samples);
  const auto dim = static_cast<size_t>(options.input_dim);

  Dataset out;
  out.input_dim = options.input_dim;
  out.features.resize(n * dim);

  if (options.kind == SyntheticKind::kLinear) {
    std::vector<double> w(dim);
    for (double& v : w) v = normal(rng) / std::sqrt(static_cast<double>(dim));
    const double b = normal(rng);
    out.targets.resize(n);
    for (size_t r = 0; r < n; ++r) {
      double y = b;
      for (size_t c = 0; c < dim; ++c) {
        const double x = normal(rng);
        out.features[r * dim + c] = x;
        y += w[c] * x;
      }
      out.targets[r] = y + options.noise * normal(rng);
    }
    return out;
  }

  if (options.num_classes < 1) {
    throw ArgumentError("blobs need at least one class");
  }
  const auto classes = static_cast<size_t>(options.num_classes);
  out.num_classes = options.num_classes;
  // Pairwise mean distance = separation * noise.
  const double radius = options.separation * options.noise / std::sqrt(2.0);
  std::vector<double> means(classes * dim, 0.0);
  for (size_t c = 0; c < classes; ++c) {
    double* mean = means.data() + c * dim;
    if (classes <= dim) {
      mean[c] = radius;
      continue;
    }
    double norm = 0.0;
    for (size_t k = 0; k < dim; ++k) {
      mean[k] = normal(rng);
      norm += mean[k] * mean[k];
    }
    for (size_t k = 0; k < dim; ++k) mean[k] *= radius / std::sqrt(norm);
  }
  out.labels.resize(n);
  for (size_t r = 0; r < n; ++r) out.labels[r] = static_cast<int32_t>(r % classes);
  std::shuffle(out.labels.begin(), out.labels.end(), rng);
  for (size_t r = 0; r < n; ++r) {
    const double* mean = means.data() + static_cast<size_t>(out.labels[r]) * dim;
    for (size_t k = 0; k < dim; ++k) {
      out.features[r * dim + k] = mean[k] + options.noise * normal(rng);
    }
  }
  return out;
}

TrainTestSplit SplitTrainTest(const Dataset& dataset, double test_fraction,
                              uint64_t seed) {
  const int64_t n = dataset.size();
  if (n < 2) throw ArgumentError("need at least two rows to split");
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw ArgumentError("test fraction must lie in (0, 1)");
  }
  const auto held_out = std::clamp<int64_t>(
      static_cast<int64_t>(std::llround(test_fraction * static_cast<double>(n))),
      1, n - 1);
  std::vector<int64_t> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  const auto split = order.begin() + held_out;
  std::vector<int64_t> test_rows(order.begin(), split);
  std::vector<int64_t> train_rows(split, order.end());
  std::sort(test_rows.begin(), test_rows.end());
  std::sort(train_rows.begin(), train_rows.end());
  return {dataset.Subset(train_rows), dataset.Subset(test_rows)};
}

std::string_view PartitionKindName(PartitionKind kind) {
  return kind == PartitionKind::kIid ? "iid" : "dirichlet";
}

PartitionKind ParsePartitionKind(std::string_view name) {
  if (name == "iid") return PartitionKind::kIid;
  if (name == "dirichlet") return PartitionKind::kDirichlet;
  throw ArgumentError("unknown partition kind '" + std::string(name) +
                      "' (expected iid or dirichlet)");
}

ClientPartition Partition(const Dataset& dataset, int64_t num_clients,
                          PartitionKind kind, double alpha, uint64_t seed) {
  const int64_t n = dataset.size();
  if (num_clients < 1 || num_clients > n) {
    throw ArgumentError("cannot partition " + std::to_string(n) +
                        " rows across " + std::to_string(num_clients) +
                        " clients");
  }
  ClientPartition out;
  out.kind = kind;
  out.alpha = alpha;
  out.clients.resize(static_cast<size_t>(num_clients));
  Rng rng(seed);

  if (kind == PartitionKind::kIid) {
    std::vector<int64_t> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    for (int64_t r = 0; r < n; ++r) {
      out.clients[static_cast<size_t>(r % num_clients)].push_back(
          order[static_cast<size_t>(r)]);
    }
    return out;
  }

  if (!dataset.is_classification()) {
    throw ArgumentError("label-skewed partition needs a labelled dataset");
  }
  if (!(alpha > 0.0)) throw ArgumentError("Dirichlet alpha must be > 0");
  std::vector<std::vector<int64_t>> by_class(
      static_cast<size_t>(dataset.num_classes));
  for (int64_t r = 0; r < n; ++r) {
    by_class[static_cast<size_t>(dataset.labels[static_cast<size_t>(r)])]
        .push_back(r);
  }
  std::gamma_distribution<double> gamma(alpha, 1.0);
  std::vector<double> share(static_cast<size_t>(num_clients));
  for (auto& rows : by_class) {
    std::shuffle(rows.begin(), rows.end(), rng);
    double total = 0.0;
    for (double& s : share) {
      s = gamma(rng);
      total += s;
    }
    double cumulative = 0.0;
    size_t begin = 0;
    for (size_t c = 0; c < share.size(); ++c) {
      cumulative += share[c] / total;
      const size_t end = c + 1 == share.size()
                             ? rows.size()
                             : std::min(rows.size(),
                                        static_cast<size_t>(std::floor(
                                            cumulative * static_cast<double>(rows.size()))));
      for (size_t r = begin; r < end; ++r) out.clients[c].push_back(rows[r]);
      begin = std::max(begin, end);
    }
  }
  // Give every empty client one row from the currently largest client.
  for (auto& client : out.clients) {
    if (!client.empty()) continue;
    auto& donor = *std::max_element(
        out.clients.begin(), out.clients.end(),
        [](const auto& a, const auto& b) { return a.size() < b.size(); });
    client.push_back(donor.back());
    donor.pop_back();
  }
  for (auto& client : out.clients) std::sort(client.begin(), client.end());
  return out;
}

}  // namespace dpsketch
