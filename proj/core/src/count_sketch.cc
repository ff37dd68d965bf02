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

#include "dpsketch/count_sketch.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <string>

#include "dpsketch/errors.h"
#include "dpsketch/random.h"

namespace dpsketch {
namespace {

constexpr uint64_t kIndexStride = 0xd1342543de82ef95ULL;
constexpr size_t kHeaderBytes = 4 * sizeof(uint64_t);

void PutU64(std::byte* out, uint64_t value) {
  for (int b = 0; b < 8; ++b) {
    out[b] = static_cast<std::byte>((value >> (8 * b)) & 0xff);
  }
}

uint64_t GetU64(const std::byte* in) {
  uint64_t value = 0;
  for (int b = 0; b < 8; ++b) {
    value |= static_cast<uint64_t>(in[b]) << (8 * b);
  }
  return value;
}

}  // namespace

void SketchConfig::Validate() const {
  if (rows < 1) {
    throw ArgumentError("sketch rows must be >= 1, got " +
                        std::to_string(rows));
  }
  if (columns < 2) {
    throw ArgumentError("sketch columns must be >= 2, got " +
                        std::to_string(columns));
  }
  if (dimension < 1) {
    throw ArgumentError("sketch dimension must be >= 1, got " +
                        std::to_string(dimension));
  }
}

HashFamily::HashFamily(const SketchConfig& config)
    : columns_(static_cast<uint64_t>(config.columns)) {
  bucket_seeds_.reserve(static_cast<size_t>(config.rows));
  sign_seeds_.reserve(static_cast<size_t>(config.rows));
  for (int64_t j = 0; j < config.rows; ++j) {
    const uint64_t row = static_cast<uint64_t>(j);
    bucket_seeds_.push_back(Mix64(config.master_seed ^ Mix64(2 * row + 1)));
    sign_seeds_.push_back(Mix64(config.master_seed ^ Mix64(2 * row + 2)));
  }
}

int64_t HashFamily::Bucket(int64_t row, int64_t index) const {
  const uint64_t h = Mix64(bucket_seeds_[static_cast<size_t>(row)] +
                           static_cast<uint64_t>(index) * kIndexStride);
  return static_cast<int64_t>(h % columns_);
}

double HashFamily::Sign(int64_t row, int64_t index) const {
  const uint64_t h = Mix64(sign_seeds_[static_cast<size_t>(row)] +
                           static_cast<uint64_t>(index) * kIndexStride);
  return (h & 1) ? 1.0 : -1.0;
}

std::vector<int64_t> TopKResult::Indices() const {
  std::vector<int64_t> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.index);
  return out;
}

CountSketch::CountSketch(const SketchConfig& config)
    : config_((config.Validate(), config)),
      hashes_(config),
      counters_(static_cast<size_t>(config.rows * config.columns), 0.0) {}

void CountSketch::Insert(std::span<const double> g) {
  if (static_cast<int64_t>(g.size()) != config_.dimension) {
    throw ConfigError("sketch insert: vector has " + std::to_string(g.size()) +
                      " entries, sketch dimension is " +
                      std::to_string(config_.dimension));
  }
  for (int64_t j = 0; j < config_.rows; ++j) {
    double* row = counters_.data() + j * config_.columns;
    for (int64_t i = 0; i < config_.dimension; ++i) {
      const double v = g[static_cast<size_t>(i)];
      if (v == 0.0) continue;
      row[hashes_.Bucket(j, i)] += hashes_.Sign(j, i) * v;
    }
  }
}

void CountSketch::Insert(std::span<const SparseEntry> entries) {
  for (const auto& e : entries) {
    if (e.index < 0 || e.index >= config_.dimension) {
      throw ArgumentError("sketch insert: index " + std::to_string(e.index) +
                          " outside [0, " + std::to_string(config_.dimension) +
                          ")");
    }
  }
  for (int64_t j = 0; j < config_.rows; ++j) {
    double* row = counters_.data() + j * config_.columns;
    for (const auto& e : entries) {
      if (e.value == 0.0) continue;
      row[hashes_.Bucket(j, e.index)] += hashes_.Sign(j, e.index) * e.value;
    }
  }
}

void CountSketch::CheckCompatible(const CountSketch& other) const {
  if (!(config_ == other.config_)) {
    throw ConfigError(
        "count sketches are not merge-compatible (rows, columns, seed and "
        "dimension must match)");
  }
}

void CountSketch::Merge(const CountSketch& other) {
  CheckCompatible(other);
  for (size_t c = 0; c < counters_.size(); ++c) {
    counters_[c] += other.counters_[c];
  }
}

void CountSketch::AddScaled(const CountSketch& other, double factor) {
  CheckCompatible(other);
  for (size_t c = 0; c < counters_.size(); ++c) {
    counters_[c] += factor * other.counters_[c];
  }
}

void CountSketch::Scale(double factor) {
  for (double& c : counters_) c *= factor;
}

void CountSketch::Clear() { std::fill(counters_.begin(), counters_.end(), 0.0); }

bool CountSketch::IsZero() const {
  return std::all_of(counters_.begin(), counters_.end(),
                     [](double c) { return c == 0.0; });
}

double MedianInPlace(std::span<double> values) {
  const size_t n = values.size();
  if (n == 0) return 0.0;
  const size_t mid = n / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  const double upper = values[mid];
  if (n % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + mid);
  return 0.5 * (lower + upper);
}

double CountSketch::Estimate(int64_t index) const {
  if (index < 0 || index >= config_.dimension) {
    throw ArgumentError("estimate: index " + std::to_string(index) +
                        " outside [0, " + std::to_string(config_.dimension) +
                        ")");
  }
  std::vector<double> row_values(static_cast<size_t>(config_.rows));
  for (int64_t j = 0; j < config_.rows; ++j) {
    row_values[static_cast<size_t>(j)] =
        hashes_.Sign(j, index) * at(j, hashes_.Bucket(j, index));
  }
  return MedianInPlace(row_values);
}

std::vector<double> CountSketch::EstimateAll() const {
  const auto d = static_cast<size_t>(config_.dimension);
  const auto l = static_cast<size_t>(config_.rows);
  // Gather row values row by row so each pass walks one counter row.
  std::vector<double> by_coordinate(d * l);
  for (size_t j = 0; j < l; ++j) {
    const double* row = counters_.data() + j * static_cast<size_t>(config_.columns);
    const auto jj = static_cast<int64_t>(j);
    for (size_t i = 0; i < d; ++i) {
      const auto ii = static_cast<int64_t>(i);
      by_coordinate[i * l + j] =
          hashes_.Sign(jj, ii) * row[hashes_.Bucket(jj, ii)];
    }
  }
  std::vector<double> estimates(d);
  for (size_t i = 0; i < d; ++i) {
    estimates[i] =
        MedianInPlace(std::span<double>(by_coordinate.data() + i * l, l));
  }
  return estimates;
}

TopKResult CountSketch::UnsketchTopK(int64_t k) const {
  if (k < 1 || k > config_.dimension) {
    throw ArgumentError("top-k: k=" + std::to_string(k) + " outside [1, " +
                        std::to_string(config_.dimension) + "]");
  }
  const std::vector<double> estimates = EstimateAll();
  std::vector<int64_t> order(estimates.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int64_t>(i);
  const auto larger = [&estimates](int64_t a, int64_t b) {
    const double fa = std::fabs(estimates[static_cast<size_t>(a)]);
    const double fb = std::fabs(estimates[static_cast<size_t>(b)]);
    if (fa != fb) return fa > fb;
    return a < b;
  };
  std::partial_sort(order.begin(), order.begin() + k, order.end(), larger);
  TopKResult result;
  result.entries.reserve(static_cast<size_t>(k));
  for (int64_t r = 0; r < k; ++r) {
    const int64_t i = order[static_cast<size_t>(r)];
    result.entries.push_back({i, estimates[static_cast<size_t>(i)]});
  }
  return result;
}

size_t CountSketch::SerializedSize(const SketchConfig& config) {
  return kHeaderBytes +
         sizeof(double) * static_cast<size_t>(config.rows * config.columns);
}

std::vector<std::byte> CountSketch::Serialize() const {
  std::vector<std::byte> out(SerializedSize(config_));
  PutU64(out.data(), static_cast<uint64_t>(config_.rows));
  PutU64(out.data() + 8, static_cast<uint64_t>(config_.columns));
  PutU64(out.data() + 16, static_cast<uint64_t>(config_.dimension));
  PutU64(out.data() + 24, config_.master_seed);
  std::byte* cursor = out.data() + kHeaderBytes;
  for (double c : counters_) {
    PutU64(cursor, std::bit_cast<uint64_t>(c));
    cursor += 8;
  }
  return out;
}

CountSketch CountSketch::Deserialize(std::span<const std::byte> bytes) {
  if (bytes.size() < kHeaderBytes) {
    throw ConfigError("serialized sketch shorter than its header");
  }
  SketchConfig config;
  config.rows = static_cast<int64_t>(GetU64(bytes.data()));
  config.columns = static_cast<int64_t>(GetU64(bytes.data() + 8));
  config.dimension = static_cast<int64_t>(GetU64(bytes.data() + 16));
  config.master_seed = GetU64(bytes.data() + 24);
  config.Validate();
  if (bytes.size() != SerializedSize(config)) {
    throw ConfigError("serialized sketch has " + std::to_string(bytes.size()) +
                      " bytes, expected " +
                      std::to_string(SerializedSize(config)));
  }
  CountSketch sketch(config);
  const std::byte* cursor = bytes.data() + kHeaderBytes;
  for (double& c : sketch.counters_) {
    c = std::bit_cast<double>(GetU64(cursor));
    cursor += 8;
  }
  return sketch;
}

CountSketch Merge(const CountSketch& a, const CountSketch& b) {
  CountSketch out = a;
  out.Merge(b);
  return out;
}

CountSketch Scale(const CountSketch& sketch, double factor) {
  CountSketch out = sketch;
  out.Scale(factor);
  return out;
}

CountSketch SketchOf(const SketchConfig& config, std::span<const double> g) {
  CountSketch out(config);
  out.Insert(g);
  return out;
}

SketchShape SizeForHeavyRecovery(double tau, int64_t dimension,
                                 double delta_s) {
  if (!(tau > 0.0 && tau < 1.0)) {
    throw ArgumentError("heavy-recovery sizing: tau must lie in (0, 1)");
  }
  if (!(delta_s > 0.0 && delta_s < 1.0)) {
    throw ArgumentError("heavy-recovery sizing: delta_s must lie in (0, 1)");
  }
  if (dimension < 1) {
    throw ArgumentError("heavy-recovery sizing: dimension must be >= 1");
  }
  // Guard against 2/tau landing one ulp above an integer.
  constexpr double kSlack = 1e-12;
  const double rows =
      std::ceil(std::log2(static_cast<double>(dimension) / delta_s) - kSlack);
  const double columns = std::ceil(2.0 / tau - kSlack);
  return {std::max<int64_t>(1, static_cast<int64_t>(rows)),
          std::max<int64_t>(2, static_cast<int64_t>(columns))};
}

}  // namespace dpsketch
