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

#ifndef DPSKETCH_COUNT_SKETCH_H_
#define DPSKETCH_COUNT_SKETCH_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace dpsketch {

// Shape and hashing identity of a count sketch. Two sketches can be merged
// only when all four fields agree.
struct SketchConfig {
  int64_t rows = 5;
  int64_t columns = 500000;
  uint64_t master_seed = 0;
  int64_t dimension = 1;

  // Throws ArgumentError unless rows >= 1, columns >= 2, dimension >= 1.
  void Validate() const;

  friend bool operator==(const SketchConfig&, const SketchConfig&) = default;
};

// Per-row index and sign hashes derived from (master_seed, row).
class HashFamily {
 public:
  explicit HashFamily(const SketchConfig& config);

  int64_t Bucket(int64_t row, int64_t index) const;
  // +1.0 or -1.0.
  double Sign(int64_t row, int64_t index) const;

 private:
  uint64_t columns_;
  std::vector<uint64_t> bucket_seeds_;
  std::vector<uint64_t> sign_seeds_;
};

struct SparseEntry {
  int64_t index;
  double value;

  friend bool operator==(const SparseEntry&, const SparseEntry&) = default;
};

// A sparse update ordered by |value| descending, ties by ascending index.
struct TopKResult {
  std::vector<SparseEntry> entries;

  std::vector<int64_t> Indices() const;
  bool empty() const { return entries.empty(); }
  size_t size() const { return entries.size(); }
};

// l x m grid of 64-bit counters. Row-major storage.
//
// Insertion adds xi_j(i) * g[i] to cell (j, h_j(i)) for every row j; the
// structure is linear in its input, so sums and scalings of sketches equal
// sketches of sums and scalings. Coordinates are recovered with the median
// over rows of the sign-corrected counters.
class CountSketch {
 public:
  explicit CountSketch(const SketchConfig& config);

  const SketchConfig& config() const { return config_; }
  const HashFamily& hashes() const { return hashes_; }
  int64_t rows() const { return config_.rows; }
  int64_t columns() const { return config_.columns; }

  std::span<const double> counters() const { return counters_; }
  std::span<double> mutable_counters() { return counters_; }
  double at(int64_t row, int64_t column) const {
    return counters_[static_cast<size_t>(row * config_.columns + column)];
  }

  // g must have config().dimension entries, all finite. Zero coordinates are
  // skipped.
  void Insert(std::span<const double> g);
  // Inserts a sparse vector. Indices must lie in [0, dimension).
  void Insert(std::span<const SparseEntry> entries);

  // this += other. Requires identical configs.
  void Merge(const CountSketch& other);
  // this += factor * other. Requires identical configs.
  void AddScaled(const CountSketch& other, double factor);
  void Scale(double factor);
  void Clear();

  bool IsZero() const;

  double Estimate(int64_t index) const;
  // Estimates of every coordinate in [0, dimension).
  std::vector<double> EstimateAll() const;
  // The k coordinates with the largest |estimate|. 1 <= k <= dimension.
  TopKResult UnsketchTopK(int64_t k) const;

  // Little-endian: rows, columns, dimension, master_seed as u64, then the
  // counters as IEEE-754 binary64, row-major.
  std::vector<std::byte> Serialize() const;
  static CountSketch Deserialize(std::span<const std::byte> bytes);
  static size_t SerializedSize(const SketchConfig& config);

  friend bool operator==(const CountSketch& a, const CountSketch& b) {
    return a.config_ == b.config_ && a.counters_ == b.counters_;
  }

 private:
  void CheckCompatible(const CountSketch& other) const;

  SketchConfig config_;
  HashFamily hashes_;
  std::vector<double> counters_;
};

// Value-returning forms of the mutators above.
CountSketch Merge(const CountSketch& a, const CountSketch& b);
CountSketch Scale(const CountSketch& sketch, double factor);
CountSketch SketchOf(const SketchConfig& config, std::span<const double> g);

// Median with the even-length convention (mean of the two middle values).
// Reorders `values`.
double MedianInPlace(std::span<double> values);

struct SketchShape {
  int64_t rows;
  int64_t columns;
};

// Sketch shape that recovers every (tau, l2^2)-heavy coordinate of a
// d-dimensional vector with failure probability about delta_s:
//   rows = ceil(log2(d / delta_s)), columns = ceil(2 / tau).
SketchShape SizeForHeavyRecovery(double tau, int64_t dimension, double delta_s);

}  // namespace dpsketch

#endif  // DPSKETCH_COUNT_SKETCH_H_
